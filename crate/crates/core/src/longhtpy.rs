//! l-homotopies (time `0, 1, 2, ...`) and long homotopies (time in `Z`).
//!
//! Both are eventually constant per point, so a finite window of layers plus
//! a per-point bound encodes them exactly on a finite domain. Times outside
//! the window take the value of the nearest stored layer.

use crate::error::{Error, Result, Verdict, Violation};
use crate::homotopy::{check_layers, verify_equivalence_parts, EquivalenceCertificate, Homotopy};
use crate::lattice::{DigitalImage, Point};
use crate::maps::{compose, DigitalMap};
use crate::scalar::Coord;

fn same_shape<C: Coord>(layers: &[DigitalMap<C>]) -> Result<()> {
    let first = layers.first().ok_or_else(|| Error::Precondition("at least one layer is required".into()))?;
    for (t, l) in layers.iter().enumerate() {
        if l.domain() != first.domain() || l.codomain() != first.codomain() {
            return Err(Error::ImageMismatch(format!("layer {t} has a different domain or codomain")));
        }
    }
    Ok(())
}

fn check_pointed<C: Coord>(domain: &DigitalImage<C>, x0: &Option<Point<C>>) -> Result<()> {
    if let Some(p) = x0 {
        domain.require_index(p)?;
    }
    Ok(())
}

/// An l-homotopy: layers `F_0, ..., F_T` and for each point `x` an index
/// `n_x <= T` after which its track is constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LHomotopy<C: Coord> {
    layers: Vec<DigitalMap<C>>,
    stab: Vec<usize>,
    pointed_at: Option<Point<C>>,
}

impl<C: Coord> LHomotopy<C> {
    /// `stab` is indexed like the domain's points.
    pub fn new(layers: Vec<DigitalMap<C>>, stab: Vec<usize>, pointed_at: Option<Point<C>>) -> Result<Self> {
        same_shape(&layers)?;
        if stab.len() != layers[0].domain().len() {
            return Err(Error::NotTotal(format!(
                "{} stabilization indices for {} points",
                stab.len(),
                layers[0].domain().len()
            )));
        }
        check_pointed(layers[0].domain(), &pointed_at)?;
        Ok(LHomotopy { layers, stab, pointed_at })
    }

    /// Builds `n_x` as the true stabilization index of every track.
    pub fn with_exact_stab(layers: Vec<DigitalMap<C>>, pointed_at: Option<Point<C>>) -> Result<Self> {
        let h = Homotopy::new(layers, pointed_at)?;
        let stab = (0..h.domain().len()).map(|i| h.stabilization_index(i)).collect();
        let pointed_at = h.pointed_at().cloned();
        Ok(LHomotopy { layers: h.into_layers(), stab, pointed_at })
    }

    pub fn layers(&self) -> &[DigitalMap<C>] {
        &self.layers
    }

    /// Last stored time `T`.
    pub fn horizon(&self) -> usize {
        self.layers.len() - 1
    }

    /// Layer at time `t`; times past `T` repeat the last layer.
    pub fn layer(&self, t: usize) -> &DigitalMap<C> {
        &self.layers[t.min(self.horizon())]
    }

    pub fn stab(&self) -> &[usize] {
        &self.stab
    }

    pub fn domain(&self) -> &DigitalImage<C> {
        self.layers[0].domain()
    }

    pub fn codomain(&self) -> &DigitalImage<C> {
        self.layers[0].codomain()
    }

    pub fn pointed_at(&self) -> Option<&Point<C>> {
        self.pointed_at.as_ref()
    }

    pub fn holds_fixed(&self, x: &Point<C>) -> bool {
        self.domain()
            .index_of(x)
            .is_some_and(|i| self.layers.iter().all(|l| l.value_index(i) == self.layers[0].value_index(i)))
    }

    pub fn verify(&self, f: &DigitalMap<C>, g: &DigitalMap<C>) -> Verdict {
        if &self.layers[0] != f {
            return Err(Violation::new("start layer", "layer 0 differs from the source map"));
        }
        if f.domain() != g.domain() || f.codomain() != g.codomain() {
            return Err(Violation::new("end layer", "target map has another shape"));
        }
        let t_max = self.horizon();
        for (i, &n) in self.stab.iter().enumerate() {
            let x = self.domain().point(i);
            if n > t_max {
                return Err(Violation::new(
                    "stabilization bound",
                    format!("n at {x} is {n}, beyond the window {t_max}"),
                ));
            }
            for t in n..=t_max {
                if self.layers[t].value_index(i) != g.value_index(i) {
                    return Err(Violation::new(
                        "stabilization",
                        format!("at {x}, t = {t}: {} differs from g = {}", self.layers[t].value_at(i), g.value_at(i)),
                    ));
                }
            }
        }
        check_layers(&self.layers, 0, self.pointed_at.as_ref())
    }
}

/// A long homotopy: layers at times `-T..=T` and for each point a bound
/// `N_x <= T` with `F(x, t) = f(x)` for `t <= -N_x` and `F(x, t) = g(x)`
/// for `t >= N_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongHomotopy<C: Coord> {
    layers: Vec<DigitalMap<C>>,
    bounds: Vec<usize>,
    pointed_at: Option<Point<C>>,
}

impl<C: Coord> LongHomotopy<C> {
    /// `layers` holds times `-T..=T`, so its length must be odd.
    pub fn new(layers: Vec<DigitalMap<C>>, bounds: Vec<usize>, pointed_at: Option<Point<C>>) -> Result<Self> {
        same_shape(&layers)?;
        if layers.len().is_multiple_of(2) {
            return Err(Error::Precondition(format!("{} layers do not form a symmetric window", layers.len())));
        }
        if bounds.len() != layers[0].domain().len() {
            return Err(Error::NotTotal(format!("{} bounds for {} points", bounds.len(), layers[0].domain().len())));
        }
        check_pointed(layers[0].domain(), &pointed_at)?;
        Ok(LongHomotopy { layers, bounds, pointed_at })
    }

    /// `T`.
    pub fn t_max(&self) -> usize {
        (self.layers.len() - 1) / 2
    }

    /// `-T`.
    pub fn t_min(&self) -> i64 {
        -(self.t_max() as i64)
    }

    /// Layer at time `t`, clamped to the window.
    pub fn layer(&self, t: i64) -> &DigitalMap<C> {
        let ti = self.t_max() as i64;
        &self.layers[(t.clamp(-ti, ti) + ti) as usize]
    }

    pub fn layers(&self) -> &[DigitalMap<C>] {
        &self.layers
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    pub fn domain(&self) -> &DigitalImage<C> {
        self.layers[0].domain()
    }

    pub fn codomain(&self) -> &DigitalImage<C> {
        self.layers[0].codomain()
    }

    pub fn start(&self) -> &DigitalMap<C> {
        &self.layers[0]
    }

    pub fn end(&self) -> &DigitalMap<C> {
        self.layers.last().expect("nonempty")
    }

    pub fn pointed_at(&self) -> Option<&Point<C>> {
        self.pointed_at.as_ref()
    }

    pub fn holds_fixed(&self, x: &Point<C>) -> bool {
        self.domain()
            .index_of(x)
            .is_some_and(|i| self.layers.iter().all(|l| l.value_index(i) == self.layers[0].value_index(i)))
    }

    /// Smallest valid bound for every point.
    pub fn exact_bounds(&self) -> Vec<usize> {
        let t = self.t_max();
        (0..self.domain().len())
            .map(|i| {
                let (a, b) = (self.layers[0].value_index(i), self.end().value_index(i));
                (0..=t)
                    .find(|&n| {
                        let lo = t - n;
                        let hi = t + n;
                        self.layers[..=lo].iter().all(|l| l.value_index(i) == a)
                            && self.layers[hi..].iter().all(|l| l.value_index(i) == b)
                    })
                    .unwrap_or(t)
            })
            .collect()
    }

    pub fn verify(&self, f: &DigitalMap<C>, g: &DigitalMap<C>) -> Verdict {
        if f.domain() != self.domain()
            || f.codomain() != self.codomain()
            || g.domain() != self.domain()
            || g.codomain() != self.codomain()
        {
            return Err(Violation::new("shape", "endpoint maps have another domain or codomain"));
        }
        let t_max = self.t_max();
        let ti = t_max as i64;
        for (i, &n) in self.bounds.iter().enumerate() {
            let x = self.domain().point(i);
            if n > t_max {
                return Err(Violation::new("bound", format!("N at {x} is {n}, beyond the window {t_max}")));
            }
            for t in -ti..=-(n as i64) {
                if self.layer(t).value_index(i) != f.value_index(i) {
                    return Err(Violation::new(
                        "start",
                        format!("at {x}, t = {t}: {} differs from f = {}", self.layer(t).value_at(i), f.value_at(i)),
                    ));
                }
            }
            for t in n as i64..=ti {
                if self.layer(t).value_index(i) != g.value_index(i) {
                    return Err(Violation::new(
                        "end",
                        format!("at {x}, t = {t}: {} differs from g = {}", self.layer(t).value_at(i), g.value_at(i)),
                    ));
                }
            }
        }
        check_layers(&self.layers, -ti, self.pointed_at.as_ref())
    }
}

/// Pads negative times with layer 0.
pub fn l_to_long<C: Coord>(h: &LHomotopy<C>) -> LongHomotopy<C> {
    let t = h.horizon() as i64;
    let layers = (-t..=t).map(|s| h.layer(s.max(0) as usize).clone()).collect();
    LongHomotopy { layers, bounds: h.stab.clone(), pointed_at: h.pointed_at.clone() }
}

/// The finite homotopy `H(x, min(m, t))`, constant before time 0.
pub fn finite_to_long<C: Coord>(h: &Homotopy<C>) -> LongHomotopy<C> {
    let m = h.steps() as i64;
    let layers = (-m..=m).map(|s| h.layers()[s.clamp(0, m) as usize].clone()).collect();
    let bounds = (0..h.domain().len()).map(|i| h.stabilization_index(i)).collect();
    LongHomotopy { layers, bounds, pointed_at: h.pointed_at().cloned() }
}

/// Layers `-M..=M` with `M` the largest bound, consecutive repeats merged.
pub fn long_to_finite<C: Coord>(h: &LongHomotopy<C>) -> Homotopy<C> {
    let m = h.bounds.iter().copied().max().unwrap_or(0) as i64;
    let mut layers: Vec<_> = (-m..=m).map(|t| h.layer(t).clone()).collect();
    layers.dedup();
    Homotopy::new(layers, h.pointed_at.clone()).expect("layers share one shape")
}

/// `F'(x, t) = F(x, -t)`.
pub fn reverse_long<C: Coord>(h: &LongHomotopy<C>) -> LongHomotopy<C> {
    let mut layers = h.layers.clone();
    layers.reverse();
    LongHomotopy { layers, bounds: h.bounds.clone(), pointed_at: h.pointed_at.clone() }
}

/// `N'_x`: the largest bound over `x` and its neighbors.
pub fn neighbor_max_bounds<C: Coord>(h: &LongHomotopy<C>) -> Vec<usize> {
    let x = h.domain();
    (0..x.len())
        .map(|i| x.neighbor_indices(i).iter().map(|&j| h.bounds[j as usize]).fold(h.bounds[i], usize::max))
        .collect()
}

/// Turns a long homotopy ending at the constant `c'` into one ending at the
/// constant `d`, where `d` equals or is adjacent to `c'`: each point follows
/// `H` up to `N'_x` and sits at `d` afterwards.
pub fn shift_constant_target<C: Coord>(h: &LongHomotopy<C>, d: &Point<C>) -> Result<LongHomotopy<C>> {
    let c_prime = h
        .end()
        .constant_value()
        .ok_or_else(|| Error::Precondition("the homotopy does not end at a constant map".into()))?
        .clone();
    let y = h.codomain();
    let di = y.require_index(d)?;
    let ci = y.require_index(&c_prime)?;
    if !y.adj_or_eq_idx(di, ci) {
        return Err(Error::Precondition(format!("{d} is neither equal nor adjacent to {c_prime}")));
    }
    let n_prime = neighbor_max_bounds(h);
    let t_max = h.t_max().max(n_prime.iter().map(|n| n + 1).max().unwrap_or(0));
    let x = h.domain();
    let layers = (-(t_max as i64)..=t_max as i64)
        .map(|t| {
            let values = (0..x.len())
                .map(|i| if t <= n_prime[i] as i64 { h.layer(t).value_index(i) as u32 } else { di as u32 })
                .collect();
            DigitalMap::from_indices_unchecked(x, y, values)
        })
        .collect();
    let bounds = n_prime.iter().map(|n| n + 1).collect();
    let pointed_at = h.pointed_at.clone().filter(|_| di == ci);
    Ok(LongHomotopy { layers, bounds, pointed_at })
}

/// Iterates [`shift_constant_target`] along a shortest path from the current
/// constant to `d`.
pub fn shift_constant_along_path<C: Coord>(h: &LongHomotopy<C>, d: &Point<C>) -> Result<LongHomotopy<C>> {
    let c = h
        .end()
        .constant_value()
        .ok_or_else(|| Error::Precondition("the homotopy does not end at a constant map".into()))?
        .clone();
    let path = h
        .codomain()
        .shortest_path(&c, d)?
        .ok_or_else(|| Error::Precondition(format!("{c} and {d} lie in different components")))?;
    let mut out = h.clone();
    for p in path.iter().skip(1) {
        out = shift_constant_target(&out, p)?;
    }
    Ok(out)
}

/// Long-homotopy analogue of [`EquivalenceCertificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LongEquivalenceCertificate<C: Coord> {
    pub f: DigitalMap<C>,
    pub g: DigitalMap<C>,
    pub h: LongHomotopy<C>,
    pub k: LongHomotopy<C>,
    pub basepoints: Option<(Point<C>, Point<C>)>,
}

impl<C: Coord> LongEquivalenceCertificate<C> {
    pub fn x(&self) -> &DigitalImage<C> {
        self.f.domain()
    }

    pub fn y(&self) -> &DigitalImage<C> {
        self.f.codomain()
    }

    pub fn identity(image: &DigitalImage<C>, basepoint: Option<Point<C>>) -> Self {
        Self::from_finite(&EquivalenceCertificate::identity(image, basepoint))
    }

    pub fn from_finite(cert: &EquivalenceCertificate<C>) -> Self {
        LongEquivalenceCertificate {
            f: cert.f.clone(),
            g: cert.g.clone(),
            h: finite_to_long(&cert.h),
            k: finite_to_long(&cert.k),
            basepoints: cert.basepoints.clone(),
        }
    }

    pub fn swap(&self) -> Self {
        LongEquivalenceCertificate {
            f: self.g.clone(),
            g: self.f.clone(),
            h: self.k.clone(),
            k: self.h.clone(),
            basepoints: self.basepoints.clone().map(|(x, y)| (y, x)),
        }
    }

    pub fn verify(&self) -> Verdict {
        verify_equivalence_parts(
            &self.f,
            &self.g,
            self.basepoints.as_ref(),
            |which, src, dst| {
                let (w, name) = if which { (&self.h, "H") } else { (&self.k, "K") };
                if w.domain() != src.domain() || w.codomain() != src.codomain() {
                    return Err(Violation::new(format!("{name} endpoints"), "witness has another domain or codomain"));
                }
                w.verify(src, dst).map_err(|v| match v.clause.as_str() {
                    "start" | "end" | "shape" => Violation::new(format!("{name} endpoints"), v.detail),
                    _ => v.within(name),
                })
            },
            |which, p| if which { self.h.holds_fixed(p) } else { self.k.holds_fixed(p) },
        )
    }
}

pub fn verify_long_equivalence<C: Coord>(cert: &LongEquivalenceCertificate<C>) -> Verdict {
    cert.verify()
}

/// Combines `X ≃^L {a}` and `{a} ≃^L Y` into `X ≃^L Y`.
///
/// The composite maps are the constants `x0 = g1(a)` and `y0 = f2(a)`, so
/// `H` of the first certificate and `K` of the second serve unchanged.
pub fn compose_long_equiv_through_point<C: Coord>(
    first: &LongEquivalenceCertificate<C>,
    second: &LongEquivalenceCertificate<C>,
) -> Result<LongEquivalenceCertificate<C>> {
    if first.y().len() != 1 {
        return Err(Error::Precondition("the middle image is not a single point".into()));
    }
    if first.y() != second.x() {
        return Err(Error::ImageMismatch("the two certificates do not share the middle image".into()));
    }
    let a = first.y().point(0).clone();
    let x0 = first.g.apply(&a).expect("total").clone();
    let y0 = second.f.apply(&a).expect("total").clone();
    let f = DigitalMap::constant(first.x(), second.y(), &y0)?;
    let g = DigitalMap::constant(second.y(), first.x(), &x0)?;
    debug_assert_eq!(compose(&g, &f)?, *first.h.start());
    let basepoints = match (&first.basepoints, &second.basepoints) {
        (Some((xb, _)), Some((_, yb))) => Some((xb.clone(), yb.clone())),
        _ => None,
    };
    Ok(LongEquivalenceCertificate { f, g, h: first.h.clone(), k: second.k.clone(), basepoints })
}
