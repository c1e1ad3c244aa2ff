//! Real digital paths and real homotopies on `[0, 1]`.
//!
//! A real homotopy is piecewise constant in time. It is encoded by a global
//! set of jump positions `0 < q_1 < ... < q_k < 1` (exact rationals), the
//! layers at `0` and `1`, one layer on each of the `k + 1` open intervals and
//! one layer at each `q_i`. A point's slice jumps at `q_i` only when the two
//! flanking open layers differ there.

use num_traits::{One, Zero};

use crate::error::{Error, Result, Verdict, Violation};
use crate::homotopy::{verify_equivalence_parts, EquivalenceCertificate, Homotopy};
use crate::lattice::{DigitalImage, Point};
use crate::longhtpy::{finite_to_long, LongHomotopy};
use crate::maps::{compose, DigitalMap};
use crate::scalar::{format_time, Coord, Time, TimeInt};

fn half<I: TimeInt>() -> Time<I> {
    Time::new(I::one(), I::one() + I::one())
}

fn check_jumps<I: TimeInt>(jumps: &[Time<I>]) -> Verdict {
    for (i, q) in jumps.iter().enumerate() {
        if *q <= Time::zero() || *q >= Time::one() {
            return Err(Violation::new("jumps", format!("jump {i} at {} is not inside (0, 1)", format_time(q))));
        }
        if i > 0 && jumps[i - 1] >= *q {
            return Err(Violation::new("jumps", format!("jump {i} at {} is not increasing", format_time(q))));
        }
    }
    Ok(())
}

/// A real path: values on the open intervals between jumps, at each jump
/// and at both ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealPath<C: Coord, I: TimeInt> {
    pub image: DigitalImage<C>,
    pub jumps: Vec<Time<I>>,
    pub at0: Point<C>,
    pub open: Vec<Point<C>>,
    pub atjump: Vec<Point<C>>,
    pub at1: Point<C>,
}

impl<C: Coord, I: TimeInt> RealPath<C, I> {
    pub fn constant(image: &DigitalImage<C>, p: &Point<C>) -> Self {
        RealPath {
            image: image.clone(),
            jumps: Vec::new(),
            at0: p.clone(),
            open: vec![p.clone()],
            atjump: Vec::new(),
            at1: p.clone(),
        }
    }

    pub fn verify(&self) -> Verdict {
        verify_real_path(self)
    }
}

fn adj_or_eq<C: Coord>(img: &DigitalImage<C>, a: &Point<C>, b: &Point<C>) -> bool {
    match (img.index_of(a), img.index_of(b)) {
        (Some(i), Some(j)) => img.adj_or_eq_idx(i, j),
        _ => false,
    }
}

/// Checks the jump structure of a real path.
pub fn verify_real_path<C: Coord, I: TimeInt>(p: &RealPath<C, I>) -> Verdict {
    check_jumps(&p.jumps)?;
    let k = p.jumps.len();
    if p.open.len() != k + 1 || p.atjump.len() != k {
        return Err(Violation::new("shape", format!("{k} jumps need {} open values and {k} jump values", k + 1)));
    }
    let img = &p.image;
    for q in std::iter::once(&p.at0).chain(&p.open).chain(&p.atjump).chain(std::iter::once(&p.at1)) {
        if !img.contains(q) {
            return Err(Violation::new("membership", format!("{q} is not in the image")));
        }
    }
    if !adj_or_eq(img, &p.at0, &p.open[0]) {
        return Err(Violation::new("start", format!("{} and {} are not adjacent", p.at0, p.open[0])));
    }
    for i in 0..k {
        let (a, b, v) = (&p.open[i], &p.open[i + 1], &p.atjump[i]);
        if !adj_or_eq(img, a, b) {
            return Err(Violation::new(format!("jump {i}"), format!("{a} and {b} are not adjacent")));
        }
        if v != a && v != b {
            return Err(Violation::new(format!("jump {i}"), format!("value {v} equals neither {a} nor {b}")));
        }
    }
    if !adj_or_eq(img, &p.open[k], &p.at1) {
        return Err(Violation::new("end", format!("{} and {} are not adjacent", p.open[k], p.at1)));
    }
    Ok(())
}

/// A real homotopy on a finite domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealHomotopy<C: Coord, I: TimeInt> {
    jumps: Vec<Time<I>>,
    at0: DigitalMap<C>,
    open: Vec<DigitalMap<C>>,
    atjump: Vec<DigitalMap<C>>,
    at1: DigitalMap<C>,
    pointed_at: Option<Point<C>>,
}

impl<C: Coord, I: TimeInt> RealHomotopy<C, I> {
    /// Checks the shape of the encoding: jump order, layer counts and that
    /// every layer shares one domain and codomain.
    pub fn new(
        jumps: Vec<Time<I>>,
        at0: DigitalMap<C>,
        open: Vec<DigitalMap<C>>,
        atjump: Vec<DigitalMap<C>>,
        at1: DigitalMap<C>,
        pointed_at: Option<Point<C>>,
    ) -> Result<Self> {
        check_jumps(&jumps).map_err(|v| Error::Precondition(v.to_string()))?;
        let k = jumps.len();
        if open.len() != k + 1 || atjump.len() != k {
            return Err(Error::Precondition(format!(
                "{k} jumps need {} open layers and {k} jump layers, found {} and {}",
                k + 1,
                open.len(),
                atjump.len()
            )));
        }
        let h = RealHomotopy { jumps, at0, open, atjump, at1, pointed_at };
        for (name, l) in h.named_layers() {
            if l.domain() != h.at0.domain() || l.codomain() != h.at0.codomain() {
                return Err(Error::ImageMismatch(format!("{name} has a different domain or codomain")));
            }
        }
        if let Some(p) = &h.pointed_at {
            h.domain().require_index(p)?;
        }
        Ok(h)
    }

    /// `F(x, t) = f(x)` for every `t`.
    pub fn constant(f: &DigitalMap<C>) -> Self {
        RealHomotopy {
            jumps: Vec::new(),
            at0: f.clone(),
            open: vec![f.clone()],
            atjump: Vec::new(),
            at1: f.clone(),
            pointed_at: None,
        }
    }

    pub fn jumps(&self) -> &[Time<I>] {
        &self.jumps
    }

    pub fn at0(&self) -> &DigitalMap<C> {
        &self.at0
    }

    pub fn at1(&self) -> &DigitalMap<C> {
        &self.at1
    }

    pub fn open_layers(&self) -> &[DigitalMap<C>] {
        &self.open
    }

    pub fn jump_layers(&self) -> &[DigitalMap<C>] {
        &self.atjump
    }

    pub fn domain(&self) -> &DigitalImage<C> {
        self.at0.domain()
    }

    pub fn codomain(&self) -> &DigitalImage<C> {
        self.at0.codomain()
    }

    pub fn pointed_at(&self) -> Option<&Point<C>> {
        self.pointed_at.as_ref()
    }

    pub fn with_pointed_at(mut self, x0: Option<Point<C>>) -> Result<Self> {
        if let Some(p) = &x0 {
            self.domain().require_index(p)?;
        }
        self.pointed_at = x0;
        Ok(self)
    }

    fn named_layers(&self) -> Vec<(String, &DigitalMap<C>)> {
        let mut out = vec![("layer at 0".to_string(), &self.at0)];
        for (i, l) in self.open.iter().enumerate() {
            out.push((format!("open layer {i}"), l));
            if let Some(j) = self.atjump.get(i) {
                out.push((format!("jump layer {i} ({})", format_time(&self.jumps[i])), j));
            }
        }
        out.push(("layer at 1".to_string(), &self.at1));
        out
    }

    /// Every stored layer in time order.
    pub fn all_layers(&self) -> Vec<&DigitalMap<C>> {
        self.named_layers().into_iter().map(|(_, l)| l).collect()
    }

    /// Value of `F(x, t)`.
    pub fn value_at(&self, i: usize, t: &Time<I>) -> usize {
        if t.is_zero() {
            return self.at0.value_index(i);
        }
        if t.is_one() {
            return self.at1.value_index(i);
        }
        match self.jumps.binary_search(t) {
            Ok(j) => self.atjump[j].value_index(i),
            Err(j) => self.open[j].value_index(i),
        }
    }

    /// The real path `t -> F(x, t)` of the domain point with index `i`.
    pub fn slice(&self, i: usize) -> RealPath<C, I> {
        let y = self.codomain();
        let pt = |m: &DigitalMap<C>| y.point(m.value_index(i)).clone();
        RealPath {
            image: y.clone(),
            jumps: self.jumps.clone(),
            at0: pt(&self.at0),
            open: self.open.iter().map(pt).collect(),
            atjump: self.atjump.iter().map(pt).collect(),
            at1: pt(&self.at1),
        }
    }

    pub fn holds_fixed(&self, x: &Point<C>) -> bool {
        self.domain().index_of(x).is_some_and(|i| {
            let v = self.at0.value_index(i);
            self.all_layers().iter().all(|l| l.value_index(i) == v)
        })
    }

    pub fn verify(&self, f: &DigitalMap<C>, g: &DigitalMap<C>) -> Verdict {
        verify_real_homotopy(self, f, g)
    }

    /// The same homotopy sampled on a finer jump set `grid ⊇ jumps`.
    pub fn refine(&self, grid: &[Time<I>]) -> Result<Self> {
        check_jumps(grid).map_err(|v| Error::Precondition(v.to_string()))?;
        if !self.jumps.iter().all(|q| grid.binary_search(q).is_ok()) {
            return Err(Error::Precondition("the grid does not contain every jump".into()));
        }
        let open_at = |lo: usize| match self.jumps.binary_search(&grid[lo]) {
            Ok(j) => self.open[j + 1].clone(),
            Err(j) => self.open[j].clone(),
        };
        let mut open = vec![self.open[0].clone()];
        let mut atjump = Vec::new();
        for (i, q) in grid.iter().enumerate() {
            match self.jumps.binary_search(q) {
                Ok(j) => atjump.push(self.atjump[j].clone()),
                Err(j) => atjump.push(self.open[j].clone()),
            }
            open.push(open_at(i));
        }
        RealHomotopy::new(grid.to_vec(), self.at0.clone(), open, atjump, self.at1.clone(), self.pointed_at.clone())
    }

    /// Applies `f` to every layer.
    pub fn map_layers(&self, mut f: impl FnMut(&DigitalMap<C>) -> Result<DigitalMap<C>>) -> Result<Self> {
        RealHomotopy::new(
            self.jumps.clone(),
            f(&self.at0)?,
            self.open.iter().map(&mut f).collect::<Result<_>>()?,
            self.atjump.iter().map(&mut f).collect::<Result<_>>()?,
            f(&self.at1)?,
            None,
        )
    }
}

/// Checks endpoints, layer continuity, slices and the optional fixed point.
pub fn verify_real_homotopy<C: Coord, I: TimeInt>(
    h: &RealHomotopy<C, I>,
    f: &DigitalMap<C>,
    g: &DigitalMap<C>,
) -> Verdict {
    check_jumps(&h.jumps)?;
    let k = h.jumps.len();
    if h.open.len() != k + 1 || h.atjump.len() != k {
        return Err(Violation::new("shape", "layer counts do not match the jump set"));
    }
    for (name, l) in h.named_layers() {
        if l.domain() != h.domain() || l.codomain() != h.codomain() {
            return Err(Violation::new("shape", format!("{name} has a different domain or codomain")));
        }
        if let Some((a, b)) = l.continuity_violation() {
            return Err(Violation::new("layer continuity", format!("{name} separates {a} and {b}")));
        }
    }
    if &h.at0 != f {
        return Err(Violation::new("start layer", "layer at 0 differs from the source map"));
    }
    if &h.at1 != g {
        return Err(Violation::new("end layer", "layer at 1 differs from the target map"));
    }
    for i in 0..h.domain().len() {
        h.slice(i).verify().map_err(|v| Violation::new("slice", format!("at {}: {v}", h.domain().point(i))))?;
    }
    if let Some(x0) = &h.pointed_at {
        if !h.holds_fixed(x0) {
            return Err(Violation::new("fixed point", format!("{x0} is not held fixed")));
        }
    }
    Ok(())
}

/// `G(x, t) = F(x, 1 - t)`.
pub fn reverse_real<C: Coord, I: TimeInt>(h: &RealHomotopy<C, I>) -> RealHomotopy<C, I> {
    let one = Time::<I>::one();
    RealHomotopy {
        jumps: h.jumps.iter().rev().map(|q| one.clone() - q).collect(),
        at0: h.at1.clone(),
        open: h.open.iter().rev().cloned().collect(),
        atjump: h.atjump.iter().rev().cloned().collect(),
        at1: h.at0.clone(),
        pointed_at: h.pointed_at.clone(),
    }
}

/// `F` on `[0, 1/2]` followed by `G` on `[1/2, 1]`, with value `F(x, 1)` at `1/2`.
///
/// When some point jumps both at `F`'s end and at `G`'s start, the value at
/// `1/2` may equal neither neighbor. The middle layer is then held on a short
/// interval of its own, from `1/2` to the midpoint of `1/2` and `G`'s first
/// rescaled jump.
pub fn concat_real<C: Coord, I: TimeInt>(f: &RealHomotopy<C, I>, g: &RealHomotopy<C, I>) -> Result<RealHomotopy<C, I>> {
    if f.at1 != g.at0 {
        return Err(Error::EndpointMismatch("the first homotopy does not end where the second starts".into()));
    }
    let h = half::<I>();
    let mid = &f.at1;
    let left = f.open.last().expect("nonempty");
    let right = &g.open[0];
    let y = f.codomain();
    let scaled_f = f.jumps.iter().map(|q| q.clone() * h.clone());
    let scaled_g: Vec<Time<I>> = g.jumps.iter().map(|q| (q.clone() + Time::one()) * h.clone()).collect();
    let mut jumps: Vec<Time<I>> = scaled_f.collect();
    let mut open: Vec<DigitalMap<C>> = f.open[..f.open.len() - 1].to_vec();
    let mut atjump = f.atjump.clone();
    let smooth = left == mid && right == mid;
    let valid_jump = (0..f.domain().len()).all(|i| {
        let (a, b, v) = (left.value_index(i), right.value_index(i), mid.value_index(i));
        y.adj_or_eq_idx(a, b) && (v == a || v == b)
    });
    if smooth {
        open.push(mid.clone());
    } else if valid_jump {
        open.push(left.clone());
        jumps.push(h.clone());
        atjump.push(mid.clone());
        open.push(right.clone());
    } else {
        let next = scaled_g.first().cloned().unwrap_or_else(Time::one);
        open.push(left.clone());
        jumps.push(h.clone());
        atjump.push(mid.clone());
        open.push(mid.clone());
        jumps.push((h.clone() + next) * half::<I>());
        atjump.push(mid.clone());
        open.push(right.clone());
    }
    open.extend(g.open[1..].iter().cloned());
    jumps.extend(scaled_g);
    atjump.extend(g.atjump.iter().cloned());
    let pointed_at = if f.pointed_at == g.pointed_at { f.pointed_at.clone() } else { None };
    RealHomotopy::new(jumps, f.at0.clone(), open, atjump, g.at1.clone(), pointed_at)
}

/// `post ∘ F_t ∘ pre` for every layer.
pub fn whisker_real<C: Coord, I: TimeInt>(
    post: &DigitalMap<C>,
    h: &RealHomotopy<C, I>,
    pre: &DigitalMap<C>,
) -> Result<RealHomotopy<C, I>> {
    h.map_layers(|l| compose(post, &compose(l, pre)?))
}

/// Places layer `j` of a long homotopy on the interval between
/// `q_j = (j + T + 1) / (2T + 3)` and `q_{j+1}`; boundaries where
/// consecutive layers agree are not jumps. The value at a jump is the later
/// layer.
pub fn long_to_real<C: Coord, I: TimeInt>(h: &LongHomotopy<C>) -> RealHomotopy<C, I> {
    let t = h.t_max() as i64;
    let den = I::from(2 * t + 3);
    let mut jumps = Vec::new();
    let mut open = vec![h.layer(-t).clone()];
    let mut atjump = Vec::new();
    for j in (-t + 1)..=t {
        if h.layer(j) != h.layer(j - 1) {
            jumps.push(Time::new(I::from(j + t + 1), den.clone()));
            atjump.push(h.layer(j).clone());
            open.push(h.layer(j).clone());
        }
    }
    RealHomotopy {
        jumps,
        at0: h.layer(-t).clone(),
        open,
        atjump,
        at1: h.layer(t).clone(),
        pointed_at: h.pointed_at().cloned(),
    }
}

/// Samples `0`, one point inside each open interval, and `1`.
///
/// The first and last interval samples are dropped when they repeat the
/// endpoint layers, so the step count equals the number of jump positions,
/// counting `0` or `1` when some point jumps there.
pub fn real_to_finite<C: Coord, I: TimeInt>(h: &RealHomotopy<C, I>) -> Homotopy<C> {
    let k = h.open.len() - 1;
    let mut layers = vec![h.at0.clone()];
    for (i, l) in h.open.iter().enumerate() {
        if (i == 0 && *l == h.at0) || (i == k && *l == h.at1) {
            continue;
        }
        layers.push(l.clone());
    }
    layers.push(h.at1.clone());
    Homotopy::new(layers, h.pointed_at.clone()).expect("layers share one shape")
}

/// The finite homotopy viewed as a real one.
pub fn finite_to_real<C: Coord, I: TimeInt>(h: &Homotopy<C>) -> RealHomotopy<C, I> {
    long_to_real(&finite_to_long(h))
}

/// Real-homotopy analogue of [`EquivalenceCertificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealEquivalenceCertificate<C: Coord, I: TimeInt> {
    pub f: DigitalMap<C>,
    pub g: DigitalMap<C>,
    pub h: RealHomotopy<C, I>,
    pub k: RealHomotopy<C, I>,
    pub basepoints: Option<(Point<C>, Point<C>)>,
}

impl<C: Coord, I: TimeInt> RealEquivalenceCertificate<C, I> {
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
        RealEquivalenceCertificate {
            f: cert.f.clone(),
            g: cert.g.clone(),
            h: finite_to_real(&cert.h),
            k: finite_to_real(&cert.k),
            basepoints: cert.basepoints.clone(),
        }
    }

    pub fn swap(&self) -> Self {
        RealEquivalenceCertificate {
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
                if w.at0() != src || w.at1() != dst {
                    return Err(Violation::new(
                        format!("{name} endpoints"),
                        "layers do not run from the composite to the identity",
                    ));
                }
                w.verify(src, dst).map_err(|v| v.within(name))
            },
            |which, p| if which { self.h.holds_fixed(p) } else { self.k.holds_fixed(p) },
        )
    }
}

pub fn verify_real_equivalence<C: Coord, I: TimeInt>(cert: &RealEquivalenceCertificate<C, I>) -> Verdict {
    cert.verify()
}

/// Combines `X ≃^R Y` and `Y ≃^R W` into `X ≃^R W`.
pub fn compose_real_equivalences<C: Coord, I: TimeInt>(
    first: &RealEquivalenceCertificate<C, I>,
    second: &RealEquivalenceCertificate<C, I>,
) -> Result<RealEquivalenceCertificate<C, I>> {
    if first.y() != second.x() {
        return Err(Error::ImageMismatch("the certificates do not share the middle image".into()));
    }
    let f = compose(&second.f, &first.f)?;
    let g = compose(&first.g, &second.g)?;
    let h = concat_real(&whisker_real(&first.g, &second.h, &first.f)?, &first.h)?;
    let k = concat_real(&whisker_real(&second.f, &first.k, &second.g)?, &second.k)?;
    let basepoints = match (&first.basepoints, &second.basepoints) {
        (Some((x0, _)), Some((_, w0))) => Some((x0.clone(), w0.clone())),
        _ => None,
    };
    let fixed = |p: &Option<(Point<C>, Point<C>)>, first_side: bool| {
        p.as_ref().map(|(a, b)| if first_side { a.clone() } else { b.clone() })
    };
    Ok(RealEquivalenceCertificate {
        f,
        g,
        h: h.with_pointed_at(fixed(&basepoints, true))?,
        k: k.with_pointed_at(fixed(&basepoints, false))?,
        basepoints,
    })
}

/// Finite-homotopy check of every layer sequence, used by tests.
#[cfg(test)]
fn layers_form_homotopy<C: Coord, I: TimeInt>(h: &RealHomotopy<C, I>) -> Verdict {
    let layers: Vec<_> = h.all_layers().into_iter().cloned().collect();
    crate::homotopy::check_layers(&layers, 0, h.pointed_at())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{interval, AdjacencyKind};
    use num_bigint::BigInt;

    type Q = Time<BigInt>;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn p1(x: i64) -> Point<i64> {
        Point::from_i64s(&[x])
    }

    fn p2(x: i64, y: i64) -> Point<i64> {
        Point::from_i64s(&[x, y])
    }

    fn square_collapse() -> Homotopy<i64> {
        let sq = DigitalImage::new(AdjacencyKind::c1(2), [p2(0, 0), p2(0, 1), p2(1, 0), p2(1, 1)]).unwrap();
        let id = DigitalMap::identity(&sq);
        let row = DigitalMap::from_fn(&sq, &sq, |p| p2(p.coords()[0], 0)).unwrap();
        let pt = DigitalMap::constant(&sq, &sq, &p2(0, 0)).unwrap();
        Homotopy::new(vec![id, row, pt], Some(p2(0, 0))).unwrap()
    }

    #[test]
    fn real_path_examples() {
        let iv = interval::<i64>(0, 2).unwrap();
        assert_eq!(RealPath::<i64, BigInt>::constant(&iv, &p1(0)).verify(), Ok(()));
        let one_jump = RealPath {
            image: iv.clone(),
            jumps: vec![q(1, 2)],
            at0: p1(0),
            open: vec![p1(0), p1(1)],
            atjump: vec![p1(1)],
            at1: p1(1),
        };
        assert_eq!(one_jump.verify(), Ok(()));
        let far = RealPath { open: vec![p1(0), p1(2)], atjump: vec![p1(2)], at1: p1(2), ..one_jump.clone() };
        assert_eq!(far.verify().unwrap_err().clause, "jump 0");
        let spike = RealPath { open: vec![p1(0), p1(0)], atjump: vec![p1(1)], at1: p1(0), ..one_jump };
        assert_eq!(spike.verify().unwrap_err().clause, "jump 0");
    }

    #[test]
    fn conversions_verify() {
        let h = square_collapse();
        let r: RealHomotopy<i64, BigInt> = finite_to_real(&h);
        assert_eq!(r.jumps().len(), 2);
        assert_eq!(r.verify(h.start(), h.end()), Ok(()));
        assert_eq!(layers_form_homotopy(&r), Ok(()));
        let back = real_to_finite(&r);
        assert_eq!(back.verify(h.start(), h.end()), Ok(()));
        assert_eq!(back.steps(), 2);
        let c = RealHomotopy::<i64, BigInt>::constant(h.start());
        assert_eq!(c.verify(h.start(), h.start()), Ok(()));
        assert_eq!(real_to_finite(&c).steps(), 1);
    }

    #[test]
    fn corrupted_open_layer_fails() {
        let h = square_collapse();
        let r: RealHomotopy<i64, BigInt> = finite_to_real(&h);
        let sq = h.domain().clone();
        let torn = DigitalMap::from_pairs(
            &sq,
            &sq,
            &[(p2(0, 0), p2(0, 0)), (p2(0, 1), p2(1, 1)), (p2(1, 0), p2(1, 0)), (p2(1, 1), p2(1, 1))],
        )
        .unwrap();
        let mut open = r.open_layers().to_vec();
        open[1] = torn;
        let bad = RealHomotopy::new(
            r.jumps().to_vec(),
            r.at0().clone(),
            open,
            r.jump_layers().to_vec(),
            r.at1().clone(),
            None,
        )
        .unwrap();
        assert_eq!(bad.verify(h.start(), h.end()).unwrap_err().clause, "layer continuity");
    }

    #[test]
    fn reversal_and_concatenation() {
        let h = square_collapse();
        let r: RealHomotopy<i64, BigInt> = finite_to_real(&h);
        assert_eq!(reverse_real(&reverse_real(&r)), r);
        let round = concat_real(&r, &reverse_real(&r)).unwrap();
        assert_eq!(round.verify(h.start(), h.start()), Ok(()));

        let iv = interval::<i64>(0, 1).unwrap();
        let id = DigitalMap::identity(&iv);
        let c0 = DigitalMap::constant(&iv, &iv, &p1(0)).unwrap();
        let a = RealHomotopy::<i64, BigInt>::new(
            vec![q(1, 3)],
            id.clone(),
            vec![id.clone(), c0.clone()],
            vec![c0.clone()],
            c0.clone(),
            None,
        )
        .unwrap();
        let b = RealHomotopy::<i64, BigInt>::new(
            vec![q(1, 2)],
            c0.clone(),
            vec![c0.clone(), id.clone()],
            vec![id.clone()],
            id.clone(),
            None,
        )
        .unwrap();
        let ab = concat_real(&a, &b).unwrap();
        assert_eq!(ab.jumps(), &[q(1, 6), q(3, 4)]);
        assert_eq!(ab.verify(&id, &id), Ok(()));
    }

    #[test]
    fn concat_handles_double_endpoint_jumps() {
        let iv = interval::<i64>(0, 2).unwrap();
        let c = |v| DigitalMap::constant(&iv, &iv, &p1(v)).unwrap();
        // Slice of F ends 0 -> 1 at t = 1; slice of G starts 1 -> 2 at t = 0.
        let f = RealHomotopy::<i64, BigInt>::new(vec![], c(0), vec![c(0)], vec![], c(1), None).unwrap();
        let g = RealHomotopy::<i64, BigInt>::new(vec![], c(1), vec![c(2)], vec![], c(2), None).unwrap();
        assert_eq!(f.verify(&c(0), &c(1)), Ok(()));
        assert_eq!(g.verify(&c(1), &c(2)), Ok(()));
        let fg = concat_real(&f, &g).unwrap();
        assert_eq!(fg.verify(&c(0), &c(2)), Ok(()));
        assert_eq!(fg.jumps(), &[q(1, 2), q(3, 4)]);
    }

    #[test]
    fn refine_keeps_the_function() {
        let h = square_collapse();
        let r: RealHomotopy<i64, BigInt> = finite_to_real(&h);
        let mut grid = r.jumps().to_vec();
        grid.push(q(1, 10));
        grid.push(q(9, 10));
        grid.sort();
        let fine = r.refine(&grid).unwrap();
        assert_eq!(fine.verify(h.start(), h.end()), Ok(()));
        for t in [q(0, 1), q(1, 10), q(1, 5), q(2, 7), q(3, 7), q(1, 2), q(9, 10), q(1, 1)] {
            for i in 0..h.domain().len() {
                assert_eq!(fine.value_at(i, &t), r.value_at(i, &t));
            }
        }
    }

    #[test]
    fn whiskering_and_composition() {
        let h = square_collapse();
        let sq = h.domain().clone();
        let r: RealHomotopy<i64, BigInt> = finite_to_real(&h);
        let id = DigitalMap::identity(&sq);
        assert_eq!(whisker_real(&id, &r, &id).unwrap().with_pointed_at(Some(p2(0, 0))).unwrap(), r);
        let c = DigitalMap::constant(&sq, &sq, &p2(1, 1)).unwrap();
        let w = whisker_real(&c, &r, &id).unwrap();
        assert!(w.all_layers().iter().all(|l| **l == c));

        let pt = DigitalImage::new(AdjacencyKind::c1(2), [p2(0, 0)]).unwrap();
        let cert = EquivalenceCertificate {
            f: DigitalMap::inclusion(&pt, &sq).unwrap(),
            g: DigitalMap::constant(&sq, &pt, &p2(0, 0)).unwrap(),
            h: Homotopy::constant(&DigitalMap::identity(&pt)),
            k: h.reverse(),
            basepoints: Some((p2(0, 0), p2(0, 0))),
        };
        let a = RealEquivalenceCertificate::<i64, BigInt>::from_finite(&cert);
        assert_eq!(a.verify(), Ok(()));
        let chain = compose_real_equivalences(&a, &a.swap()).unwrap();
        assert_eq!(chain.verify(), Ok(()));
        let back = compose_real_equivalences(&a.swap(), &a).unwrap();
        assert_eq!(back.verify(), Ok(()));
        let ident = RealEquivalenceCertificate::identity(&pt, Some(p2(0, 0)));
        let same = compose_real_equivalences(&ident, &a).unwrap();
        assert_eq!(same.verify(), Ok(()));
        assert_eq!((same.f.clone(), same.g.clone()), (a.f.clone(), a.g.clone()));
    }
}
