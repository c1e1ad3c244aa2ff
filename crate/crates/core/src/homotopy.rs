//! Finite-time digital homotopies and homotopy-equivalence certificates.
//!
//! A [`Homotopy`] is stored extensionally as its layer maps `F_0, ..., F_m`.
//! Verification is a fold over the layers: every layer continuous, every
//! point track a path (consecutive values equal or adjacent), endpoints as
//! claimed, and optionally one point held fixed.

use crate::error::{Error, Result, Verdict, Violation};
use crate::lattice::{DigitalImage, Point};
use crate::maps::{compose, DigitalMap};
use crate::scalar::Coord;

/// A homotopy over the time interval `[0, m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy<C: Coord> {
    layers: Vec<DigitalMap<C>>,
    pointed_at: Option<Point<C>>,
}

impl<C: Coord> Homotopy<C> {
    /// Checks only the shape: at least one layer, and all layers share the
    /// first layer's domain and codomain.
    pub fn new(layers: Vec<DigitalMap<C>>, pointed_at: Option<Point<C>>) -> Result<Self> {
        let first = layers.first().ok_or_else(|| Error::Precondition("a homotopy needs at least one layer".into()))?;
        for (t, layer) in layers.iter().enumerate().skip(1) {
            if layer.domain() != first.domain() || layer.codomain() != first.codomain() {
                return Err(Error::ImageMismatch(format!("layer {t} has a different domain or codomain")));
            }
        }
        if let Some(x0) = &pointed_at {
            first.domain().require_index(x0)?;
        }
        Ok(Homotopy { layers, pointed_at })
    }

    /// The single-layer homotopy from `f` to itself.
    pub fn constant(f: &DigitalMap<C>) -> Self {
        Homotopy { layers: vec![f.clone()], pointed_at: None }
    }

    pub fn layers(&self) -> &[DigitalMap<C>] {
        &self.layers
    }

    pub fn into_layers(self) -> Vec<DigitalMap<C>> {
        self.layers
    }

    /// Number of time steps `m`.
    pub fn steps(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn start(&self) -> &DigitalMap<C> {
        &self.layers[0]
    }

    pub fn end(&self) -> &DigitalMap<C> {
        self.layers.last().expect("nonempty")
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

    pub fn with_pointed_at(mut self, x0: Option<Point<C>>) -> Result<Self> {
        if let Some(p) = &x0 {
            self.domain().require_index(p)?;
        }
        self.pointed_at = x0;
        Ok(self)
    }

    /// True iff every layer sends `x` to the same point.
    pub fn holds_fixed(&self, x: &Point<C>) -> bool {
        match self.domain().index_of(x) {
            Some(i) => {
                let v = self.layers[0].value_index(i);
                self.layers.iter().all(|l| l.value_index(i) == v)
            }
            None => false,
        }
    }

    /// Track of the domain point with index `i`, as codomain indices.
    pub fn track(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.layers.iter().map(move |l| l.value_index(i))
    }

    /// Smallest `t` from which the track of point `i` is constant.
    pub fn stabilization_index(&self, i: usize) -> usize {
        let last = self.end().value_index(i);
        let mut t = self.steps();
        while t > 0 && self.layers[t - 1].value_index(i) == last {
            t -= 1;
        }
        t
    }

    /// Checks every clause of a homotopy from `f` to `g`.
    pub fn verify(&self, f: &DigitalMap<C>, g: &DigitalMap<C>) -> Verdict {
        if self.start() != f {
            return Err(Violation::new("start layer", "layer 0 differs from the source map"));
        }
        if self.end() != g {
            return Err(Violation::new("end layer", format!("layer {} differs from the target map", self.steps())));
        }
        self.verify_body()
    }

    /// Checks continuity of layers and tracks (and the fixed point, if any),
    /// without endpoint conditions.
    pub fn verify_body(&self) -> Verdict {
        check_layers(&self.layers, 0, self.pointed_at.as_ref())
    }

    /// The homotopy run backwards, from `g` to `f`.
    pub fn reverse(&self) -> Self {
        let mut layers = self.layers.clone();
        layers.reverse();
        Homotopy { layers, pointed_at: self.pointed_at.clone() }
    }

    /// `self` followed by `next`; the shared middle layer appears once.
    pub fn concat(&self, next: &Homotopy<C>) -> Result<Self> {
        if self.end() != next.start() {
            return Err(Error::EndpointMismatch(
                "last layer of the first homotopy differs from the first layer of the second".into(),
            ));
        }
        let mut layers = self.layers.clone();
        layers.extend(next.layers[1..].iter().cloned());
        let pointed_at = if self.pointed_at == next.pointed_at { self.pointed_at.clone() } else { None };
        Ok(Homotopy { layers, pointed_at })
    }

    /// Concatenation of a nonempty chain of homotopies.
    pub fn concat_all<'a>(chain: impl IntoIterator<Item = &'a Homotopy<C>>) -> Result<Self> {
        let mut it = chain.into_iter();
        let mut acc = it.next().ok_or_else(|| Error::Precondition("empty chain".into()))?.clone();
        for h in it {
            acc = acc.concat(h)?;
        }
        Ok(acc)
    }

    /// Extends to `m` steps by repeating the last layer.
    pub fn pad_to(&self, m: usize) -> Self {
        let mut layers = self.layers.clone();
        while layers.len() < m + 1 {
            layers.push(self.end().clone());
        }
        Homotopy { layers, pointed_at: self.pointed_at.clone() }
    }

    /// Drops consecutive duplicate layers.
    pub fn dedup_layers(&self) -> Self {
        let mut layers = self.layers.clone();
        layers.dedup();
        Homotopy { layers, pointed_at: self.pointed_at.clone() }
    }

    /// `post ∘ F_t ∘ pre` for every layer.
    pub fn whisker(&self, post: &DigitalMap<C>, pre: &DigitalMap<C>) -> Result<Self> {
        let layers = self.layers.iter().map(|l| compose(post, &compose(l, pre)?)).collect::<Result<Vec<_>>>()?;
        Homotopy::new(layers, None)
    }

    /// Post-composition of every layer with `post`.
    pub fn post_compose(&self, post: &DigitalMap<C>) -> Result<Self> {
        let layers = self.layers.iter().map(|l| compose(post, l)).collect::<Result<Vec<_>>>()?;
        Homotopy::new(layers, self.pointed_at.clone())
    }

    /// Pre-composition of every layer with `pre`.
    pub fn pre_compose(&self, pre: &DigitalMap<C>) -> Result<Self> {
        let layers = self.layers.iter().map(|l| compose(l, pre)).collect::<Result<Vec<_>>>()?;
        Homotopy::new(layers, None)
    }

    /// Every layer restricted to a subimage of the domain.
    pub fn restrict(&self, sub: &DigitalImage<C>) -> Result<Self> {
        let layers = self.layers.iter().map(|l| l.restrict(sub)).collect::<Result<Vec<_>>>()?;
        let pointed_at = self.pointed_at.clone().filter(|p| sub.contains(p));
        Homotopy::new(layers, pointed_at)
    }

    /// Every layer viewed in another codomain.
    pub fn corestrict(&self, codomain: &DigitalImage<C>) -> Result<Self> {
        let layers = self.layers.iter().map(|l| l.corestrict(codomain)).collect::<Result<Vec<_>>>()?;
        Homotopy::new(layers, self.pointed_at.clone())
    }
}

/// Layer shape, layer continuity, track continuity and the optional fixed
/// point for a sequence of layers; times are reported as `offset + index`.
pub(crate) fn check_layers<C: Coord>(layers: &[DigitalMap<C>], offset: i64, fixed: Option<&Point<C>>) -> Verdict {
    let first = layers.first().ok_or_else(|| Violation::new("layers", "no layers"))?;
    let (x, y) = (first.domain(), first.codomain());
    let time = |t: usize| offset + t as i64;
    for (t, layer) in layers.iter().enumerate() {
        if layer.domain() != x || layer.codomain() != y {
            return Err(Violation::new("layer shape", format!("layer {} has a different domain or codomain", time(t))));
        }
        if let Some((a, b)) = layer.continuity_violation() {
            return Err(Violation::new("layer continuity", format!("layer {} separates {a} and {b}", time(t))));
        }
    }
    for t in 1..layers.len() {
        let (prev, next) = (&layers[t - 1], &layers[t]);
        for i in 0..x.len() {
            if !y.adj_or_eq_idx(prev.value_index(i), next.value_index(i)) {
                return Err(Violation::new(
                    "track continuity",
                    format!(
                        "point {} jumps from {} to {} at time {}",
                        x.point(i),
                        prev.value_at(i),
                        next.value_at(i),
                        time(t)
                    ),
                ));
            }
        }
    }
    if let Some(x0) = fixed {
        let Some(i) = x.index_of(x0) else {
            return Err(Violation::new("fixed point", format!("{x0} is not in the domain")));
        };
        if layers.iter().any(|l| l.value_index(i) != first.value_index(i)) {
            return Err(Violation::new("fixed point", format!("{x0} is not held fixed")));
        }
    }
    Ok(())
}

/// Free-function form of [`Homotopy::verify`].
pub fn verify_homotopy<C: Coord>(h: &Homotopy<C>, f: &DigitalMap<C>, g: &DigitalMap<C>) -> Verdict {
    h.verify(f, g)
}

/// `F` reversed.
pub fn reverse_homotopy<C: Coord>(h: &Homotopy<C>) -> Homotopy<C> {
    h.reverse()
}

/// `F` then `G`.
pub fn concat_homotopies<C: Coord>(f: &Homotopy<C>, g: &Homotopy<C>) -> Result<Homotopy<C>> {
    f.concat(g)
}

/// Witness that `X` and `Y` have the same homotopy type.
///
/// `h` runs from `g ∘ f` to `1_X` and `k` from `f ∘ g` to `1_Y`. With
/// basepoints `(x0, y0)` the certificate is pointed: `f(x0) = y0`,
/// `g(y0) = x0` and both homotopies hold the basepoints fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceCertificate<C: Coord> {
    pub f: DigitalMap<C>,
    pub g: DigitalMap<C>,
    pub h: Homotopy<C>,
    pub k: Homotopy<C>,
    pub basepoints: Option<(Point<C>, Point<C>)>,
}

impl<C: Coord> EquivalenceCertificate<C> {
    pub fn x(&self) -> &DigitalImage<C> {
        self.f.domain()
    }

    pub fn y(&self) -> &DigitalImage<C> {
        self.f.codomain()
    }

    /// `1_X` with single-layer homotopies.
    pub fn identity(image: &DigitalImage<C>, basepoint: Option<Point<C>>) -> Self {
        let id = DigitalMap::identity(image);
        EquivalenceCertificate {
            f: id.clone(),
            g: id.clone(),
            h: Homotopy::constant(&id),
            k: Homotopy::constant(&id),
            basepoints: basepoint.map(|b| (b.clone(), b)),
        }
    }

    /// The same data read from `Y` to `X`.
    pub fn swap(&self) -> Self {
        EquivalenceCertificate {
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
                if w.start() != src || w.end() != dst {
                    return Err(Violation::new(
                        format!("{name} endpoints"),
                        "layers do not run from the composite to the identity",
                    ));
                }
                w.verify_body().map_err(|v| v.within(name))
            },
            |which, p| if which { self.h.holds_fixed(p) } else { self.k.holds_fixed(p) },
        )
    }
}

/// Shared clause order for every equivalence-certificate kind.
///
/// `check(true, g∘f, 1_X)` verifies the X-side witness, `check(false, f∘g,
/// 1_Y)` the Y-side one; `fixed(which, p)` reports whether that witness
/// holds `p` fixed.
pub(crate) fn verify_equivalence_parts<C: Coord>(
    f: &DigitalMap<C>,
    g: &DigitalMap<C>,
    basepoints: Option<&(Point<C>, Point<C>)>,
    mut check: impl FnMut(bool, &DigitalMap<C>, &DigitalMap<C>) -> Verdict,
    mut fixed: impl FnMut(bool, &Point<C>) -> bool,
) -> Verdict {
    if f.domain() != g.codomain() || f.codomain() != g.domain() {
        return Err(Violation::new("shape", "f: X -> Y and g: Y -> X do not match"));
    }
    if let Some((a, b)) = f.continuity_violation() {
        return Err(Violation::new("f continuity", format!("{a} and {b}")));
    }
    if let Some((a, b)) = g.continuity_violation() {
        return Err(Violation::new("g continuity", format!("{a} and {b}")));
    }
    let gf = compose(g, f).expect("shapes checked");
    let fg = compose(f, g).expect("shapes checked");
    check(true, &gf, &DigitalMap::identity(f.domain()))?;
    check(false, &fg, &DigitalMap::identity(f.codomain()))?;
    if let Some((x0, y0)) = basepoints {
        if f.apply(x0) != Some(y0) {
            return Err(Violation::new("basepoint f(x0)", format!("f({x0}) is not {y0}")));
        }
        if g.apply(y0) != Some(x0) {
            return Err(Violation::new("basepoint g(y0)", format!("g({y0}) is not {x0}")));
        }
        if !fixed(true, x0) {
            return Err(Violation::new("H pointed", format!("{x0} is not held fixed")));
        }
        if !fixed(false, y0) {
            return Err(Violation::new("K pointed", format!("{y0} is not held fixed")));
        }
    }
    Ok(())
}

/// Free-function form of [`EquivalenceCertificate::verify`].
pub fn verify_equivalence<C: Coord>(cert: &EquivalenceCertificate<C>) -> Verdict {
    cert.verify()
}
