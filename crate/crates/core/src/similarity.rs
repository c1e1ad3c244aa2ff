//! Homotopic-similarity certificates over nested filtrations.
//!
//! Levels are numbered from 0; a certificate of depth `J` holds levels
//! `0..J`. Verification covers exactly those levels, so a passing verdict
//! is depth-bounded evidence and says nothing about deeper levels.

use std::collections::BTreeMap;

use crate::ecpath::ECPath;
use crate::error::{Error, Result, Verdict, Violation};
use crate::homotopy::{EquivalenceCertificate, Homotopy};
use crate::lattice::{DigitalImage, Point};
use crate::maps::{compose, DigitalMap};
use crate::scalar::Coord;

/// Tag of a filtration known to be constant at every depth.
pub const STATIONARY: &str = "stationary";

/// A nested chain `X_0 ⊆ X_1 ⊆ ...` truncated to a finite depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration<C: Coord> {
    levels: Vec<DigitalImage<C>>,
    tag: Option<String>,
}

impl<C: Coord> Filtration<C> {
    pub fn new(levels: Vec<DigitalImage<C>>, tag: Option<String>) -> Result<Self> {
        let first =
            levels.first().ok_or_else(|| Error::Precondition("a filtration needs at least one level".into()))?;
        for (j, w) in levels.windows(2).enumerate() {
            if w[0].kind() != first.kind() || w[1].kind() != first.kind() {
                return Err(Error::ImageMismatch(format!("level {} has another adjacency kind", j + 1)));
            }
            if !w[0].is_subimage_of(&w[1]) {
                return Err(Error::NotSubimage(format!("level {j} is not contained in level {}", j + 1)));
            }
        }
        Ok(Filtration { levels, tag })
    }

    /// `depth` copies of one image.
    pub fn stationary(image: &DigitalImage<C>, depth: usize) -> Self {
        Filtration { levels: vec![image.clone(); depth.max(1)], tag: Some(STATIONARY.into()) }
    }

    pub fn levels(&self) -> &[DigitalImage<C>] {
        &self.levels
    }

    pub fn level(&self, j: usize) -> &DigitalImage<C> {
        &self.levels[j]
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn tag(&self) -> Option<&str> {
        self.tag.as_deref()
    }

    pub fn is_stationary(&self) -> bool {
        self.tag.as_deref() == Some(STATIONARY)
    }

    /// First `depth` levels.
    pub fn truncate(&self, depth: usize) -> Self {
        Filtration { levels: self.levels[..depth.min(self.levels.len())].to_vec(), tag: self.tag.clone() }
    }

    /// Levels `from..`.
    pub fn skip(&self, from: usize) -> Self {
        Filtration { levels: self.levels[from..].to_vec(), tag: self.tag.clone() }
    }
}

/// Restriction homotopies keyed by level pairs `(v, w)`, `v < w`.
pub type Restrictions<C> = BTreeMap<(usize, usize), Homotopy<C>>;

/// Level maps, round-trip homotopies and restriction homotopies up to a
/// finite depth.
///
/// `rf[(v, w)]` runs from `f_w` restricted to `X_v` (with codomain `Y_v`)
/// to `f_v`, for every `v < w`; `rg` likewise for the `g_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityCertificate<C: Coord> {
    pub x_levels: Filtration<C>,
    pub y_levels: Filtration<C>,
    pub f: Vec<DigitalMap<C>>,
    pub g: Vec<DigitalMap<C>>,
    pub h: Vec<Homotopy<C>>,
    pub k: Vec<Homotopy<C>>,
    pub rf: Restrictions<C>,
    pub rg: Restrictions<C>,
    pub basepoints: Option<(Point<C>, Point<C>)>,
}

/// `map` restricted to `sub` and viewed with codomain `target`.
fn restrict_into<C: Coord>(
    map: &DigitalMap<C>,
    sub: &DigitalImage<C>,
    target: &DigitalImage<C>,
) -> Result<DigitalMap<C>> {
    map.restrict(sub)?.corestrict(target)
}

impl<C: Coord> SimilarityCertificate<C> {
    pub fn depth(&self) -> usize {
        self.x_levels.depth()
    }

    /// Level `j` as a plain equivalence certificate.
    pub fn level(&self, j: usize) -> EquivalenceCertificate<C> {
        EquivalenceCertificate {
            f: self.f[j].clone(),
            g: self.g[j].clone(),
            h: self.h[j].clone(),
            k: self.k[j].clone(),
            basepoints: self.basepoints.clone(),
        }
    }

    /// The same certificate read from `Y` to `X`.
    pub fn swap(&self) -> Self {
        SimilarityCertificate {
            x_levels: self.y_levels.clone(),
            y_levels: self.x_levels.clone(),
            f: self.g.clone(),
            g: self.f.clone(),
            h: self.k.clone(),
            k: self.h.clone(),
            rf: self.rg.clone(),
            rg: self.rf.clone(),
            basepoints: self.basepoints.clone().map(|(x, y)| (y, x)),
        }
    }

    /// First `depth` levels.
    pub fn truncate(&self, depth: usize) -> Self {
        let d = depth.min(self.depth());
        let keep = |m: &Restrictions<C>| m.iter().filter(|((_, w), _)| *w < d).map(|(k, v)| (*k, v.clone())).collect();
        SimilarityCertificate {
            x_levels: self.x_levels.truncate(d),
            y_levels: self.y_levels.truncate(d),
            f: self.f[..d].to_vec(),
            g: self.g[..d].to_vec(),
            h: self.h[..d].to_vec(),
            k: self.k[..d].to_vec(),
            rf: keep(&self.rf),
            rg: keep(&self.rg),
            basepoints: self.basepoints.clone(),
        }
    }

    pub fn verify(&self) -> Verdict {
        verify_similarity(self, None)
    }
}

/// Checks every level `j < depth` (all levels when `depth` is `None`) and
/// every restriction pair `v < w < depth`.
pub fn verify_similarity<C: Coord>(cert: &SimilarityCertificate<C>, depth: Option<usize>) -> Verdict {
    let full = cert.depth();
    let d = depth.unwrap_or(full);
    if d > full {
        return Err(Violation::new("depth", format!("requested depth {d} exceeds the certificate depth {full}")));
    }
    let structure = |msg: String| Err(Violation::new("structure", msg));
    if cert.y_levels.depth() != full {
        return structure(format!("{full} X levels but {} Y levels", cert.y_levels.depth()));
    }
    for (name, n) in [("f", cert.f.len()), ("g", cert.g.len()), ("H", cert.h.len()), ("K", cert.k.len())] {
        if n != full {
            return structure(format!("{n} {name} entries for {full} levels"));
        }
    }
    for (name, fl) in [("X", &cert.x_levels), ("Y", &cert.y_levels)] {
        for j in 1..fl.depth() {
            if !fl.level(j - 1).is_subimage_of(fl.level(j)) || fl.level(j - 1).kind() != fl.level(j).kind() {
                return structure(format!("{name} level {} is not contained in level {j}", j - 1));
            }
        }
    }
    for j in 0..d {
        let (x, y) = (cert.x_levels.level(j), cert.y_levels.level(j));
        if cert.f[j].domain() != x || cert.f[j].codomain() != y || cert.g[j].domain() != y || cert.g[j].codomain() != x
        {
            return Err(Violation::new(format!("level {j}: shape"), "level maps do not run between X_j and Y_j"));
        }
        if let Some((x1, y1)) = &cert.basepoints {
            if !cert.x_levels.level(0).contains(x1) || !cert.y_levels.level(0).contains(y1) {
                return Err(Violation::new("basepoints", "basepoints do not lie in the first levels"));
            }
        }
        cert.level(j).verify().map_err(|v| v.within(format!("level {j}")))?;
    }
    for (name, maps, restr, dom, cod) in [
        ("R^f", &cert.f, &cert.rf, &cert.x_levels, &cert.y_levels),
        ("R^g", &cert.g, &cert.rg, &cert.y_levels, &cert.x_levels),
    ] {
        let fixed = cert.basepoints.as_ref().map(|(x, y)| if name == "R^f" { x } else { y });
        for w in 0..d {
            for v in 0..w {
                let label = format!("{name}({v},{w})");
                let Some(r) = restr.get(&(v, w)) else {
                    return structure(format!("missing {label}"));
                };
                let start = restrict_into(&maps[w], dom.level(v), cod.level(v))
                    .map_err(|e| Violation::new(format!("{label} codomain"), e.to_string()))?;
                if r.start() != &start || r.end() != &maps[v] {
                    return Err(Violation::new(
                        format!("{label} endpoints"),
                        "does not run from the restricted map to the lower level map",
                    ));
                }
                r.verify_body().map_err(|e| e.within(&label))?;
                if let Some(p) = fixed {
                    if !r.holds_fixed(p) {
                        return Err(Violation::new(format!("{label} pointed"), format!("{p} is not held fixed")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Constant chains `X_j = X`, `Y_j = Y` carrying one equivalence at every level.
pub fn from_equivalence<C: Coord>(cert: &EquivalenceCertificate<C>, depth: usize) -> SimilarityCertificate<C> {
    let depth = depth.max(1);
    let mut rf = BTreeMap::new();
    let mut rg = BTreeMap::new();
    let pin = |h: Homotopy<C>, p: Option<&Point<C>>| h.with_pointed_at(p.cloned()).expect("basepoint in domain");
    let (x0, y0) = match &cert.basepoints {
        Some((x, y)) => (Some(x), Some(y)),
        None => (None, None),
    };
    for w in 0..depth {
        for v in 0..w {
            rf.insert((v, w), pin(Homotopy::constant(&cert.f), x0));
            rg.insert((v, w), pin(Homotopy::constant(&cert.g), y0));
        }
    }
    SimilarityCertificate {
        x_levels: Filtration::stationary(cert.x(), depth),
        y_levels: Filtration::stationary(cert.y(), depth),
        f: vec![cert.f.clone(); depth],
        g: vec![cert.g.clone(); depth],
        h: vec![cert.h.clone(); depth],
        k: vec![cert.k.clone(); depth],
        rf,
        rg,
        basepoints: cert.basepoints.clone(),
    }
}

/// Outcome of [`extract_equivalence_when_stable`].
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Stable<C: Coord> {
    Level { level: usize, cert: EquivalenceCertificate<C> },
    NotStable,
}

/// Returns the data of the first level `m` from which both chains are
/// visibly constant: `X_m = X_top` and `Y_m = Y_top` with `m` below the top
/// level, or `m = 0` for chains tagged stationary.
pub fn extract_equivalence_when_stable<C: Coord>(cert: &SimilarityCertificate<C>) -> Stable<C> {
    let top = cert.depth() - 1;
    if cert.x_levels.is_stationary() && cert.y_levels.is_stationary() {
        return Stable::Level { level: 0, cert: cert.level(0) };
    }
    let (xt, yt) = (cert.x_levels.level(top), cert.y_levels.level(top));
    match (0..top).find(|&m| cert.x_levels.level(m) == xt && cert.y_levels.level(m) == yt) {
        Some(m) => Stable::Level { level: m, cert: cert.level(m) },
        None => Stable::NotStable,
    }
}

/// Smallest `i0` from which both chains of the middle image are one and the
/// same constant image. A repeat below the top level, or a stationary tag,
/// is required as evidence that the chains have stopped growing.
fn stable_middle<C: Coord>(a: &Filtration<C>, b: &Filtration<C>) -> Option<usize> {
    let d = a.depth().min(b.depth());
    let top = a.level(d - 1);
    if b.level(d - 1) != top {
        return None;
    }
    let mut i0 = d - 1;
    while i0 > 0 && a.level(i0 - 1) == top && b.level(i0 - 1) == top {
        i0 -= 1;
    }
    (i0 + 1 < d || (a.is_stationary() && b.is_stationary())).then_some(i0)
}

/// Combines `A ≃^s B` and `B ≃^s C` for a finite `B` into `A ≃^s C`.
///
/// Both `B` chains must be constant from some level `i0` on; the result has
/// levels `A_{i0+j}`, `C_{i0+j}` and composed maps, round-trip homotopies
/// built by whiskering and concatenation, and restriction homotopies
/// `(f2_w ∘ R1) * (R2 ∘ f1_v)`.
pub fn compose_through_finite<C: Coord>(
    first: &SimilarityCertificate<C>,
    second: &SimilarityCertificate<C>,
) -> Result<SimilarityCertificate<C>> {
    let i0 = stable_middle(&first.y_levels, &second.x_levels).ok_or_else(|| {
        Error::Precondition("the middle chains do not stabilize to a common image within the depth".into())
    })?;
    let d = first.depth().min(second.depth());
    let b = first.y_levels.level(d - 1).clone();
    let mut f = Vec::new();
    let mut g = Vec::new();
    let mut h = Vec::new();
    let mut k = Vec::new();
    let (x1, z1) = match (&first.basepoints, &second.basepoints) {
        (Some((x, _)), Some((_, z))) => (Some(x.clone()), Some(z.clone())),
        _ => (None, None),
    };
    for i in i0..d {
        let (f1, g1, f2, g2) = (&first.f[i], &first.g[i], &second.f[i], &second.g[i]);
        f.push(compose(f2, f1)?);
        g.push(compose(g1, g2)?);
        h.push(second.h[i].whisker(g1, f1)?.concat(&first.h[i])?.with_pointed_at(x1.clone())?);
        k.push(first.k[i].whisker(f2, g2)?.concat(&second.k[i])?.with_pointed_at(z1.clone())?);
    }
    let n = d - i0;
    let mut rf = BTreeMap::new();
    let mut rg = BTreeMap::new();
    for w in 0..n {
        for v in 0..w {
            let (iv, iw) = (i0 + v, i0 + w);
            let missing = |name: &str| Error::Precondition(format!("missing {name}({iv},{iw})"));
            let r1 = first.rf.get(&(iv, iw)).ok_or_else(|| missing("R^f"))?;
            let r2 = second.rf.get(&(iv, iw)).ok_or_else(|| missing("R^f"))?;
            let f2w = second.f[iw].corestrict(second.y_levels.level(iv))?;
            let rfv = r1.post_compose(&f2w)?.concat(&r2.pre_compose(&first.f[iv])?)?;
            rf.insert((v, w), rfv.with_pointed_at(x1.clone())?);

            let s1 = second.rg.get(&(iv, iw)).ok_or_else(|| missing("R^g"))?;
            let s2 = first.rg.get(&(iv, iw)).ok_or_else(|| missing("R^g"))?;
            let g1w = first.g[iw].corestrict(first.x_levels.level(iv))?;
            let rgv = s1.post_compose(&g1w)?.concat(&s2.pre_compose(&second.g[iv])?)?;
            rg.insert((v, w), rgv.with_pointed_at(z1.clone())?);
        }
    }
    debug_assert!(first.y_levels.levels()[i0..d].iter().all(|l| *l == b));
    let basepoints = x1.zip(z1);
    Ok(SimilarityCertificate {
        x_levels: first.x_levels.truncate(d).skip(i0),
        y_levels: second.y_levels.truncate(d).skip(i0),
        f,
        g,
        h,
        k,
        rf,
        rg,
        basepoints,
    })
}

/// `[L] -> [f_j ∘ L]` for the smallest level `j` containing the loop.
pub fn induced_pi1_map<C: Coord>(cert: &SimilarityCertificate<C>, l: &ECPath<C>) -> Result<(usize, ECPath<C>)> {
    let (x1, _) =
        cert.basepoints.as_ref().ok_or_else(|| Error::Precondition("the certificate is not pointed".into()))?;
    if !l.is_loop() || l.start() != x1 {
        return Err(Error::Precondition(format!("the path is not a loop at {x1}")));
    }
    let mut pts = l.prefix_points();
    pts.push(l.tail_point().clone());
    let j = (0..cert.depth())
        .find(|&j| pts.iter().all(|p| cert.x_levels.level(j).contains(p)))
        .ok_or_else(|| Error::Precondition("the loop leaves every level of the filtration".into()))?;
    let inside = l.reimage(cert.x_levels.level(j))?;
    Ok((j, inside.push(&cert.f[j])?))
}
