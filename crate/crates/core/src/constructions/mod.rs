//! Built-in image families and their explicit witnesses: boxes in `Z^n`,
//! trees, the T-shaped image, wedges and Cartesian products.
//!
//! Wedge and product certificates are assembled part by part from
//! certificates of one kind. Every assembled certificate is meant to be
//! checked with the generic verifier of its kind; nothing here marks data
//! as trusted.

mod cube;
mod product;
mod timage;
mod tree;
mod wedge;

use std::collections::BTreeMap;

pub use cube::{
    cube, cube_contraction, cube_contraction_finite, cube_equivalence, cube_similarity, zn_window, ZN_WINDOWS,
};
pub use product::{product, product_certificates, product_map, ProductImage};
pub use timage::{t_image, t_image_long, t_image_similarity, TImage};
pub use tree::{tree_contraction, tree_equivalence, tree_l_homotopy, tree_similarity, TreeImage, TREE_BALLS};
pub use wedge::{wedge, wedge_certificates, wedge_map, WedgeImage};

use crate::error::{Error, Result, Verdict};
use crate::homotopy::{EquivalenceCertificate, Homotopy};
use crate::lattice::{DigitalImage, Point};
use crate::longhtpy::{LongEquivalenceCertificate, LongHomotopy};
use crate::maps::DigitalMap;
use crate::realhtpy::{RealEquivalenceCertificate, RealHomotopy};
use crate::scalar::{Coord, Time, TimeInt};
use crate::similarity::{Filtration, Restrictions, SimilarityCertificate, STATIONARY};

/// A certificate of any of the four equivalence kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate<C: Coord, I: TimeInt> {
    Plain(EquivalenceCertificate<C>),
    Long(LongEquivalenceCertificate<C>),
    Real(RealEquivalenceCertificate<C, I>),
    Similarity(SimilarityCertificate<C>),
}

impl<C: Coord, I: TimeInt> Certificate<C, I> {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Plain(_) => "equivalence",
            Certificate::Long(_) => "long",
            Certificate::Real(_) => "real",
            Certificate::Similarity(_) => "similarity",
        }
    }

    pub fn basepoints(&self) -> Option<&(Point<C>, Point<C>)> {
        match self {
            Certificate::Plain(c) => c.basepoints.as_ref(),
            Certificate::Long(c) => c.basepoints.as_ref(),
            Certificate::Real(c) => c.basepoints.as_ref(),
            Certificate::Similarity(c) => c.basepoints.as_ref(),
        }
    }

    pub fn verify(&self) -> Verdict {
        match self {
            Certificate::Plain(c) => c.verify(),
            Certificate::Long(c) => c.verify(),
            Certificate::Real(c) => c.verify(),
            Certificate::Similarity(c) => c.verify(),
        }
    }

    /// The same data with basepoints and fixed points dropped.
    pub fn unpointed(&self) -> Result<Self> {
        Ok(match self {
            Certificate::Plain(c) => Certificate::Plain(EquivalenceCertificate {
                h: c.h.clone().with_pointed_at(None)?,
                k: c.k.clone().with_pointed_at(None)?,
                basepoints: None,
                ..c.clone()
            }),
            Certificate::Long(c) => {
                let unpin = |h: &LongHomotopy<C>| LongHomotopy::new(h.layers().to_vec(), h.bounds().to_vec(), None);
                Certificate::Long(LongEquivalenceCertificate {
                    h: unpin(&c.h)?,
                    k: unpin(&c.k)?,
                    basepoints: None,
                    ..c.clone()
                })
            }
            Certificate::Real(c) => Certificate::Real(RealEquivalenceCertificate {
                h: c.h.clone().with_pointed_at(None)?,
                k: c.k.clone().with_pointed_at(None)?,
                basepoints: None,
                ..c.clone()
            }),
            Certificate::Similarity(c) => {
                let unpin = |m: &Vec<Homotopy<C>>| {
                    m.iter().map(|h| h.clone().with_pointed_at(None)).collect::<Result<Vec<_>>>()
                };
                let unpin_r = |m: &Restrictions<C>| {
                    m.iter()
                        .map(|(key, h)| Ok((*key, h.clone().with_pointed_at(None)?)))
                        .collect::<Result<BTreeMap<_, _>>>()
                };
                Certificate::Similarity(SimilarityCertificate {
                    h: unpin(&c.h)?,
                    k: unpin(&c.k)?,
                    rf: unpin_r(&c.rf)?,
                    rg: unpin_r(&c.rg)?,
                    basepoints: None,
                    ..c.clone()
                })
            }
        })
    }
}

/// `X ≃ {x0}` from a homotopy running from `1_X` to the constant map at `x0`.
pub fn contraction_equivalence<C: Coord>(h: &Homotopy<C>, x0: &Point<C>) -> Result<EquivalenceCertificate<C>> {
    let x = h.domain();
    let pt = DigitalImage::new(x.kind(), [x0.clone()])?;
    contraction_equivalence_into(h, x0, &pt)
}

fn contraction_equivalence_into<C: Coord>(
    h: &Homotopy<C>,
    x0: &Point<C>,
    pt: &DigitalImage<C>,
) -> Result<EquivalenceCertificate<C>> {
    let x = h.domain();
    if *h.start() != DigitalMap::identity(x) || h.end().constant_value() != Some(x0) {
        return Err(Error::EndpointMismatch(format!("not a contraction of the image to {x0}")));
    }
    let f = DigitalMap::constant(x, pt, x0)?;
    let g = DigitalMap::inclusion(pt, x)?;
    let pin = Some(x0.clone());
    Ok(EquivalenceCertificate {
        h: h.reverse().with_pointed_at(pin.clone())?,
        k: Homotopy::constant(&DigitalMap::identity(pt)).with_pointed_at(pin)?,
        f,
        g,
        basepoints: Some((x0.clone(), x0.clone())),
    })
}

/// `X ≃^s {x0}` from contractions of the nested levels `X_j` to `x0`; the
/// level maps are the constant maps and the inclusions of `x0`.
pub fn contraction_similarity<C: Coord>(
    contractions: Vec<Homotopy<C>>,
    x0: &Point<C>,
    tag: Option<String>,
) -> Result<SimilarityCertificate<C>> {
    let first = contractions.first().ok_or_else(|| Error::Precondition("no levels".into()))?;
    let pt = DigitalImage::new(first.domain().kind(), [x0.clone()])?;
    let depth = contractions.len();
    let levels = contractions.iter().map(|h| h.domain().clone()).collect();
    let mut cert = SimilarityCertificate {
        x_levels: Filtration::new(levels, tag)?,
        y_levels: Filtration::stationary(&pt, depth),
        f: Vec::new(),
        g: Vec::new(),
        h: Vec::new(),
        k: Vec::new(),
        rf: BTreeMap::new(),
        rg: BTreeMap::new(),
        basepoints: Some((x0.clone(), x0.clone())),
    };
    for h in &contractions {
        let e = contraction_equivalence_into(h, x0, &pt)?;
        cert.f.push(e.f);
        cert.g.push(e.g);
        cert.h.push(e.h);
        cert.k.push(e.k);
    }
    for w in 0..depth {
        for v in 0..w {
            cert.rf.insert((v, w), Homotopy::constant(&cert.f[v]).with_pointed_at(Some(x0.clone()))?);
            cert.rg.insert((v, w), Homotopy::constant(&cert.g[v]).with_pointed_at(Some(x0.clone()))?);
        }
    }
    Ok(cert)
}

/// An image assembled from parts, with maps assembled part by part.
trait Gluing<C: Coord>: Sized {
    fn assemble(parts: &[DigitalImage<C>]) -> Result<Self>;

    fn image(&self) -> &DigitalImage<C>;

    fn parts(&self) -> &[DigitalImage<C>];

    /// `(part, index in part)` for every part the point `i` comes from.
    fn members(&self, i: usize) -> Vec<(usize, usize)>;

    /// The map acting as `maps[p]` on part `p`.
    fn glue_values(&self, cod: &Self, maps: &[&DigitalMap<C>]) -> Result<Vec<u32>>;

    /// The basepoint assembled from part basepoints.
    fn glue_points(&self, pts: &[&Point<C>]) -> Result<Point<C>>;

    fn glue_maps(&self, cod: &Self, maps: &[&DigitalMap<C>]) -> Result<DigitalMap<C>> {
        if maps.len() != self.parts().len() {
            return Err(Error::Precondition(format!("{} maps for {} parts", maps.len(), self.parts().len())));
        }
        for (p, m) in maps.iter().enumerate() {
            if m.domain() != &self.parts()[p] || m.codomain() != &cod.parts()[p] {
                return Err(Error::ImageMismatch(format!("component {p} does not run between the matching parts")));
            }
        }
        let values = self.glue_values(cod, maps)?;
        Ok(DigitalMap::from_indices_unchecked(self.image(), cod.image(), values))
    }
}

fn glue_homotopy<C: Coord, G: Gluing<C>>(
    dom: &G,
    cod: &G,
    hs: &[&Homotopy<C>],
    fixed: Option<&Point<C>>,
) -> Result<Homotopy<C>> {
    let u = hs.iter().map(|h| h.steps()).max().unwrap_or(0);
    let layers = (0..=u)
        .map(|t| {
            let at: Vec<&DigitalMap<C>> = hs.iter().map(|h| &h.layers()[t.min(h.steps())]).collect();
            dom.glue_maps(cod, &at)
        })
        .collect::<Result<Vec<_>>>()?;
    Homotopy::new(layers, fixed.cloned())
}

fn glue_long<C: Coord, G: Gluing<C>>(
    dom: &G,
    cod: &G,
    hs: &[&LongHomotopy<C>],
    fixed: Option<&Point<C>>,
) -> Result<LongHomotopy<C>> {
    let t_max = hs.iter().map(|h| h.t_max()).max().unwrap_or(0) as i64;
    let layers = (-t_max..=t_max)
        .map(|t| {
            let at: Vec<&DigitalMap<C>> = hs.iter().map(|h| h.layer(t)).collect();
            dom.glue_maps(cod, &at)
        })
        .collect::<Result<Vec<_>>>()?;
    let bounds = (0..dom.image().len())
        .map(|i| dom.members(i).into_iter().map(|(p, j)| hs[p].bounds()[j]).max().unwrap_or(0))
        .collect();
    LongHomotopy::new(layers, bounds, fixed.cloned())
}

fn glue_real<C: Coord, I: TimeInt, G: Gluing<C>>(
    dom: &G,
    cod: &G,
    hs: &[&RealHomotopy<C, I>],
    fixed: Option<&Point<C>>,
) -> Result<RealHomotopy<C, I>> {
    let mut grid: Vec<Time<I>> = hs.iter().flat_map(|h| h.jumps().iter().cloned()).collect();
    grid.sort();
    grid.dedup();
    let refined = hs.iter().map(|h| h.refine(&grid)).collect::<Result<Vec<_>>>()?;
    let glue = |pick: &dyn Fn(&RealHomotopy<C, I>) -> &DigitalMap<C>| {
        let at: Vec<&DigitalMap<C>> = refined.iter().map(pick).collect();
        dom.glue_maps(cod, &at)
    };
    let at0 = glue(&|h| h.at0())?;
    let at1 = glue(&|h| h.at1())?;
    let open = (0..=grid.len()).map(|i| glue(&|h| &h.open_layers()[i])).collect::<Result<Vec<_>>>()?;
    let atjump = (0..grid.len()).map(|i| glue(&|h| &h.jump_layers()[i])).collect::<Result<Vec<_>>>()?;
    RealHomotopy::new(grid, at0, open, atjump, at1, fixed.cloned())
}

fn glue_basepoints<C: Coord, G: Gluing<C>>(
    x: &G,
    y: &G,
    bps: &[Option<&(Point<C>, Point<C>)>],
) -> Result<Option<(Point<C>, Point<C>)>> {
    if bps.iter().all(Option::is_none) {
        return Ok(None);
    }
    let pairs: Vec<&(Point<C>, Point<C>)> = bps
        .iter()
        .map(|b| b.ok_or_else(|| Error::Precondition("some components are pointed and some are not".into())))
        .collect::<Result<_>>()?;
    let xs: Vec<&Point<C>> = pairs.iter().map(|p| &p.0).collect();
    let ys: Vec<&Point<C>> = pairs.iter().map(|p| &p.1).collect();
    Ok(Some((x.glue_points(&xs)?, y.glue_points(&ys)?)))
}

type Pins<'a, C> = (Option<&'a Point<C>>, Option<&'a Point<C>>);

fn pins<C: Coord>(b: &Option<(Point<C>, Point<C>)>) -> Pins<'_, C> {
    match b {
        Some((x, y)) => (Some(x), Some(y)),
        None => (None, None),
    }
}

fn glue_plain<C: Coord, G: Gluing<C>>(cs: &[&EquivalenceCertificate<C>]) -> Result<EquivalenceCertificate<C>> {
    let x = G::assemble(&cs.iter().map(|c| c.x().clone()).collect::<Vec<_>>())?;
    let y = G::assemble(&cs.iter().map(|c| c.y().clone()).collect::<Vec<_>>())?;
    let basepoints = glue_basepoints(&x, &y, &cs.iter().map(|c| c.basepoints.as_ref()).collect::<Vec<_>>())?;
    let (px, py) = pins(&basepoints);
    Ok(EquivalenceCertificate {
        f: x.glue_maps(&y, &cs.iter().map(|c| &c.f).collect::<Vec<_>>())?,
        g: y.glue_maps(&x, &cs.iter().map(|c| &c.g).collect::<Vec<_>>())?,
        h: glue_homotopy(&x, &x, &cs.iter().map(|c| &c.h).collect::<Vec<_>>(), px)?,
        k: glue_homotopy(&y, &y, &cs.iter().map(|c| &c.k).collect::<Vec<_>>(), py)?,
        basepoints,
    })
}

fn glue_long_cert<C: Coord, G: Gluing<C>>(
    cs: &[&LongEquivalenceCertificate<C>],
) -> Result<LongEquivalenceCertificate<C>> {
    let x = G::assemble(&cs.iter().map(|c| c.x().clone()).collect::<Vec<_>>())?;
    let y = G::assemble(&cs.iter().map(|c| c.y().clone()).collect::<Vec<_>>())?;
    let basepoints = glue_basepoints(&x, &y, &cs.iter().map(|c| c.basepoints.as_ref()).collect::<Vec<_>>())?;
    let (px, py) = pins(&basepoints);
    Ok(LongEquivalenceCertificate {
        f: x.glue_maps(&y, &cs.iter().map(|c| &c.f).collect::<Vec<_>>())?,
        g: y.glue_maps(&x, &cs.iter().map(|c| &c.g).collect::<Vec<_>>())?,
        h: glue_long(&x, &x, &cs.iter().map(|c| &c.h).collect::<Vec<_>>(), px)?,
        k: glue_long(&y, &y, &cs.iter().map(|c| &c.k).collect::<Vec<_>>(), py)?,
        basepoints,
    })
}

fn glue_real_cert<C: Coord, I: TimeInt, G: Gluing<C>>(
    cs: &[&RealEquivalenceCertificate<C, I>],
) -> Result<RealEquivalenceCertificate<C, I>> {
    let x = G::assemble(&cs.iter().map(|c| c.x().clone()).collect::<Vec<_>>())?;
    let y = G::assemble(&cs.iter().map(|c| c.y().clone()).collect::<Vec<_>>())?;
    let basepoints = glue_basepoints(&x, &y, &cs.iter().map(|c| c.basepoints.as_ref()).collect::<Vec<_>>())?;
    let (px, py) = pins(&basepoints);
    Ok(RealEquivalenceCertificate {
        f: x.glue_maps(&y, &cs.iter().map(|c| &c.f).collect::<Vec<_>>())?,
        g: y.glue_maps(&x, &cs.iter().map(|c| &c.g).collect::<Vec<_>>())?,
        h: glue_real(&x, &x, &cs.iter().map(|c| &c.h).collect::<Vec<_>>(), px)?,
        k: glue_real(&y, &y, &cs.iter().map(|c| &c.k).collect::<Vec<_>>(), py)?,
        basepoints,
    })
}

fn glue_filtration<C: Coord, G: Gluing<C>>(fs: &[&Filtration<C>], depth: usize) -> Result<(Vec<G>, Filtration<C>)> {
    let levels = (0..depth)
        .map(|j| G::assemble(&fs.iter().map(|f| f.level(j).clone()).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let tag = fs.iter().all(|f| f.is_stationary()).then(|| STATIONARY.to_string());
    let filtration = Filtration::new(levels.iter().map(|l| l.image().clone()).collect(), tag)?;
    Ok((levels, filtration))
}

fn glue_similarity<C: Coord, G: Gluing<C>>(cs: &[&SimilarityCertificate<C>]) -> Result<SimilarityCertificate<C>> {
    let depth = cs.iter().map(|c| c.depth()).min().unwrap_or(0);
    let (xs, x_levels) = glue_filtration::<C, G>(&cs.iter().map(|c| &c.x_levels).collect::<Vec<_>>(), depth)?;
    let (ys, y_levels) = glue_filtration::<C, G>(&cs.iter().map(|c| &c.y_levels).collect::<Vec<_>>(), depth)?;
    let basepoints = glue_basepoints(&xs[0], &ys[0], &cs.iter().map(|c| c.basepoints.as_ref()).collect::<Vec<_>>())?;
    let (px, py) = pins(&basepoints);
    let mut cert = SimilarityCertificate {
        x_levels,
        y_levels,
        f: Vec::new(),
        g: Vec::new(),
        h: Vec::new(),
        k: Vec::new(),
        rf: BTreeMap::new(),
        rg: BTreeMap::new(),
        basepoints: basepoints.clone(),
    };
    for j in 0..depth {
        let (x, y) = (&xs[j], &ys[j]);
        cert.f.push(x.glue_maps(y, &cs.iter().map(|c| &c.f[j]).collect::<Vec<_>>())?);
        cert.g.push(y.glue_maps(x, &cs.iter().map(|c| &c.g[j]).collect::<Vec<_>>())?);
        cert.h.push(glue_homotopy(x, x, &cs.iter().map(|c| &c.h[j]).collect::<Vec<_>>(), px)?);
        cert.k.push(glue_homotopy(y, y, &cs.iter().map(|c| &c.k[j]).collect::<Vec<_>>(), py)?);
    }
    for w in 0..depth {
        for v in 0..w {
            let pick = |m: &'_ dyn Fn(&SimilarityCertificate<C>) -> &Restrictions<C>, name: &str| {
                cs.iter()
                    .map(|c| m(c).get(&(v, w)).ok_or_else(|| Error::Precondition(format!("missing {name}({v},{w})"))))
                    .collect::<Result<Vec<_>>>()
            };
            let rf = pick(&|c| &c.rf, "R^f")?;
            let rg = pick(&|c| &c.rg, "R^g")?;
            cert.rf.insert((v, w), glue_homotopy(&xs[v], &ys[v], &rf, px)?);
            cert.rg.insert((v, w), glue_homotopy(&ys[v], &xs[v], &rg, py)?);
        }
    }
    Ok(cert)
}

fn glue_certificates<C: Coord, I: TimeInt, G: Gluing<C>>(certs: &[&Certificate<C, I>]) -> Result<Certificate<C, I>> {
    let first = certs.first().ok_or_else(|| Error::Precondition("no components".into()))?;
    if let Some(c) = certs.iter().find(|c| c.kind() != first.kind()) {
        return Err(Error::Precondition(format!("mismatched certificate kinds: {} and {}", first.kind(), c.kind())));
    }
    macro_rules! parts {
        ($variant:ident) => {
            certs
                .iter()
                .map(|c| match c {
                    Certificate::$variant(c) => c,
                    _ => unreachable!("kinds checked"),
                })
                .collect::<Vec<_>>()
        };
    }
    Ok(match first {
        Certificate::Plain(_) => Certificate::Plain(glue_plain::<C, G>(&parts!(Plain))?),
        Certificate::Long(_) => Certificate::Long(glue_long_cert::<C, G>(&parts!(Long))?),
        Certificate::Real(_) => Certificate::Real(glue_real_cert::<C, I, G>(&parts!(Real))?),
        Certificate::Similarity(_) => Certificate::Similarity(glue_similarity::<C, G>(&parts!(Similarity))?),
    })
}
