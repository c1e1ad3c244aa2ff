//! The line `Z × {0}` and the T-shaped image `Z × {0} ∪ {0} × N`.

use crate::error::{Error, Result};
use crate::lattice::{AdjacencyKind, DigitalImage, Point};
use crate::longhtpy::{compose_long_equiv_through_point, LongEquivalenceCertificate};
use crate::scalar::Coord;
use crate::similarity::{compose_through_finite, SimilarityCertificate};

use super::{tree_equivalence, tree_similarity, TreeImage};

/// Radius-`r` windows of the line `x` and of the T-shape `y`, both under
/// `c_1` in `Z^2` and rooted at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TImage<C: Coord> {
    pub x: TreeImage<C>,
    pub y: TreeImage<C>,
}

pub fn t_image<C: Coord>(r: usize) -> Result<TImage<C>> {
    let r = r as i64;
    let coord = |v: i64| C::from_i64(v).ok_or(Error::Overflow);
    let p = |a: i64, b: i64| Point::new(vec![coord(a)?, coord(b)?]);
    let line = (-r..=r).map(|a| p(a, 0)).collect::<Result<Vec<_>>>()?;
    let stem = (1..=r).map(|b| p(0, b)).collect::<Result<Vec<_>>>()?;
    let kind = AdjacencyKind::c1(2);
    let origin = p(0, 0)?;
    let x = DigitalImage::new(kind, line.iter().cloned())?;
    let y = DigitalImage::new(kind, line.into_iter().chain(stem))?;
    Ok(TImage { x: TreeImage::new(x, origin.clone())?, y: TreeImage::new(y, origin)? })
}

/// Line `≃^s` T-shape at the given depth, composed through the origin from
/// the two tree contractions.
pub fn t_image_similarity<C: Coord>(depth: usize) -> Result<SimilarityCertificate<C>> {
    let t = t_image::<C>(depth.max(1) - 1)?;
    let to_point = tree_similarity(&t.x, depth)?;
    let from_point = tree_similarity(&t.y, depth)?.swap();
    compose_through_finite(&to_point, &from_point)
}

/// Pointed long equivalence between the radius-`r` windows, composed
/// through the origin.
pub fn t_image_long<C: Coord>(r: usize) -> Result<LongEquivalenceCertificate<C>> {
    let t = t_image::<C>(r)?;
    let to_point = LongEquivalenceCertificate::from_finite(&tree_equivalence(&t.x)?);
    let from_point = LongEquivalenceCertificate::from_finite(&tree_equivalence(&t.y)?).swap();
    compose_long_equiv_through_point(&to_point, &from_point)
}
