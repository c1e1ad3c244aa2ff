//! Lattice boxes and their coordinate-cycling contraction.

use num_traits::NumCast;

use crate::error::{Error, Result};
use crate::homotopy::{EquivalenceCertificate, Homotopy};
use crate::lattice::{AdjacencyKind, DigitalImage, Point};
use crate::longhtpy::LHomotopy;
use crate::maps::DigitalMap;
use crate::scalar::Coord;
use crate::similarity::SimilarityCertificate;

use super::contraction_similarity;

/// Filtration tag of the `Z^n` window chains.
pub const ZN_WINDOWS: &str = "zn-windows";

fn radius<C: Coord>(r: usize) -> Result<C> {
    <C as NumCast>::from(r).ok_or(Error::Overflow)
}

/// The box `Π [x_i - r, x_i + r]` under `kind`.
pub fn cube<C: Coord>(center: &Point<C>, r: usize, kind: AdjacencyKind) -> Result<DigitalImage<C>> {
    if center.dim() != kind.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: kind.ambient_dim(), found: center.dim() });
    }
    let rr = radius::<C>(r)?;
    let mut points: Vec<Vec<C>> = vec![Vec::new()];
    for &c in center.coords() {
        let lo = c.checked_sub(&rr).ok_or(Error::Overflow)?;
        c.checked_add(&rr).ok_or(Error::Overflow)?;
        let mut next = Vec::with_capacity(points.len() * (2 * r + 1));
        for p in &points {
            let mut v = lo;
            for step in 0..=2 * r {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
                if step < 2 * r {
                    v = v + C::one();
                }
            }
        }
        points = next;
    }
    DigitalImage::new(kind, points.into_iter().map(|c| Point::new(c).expect("nonempty")))
}

/// The window `[-r, r]^n` of `Z^n` under `c_u`.
pub fn zn_window<C: Coord>(n: usize, r: usize, u: usize) -> Result<DigitalImage<C>> {
    let kind = AdjacencyKind::new(n, u)?;
    cube(&Point::new(vec![C::zero(); n])?, r, kind)
}

fn toward<C: Coord>(v: C, target: C) -> C {
    if v < target {
        v + C::one()
    } else if v > target {
        v - C::one()
    } else {
        v
    }
}

fn contraction_layers<C: Coord>(center: &Point<C>, image: &DigitalImage<C>, r: usize) -> Result<Vec<DigitalMap<C>>> {
    let n = center.dim();
    let mut cur: Vec<Point<C>> = image.points().to_vec();
    let mut layers = vec![DigitalMap::identity(image)];
    for t in 1..=n * r {
        let q = (t - 1) % n;
        let target = center.coords()[q];
        for p in cur.iter_mut() {
            *p = p.with_coord(q, toward(p.coords()[q], target));
        }
        let values = cur.iter().map(|p| image.require_index(p).map(|i| i as u32)).collect::<Result<_>>()?;
        layers.push(DigitalMap::from_indices_unchecked(image, image, values));
    }
    Ok(layers)
}

/// `1 ≃ const` on the radius-`r` box: at step `t` the coordinate
/// `(t - 1) mod n` moves one unit toward the center. Runs `n·r` steps and
/// holds the center fixed.
pub fn cube_contraction<C: Coord>(center: &Point<C>, r: usize, kind: AdjacencyKind) -> Result<LHomotopy<C>> {
    let image = cube(center, r, kind)?;
    LHomotopy::with_exact_stab(contraction_layers(center, &image, r)?, Some(center.clone()))
}

/// The same contraction as a finite pointed homotopy.
pub fn cube_contraction_finite<C: Coord>(center: &Point<C>, r: usize, kind: AdjacencyKind) -> Result<Homotopy<C>> {
    let image = cube(center, r, kind)?;
    Homotopy::new(contraction_layers(center, &image, r)?, Some(center.clone()))
}

/// Pointed equivalence between the radius-`r` box and its center.
pub fn cube_equivalence<C: Coord>(
    center: &Point<C>,
    r: usize,
    kind: AdjacencyKind,
) -> Result<EquivalenceCertificate<C>> {
    super::contraction_equivalence(&cube_contraction_finite(center, r, kind)?, center)
}

/// `{x} ≃^s Z^n` with levels `Y_j = cube(x, j)` for `j < depth`.
pub fn cube_similarity<C: Coord>(
    center: &Point<C>,
    kind: AdjacencyKind,
    depth: usize,
) -> Result<SimilarityCertificate<C>> {
    let contractions =
        (0..depth.max(1)).map(|j| cube_contraction_finite(center, j, kind)).collect::<Result<Vec<_>>>()?;
    Ok(contraction_similarity(contractions, center, Some(ZN_WINDOWS.into()))?.swap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[i64]) -> Point<i64> {
        Point::from_i64s(c)
    }

    #[test]
    fn box_sizes() {
        assert_eq!(zn_window::<i64>(2, 0, 1).unwrap().len(), 1);
        assert_eq!(zn_window::<i64>(2, 1, 1).unwrap().len(), 9);
        for (n, r) in [(1, 3), (2, 2), (3, 1), (3, 2)] {
            assert_eq!(zn_window::<i64>(n, r, n).unwrap().len(), (2 * r + 1).pow(n as u32));
        }
    }

    #[test]
    fn overflow_is_reported() {
        let c = Point::<i8>::new(vec![126]).unwrap();
        assert_eq!(cube(&c, 2, AdjacencyKind::c1(1)), Err(Error::Overflow));
    }

    #[test]
    fn interval_track() {
        let h = cube_contraction(&pt(&[0]), 2, AdjacencyKind::c1(1)).unwrap();
        let i = h.domain().index_of(&pt(&[2])).unwrap();
        let track: Vec<_> = (0..=4).map(|t| h.layer(t).value_at(i).clone()).collect();
        assert_eq!(track, vec![pt(&[2]), pt(&[1]), pt(&[0]), pt(&[0]), pt(&[0])]);
    }

    #[test]
    fn zero_radius_has_no_steps() {
        let h = cube_contraction(&pt(&[3, 4]), 0, AdjacencyKind::c1(2)).unwrap();
        assert_eq!(h.horizon(), 0);
        assert_eq!(h.verify(&DigitalMap::identity(h.domain()), &DigitalMap::identity(h.domain())), Ok(()));
    }

    #[test]
    fn stabilization_is_n_times_r_at_corners() {
        let c = pt(&[1, -1]);
        let kind = AdjacencyKind::c1(2);
        let h = cube_contraction(&c, 2, kind).unwrap();
        let id = DigitalMap::identity(h.domain());
        let k = DigitalMap::constant(h.domain(), h.codomain(), &c).unwrap();
        assert_eq!(h.verify(&id, &k), Ok(()));
        assert_eq!(h.stab().iter().max(), Some(&4));
        let corner = h.domain().index_of(&pt(&[3, 1])).unwrap();
        assert_eq!(h.stab()[corner], 4);
    }

    #[test]
    fn similarity_and_equivalence_verify() {
        let c = pt(&[0, 0]);
        for u in [1, 2] {
            let kind = AdjacencyKind::new(2, u).unwrap();
            assert_eq!(cube_similarity(&c, kind, 4).unwrap().verify(), Ok(()));
            assert_eq!(cube_equivalence(&c, 2, kind).unwrap().verify(), Ok(()));
        }
    }
}
