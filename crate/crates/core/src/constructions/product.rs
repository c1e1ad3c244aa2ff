//! Cartesian products under the maximal adjacency.

use crate::error::{Error, Result};
use crate::lattice::{AdjacencyKind, DigitalImage, Point};
use crate::maps::DigitalMap;
use crate::scalar::{Coord, TimeInt};

use super::{glue_certificates, Certificate, Gluing};

/// `Π X_i` in `Z^D`, `D = Σ n_i`, under `c_D`. Every factor must use its
/// own maximal adjacency `c_{n_i}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductImage<C: Coord> {
    image: DigitalImage<C>,
    factors: Vec<DigitalImage<C>>,
    strides: Vec<usize>,
}

impl<C: Coord> ProductImage<C> {
    pub fn image(&self) -> &DigitalImage<C> {
        &self.image
    }

    pub fn factors(&self) -> &[DigitalImage<C>] {
        &self.factors
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(DigitalImage::dim).collect()
    }
}

/// Builds the product. Its points are ordered like the tuples of factor
/// indices, so a point's index is a mixed-radix number in the factor indices.
pub fn product<C: Coord>(factors: &[DigitalImage<C>]) -> Result<ProductImage<C>> {
    if factors.is_empty() {
        return Err(Error::Precondition("a product needs at least one factor".into()));
    }
    for (i, x) in factors.iter().enumerate() {
        if !x.kind().is_maximal() {
            return Err(Error::Unsupported(format!(
                "factor {i} uses c_{} in Z^{}; products are defined for c_n factors only",
                x.kind().u(),
                x.dim()
            )));
        }
    }
    let total = factors
        .iter()
        .try_fold(1usize, |acc, x| acc.checked_mul(x.len()))
        .filter(|&n| n < u32::MAX as usize)
        .ok_or(Error::BudgetExceeded { what: "product size", limit: u32::MAX as usize - 1 })?;
    let mut strides = vec![1; factors.len()];
    for p in (0..factors.len() - 1).rev() {
        strides[p] = strides[p + 1] * factors[p + 1].len();
    }
    let dim = factors.iter().map(DigitalImage::dim).sum();
    let points = (0..total).map(|i| {
        let mut coords = Vec::with_capacity(dim);
        for (p, x) in factors.iter().enumerate() {
            coords.extend_from_slice(x.point((i / strides[p]) % x.len()).coords());
        }
        Point::new(coords).expect("nonempty")
    });
    let image = DigitalImage::new(AdjacencyKind::maximal(dim), points)?;
    debug_assert_eq!(image.len(), total);
    Ok(ProductImage { image, factors: factors.to_vec(), strides })
}

impl<C: Coord> Gluing<C> for ProductImage<C> {
    fn assemble(parts: &[DigitalImage<C>]) -> Result<Self> {
        product(parts)
    }

    fn image(&self) -> &DigitalImage<C> {
        &self.image
    }

    fn parts(&self) -> &[DigitalImage<C>] {
        &self.factors
    }

    fn members(&self, i: usize) -> Vec<(usize, usize)> {
        self.factors.iter().enumerate().map(|(p, x)| (p, (i / self.strides[p]) % x.len())).collect()
    }

    fn glue_values(&self, cod: &Self, maps: &[&DigitalMap<C>]) -> Result<Vec<u32>> {
        Ok((0..self.image.len())
            .map(|i| {
                self.members(i).into_iter().map(|(p, j)| cod.strides[p] * maps[p].value_index(j)).sum::<usize>() as u32
            })
            .collect())
    }

    fn glue_points(&self, pts: &[&Point<C>]) -> Result<Point<C>> {
        let coords = pts.iter().flat_map(|p| p.coords().iter().copied()).collect();
        Point::new(coords)
    }
}

/// `(a_1, ..., a_k) ↦ (f_1(a_1), ..., f_k(a_k))` between the products of
/// the domains and of the codomains.
pub fn product_map<C: Coord>(maps: &[&DigitalMap<C>]) -> Result<DigitalMap<C>> {
    let dom = product(&maps.iter().map(|m| m.domain().clone()).collect::<Vec<_>>())?;
    let cod = product(&maps.iter().map(|m| m.codomain().clone()).collect::<Vec<_>>())?;
    dom.glue_maps(&cod, maps)
}

/// The componentwise certificate for the products. Finite homotopies are
/// padded to the longest component, long homotopies to the widest window,
/// and real homotopies are refined to the union of the jump sets.
pub fn product_certificates<C: Coord, I: TimeInt>(certs: &[Certificate<C, I>]) -> Result<Certificate<C, I>> {
    glue_certificates::<C, I, ProductImage<C>>(&certs.iter().collect::<Vec<_>>())
}
