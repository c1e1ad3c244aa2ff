//! Digitally continuous maps between finite images.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::{DigitalImage, Point};
use crate::scalar::Coord;

/// Default cap on the number of connected subsets the connectedness oracle
/// may enumerate: every connected subset of a 16-point domain.
pub const DEFAULT_SUBSET_CAP: usize = 1 << 16;

/// A total map between two digital images.
///
/// The assignment is stored as codomain point indices, one per domain point
/// in the domain's canonical order. Equality compares domain, codomain and
/// assignment.
#[derive(Clone, PartialEq, Eq)]
pub struct DigitalMap<C: Coord> {
    domain: DigitalImage<C>,
    codomain: DigitalImage<C>,
    values: Vec<u32>,
}

impl<C: Coord> DigitalMap<C> {
    /// Builds a map from a function on points. Every value must lie in the codomain.
    pub fn from_fn(
        domain: &DigitalImage<C>,
        codomain: &DigitalImage<C>,
        mut f: impl FnMut(&Point<C>) -> Point<C>,
    ) -> Result<Self> {
        let values = domain
            .points()
            .iter()
            .map(|p| {
                let q = f(p);
                codomain
                    .index_of(&q)
                    .map(|i| i as u32)
                    .ok_or_else(|| Error::PointNotInImage(format!("{q} (image of {p})")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DigitalMap { domain: domain.clone(), codomain: codomain.clone(), values })
    }

    /// Builds a map from explicit pairs, which must cover the domain exactly once.
    pub fn from_pairs(
        domain: &DigitalImage<C>,
        codomain: &DigitalImage<C>,
        pairs: &[(Point<C>, Point<C>)],
    ) -> Result<Self> {
        let mut values = vec![u32::MAX; domain.len()];
        for (x, y) in pairs {
            let i = domain.require_index(x)?;
            if values[i] != u32::MAX {
                return Err(Error::NotTotal(format!("{x} assigned twice")));
            }
            values[i] = codomain.require_index(y)? as u32;
        }
        if let Some(i) = values.iter().position(|&v| v == u32::MAX) {
            return Err(Error::NotTotal(format!("{} has no value", domain.point(i))));
        }
        Ok(DigitalMap { domain: domain.clone(), codomain: codomain.clone(), values })
    }

    /// Builds a map from codomain indices, one per domain point.
    pub fn from_indices(domain: &DigitalImage<C>, codomain: &DigitalImage<C>, values: Vec<u32>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::NotTotal(format!("{} values for {} domain points", values.len(), domain.len())));
        }
        if values.iter().any(|&v| v as usize >= codomain.len()) {
            return Err(Error::PointNotInImage("index outside codomain".into()));
        }
        Ok(DigitalMap { domain: domain.clone(), codomain: codomain.clone(), values })
    }

    pub(crate) fn from_indices_unchecked(
        domain: &DigitalImage<C>,
        codomain: &DigitalImage<C>,
        values: Vec<u32>,
    ) -> Self {
        debug_assert_eq!(values.len(), domain.len());
        DigitalMap { domain: domain.clone(), codomain: codomain.clone(), values }
    }

    /// The identity `1_X`.
    pub fn identity(image: &DigitalImage<C>) -> Self {
        DigitalMap { domain: image.clone(), codomain: image.clone(), values: (0..image.len() as u32).collect() }
    }

    /// The constant map with value `p`.
    pub fn constant(domain: &DigitalImage<C>, codomain: &DigitalImage<C>, p: &Point<C>) -> Result<Self> {
        let v = codomain.require_index(p)? as u32;
        Ok(DigitalMap { domain: domain.clone(), codomain: codomain.clone(), values: vec![v; domain.len()] })
    }

    /// Inclusion of a subimage.
    pub fn inclusion(sub: &DigitalImage<C>, image: &DigitalImage<C>) -> Result<Self> {
        DigitalMap::from_fn(sub, image, |p| p.clone()).map_err(|e| Error::NotSubimage(e.to_string()))
    }

    pub fn domain(&self) -> &DigitalImage<C> {
        &self.domain
    }

    pub fn codomain(&self) -> &DigitalImage<C> {
        &self.codomain
    }

    /// Codomain indices, one per domain point.
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn value_index(&self, i: usize) -> usize {
        self.values[i] as usize
    }

    /// Value at the domain point with index `i`.
    pub fn value_at(&self, i: usize) -> &Point<C> {
        self.codomain.point(self.values[i] as usize)
    }

    pub fn apply(&self, p: &Point<C>) -> Option<&Point<C>> {
        self.domain.index_of(p).map(|i| self.value_at(i))
    }

    /// `(x, f(x))` pairs in domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Point<C>, &Point<C>)> {
        self.domain.points().iter().zip(self.values.iter().map(|&v| self.codomain.point(v as usize)))
    }

    /// If the map is constant, its value.
    pub fn constant_value(&self) -> Option<&Point<C>> {
        let first = *self.values.first()?;
        self.values.iter().all(|&v| v == first).then(|| self.codomain.point(first as usize))
    }

    /// First adjacent domain pair whose images are neither equal nor adjacent.
    pub fn continuity_violation(&self) -> Option<(Point<C>, Point<C>)> {
        (0..self.domain.len()).find_map(|i| {
            self.domain.neighbor_indices(i).iter().find_map(|&j| {
                let j = j as usize;
                (j > i && !self.codomain.adj_or_eq_idx(self.values[i] as usize, self.values[j] as usize))
                    .then(|| (self.domain.point(i).clone(), self.domain.point(j).clone()))
            })
        })
    }

    /// Continuity via the edge characterization: adjacent points go to equal
    /// or adjacent points.
    pub fn check_continuity_edges(&self) -> bool {
        self.continuity_violation().is_none()
    }

    /// Continuity from the definition: the image of every connected subset
    /// of the domain is connected. Enumerates connected subsets by growth
    /// from singletons and fails with `BudgetExceeded` past `cap` subsets.
    pub fn check_continuity_connected(&self, cap: usize) -> Result<bool> {
        let n = self.domain.len();
        if n > 64 {
            return Err(Error::BudgetExceeded { what: "connected-subset oracle domain size", limit: 64 });
        }
        let mut seen: HashSet<u64> = HashSet::new();
        let mut queue: VecDeque<u64> = VecDeque::new();
        for i in 0..n {
            let m = 1u64 << i;
            seen.insert(m);
            queue.push_back(m);
        }
        if seen.len() > cap {
            return Err(Error::BudgetExceeded { what: "connected subsets", limit: cap });
        }
        let mut image = Vec::with_capacity(n);
        while let Some(mask) = queue.pop_front() {
            image.clear();
            for i in 0..n {
                if mask & (1 << i) != 0 {
                    image.push(self.values[i] as usize);
                }
            }
            image.sort_unstable();
            image.dedup();
            if !self.codomain.indices_connected(&image) {
                return Ok(false);
            }
            for i in 0..n {
                if mask & (1 << i) == 0 {
                    continue;
                }
                for &j in self.domain.neighbor_indices(i) {
                    let grown = mask | (1 << j);
                    if grown != mask && seen.insert(grown) {
                        if seen.len() > cap {
                            return Err(Error::BudgetExceeded { what: "connected subsets", limit: cap });
                        }
                        queue.push_back(grown);
                    }
                }
            }
        }
        Ok(true)
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &DigitalMap<C>) -> Result<DigitalMap<C>> {
        compose(self, f)
    }

    pub fn is_bijective(&self) -> bool {
        if self.domain.len() != self.codomain.len() {
            return false;
        }
        let mut hit = vec![false; self.codomain.len()];
        self.values.iter().all(|&v| !std::mem::replace(&mut hit[v as usize], true))
    }

    /// The inverse map, if bijective.
    pub fn inverse(&self) -> Option<DigitalMap<C>> {
        if !self.is_bijective() {
            return None;
        }
        let mut values = vec![0u32; self.codomain.len()];
        for (i, &v) in self.values.iter().enumerate() {
            values[v as usize] = i as u32;
        }
        Some(DigitalMap { domain: self.codomain.clone(), codomain: self.domain.clone(), values })
    }

    /// Bijective, continuous, with continuous inverse.
    pub fn check_isomorphism(&self) -> bool {
        self.check_continuity_edges() && self.inverse().is_some_and(|inv| inv.check_continuity_edges())
    }

    /// Restriction to a subimage `A` of the domain.
    pub fn restrict(&self, sub: &DigitalImage<C>) -> Result<DigitalMap<C>> {
        if !sub.is_subimage_of(&self.domain) {
            return Err(Error::NotSubimage("restriction domain is not a subimage of the map's domain".into()));
        }
        let values = sub.points().iter().map(|p| self.values[self.domain.index_of(p).expect("subimage")]).collect();
        Ok(DigitalMap { domain: sub.clone(), codomain: self.codomain.clone(), values })
    }

    /// The same assignment viewed in another codomain containing every value.
    pub fn corestrict(&self, codomain: &DigitalImage<C>) -> Result<DigitalMap<C>> {
        if codomain == &self.codomain {
            return Ok(self.clone());
        }
        if codomain.kind() != self.codomain.kind() {
            return Err(Error::ImageMismatch("corestriction changes the adjacency kind".into()));
        }
        DigitalMap::from_fn(&self.domain, codomain, |p| self.apply(p).expect("domain point").clone())
    }
}

impl<C: Coord> fmt::Debug for DigitalMap<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

/// `g ∘ f`. Requires `f.codomain == g.domain`.
pub fn compose<C: Coord>(g: &DigitalMap<C>, f: &DigitalMap<C>) -> Result<DigitalMap<C>> {
    if f.codomain != g.domain {
        return Err(Error::ImageMismatch("codomain of the inner map differs from the domain of the outer map".into()));
    }
    let values = f.values.iter().map(|&v| g.values[v as usize]).collect();
    Ok(DigitalMap { domain: f.domain.clone(), codomain: g.codomain.clone(), values })
}
