//! Trees and the parent-map contraction.

use crate::error::{Error, Result};
use crate::homotopy::{EquivalenceCertificate, Homotopy};
use crate::lattice::{DigitalImage, Point};
use crate::longhtpy::LHomotopy;
use crate::maps::DigitalMap;
use crate::scalar::Coord;
use crate::similarity::SimilarityCertificate;

use super::contraction_similarity;

/// Filtration tag of the balls around a tree root.
pub const TREE_BALLS: &str = "tree-balls";

/// A connected acyclic image with a root and the parent of every point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeImage<C: Coord> {
    image: DigitalImage<C>,
    root: Point<C>,
    parent: Vec<u32>,
    depth: Vec<usize>,
}

impl<C: Coord> TreeImage<C> {
    pub fn new(image: DigitalImage<C>, root: Point<C>) -> Result<Self> {
        let r = image.require_index(&root)?;
        if !image.is_connected() {
            return Err(Error::NotATree("the image is disconnected".into()));
        }
        if image.edge_count() + 1 != image.len() {
            return Err(Error::NotATree(format!(
                "{} points and {} edges: the adjacency graph has a cycle",
                image.len(),
                image.edge_count()
            )));
        }
        let depth: Vec<usize> = image.distances_from(r).into_iter().map(|d| d.expect("connected")).collect();
        let parent = (0..image.len())
            .map(|i| {
                if i == r {
                    return r as u32;
                }
                image
                    .neighbor_indices(i)
                    .iter()
                    .copied()
                    .find(|&j| depth[j as usize] + 1 == depth[i])
                    .expect("a closer neighbor exists")
            })
            .collect();
        Ok(TreeImage { image, root, parent, depth })
    }

    pub fn image(&self) -> &DigitalImage<C> {
        &self.image
    }

    pub fn root(&self) -> &Point<C> {
        &self.root
    }

    /// The parent of `p`, or `None` at the root.
    pub fn parent(&self, p: &Point<C>) -> Option<&Point<C>> {
        let i = self.image.index_of(p)?;
        (self.image.point(i) != &self.root).then(|| self.image.point(self.parent[i] as usize))
    }

    /// `dist(p, root)`.
    pub fn depth_of(&self, p: &Point<C>) -> Option<usize> {
        self.image.index_of(p).map(|i| self.depth[i])
    }

    /// Largest distance from the root.
    pub fn eccentricity(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// The subtree `{x : dist(x, root) <= j}`.
    pub fn ball(&self, j: usize) -> Result<TreeImage<C>> {
        let pts = (0..self.image.len()).filter(|&i| self.depth[i] <= j).map(|i| self.image.point(i).clone());
        TreeImage::new(self.image.subimage(pts)?, self.root.clone())
    }

    fn layers(&self) -> Vec<DigitalMap<C>> {
        let mut cur: Vec<u32> = (0..self.image.len() as u32).collect();
        let mut layers = vec![DigitalMap::identity(&self.image)];
        for _ in 0..self.eccentricity() {
            for v in cur.iter_mut() {
                *v = self.parent[*v as usize];
            }
            layers.push(DigitalMap::from_indices_unchecked(&self.image, &self.image, cur.clone()));
        }
        layers
    }
}

/// `H(x, t) = parent(H(x, t - 1))`, from the identity to the constant root
/// map in as many steps as the root's eccentricity.
pub fn tree_contraction<C: Coord>(tree: &TreeImage<C>) -> Result<Homotopy<C>> {
    Homotopy::new(tree.layers(), Some(tree.root.clone()))
}

/// The parent contraction as an l-homotopy with exact stabilization.
pub fn tree_l_homotopy<C: Coord>(tree: &TreeImage<C>) -> Result<LHomotopy<C>> {
    LHomotopy::with_exact_stab(tree.layers(), Some(tree.root.clone()))
}

/// Pointed equivalence between the tree and its root.
pub fn tree_equivalence<C: Coord>(tree: &TreeImage<C>) -> Result<EquivalenceCertificate<C>> {
    super::contraction_equivalence(&tree_contraction(tree)?, &tree.root)
}

/// `T ≃^s {root}` over the balls of radius `j < depth`.
pub fn tree_similarity<C: Coord>(tree: &TreeImage<C>, depth: usize) -> Result<SimilarityCertificate<C>> {
    let contractions = (0..depth.max(1)).map(|j| tree_contraction(&tree.ball(j)?)).collect::<Result<Vec<_>>>()?;
    contraction_similarity(contractions, &tree.root, Some(TREE_BALLS.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{interval, AdjacencyKind};

    fn pt(c: &[i64]) -> Point<i64> {
        Point::from_i64s(c)
    }

    #[test]
    fn path_tree_length_is_eccentricity() {
        let t = TreeImage::new(interval::<i64>(0, 3).unwrap(), pt(&[0])).unwrap();
        let h = tree_contraction(&t).unwrap();
        assert_eq!(h.steps(), 3);
        let id = DigitalMap::identity(t.image());
        let c = DigitalMap::constant(t.image(), t.image(), &pt(&[0])).unwrap();
        assert_eq!(h.verify(&id, &c), Ok(()));
        assert_eq!(t.parent(&pt(&[2])), Some(&pt(&[1])));
        assert_eq!(t.parent(&pt(&[0])), None);
    }

    #[test]
    fn single_point_has_no_steps() {
        let t = TreeImage::new(interval::<i64>(5, 5).unwrap(), pt(&[5])).unwrap();
        assert_eq!(tree_contraction(&t).unwrap().steps(), 0);
    }

    #[test]
    fn cycles_and_gaps_are_rejected() {
        let sq = DigitalImage::new(AdjacencyKind::c1(2), [[0, 0], [0, 1], [1, 0], [1, 1]].map(|c| pt(&c))).unwrap();
        assert!(matches!(TreeImage::new(sq, pt(&[0, 0])), Err(Error::NotATree(_))));
        let gap = DigitalImage::new(AdjacencyKind::c1(1), [pt(&[0]), pt(&[2])]).unwrap();
        assert!(matches!(TreeImage::new(gap, pt(&[0])), Err(Error::NotATree(_))));
    }

    #[test]
    fn branching_tree_certificates() {
        let pts = [[0, 0], [1, 0], [2, 0], [0, 1], [0, 2], [-1, 2], [1, 2]].map(|c| pt(&c));
        let img = DigitalImage::new(AdjacencyKind::c1(2), pts).unwrap();
        let t = TreeImage::new(img, pt(&[0, 1])).unwrap();
        assert_eq!(t.eccentricity(), 3);
        assert_eq!(tree_l_homotopy(&t).unwrap().stab().iter().max(), Some(&3));
        assert_eq!(tree_equivalence(&t).unwrap().verify(), Ok(()));
        let s = tree_similarity(&t, 4).unwrap();
        assert_eq!(s.verify(), Ok(()));
        assert_eq!(s.x_levels.level(1).len(), 3);
    }
}
