//! One-point unions of two images.

use crate::error::{Error, Result};
use crate::lattice::{DigitalImage, Point};
use crate::maps::DigitalMap;
use crate::scalar::{Coord, TimeInt};

use super::{glue_certificates, Certificate, Gluing};

/// `X1 ∨ X2`: two images meeting in one point, with no adjacency between
/// the rest of `X1` and the rest of `X2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeImage<C: Coord> {
    image: DigitalImage<C>,
    parts: Vec<DigitalImage<C>>,
    wedge_point: Point<C>,
    embed: [Vec<u32>; 2],
    origin: Vec<(usize, usize)>,
}

impl<C: Coord> WedgeImage<C> {
    pub fn image(&self) -> &DigitalImage<C> {
        &self.image
    }

    pub fn parts(&self) -> (&DigitalImage<C>, &DigitalImage<C>) {
        (&self.parts[0], &self.parts[1])
    }

    pub fn wedge_point(&self) -> &Point<C> {
        &self.wedge_point
    }
}

/// Checks the wedge conditions and builds the union.
pub fn wedge<C: Coord>(x1: &DigitalImage<C>, x2: &DigitalImage<C>) -> Result<WedgeImage<C>> {
    if x1.kind() != x2.kind() {
        return Err(Error::ImageMismatch("the parts use different adjacencies".into()));
    }
    let common: Vec<&Point<C>> = x1.points().iter().filter(|p| x2.contains(p)).collect();
    let [p] = common[..] else {
        return Err(Error::NotAWedge(format!("the parts meet in {} points", common.len())));
    };
    let image = DigitalImage::new(x1.kind(), x1.points().iter().chain(x2.points()).cloned())?;
    for (i, a) in image.points().iter().enumerate() {
        if a == p || !x1.contains(a) {
            continue;
        }
        if let Some(&j) = image.neighbor_indices(i).iter().find(|&&j| {
            let b = image.point(j as usize);
            b != p && x2.contains(b)
        }) {
            return Err(Error::NotAWedge(format!(
                "{a} in the first part is adjacent to {} in the second",
                image.point(j as usize)
            )));
        }
    }
    let embed =
        [x1, x2].map(|x| x.points().iter().map(|q| image.index_of(q).expect("in union") as u32).collect::<Vec<_>>());
    let mut origin = vec![(usize::MAX, 0); image.len()];
    for part in [1, 0] {
        for (j, &i) in embed[part].iter().enumerate() {
            origin[i as usize] = (part, j);
        }
    }
    Ok(WedgeImage { wedge_point: p.clone(), parts: vec![x1.clone(), x2.clone()], image, embed, origin })
}

impl<C: Coord> Gluing<C> for WedgeImage<C> {
    fn assemble(parts: &[DigitalImage<C>]) -> Result<Self> {
        match parts {
            [a, b] => wedge(a, b),
            _ => Err(Error::Precondition(format!("a wedge has two parts, not {}", parts.len()))),
        }
    }

    fn image(&self) -> &DigitalImage<C> {
        &self.image
    }

    fn parts(&self) -> &[DigitalImage<C>] {
        &self.parts
    }

    fn members(&self, i: usize) -> Vec<(usize, usize)> {
        if self.image.point(i) == &self.wedge_point {
            (0..2).map(|p| (p, self.parts[p].index_of(&self.wedge_point).expect("shared"))).collect()
        } else {
            vec![self.origin[i]]
        }
    }

    fn glue_values(&self, cod: &Self, maps: &[&DigitalMap<C>]) -> Result<Vec<u32>> {
        let w = self.image.index_of(&self.wedge_point).expect("in union");
        (0..self.image.len())
            .map(|i| {
                let mut vals = self.members(i).into_iter().map(|(p, j)| cod.embed[p][maps[p].value_index(j)]);
                let v = vals.next().expect("every point has a part");
                if vals.any(|u| u != v) {
                    return Err(Error::Precondition(format!(
                        "the components disagree at the wedge point {}",
                        self.image.point(w)
                    )));
                }
                Ok(v)
            })
            .collect()
    }

    fn glue_points(&self, pts: &[&Point<C>]) -> Result<Point<C>> {
        match pts.iter().find(|p| ***p != self.wedge_point) {
            Some(p) => Err(Error::Precondition(format!("basepoint {p} is not the wedge point {}", self.wedge_point))),
            None => Ok(self.wedge_point.clone()),
        }
    }
}

/// `f1 ∧ f2` between the wedges of the domains and of the codomains. Both
/// maps must send the domain wedge point to the codomain wedge point; the
/// glued map is checked for continuity.
pub fn wedge_map<C: Coord>(f1: &DigitalMap<C>, f2: &DigitalMap<C>) -> Result<DigitalMap<C>> {
    let dom = wedge(f1.domain(), f2.domain())?;
    let cod = wedge(f1.codomain(), f2.codomain())?;
    for f in [f1, f2] {
        if f.apply(&dom.wedge_point) != Some(&cod.wedge_point) {
            return Err(Error::Precondition(format!(
                "a component does not send {} to {}",
                dom.wedge_point, cod.wedge_point
            )));
        }
    }
    let map = dom.glue_maps(&cod, &[f1, f2])?;
    if let Some((a, b)) = map.continuity_violation() {
        return Err(Error::Precondition(format!("the glued map is not continuous on {a} ~ {b}")));
    }
    Ok(map)
}

/// The certificate for `X1 ∨ X2` and `Y1 ∨ Y2` glued from two pointed
/// certificates of one kind whose basepoints are the wedge points.
pub fn wedge_certificates<C: Coord, I: TimeInt>(
    c1: &Certificate<C, I>,
    c2: &Certificate<C, I>,
) -> Result<Certificate<C, I>> {
    if c1.basepoints().is_none() || c2.basepoints().is_none() {
        return Err(Error::Precondition("wedge components must be pointed at the wedge points".into()));
    }
    glue_certificates::<C, I, WedgeImage<C>>(&[c1, c2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{tree_equivalence, tree_similarity, TreeImage};
    use crate::lattice::{interval, AdjacencyKind};
    use crate::longhtpy::LongEquivalenceCertificate;
    use crate::realhtpy::RealEquivalenceCertificate;

    fn pt(c: &[i64]) -> Point<i64> {
        Point::from_i64s(c)
    }

    fn img(pts: &[[i64; 2]]) -> DigitalImage<i64> {
        DigitalImage::new(AdjacencyKind::c1(2), pts.iter().map(|c| pt(c))).unwrap()
    }

    #[test]
    fn intervals_sharing_an_endpoint() {
        let w = wedge(&interval::<i64>(0, 2).unwrap(), &interval::<i64>(2, 4).unwrap()).unwrap();
        assert_eq!(w.image(), &interval::<i64>(0, 4).unwrap());
        assert_eq!(w.wedge_point(), &pt(&[2]));
        let id = wedge_map(&DigitalMap::identity(w.parts().0), &DigitalMap::identity(w.parts().1)).unwrap();
        assert_eq!(id, DigitalMap::identity(w.image()));
    }

    #[test]
    fn bad_wedges_are_rejected() {
        let a = interval::<i64>(0, 2).unwrap();
        assert!(matches!(wedge(&a, &interval::<i64>(1, 4).unwrap()), Err(Error::NotAWedge(_))));
        assert!(matches!(wedge(&a, &interval::<i64>(5, 6).unwrap()), Err(Error::NotAWedge(_))));
        let l = img(&[[0, 0], [1, 0], [1, 1]]);
        let m = img(&[[0, 0], [0, 1], [0, 2]]);
        assert!(matches!(wedge(&l, &m), Err(Error::NotAWedge(_))));
    }

    fn tree(pts: &[[i64; 2]]) -> TreeImage<i64> {
        TreeImage::new(img(pts), pt(&[0, 0])).unwrap()
    }

    #[test]
    fn tree_wedge_certificates() {
        let t1 = tree(&[[0, 0], [1, 0], [2, 0], [2, 1]]);
        let t2 = tree(&[[0, 0], [-1, 0], [-1, -1], [-1, -2]]);
        let e1 = tree_equivalence(&t1).unwrap();
        let e2 = tree_equivalence(&t2).unwrap();
        let plain =
            wedge_certificates::<i64, i64>(&Certificate::Plain(e1.clone()), &Certificate::Plain(e2.clone())).unwrap();
        assert_eq!(plain.verify(), Ok(()));
        let long = wedge_certificates::<i64, i64>(
            &Certificate::Long(LongEquivalenceCertificate::from_finite(&e1)),
            &Certificate::Long(LongEquivalenceCertificate::from_finite(&e2)),
        )
        .unwrap();
        assert_eq!(long.verify(), Ok(()));
        let real = wedge_certificates::<i64, i64>(
            &Certificate::Real(RealEquivalenceCertificate::from_finite(&e1)),
            &Certificate::Real(RealEquivalenceCertificate::from_finite(&e2)),
        )
        .unwrap();
        assert_eq!(real.verify(), Ok(()));
        let sim = wedge_certificates::<i64, i64>(
            &Certificate::Similarity(tree_similarity(&t1, 4).unwrap()),
            &Certificate::Similarity(tree_similarity(&t2, 4).unwrap()),
        )
        .unwrap();
        assert_eq!(sim.verify(), Ok(()));
        assert_eq!(sim.unpointed().unwrap().verify(), Ok(()));
    }

    #[test]
    fn mixed_kinds_are_rejected() {
        let t = tree(&[[0, 0], [1, 0]]);
        let e = tree_equivalence(&t).unwrap();
        let r = wedge_certificates::<i64, i64>(
            &Certificate::Plain(e.clone()),
            &Certificate::Long(LongEquivalenceCertificate::from_finite(&e)),
        );
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
