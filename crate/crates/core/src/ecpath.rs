//! Eventually-constant paths and loops, EC homotopies, and budgeted
//! fundamental-group operations.
//!
//! An [`ECPath`] is kept in canonical form: a prefix of values at times
//! `0..N` followed by a tail value taken at every `n >= N`, where the last
//! prefix value differs from the tail. `N` is then the stabilization index.

use std::collections::HashSet;

use crate::error::{Error, Result, Verdict, Violation};
use crate::lattice::{DigitalImage, Point};
use crate::maps::DigitalMap;
use crate::scalar::Coord;
use crate::search::{SearchLimits, SearchStats};

/// An eventually-constant path in a digital image.
#[derive(Clone, PartialEq, Eq)]
pub struct ECPath<C: Coord> {
    image: DigitalImage<C>,
    prefix: Vec<u32>,
    tail: u32,
}

impl<C: Coord> ECPath<C> {
    /// Validates membership and continuity, then canonicalizes.
    pub fn new(image: &DigitalImage<C>, prefix: &[Point<C>], tail: &Point<C>) -> Result<Self> {
        let mut values = prefix.iter().map(|p| image.require_index(p).map(|i| i as u32)).collect::<Result<Vec<_>>>()?;
        values.push(image.require_index(tail)? as u32);
        for (n, w) in values.windows(2).enumerate() {
            if !image.adj_or_eq_idx(w[0] as usize, w[1] as usize) {
                return Err(Error::Precondition(format!("values at {n} and {} are neither equal nor adjacent", n + 1)));
            }
        }
        Ok(Self::from_values(image, values))
    }

    /// Canonical path whose values are `values`, then the last value forever.
    pub(crate) fn from_values(image: &DigitalImage<C>, mut values: Vec<u32>) -> Self {
        let tail = values.pop().expect("at least one value");
        while values.last() == Some(&tail) {
            values.pop();
        }
        ECPath { image: image.clone(), prefix: values, tail }
    }

    /// The constant path at `p`.
    pub fn constant(image: &DigitalImage<C>, p: &Point<C>) -> Result<Self> {
        Ok(ECPath { image: image.clone(), prefix: Vec::new(), tail: image.require_index(p)? as u32 })
    }

    pub fn image(&self) -> &DigitalImage<C> {
        &self.image
    }

    /// `N_f`.
    pub fn stabilization_index(&self) -> usize {
        self.prefix.len()
    }

    pub fn value_index(&self, n: usize) -> usize {
        self.prefix.get(n).copied().unwrap_or(self.tail) as usize
    }

    pub fn value_at(&self, n: usize) -> &Point<C> {
        self.image.point(self.value_index(n))
    }

    pub fn prefix_points(&self) -> Vec<Point<C>> {
        self.prefix.iter().map(|&i| self.image.point(i as usize).clone()).collect()
    }

    pub fn tail_point(&self) -> &Point<C> {
        self.image.point(self.tail as usize)
    }

    /// `f(0)`.
    pub fn start(&self) -> &Point<C> {
        self.value_at(0)
    }

    pub fn is_loop(&self) -> bool {
        self.value_index(0) == self.tail as usize
    }

    /// Values at `0..=n`.
    fn values_through(&self, n: usize) -> Vec<u32> {
        (0..=n).map(|k| self.value_index(k) as u32).collect()
    }

    /// The spliced path: `self` until its stabilization index, then `next`.
    pub fn concat(&self, next: &ECPath<C>) -> Result<Self> {
        if self.image != next.image {
            return Err(Error::ImageMismatch("paths lie in different images".into()));
        }
        if self.tail as usize != next.value_index(0) {
            return Err(Error::EndpointMismatch(format!(
                "tail {} differs from start {}",
                self.tail_point(),
                next.start()
            )));
        }
        let mut values = self.prefix.clone();
        values.extend(next.values_through(next.stabilization_index()));
        Ok(Self::from_values(&self.image, values))
    }

    /// The reversed loop `n -> f(N_f - n)`.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_loop() {
            return Err(Error::Precondition("inverse is defined for loops".into()));
        }
        let n = self.stabilization_index();
        let values = (0..=n).map(|k| self.value_index(n - k) as u32).collect();
        Ok(Self::from_values(&self.image, values))
    }

    /// `h ∘ f`, canonicalized.
    pub fn push(&self, h: &DigitalMap<C>) -> Result<Self> {
        if h.domain() != &self.image {
            return Err(Error::ImageMismatch("path does not lie in the map's domain".into()));
        }
        let values = self
            .values_through(self.stabilization_index())
            .into_iter()
            .map(|v| h.value_index(v as usize) as u32)
            .collect();
        Ok(Self::from_values(h.codomain(), values))
    }

    /// The same values viewed in a larger or smaller image containing them.
    pub fn reimage(&self, image: &DigitalImage<C>) -> Result<Self> {
        let pts = self.prefix_points();
        ECPath::new(image, &pts, self.tail_point())
    }
}

impl<C: Coord> std::fmt::Debug for ECPath<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ECPath[")?;
        for (k, p) in self.prefix_points().iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, " | {}]", self.tail_point())
    }
}

/// `f * g`.
pub fn concat<C: Coord>(f: &ECPath<C>, g: &ECPath<C>) -> Result<ECPath<C>> {
    f.concat(g)
}

/// `h ∘ L`, canonicalized.
pub fn push_loop<C: Coord>(h: &DigitalMap<C>, l: &ECPath<C>) -> Result<ECPath<C>> {
    l.push(h)
}

/// Representative of the identity class at `x0`.
pub fn pi1_identity<C: Coord>(image: &DigitalImage<C>, x0: &Point<C>) -> Result<ECPath<C>> {
    ECPath::constant(image, x0)
}

/// Representative of `[f] · [g]`.
pub fn pi1_multiply<C: Coord>(f: &ECPath<C>, g: &ECPath<C>) -> Result<ECPath<C>> {
    if !f.is_loop() || !g.is_loop() {
        return Err(Error::Precondition("both paths must be loops".into()));
    }
    if f.start() != g.start() {
        return Err(Error::EndpointMismatch(format!("basepoints {} and {} differ", f.start(), g.start())));
    }
    f.concat(g)
}

/// Representative of `[f]^{-1}`.
pub fn pi1_inverse<C: Coord>(f: &ECPath<C>) -> Result<ECPath<C>> {
    f.inverse()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndpointPolicy {
    Free,
    EndpointsFixed,
}

/// An EC homotopy given by its rows `H_0, ..., H_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ECHomotopy<C: Coord> {
    pub rows: Vec<ECPath<C>>,
    pub policy: EndpointPolicy,
}

impl<C: Coord> ECHomotopy<C> {
    pub fn verify(&self, f: &ECPath<C>, g: &ECPath<C>) -> Verdict {
        verify_ec_homotopy(self, f, g)
    }
}

/// Checks rows, column continuity and, if required, fixed endpoints.
pub fn verify_ec_homotopy<C: Coord>(h: &ECHomotopy<C>, f: &ECPath<C>, g: &ECPath<C>) -> Verdict {
    let (first, last) = match (h.rows.first(), h.rows.last()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Violation::new("rows", "no rows")),
    };
    if let Some(s) = h.rows.iter().position(|r| r.image != f.image) {
        return Err(Violation::new("image", format!("row {s} lies in another image")));
    }
    if first != f {
        return Err(Violation::new("row 0", "first row differs from the source path"));
    }
    if last != g {
        return Err(Violation::new("row k", "last row differs from the target path"));
    }
    let horizon = h.rows.iter().map(|r| r.stabilization_index()).max().unwrap_or(0);
    for s in 1..h.rows.len() {
        let (a, b) = (&h.rows[s - 1], &h.rows[s]);
        for n in 0..=horizon {
            if !f.image.adj_or_eq_idx(a.value_index(n), b.value_index(n)) {
                return Err(Violation::new(
                    "column continuity",
                    format!("cell (s={s}, n={n}): {} to {}", a.value_at(n), b.value_at(n)),
                ));
            }
        }
    }
    if h.policy == EndpointPolicy::EndpointsFixed {
        if let Some(s) = h.rows.iter().position(|r| r.value_index(0) != first.value_index(0)) {
            return Err(Violation::new("fixed start", format!("row {s} starts elsewhere")));
        }
        if let Some(s) = h.rows.iter().position(|r| r.tail != first.tail) {
            return Err(Violation::new("fixed tail", format!("row {s} has a different tail")));
        }
    }
    Ok(())
}

/// Rows and column horizon of a loop-class query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoopBudget {
    pub rows: usize,
    pub horizon: usize,
}

impl LoopBudget {
    /// `k = 8`, `c = 2 N_f + 4`.
    pub fn default_for<C: Coord>(f: &ECPath<C>) -> Self {
        LoopBudget { rows: 8, horizon: 2 * f.stabilization_index() + 4 }
    }
}

/// Outcome of [`loops_equal_within_budget`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopClass<C: Coord> {
    Equal(ECHomotopy<C>),
    /// No endpoint-fixed homotopy with at most `rows` steps whose rows all
    /// stabilize by `horizon`.
    Unknown {
        stats: SearchStats,
    },
}

impl<C: Coord> LoopClass<C> {
    pub fn is_equal(&self) -> bool {
        matches!(self, LoopClass::Equal(_))
    }
}

/// Searches for an endpoint-fixed EC homotopy from `f` to `g` within `budget`.
///
/// The grid of values `H_s(n)` for `0 <= s <= rows`, `0 <= n <= horizon` has
/// fixed boundary: `f` on the first row, `g` on the last and the basepoint
/// on the first and last columns. The search fills it one cell at a time,
/// column by column, keeping the set of distinct partial frontiers, so it is
/// exhaustive for the budget. A witness with fewer rows is padded with `g`
/// and found too; duplicate rows are dropped from the reported witness.
pub fn loops_equal_within_budget<C: Coord>(
    f: &ECPath<C>,
    g: &ECPath<C>,
    budget: LoopBudget,
    limits: &SearchLimits,
) -> Result<LoopClass<C>> {
    if f.image != g.image {
        return Err(Error::ImageMismatch("loops lie in different images".into()));
    }
    if !f.is_loop() || !g.is_loop() {
        return Err(Error::Precondition("both paths must be loops".into()));
    }
    if f.value_index(0) != g.value_index(0) {
        return Err(Error::EndpointMismatch(format!("basepoints {} and {} differ", f.start(), g.start())));
    }
    let equal = |rows: Vec<ECPath<C>>| LoopClass::Equal(ECHomotopy { rows, policy: EndpointPolicy::EndpointsFixed });
    if f == g {
        return Ok(equal(vec![f.clone()]));
    }
    let c = budget.horizon;
    if c < f.stabilization_index().max(g.stabilization_index()) {
        return Err(Error::Precondition(format!(
            "horizon {c} is shorter than the stabilization indices {} and {}",
            f.stabilization_index(),
            g.stabilization_index()
        )));
    }
    let img = &f.image;
    let x0 = f.value_index(0) as u32;
    let top: Vec<u32> = f.values_through(c);
    let bottom: Vec<u32> = g.values_through(c);
    let dist = Distances::new(img);
    let hoods: Vec<Vec<u32>> = (0..img.len()).map(|i| img.closed_neighborhood(i)).collect();
    let mut search = GridSearch {
        img,
        top: &top,
        bottom: &bottom,
        x0,
        c,
        dist: &dist,
        hoods: &hoods,
        visited: 0,
        cap: limits.state_cap,
    };
    let mut depth = 0;
    for k in 1..=budget.rows {
        match search.fill(k)? {
            Ok(grid) => {
                let mut rows: Vec<ECPath<C>> = grid.into_iter().map(|vals| ECPath::from_values(img, vals)).collect();
                rows.dedup();
                return Ok(equal(rows));
            }
            Err(reached) => depth = reached,
        }
    }
    Ok(LoopClass::Unknown { stats: SearchStats { visited: search.visited.max(1), depth } })
}

/// One grid fill with a fixed number of rows. A grid with fewer rows pads
/// to one with more, so trying `k = 1, 2, ...` in turn is exhaustive for
/// the largest `k`; the state count accumulates across passes.
struct GridSearch<'a, C: Coord> {
    img: &'a DigitalImage<C>,
    top: &'a [u32],
    bottom: &'a [u32],
    x0: u32,
    c: usize,
    dist: &'a Distances,
    hoods: &'a [Vec<u32>],
    visited: usize,
    cap: usize,
}

impl<C: Coord> GridSearch<'_, C> {
    /// The grid of values, or the column reached when no grid exists.
    fn fill(&mut self, k: usize) -> Result<std::result::Result<Vec<Vec<u32>>, usize>> {
        let (img, top, bottom, x0, c) = (self.img, self.top, self.bottom, self.x0, self.c);
        self.visited += 1;
        if k == 1 {
            let ok = (0..=c).all(|n| img.adj_or_eq_idx(top[n] as usize, bottom[n] as usize));
            return Ok(if ok { Ok(vec![top.to_vec(), bottom.to_vec()]) } else { Err(c) });
        }
        let inner = k - 1;

        // Layer entries: (parent index in the previous layer, value placed).
        let mut layers: Vec<Vec<(u32, u32)>> = Vec::new();
        let mut states: Vec<Vec<u32>> = vec![vec![x0; inner]];
        for n in 1..c {
            for s in 0..inner {
                let row = s + 1;
                let mut next_states: Vec<Vec<u32>> = Vec::new();
                let mut links: Vec<(u32, u32)> = Vec::new();
                let mut seen: HashSet<Vec<u32>> = HashSet::new();
                for (pi, st) in states.iter().enumerate() {
                    let left = st[s];
                    let above = if s == 0 { top[n] } else { st[s - 1] };
                    for &v in &self.hoods[left as usize] {
                        if !img.adj_or_eq_idx(v as usize, above as usize) {
                            continue;
                        }
                        if s + 1 == inner && !img.adj_or_eq_idx(v as usize, bottom[n] as usize) {
                            continue;
                        }
                        if !self.dist.feasible(v, x0, n, c, top[n], row, bottom[n], k) {
                            continue;
                        }
                        let mut nst = st.clone();
                        nst[s] = v;
                        if seen.insert(nst.clone()) {
                            next_states.push(nst);
                            links.push((pi as u32, v));
                        }
                    }
                }
                self.visited += next_states.len();
                if self.visited > self.cap {
                    return Err(Error::StateCapExceeded { visited: self.visited, cap: self.cap });
                }
                layers.push(links);
                states = next_states;
                if states.is_empty() {
                    return Ok(Err(n));
                }
            }
        }
        let Some(end) = states.iter().position(|st| st.iter().all(|&v| img.adj_or_eq_idx(v as usize, x0 as usize)))
        else {
            return Ok(Err(c));
        };

        // Walk the parent links back to recover every interior cell.
        let mut grid = vec![vec![x0; c + 1]; k + 1];
        grid[0] = top.to_vec();
        grid[k] = bottom.to_vec();
        let mut idx = end;
        for (step, layer) in layers.iter().enumerate().rev() {
            let n = 1 + step / inner;
            let s = step % inner;
            let (parent, v) = layer[idx];
            grid[s + 1][n] = v;
            idx = parent as usize;
        }
        Ok(Ok(grid))
    }
}

/// Graph distances used to prune cells that cannot reach a boundary.
struct Distances {
    n: usize,
    all: Option<Vec<u16>>,
}

impl Distances {
    const MAX_POINTS: usize = 2048;

    fn new<C: Coord>(img: &DigitalImage<C>) -> Self {
        let n = img.len();
        if n > Self::MAX_POINTS {
            return Distances { n, all: None };
        }
        let mut all = vec![u16::MAX; n * n];
        for s in 0..n {
            for (t, d) in img.distances_from(s).into_iter().enumerate() {
                if let Some(d) = d {
                    all[s * n + t] = d.min(u16::MAX as usize - 1) as u16;
                }
            }
        }
        Distances { n, all: Some(all) }
    }

    fn d(&self, a: u32, b: u32) -> usize {
        match &self.all {
            Some(all) => all[a as usize * self.n + b as usize] as usize,
            None => 0,
        }
    }

    /// Can value `v` at cell `(row, n)` still connect to all four boundaries?
    #[allow(clippy::too_many_arguments)]
    fn feasible(&self, v: u32, x0: u32, n: usize, c: usize, top: u32, row: usize, bottom: u32, k: usize) -> bool {
        self.d(v, x0) <= n.min(c - n) && self.d(v, top) <= row && self.d(v, bottom) <= k - row
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{interval, AdjacencyKind};

    fn p1(x: i64) -> Point<i64> {
        Point::from_i64s(&[x])
    }

    fn p2(x: i64, y: i64) -> Point<i64> {
        Point::from_i64s(&[x, y])
    }

    fn ring8() -> DigitalImage<i64> {
        let pts = (0..3).flat_map(|x| (0..3).map(move |y| p2(x, y))).filter(|p| *p != p2(1, 1));
        DigitalImage::new(AdjacencyKind::c1(2), pts).unwrap()
    }

    fn once_around() -> ECPath<i64> {
        let r = ring8();
        let cyc = [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1)];
        let pts: Vec<_> = cyc.iter().map(|&(x, y)| p2(x, y)).collect();
        ECPath::new(&r, &pts, &p2(0, 0)).unwrap()
    }

    #[test]
    fn stabilization_examples() {
        let iv = interval::<i64>(0, 2).unwrap();
        assert_eq!(ECPath::constant(&iv, &p1(1)).unwrap().stabilization_index(), 0);
        let f = ECPath::new(&iv, &[p1(0), p1(1)], &p1(2)).unwrap();
        assert_eq!(f.stabilization_index(), 2);
        let padded = ECPath::new(&iv, &[p1(0), p1(1), p1(2), p1(2)], &p1(2)).unwrap();
        assert_eq!(padded, f);
        assert!(ECPath::new(&iv, &[p1(0)], &p1(2)).is_err());
    }

    #[test]
    fn concat_and_inverse_examples() {
        let iv = interval::<i64>(0, 3).unwrap();
        let c = ECPath::constant(&iv, &p1(0)).unwrap();
        let f = ECPath::new(&iv, &[p1(0), p1(1), p1(2), p1(1)], &p1(0)).unwrap();
        assert_eq!(c.concat(&f).unwrap(), f);
        assert_eq!(f.concat(&c).unwrap(), f);
        let ff = f.concat(&f).unwrap();
        assert_eq!(ff.stabilization_index(), 8);
        assert_eq!(c.inverse().unwrap(), c);
        let out_back = ECPath::new(&iv, &[p1(0), p1(1)], &p1(0)).unwrap();
        assert_eq!(out_back.inverse().unwrap(), out_back);
        assert_eq!(f.inverse().unwrap().inverse().unwrap(), f);
        let open = ECPath::new(&iv, &[p1(0)], &p1(1)).unwrap();
        assert!(open.inverse().is_err());
        assert!(open.concat(&f).is_err());
    }

    #[test]
    fn push_examples() {
        let iv = interval::<i64>(0, 3).unwrap();
        let f = ECPath::new(&iv, &[p1(0), p1(1), p1(2), p1(1)], &p1(0)).unwrap();
        assert_eq!(f.push(&DigitalMap::identity(&iv)).unwrap(), f);
        let k = DigitalMap::constant(&iv, &iv, &p1(3)).unwrap();
        assert_eq!(f.push(&k).unwrap(), ECPath::constant(&iv, &p1(3)).unwrap());
    }

    #[test]
    fn ec_homotopy_verification() {
        let sq = DigitalImage::new(AdjacencyKind::c1(2), [p2(0, 0), p2(0, 1), p2(1, 0), p2(1, 1)]).unwrap();
        let around = ECPath::new(&sq, &[p2(0, 0), p2(1, 0), p2(1, 1), p2(0, 1)], &p2(0, 0)).unwrap();
        let pulled = ECPath::new(&sq, &[p2(0, 0), p2(1, 0), p2(1, 0), p2(0, 0)], &p2(0, 0)).unwrap();
        let h = ECHomotopy { rows: vec![around.clone(), pulled.clone()], policy: EndpointPolicy::EndpointsFixed };
        assert_eq!(h.verify(&around, &pulled), Ok(()));
        let single = ECHomotopy { rows: vec![around.clone()], policy: EndpointPolicy::EndpointsFixed };
        assert_eq!(single.verify(&around, &around), Ok(()));
        let far = ECPath::new(&sq, &[p2(0, 0), p2(0, 1), p2(1, 1), p2(1, 0)], &p2(0, 0)).unwrap();
        let bad = ECHomotopy { rows: vec![around.clone(), far.clone()], policy: EndpointPolicy::EndpointsFixed };
        let v = bad.verify(&around, &far).unwrap_err();
        assert_eq!(v.clause, "column continuity");
        assert!(v.detail.starts_with("cell (s=1, n=1)"));
    }

    #[test]
    fn interval_loops_are_trivial() {
        let iv = interval::<i64>(0, 3).unwrap();
        let f = ECPath::new(&iv, &[p1(0), p1(1), p1(2), p1(3), p1(2), p1(1)], &p1(0)).unwrap();
        let c = ECPath::constant(&iv, &p1(0)).unwrap();
        let budget = LoopBudget { rows: 6, horizon: f.stabilization_index() + 2 };
        match loops_equal_within_budget(&f, &c, budget, &SearchLimits::default()).unwrap() {
            LoopClass::Equal(h) => assert_eq!(h.verify(&f, &c), Ok(())),
            other => panic!("expected Equal, got {other:?}"),
        }
        match loops_equal_within_budget(&f, &f, budget, &SearchLimits::default()).unwrap() {
            LoopClass::Equal(h) => assert_eq!(h.rows.len(), 1),
            other => panic!("expected Equal, got {other:?}"),
        }
    }

    #[test]
    fn ring_loop_is_unknown() {
        let f = once_around();
        let c = ECPath::constant(f.image(), &p2(0, 0)).unwrap();
        let out =
            loops_equal_within_budget(&f, &c, LoopBudget { rows: 6, horizon: 12 }, &SearchLimits::default()).unwrap();
        assert!(!out.is_equal());
        let again =
            loops_equal_within_budget(&f, &c, LoopBudget { rows: 6, horizon: 12 }, &SearchLimits::default()).unwrap();
        assert_eq!(out, again);
        let wide = loops_equal_within_budget(&f, &c, LoopBudget::default_for(&f), &SearchLimits::default()).unwrap();
        assert!(!wide.is_equal());
    }

    #[test]
    fn horizon_must_cover_the_loops() {
        let f = once_around();
        let c = ECPath::constant(f.image(), &p2(0, 0)).unwrap();
        assert!(
            loops_equal_within_budget(&f, &c, LoopBudget { rows: 4, horizon: 5 }, &SearchLimits::default()).is_err()
        );
    }

    #[test]
    fn square_loop_and_inverse_cancel() {
        let sq = DigitalImage::new(AdjacencyKind::c1(2), [p2(0, 0), p2(0, 1), p2(1, 0), p2(1, 1)]).unwrap();
        let f = ECPath::new(&sq, &[p2(0, 0), p2(1, 0), p2(1, 1), p2(0, 1)], &p2(0, 0)).unwrap();
        let prod = pi1_multiply(&f, &pi1_inverse(&f).unwrap()).unwrap();
        let id = pi1_identity(&sq, &p2(0, 0)).unwrap();
        let out = loops_equal_within_budget(&prod, &id, LoopBudget::default_for(&f), &SearchLimits::default()).unwrap();
        match out {
            LoopClass::Equal(h) => assert_eq!(h.verify(&prod, &id), Ok(())),
            other => panic!("expected Equal, got {other:?}"),
        }
    }
}
