//! Lattice points, `c_u` adjacency and finite digital images.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Coord;

/// A point of `Z^n`. Ordering is lexicographic on the coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point<C> {
    coords: Vec<C>,
}

impl<C: Coord> Point<C> {
    pub fn new(coords: Vec<C>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        Ok(Point { coords })
    }

    /// Builds a point from `i64` literals. Panics on an empty slice or a
    /// coordinate that does not fit `C`; intended for tests and builders.
    pub fn from_i64s(coords: &[i64]) -> Self {
        let coords = coords.iter().map(|&v| C::from_i64(v).expect("coordinate out of range")).collect();
        Point::new(coords).expect("empty point")
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[C] {
        &self.coords
    }

    /// Coordinate tuple of `self` followed by that of `other`.
    pub fn concat(&self, other: &Point<C>) -> Point<C> {
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Point { coords }
    }

    /// Splits into consecutive blocks of the given dimensions.
    pub fn split(&self, dims: &[usize]) -> Result<Vec<Point<C>>> {
        let total: usize = dims.iter().sum();
        if total != self.dim() {
            return Err(Error::DimensionMismatch { expected: total, found: self.dim() });
        }
        let mut out = Vec::with_capacity(dims.len());
        let mut start = 0;
        for &d in dims {
            out.push(Point::new(self.coords[start..start + d].to_vec())?);
            start += d;
        }
        Ok(out)
    }

    /// The point with coordinate `axis` replaced.
    pub fn with_coord(&self, axis: usize, value: C) -> Point<C> {
        let mut coords = self.coords.clone();
        coords[axis] = value;
        Point { coords }
    }
}

impl<C: fmt::Display> fmt::Display for Point<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl<C: fmt::Display> fmt::Debug for Point<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The `c_u` adjacency on `Z^n`: distinct points differing by at most one in
/// every coordinate and in at most `u` coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AdjacencyKind {
    ambient_dim: usize,
    u: usize,
}

impl AdjacencyKind {
    pub fn new(ambient_dim: usize, u: usize) -> Result<Self> {
        if ambient_dim == 0 || u == 0 || u > ambient_dim {
            return Err(Error::InvalidAdjacency { dim: ambient_dim, u });
        }
        Ok(AdjacencyKind { ambient_dim, u })
    }

    /// `c_1`: the 2-, 4- or 6-adjacency in dimensions 1, 2, 3.
    pub fn c1(ambient_dim: usize) -> Self {
        AdjacencyKind::new(ambient_dim, 1).expect("dimension must be positive")
    }

    /// `c_n` on `Z^n`: the 2-, 8- or 26-adjacency in dimensions 1, 2, 3.
    pub fn maximal(ambient_dim: usize) -> Self {
        AdjacencyKind::new(ambient_dim, ambient_dim).expect("dimension must be positive")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn is_maximal(&self) -> bool {
        self.u == self.ambient_dim
    }

    /// Number of `c_u`-neighbours of any lattice point, i.e. the value the
    /// name `c_u` traditionally stands for (4 and 8 in the plane, 6, 18, 26
    /// in space).
    pub fn neighbor_count(&self) -> u128 {
        let n = self.ambient_dim as u128;
        let mut total = 0u128;
        let mut binom = 1u128;
        for i in 1..=self.u as u128 {
            binom = binom * (n - i + 1) / i;
            total += binom << i;
        }
        total
    }

    /// All nonzero offset vectors with entries in `{-1, 0, 1}` and at most
    /// `u` nonzero entries, in lexicographic order.
    pub fn offsets(&self) -> Vec<Vec<i8>> {
        let mut out = Vec::new();
        let mut cur = vec![0i8; self.ambient_dim];
        fn rec(pos: usize, nonzero: usize, u: usize, cur: &mut Vec<i8>, out: &mut Vec<Vec<i8>>) {
            if pos == cur.len() {
                if nonzero > 0 {
                    out.push(cur.clone());
                }
                return;
            }
            for d in [-1i8, 0, 1] {
                if d != 0 && nonzero == u {
                    continue;
                }
                cur[pos] = d;
                rec(pos + 1, nonzero + usize::from(d != 0), u, cur, out);
            }
            cur[pos] = 0;
        }
        rec(0, 0, self.u, &mut cur, &mut out);
        out
    }
}

impl fmt::Display for AdjacencyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c_{} in Z^{}", self.u, self.ambient_dim)
    }
}

/// `c_u` adjacency test. Errors if either point has the wrong dimension.
pub fn adjacent<C: Coord>(p: &Point<C>, q: &Point<C>, kind: AdjacencyKind) -> Result<bool> {
    for r in [p, q] {
        if r.dim() != kind.ambient_dim {
            return Err(Error::DimensionMismatch { expected: kind.ambient_dim, found: r.dim() });
        }
    }
    Ok(adjacent_unchecked(p, q, kind.u))
}

fn adjacent_unchecked<C: Coord>(p: &Point<C>, q: &Point<C>, u: usize) -> bool {
    let mut differing = 0;
    for (&a, &b) in p.coords.iter().zip(&q.coords) {
        if a != b {
            if !a.within_one(b) {
                return false;
            }
            differing += 1;
            if differing > u {
                return false;
            }
        }
    }
    differing > 0
}

struct ImageData<C> {
    kind: AdjacencyKind,
    points: Vec<Point<C>>,
    index: HashMap<Point<C>, u32>,
    neighbors: Vec<Vec<u32>>,
}

/// A finite digital image: a set of lattice points with a `c_u` adjacency.
///
/// Points are kept in lexicographic order, which fixes iteration order for
/// every algorithm in the crate. Cloning is cheap (shared storage).
#[derive(Clone)]
pub struct DigitalImage<C> {
    data: Arc<ImageData<C>>,
}

impl<C: Coord> DigitalImage<C> {
    /// Builds an image, deduplicating repeated points.
    pub fn new(kind: AdjacencyKind, points: impl IntoIterator<Item = Point<C>>) -> Result<Self> {
        let mut points: Vec<Point<C>> = points.into_iter().collect();
        for p in &points {
            if p.dim() != kind.ambient_dim {
                return Err(Error::DimensionMismatch { expected: kind.ambient_dim, found: p.dim() });
            }
        }
        if points.len() >= u32::MAX as usize {
            return Err(Error::BudgetExceeded { what: "image size", limit: u32::MAX as usize - 1 });
        }
        points.sort();
        points.dedup();
        let index: HashMap<Point<C>, u32> = points.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let neighbors = compute_neighbors(kind, &points, &index);
        Ok(DigitalImage { data: Arc::new(ImageData { kind, points, index, neighbors }) })
    }

    /// Builds an image, rejecting repeated points.
    pub fn new_strict(kind: AdjacencyKind, points: Vec<Point<C>>) -> Result<Self> {
        let n = points.len();
        let image = DigitalImage::new(kind, points)?;
        if image.len() != n {
            return Err(Error::Precondition("duplicate points".into()));
        }
        Ok(image)
    }

    pub fn kind(&self) -> AdjacencyKind {
        self.data.kind
    }

    pub fn dim(&self) -> usize {
        self.data.kind.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.data.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.points.is_empty()
    }

    pub fn points(&self) -> &[Point<C>] {
        &self.data.points
    }

    pub fn point(&self, i: usize) -> &Point<C> {
        &self.data.points[i]
    }

    pub fn contains(&self, p: &Point<C>) -> bool {
        self.data.index.contains_key(p)
    }

    pub fn index_of(&self, p: &Point<C>) -> Option<usize> {
        self.data.index.get(p).map(|&i| i as usize)
    }

    pub(crate) fn require_index(&self, p: &Point<C>) -> Result<usize> {
        self.index_of(p).ok_or_else(|| Error::PointNotInImage(p.to_string()))
    }

    /// Indices of the neighbours of point `i`, ascending.
    pub fn neighbor_indices(&self, i: usize) -> &[u32] {
        &self.data.neighbors[i]
    }

    /// True iff points `i` and `j` are adjacent.
    pub fn adjacent_idx(&self, i: usize, j: usize) -> bool {
        self.data.neighbors[i].binary_search(&(j as u32)).is_ok()
    }

    /// True iff points `i` and `j` are equal or adjacent.
    pub fn adj_or_eq_idx(&self, i: usize, j: usize) -> bool {
        i == j || self.adjacent_idx(i, j)
    }

    /// Closed neighbourhood of point `i` (the point and its neighbours), ascending.
    pub fn closed_neighborhood(&self, i: usize) -> Vec<u32> {
        let mut out = self.data.neighbors[i].clone();
        let pos = out.binary_search(&(i as u32)).unwrap_err();
        out.insert(pos, i as u32);
        out
    }

    /// Neighbours of `p` in this image.
    pub fn neighbors(&self, p: &Point<C>) -> Result<Vec<Point<C>>> {
        let i = self.require_index(p)?;
        Ok(self.data.neighbors[i].iter().map(|&j| self.point(j as usize).clone()).collect())
    }

    /// Number of adjacent pairs.
    pub fn edge_count(&self) -> usize {
        self.data.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Partition into adjacency components, each sorted, listed in order of
    /// their smallest point.
    pub fn components(&self) -> Vec<Vec<Point<C>>> {
        self.component_labels()
            .1
            .into_iter()
            .map(|comp| comp.into_iter().map(|i| self.point(i).clone()).collect())
            .collect()
    }

    /// Component label of each point and the member lists.
    pub(crate) fn component_labels(&self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let n = self.len();
        let mut label = vec![usize::MAX; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![start];
            label[start] = id;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for &j in &self.data.neighbors[i] {
                    let j = j as usize;
                    if label[j] == usize::MAX {
                        label[j] = id;
                        members.push(j);
                        queue.push_back(j);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        (label, comps)
    }

    pub fn is_connected(&self) -> bool {
        self.len() <= 1 || self.component_labels().1.len() == 1
    }

    /// True iff the points with the given indices induce a connected subimage.
    pub fn indices_connected(&self, indices: &[usize]) -> bool {
        if indices.len() <= 1 {
            return true;
        }
        let mut member = vec![false; self.len()];
        for &i in indices {
            member[i] = true;
        }
        let mut seen = vec![false; self.len()];
        seen[indices[0]] = true;
        let mut count = 1;
        let mut stack = vec![indices[0]];
        while let Some(i) = stack.pop() {
            for &j in &self.data.neighbors[i] {
                let j = j as usize;
                if member[j] && !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        let distinct = member.iter().filter(|&&m| m).count();
        count == distinct
    }

    /// Shortest path (by adjacency steps) from `from` to `to`, inclusive.
    pub fn shortest_path(&self, from: &Point<C>, to: &Point<C>) -> Result<Option<Vec<Point<C>>>> {
        let s = self.require_index(from)?;
        let t = self.require_index(to)?;
        let parents = self.bfs_parents(s);
        if parents[t].is_none() {
            return Ok(None);
        }
        let mut path = vec![t];
        let mut cur = t;
        while cur != s {
            cur = parents[cur].expect("reachable");
            path.push(cur);
        }
        path.reverse();
        Ok(Some(path.into_iter().map(|i| self.point(i).clone()).collect()))
    }

    /// BFS distances from point `s`; `None` for unreachable points.
    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            let d = dist[i].expect("queued");
            for &j in &self.data.neighbors[i] {
                let j = j as usize;
                if dist[j].is_none() {
                    dist[j] = Some(d + 1);
                    queue.push_back(j);
                }
            }
        }
        dist
    }

    fn bfs_parents(&self, s: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.len()];
        parent[s] = Some(s);
        let mut queue = VecDeque::from([s]);
        while let Some(i) = queue.pop_front() {
            for &j in &self.data.neighbors[i] {
                let j = j as usize;
                if parent[j].is_none() {
                    parent[j] = Some(i);
                    queue.push_back(j);
                }
            }
        }
        parent
    }

    /// True iff every point of `self` lies in `other` and the adjacency kinds agree.
    pub fn is_subimage_of(&self, other: &DigitalImage<C>) -> bool {
        self.kind() == other.kind() && self.points().iter().all(|p| other.contains(p))
    }

    /// The subimage on the given points (with the same adjacency kind).
    pub fn subimage(&self, points: impl IntoIterator<Item = Point<C>>) -> Result<DigitalImage<C>> {
        let pts: Vec<Point<C>> = points.into_iter().collect();
        for p in &pts {
            if !self.contains(p) {
                return Err(Error::NotSubimage(p.to_string()));
            }
        }
        DigitalImage::new(self.kind(), pts)
    }

    /// The same point set under another adjacency of the same dimension.
    pub fn with_kind(&self, kind: AdjacencyKind) -> Result<DigitalImage<C>> {
        DigitalImage::new(kind, self.points().iter().cloned())
    }

    pub fn same_as(&self, other: &DigitalImage<C>) -> bool {
        Arc::ptr_eq(&self.data, &other.data)
    }
}

impl<C: Coord> PartialEq for DigitalImage<C> {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other) || (self.kind() == other.kind() && self.points() == other.points())
    }
}

impl<C: Coord> Eq for DigitalImage<C> {}

impl<C: Coord> fmt::Debug for DigitalImage<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DigitalImage").field("kind", &self.kind()).field("points", &self.points()).finish()
    }
}

fn compute_neighbors<C: Coord>(
    kind: AdjacencyKind,
    points: &[Point<C>],
    index: &HashMap<Point<C>, u32>,
) -> Vec<Vec<u32>> {
    let n = points.len();
    let candidates = kind.neighbor_count();
    if candidates <= n as u128 && kind.ambient_dim <= 12 {
        let offsets = kind.offsets();
        points
            .iter()
            .map(|p| {
                let mut out: Vec<u32> = offsets
                    .iter()
                    .filter_map(|off| {
                        let coords: Option<Vec<C>> = p
                            .coords
                            .iter()
                            .zip(off)
                            .map(|(&c, &d)| match d {
                                1 => c.succ(),
                                -1 => c.pred(),
                                _ => Some(c),
                            })
                            .collect();
                        index.get(&Point { coords: coords? }).copied()
                    })
                    .collect();
                out.sort_unstable();
                out
            })
            .collect()
    } else {
        let mut out = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if adjacent_unchecked(&points[i], &points[j], kind.u) {
                    out[i].push(j as u32);
                    out[j].push(i as u32);
                }
            }
        }
        out
    }
}

/// The digital interval `[a, b]_Z` with 2-adjacency.
pub fn interval<C: Coord>(a: i64, b: i64) -> Result<DigitalImage<C>> {
    if a > b {
        return Err(Error::EmptyInterval { a, b });
    }
    let points = (a..=b)
        .map(|z| C::from_i64(z).map(|c| Point { coords: vec![c] }).ok_or(Error::Overflow))
        .collect::<Result<Vec<_>>>()?;
    DigitalImage::new(AdjacencyKind::c1(1), points)
}

/// A digital image with a distinguished basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedImage<C: Coord> {
    image: DigitalImage<C>,
    basepoint: Point<C>,
}

impl<C: Coord> PointedImage<C> {
    pub fn new(image: DigitalImage<C>, basepoint: Point<C>) -> Result<Self> {
        image.require_index(&basepoint)?;
        Ok(PointedImage { image, basepoint })
    }

    pub fn image(&self) -> &DigitalImage<C> {
        &self.image
    }

    pub fn basepoint(&self) -> &Point<C> {
        &self.basepoint
    }
}
