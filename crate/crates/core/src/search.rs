//! Bounded breadth-first search over the step graph of continuous maps.
//!
//! Vertices are continuous maps `X -> Y`; two maps are joined when every
//! point moves to an equal or adjacent value, i.e. when they can be
//! consecutive layers of a homotopy. Successors are generated in
//! lexicographic order of their value vectors and inserted in that order,
//! so witnesses and visited counts do not depend on the thread schedule.

use std::hash::{BuildHasher, RandomState};

use hashbrown::HashTable;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::homotopy::Homotopy;
use crate::lattice::{DigitalImage, Point};
use crate::maps::DigitalMap;
use crate::scalar::Coord;

/// Default number of distinct maps a search may visit.
pub const DEFAULT_STATE_CAP: usize = 10_000_000;

/// Frontier states expanded per parallel batch.
const BATCH: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub state_cap: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { state_cap: DEFAULT_STATE_CAP }
    }
}

/// Exhaustion counters: distinct states seen and BFS depth reached.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub visited: usize,
    pub depth: usize,
}

/// Result of a budgeted search.
///
/// `NotWithinBudget` states that no witness exists within the budget; it
/// says nothing beyond it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<W> {
    Found { witness: W, stats: SearchStats },
    NotWithinBudget { stats: SearchStats },
}

impl<W> Search<W> {
    pub fn stats(&self) -> SearchStats {
        match self {
            Search::Found { stats, .. } | Search::NotWithinBudget { stats } => *stats,
        }
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Search::Found { witness, .. } => Some(witness),
            Search::NotWithinBudget { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found { .. })
    }
}

/// Searches for a homotopy from `f` to `g` with at most `max_steps` steps.
pub fn search_homotopy<C: Coord>(
    f: &DigitalMap<C>,
    g: &DigitalMap<C>,
    max_steps: usize,
    limits: &SearchLimits,
) -> Result<Search<Homotopy<C>>> {
    search_impl(f, g, None, max_steps, limits)
}

/// Like [`search_homotopy`], but every layer must fix the value at `x0`.
pub fn search_pointed_homotopy<C: Coord>(
    f: &DigitalMap<C>,
    g: &DigitalMap<C>,
    x0: &Point<C>,
    max_steps: usize,
    limits: &SearchLimits,
) -> Result<Search<Homotopy<C>>> {
    search_impl(f, g, Some(x0), max_steps, limits)
}

fn search_impl<C: Coord>(
    f: &DigitalMap<C>,
    g: &DigitalMap<C>,
    x0: Option<&Point<C>>,
    max_steps: usize,
    limits: &SearchLimits,
) -> Result<Search<Homotopy<C>>> {
    if f.domain() != g.domain() || f.codomain() != g.codomain() {
        return Err(Error::ImageMismatch("maps have different domains or codomains".into()));
    }
    for (name, m) in [("f", f), ("g", g)] {
        if let Some((a, b)) = m.continuity_violation() {
            return Err(Error::Precondition(format!("{name} is not continuous at {a}, {b}")));
        }
    }
    let fixed = match x0 {
        Some(p) => {
            let i = f.domain().require_index(p)?;
            if f.value_index(i) != g.value_index(i) {
                return Err(Error::Precondition(format!("f and g differ at the fixed point {p}")));
            }
            Some(i)
        }
        None => None,
    };
    let graph = StepGraph::new(f.domain(), f.codomain(), fixed);
    let target = g.values();
    let out = graph.bfs(f.values(), |s| s == target, max_steps, limits)?;
    Ok(out.map(|path| {
        let layers =
            path.into_iter().map(|v| DigitalMap::from_indices_unchecked(f.domain(), f.codomain(), v)).collect();
        Homotopy::new(layers, x0.cloned()).expect("layers share one shape")
    }))
}

/// Searches for a homotopy from `1_X` to some constant map.
pub fn search_contraction<C: Coord>(
    image: &DigitalImage<C>,
    max_steps: usize,
    limits: &SearchLimits,
) -> Result<Search<Homotopy<C>>> {
    if image.is_empty() {
        return Err(Error::Precondition("empty image".into()));
    }
    if !image.is_connected() {
        return Err(Error::Precondition("image is not connected".into()));
    }
    let id = DigitalMap::identity(image);
    let graph = StepGraph::new(image, image, None);
    let out = graph.bfs(id.values(), |s| s.iter().all(|&v| v == s[0]), max_steps, limits)?;
    Ok(out.map(|path| {
        let layers = path.into_iter().map(|v| DigitalMap::from_indices_unchecked(image, image, v)).collect();
        Homotopy::new(layers, None).expect("layers share one shape")
    }))
}

impl<W> Search<W> {
    fn map<V>(self, f: impl FnOnce(W) -> V) -> Search<V> {
        match self {
            Search::Found { witness, stats } => Search::Found { witness: f(witness), stats },
            Search::NotWithinBudget { stats } => Search::NotWithinBudget { stats },
        }
    }
}

/// Adjacency data for generating one-step successors of a map.
pub(crate) struct StepGraph {
    /// Neighbors of each domain point with a smaller index.
    earlier: Vec<Vec<u32>>,
    /// Closed neighborhood of each codomain point, ascending.
    moves: Vec<Vec<u32>>,
    codomain_adj: Vec<Vec<u32>>,
    fixed: Option<usize>,
}

impl StepGraph {
    pub(crate) fn new<C: Coord>(domain: &DigitalImage<C>, codomain: &DigitalImage<C>, fixed: Option<usize>) -> Self {
        let earlier = (0..domain.len())
            .map(|i| domain.neighbor_indices(i).iter().copied().filter(|&j| (j as usize) < i).collect())
            .collect();
        let moves = (0..codomain.len()).map(|i| codomain.closed_neighborhood(i)).collect();
        let codomain_adj = (0..codomain.len()).map(|i| codomain.neighbor_indices(i).to_vec()).collect();
        StepGraph { earlier, moves, codomain_adj, fixed }
    }

    fn adj_or_eq(&self, a: u32, b: u32) -> bool {
        a == b || self.codomain_adj[a as usize].binary_search(&b).is_ok()
    }

    /// Continuous maps one step from `cur`, excluding `cur`, in lexicographic order.
    pub(crate) fn successors(&self, cur: &[u32]) -> Vec<Vec<u32>> {
        let n = cur.len();
        let mut out = Vec::new();
        if n == 0 {
            return out;
        }
        let mut next = vec![0u32; n];
        let mut choice = vec![0usize; n];
        let mut i = 0usize;
        loop {
            let cands: &[u32] =
                if Some(i) == self.fixed { std::slice::from_ref(&cur[i]) } else { &self.moves[cur[i] as usize] };
            let mut placed = false;
            while choice[i] < cands.len() {
                let c = cands[choice[i]];
                choice[i] += 1;
                if self.earlier[i].iter().all(|&j| self.adj_or_eq(c, next[j as usize])) {
                    next[i] = c;
                    placed = true;
                    break;
                }
            }
            if placed {
                if i + 1 == n {
                    if next != cur {
                        out.push(next.clone());
                    }
                } else {
                    i += 1;
                    choice[i] = 0;
                }
            } else if i == 0 {
                return out;
            } else {
                i -= 1;
            }
        }
    }

    /// Breadth-first search from `start` for a state satisfying `goal`,
    /// returning the state path of a shortest witness.
    pub(crate) fn bfs(
        &self,
        start: &[u32],
        goal: impl Fn(&[u32]) -> bool,
        max_steps: usize,
        limits: &SearchLimits,
    ) -> Result<Search<Vec<Vec<u32>>>> {
        let width = start.len();
        let mut store = StateStore::new(width);
        store.insert(start, u32::MAX);
        if goal(start) {
            return Ok(Search::Found { witness: vec![start.to_vec()], stats: SearchStats { visited: 1, depth: 0 } });
        }
        let mut frontier = 0..1usize;
        let mut depth = 0;
        while depth < max_steps && !frontier.is_empty() {
            depth += 1;
            let level_end = frontier.end;
            let mut lo = frontier.start;
            while lo < level_end {
                let hi = (lo + BATCH).min(level_end);
                let expanded: Vec<Vec<Vec<u32>>> =
                    (lo..hi).into_par_iter().map(|s| self.successors(store.get(s))).collect();
                for (offset, succ) in expanded.into_iter().enumerate() {
                    for state in succ {
                        if store.insert(&state, (lo + offset) as u32) {
                            if store.len() > limits.state_cap {
                                return Err(Error::StateCapExceeded { visited: store.len(), cap: limits.state_cap });
                            }
                            if goal(&state) {
                                let stats = SearchStats { visited: store.len(), depth };
                                return Ok(Search::Found { witness: store.path_to(store.len() - 1), stats });
                            }
                        }
                    }
                }
                lo = hi;
            }
            frontier = level_end..store.len();
        }
        Ok(Search::NotWithinBudget { stats: SearchStats { visited: store.len(), depth } })
    }
}

/// Flat storage of fixed-width states with parent links and a hash index.
struct StateStore {
    width: usize,
    data: Vec<u32>,
    parent: Vec<u32>,
    index: HashTable<u32>,
    hasher: RandomState,
}

impl StateStore {
    fn new(width: usize) -> Self {
        StateStore { width, data: Vec::new(), parent: Vec::new(), index: HashTable::new(), hasher: RandomState::new() }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    /// Inserts `state` unless present; returns whether it was new.
    fn insert(&mut self, state: &[u32], parent: u32) -> bool {
        let h = self.hasher.hash_one(state);
        let (data, width) = (&self.data, self.width);
        if self.index.find(h, |&i| &data[i as usize * width..(i as usize + 1) * width] == state).is_some() {
            return false;
        }
        let id = self.parent.len() as u32;
        self.data.extend_from_slice(state);
        self.parent.push(parent);
        let (data, hasher) = (&self.data, &self.hasher);
        self.index.insert_unique(h, id, |&i| hasher.hash_one(&data[i as usize * width..(i as usize + 1) * width]));
        true
    }

    fn path_to(&self, mut i: usize) -> Vec<Vec<u32>> {
        let mut path = vec![self.get(i).to_vec()];
        while self.parent[i] != u32::MAX {
            i = self.parent[i] as usize;
            path.push(self.get(i).to_vec());
        }
        path.reverse();
        path
    }
}
