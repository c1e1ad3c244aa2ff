//! Seeded random images, maps, homotopies, trees and loops.
#![allow(dead_code)]

use digitop::lattice::AdjacencyKind;
use digitop::{DigitalImage, DigitalMap, ECPath, Homotopy, Point, TreeImage};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pt(c: &[i64]) -> Point {
    Point::from_i64s(c)
}

pub fn kind2(rng: &mut TestRng) -> AdjacencyKind {
    if rng.gen_bool(0.5) {
        AdjacencyKind::c1(2)
    } else {
        AdjacencyKind::maximal(2)
    }
}

/// `1..=max_len` distinct points of the box `[0, side)^2`.
pub fn random_image(rng: &mut TestRng, max_len: usize, side: i64, kind: AdjacencyKind) -> DigitalImage {
    let mut cells: Vec<Point> = (0..side).flat_map(|a| (0..side).map(move |b| pt(&[a, b]))).collect();
    cells.shuffle(rng);
    let n = rng.gen_range(1..=max_len.min(cells.len()));
    DigitalImage::new(kind, cells.into_iter().take(n)).unwrap()
}

/// A connected image grown from the origin by random neighbor additions.
pub fn random_connected_image(rng: &mut TestRng, max_len: usize, kind: AdjacencyKind) -> DigitalImage {
    let n = rng.gen_range(1..=max_len);
    let offsets = kind.offsets();
    let mut pts = vec![vec![0i64; kind.ambient_dim()]];
    while pts.len() < n {
        let base = pts.choose(rng).unwrap().clone();
        let off = offsets.choose(rng).unwrap();
        let q: Vec<i64> = base.iter().zip(off).map(|(a, &o)| a + o as i64).collect();
        if !pts.contains(&q) {
            pts.push(q);
        }
    }
    DigitalImage::new(kind, pts.iter().map(|c| pt(c))).unwrap()
}

/// An arbitrary, usually discontinuous, map.
pub fn random_map(rng: &mut TestRng, x: &DigitalImage, y: &DigitalImage) -> DigitalMap {
    let values = (0..x.len()).map(|_| rng.gen_range(0..y.len() as u32)).collect();
    DigitalMap::from_indices(x, y, values).unwrap()
}

/// A uniformly shuffled backtracking search for a continuous map whose
/// value at each `i` lies in `allowed(i)`.
pub fn random_continuous_within(
    rng: &mut TestRng,
    x: &DigitalImage,
    y: &DigitalImage,
    allowed: &dyn Fn(usize) -> Vec<u32>,
) -> Option<DigitalMap> {
    let order = bfs_order(x);
    let mut values = vec![u32::MAX; x.len()];
    if fill(rng, x, y, allowed, &order, 0, &mut values) {
        Some(DigitalMap::from_indices(x, y, values).unwrap())
    } else {
        None
    }
}

pub fn random_continuous_map(rng: &mut TestRng, x: &DigitalImage, y: &DigitalImage) -> DigitalMap {
    let all: Vec<u32> = (0..y.len() as u32).collect();
    random_continuous_within(rng, x, y, &|_| all.clone()).expect("constant maps exist")
}

fn bfs_order(x: &DigitalImage) -> Vec<usize> {
    let mut seen = vec![false; x.len()];
    let mut order = Vec::with_capacity(x.len());
    for s in 0..x.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let start = order.len();
        order.push(s);
        let mut k = start;
        while k < order.len() {
            let i = order[k];
            for &j in x.neighbor_indices(i) {
                if !seen[j as usize] {
                    seen[j as usize] = true;
                    order.push(j as usize);
                }
            }
            k += 1;
        }
    }
    order
}

fn fill(
    rng: &mut TestRng,
    x: &DigitalImage,
    y: &DigitalImage,
    allowed: &dyn Fn(usize) -> Vec<u32>,
    order: &[usize],
    k: usize,
    values: &mut [u32],
) -> bool {
    let Some(&i) = order.get(k) else { return true };
    let mut cands = allowed(i);
    cands.shuffle(rng);
    for c in cands {
        let ok = x
            .neighbor_indices(i)
            .iter()
            .all(|&j| values[j as usize] == u32::MAX || y.adj_or_eq_idx(values[j as usize] as usize, c as usize));
        if ok {
            values[i] = c;
            if fill(rng, x, y, allowed, order, k + 1, values) {
                return true;
            }
            values[i] = u32::MAX;
        }
    }
    false
}

/// A random walk of `steps` homotopy steps starting at `f`. With `fixed`,
/// every layer keeps the value of `f` at that index.
pub fn random_homotopy(rng: &mut TestRng, f: &DigitalMap, steps: usize, fixed: Option<usize>) -> Homotopy {
    let (x, y) = (f.domain().clone(), f.codomain().clone());
    let mut layers = vec![f.clone()];
    for _ in 0..steps {
        let cur = layers.last().unwrap().clone();
        let allowed = |i: usize| -> Vec<u32> {
            if Some(i) == fixed {
                vec![cur.value_index(i) as u32]
            } else {
                y.closed_neighborhood(cur.value_index(i))
            }
        };
        layers.push(random_continuous_within(rng, &x, &y, &allowed).expect("the current layer qualifies"));
    }
    Homotopy::new(layers, fixed.map(|i| x.point(i).clone())).unwrap()
}

/// A tree grown from `root` inside `region`: a new point joins only when it
/// has exactly one neighbor already in the tree.
pub fn random_tree_in(
    rng: &mut TestRng,
    max_len: usize,
    kind: AdjacencyKind,
    root: &[i64],
    region: &dyn Fn(&[i64]) -> bool,
) -> TreeImage {
    let n = rng.gen_range(1..=max_len);
    let offsets = kind.offsets();
    let mut pts: Vec<Vec<i64>> = vec![root.to_vec()];
    let mut attempts = 0;
    while pts.len() < n && attempts < 50 * max_len {
        attempts += 1;
        let base = pts.choose(rng).unwrap().clone();
        let off = offsets.choose(rng).unwrap();
        let q: Vec<i64> = base.iter().zip(off).map(|(a, &o)| a + o as i64).collect();
        if pts.contains(&q) || !region(&q) {
            continue;
        }
        let touching = pts.iter().filter(|p| is_adjacent(p, &q, kind)).count();
        if touching == 1 {
            pts.push(q);
        }
    }
    let img = DigitalImage::new(kind, pts.iter().map(|c| pt(c))).unwrap();
    let r = pts.choose(rng).unwrap();
    TreeImage::new(img, pt(r)).unwrap()
}

pub fn random_tree(rng: &mut TestRng, max_len: usize, kind: AdjacencyKind) -> TreeImage {
    let root = vec![0; kind.ambient_dim()];
    random_tree_in(rng, max_len, kind, &root, &|_| true)
}

/// Reference adjacency straight from the definition of `c_u`.
pub fn is_adjacent(p: &[i64], q: &[i64], kind: AdjacencyKind) -> bool {
    let diff: Vec<i64> = p.iter().zip(q).map(|(a, b)| (a - b).abs()).collect();
    diff.iter().all(|&d| d <= 1) && diff.contains(&1) && diff.iter().filter(|&&d| d == 1).count() <= kind.u()
}

/// A loop at `x0`: a random walk of at most `max_walk` moves followed by a
/// shortest path home.
pub fn random_loop(rng: &mut TestRng, image: &DigitalImage, x0: &Point, max_walk: usize) -> ECPath {
    let mut cur = image.index_of(x0).unwrap();
    let mut pts = vec![x0.clone()];
    for _ in 0..rng.gen_range(0..=max_walk) {
        let nb = image.neighbor_indices(cur);
        if nb.is_empty() {
            break;
        }
        cur = *nb.choose(rng).unwrap() as usize;
        pts.push(image.point(cur).clone());
    }
    let home = image.shortest_path(image.point(cur), x0).unwrap().unwrap();
    pts.extend(home.into_iter().skip(1));
    pts.pop();
    ECPath::new(image, &pts, x0).unwrap()
}
