mod common;

use common::*;
use digitop::constructions::{
    cube_contraction, product_certificates, tree_contraction, tree_equivalence, tree_similarity, wedge_certificates,
};
use digitop::lattice::AdjacencyKind;
use digitop::longhtpy::{finite_to_long, l_to_long, long_to_finite, reverse_long, shift_constant_target};
use digitop::maps::compose;
use digitop::realhtpy::{finite_to_real, real_to_finite, reverse_real};
use digitop::search::{search_homotopy, SearchLimits};
use digitop::similarity::{extract_equivalence_when_stable, from_equivalence, verify_similarity, Stable};
use digitop::{Certificate, DigitalMap, ECPath, Json, Point, RealHomotopy};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn canonical(p: &ECPath) -> bool {
    let n = p.stabilization_index();
    n == 0 || p.value_at(n - 1) != p.tail_point()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_is_symmetric_and_irreflexive(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let n = rng.gen_range(1..=4);
        let kind = AdjacencyKind::new(n, rng.gen_range(1..=n)).unwrap();
        let coords = |rng: &mut TestRng| (0..n).map(|_| rng.gen_range(-2..=2)).collect::<Vec<i64>>();
        let (a, b) = (coords(&mut rng), coords(&mut rng));
        let (p, q) = (Point::from_i64s(&a), Point::from_i64s(&b));
        let pq = digitop::lattice::adjacent(&p, &q, kind).unwrap();
        prop_assert_eq!(pq, digitop::lattice::adjacent(&q, &p, kind).unwrap());
        prop_assert_eq!(pq, is_adjacent(&a, &b, kind));
        prop_assert!(!digitop::lattice::adjacent(&p, &p, kind).unwrap());
    }

    #[test]
    fn components_partition_maximally(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let kind = kind2(&mut rng);
        let x = random_image(&mut rng, 12, 5, kind);
        let parts = x.components();
        prop_assert_eq!(parts.iter().map(Vec::len).sum::<usize>(), x.len());
        let part_of = |p: &Point| parts.iter().position(|c| c.contains(p)).unwrap();
        for i in 0..x.len() {
            prop_assert!(x.neighbor_indices(i).len() < 3usize.pow(x.dim() as u32));
            for &j in x.neighbor_indices(i) {
                prop_assert_eq!(part_of(x.point(i)), part_of(x.point(j as usize)));
            }
        }
        for c in &parts {
            let idx: Vec<usize> = c.iter().map(|p| x.index_of(p).unwrap()).collect();
            prop_assert!(x.indices_connected(&idx));
        }
    }

    #[test]
    fn continuity_characterizations_agree(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let kind = kind2(&mut rng);
        let x = random_image(&mut rng, 7, 4, kind);
        let kind = kind2(&mut rng);
        let y = random_image(&mut rng, 7, 4, kind);
        let f = if rng.gen_bool(0.5) { random_map(&mut rng, &x, &y) } else { random_continuous_map(&mut rng, &x, &y) };
        prop_assert_eq!(f.check_continuity_edges(), f.check_continuity_connected(1 << 16).unwrap());
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let imgs: Vec<_> = (0..4).map(|_| { let k = kind2(&mut rng); random_image(&mut rng, 6, 3, k) }).collect();
        let f = random_map(&mut rng, &imgs[0], &imgs[1]);
        let g = random_map(&mut rng, &imgs[1], &imgs[2]);
        let h = random_map(&mut rng, &imgs[2], &imgs[3]);
        let left = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        let right = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn isomorphism_inverse_is_isomorphism(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let kind = kind2(&mut rng);
        let x = random_connected_image(&mut rng, 7, kind);
        let mut perm: Vec<u32> = (0..x.len() as u32).collect();
        if rng.gen_bool(0.5) {
            perm.shuffle(&mut rng);
        }
        let f = DigitalMap::from_indices(&x, &x, perm).unwrap();
        if f.check_isomorphism() {
            let g = f.inverse().unwrap();
            prop_assert!(g.check_isomorphism());
            prop_assert_eq!(compose(&g, &f).unwrap(), DigitalMap::identity(&x));
        }
    }

    #[test]
    fn search_is_self_certifying_and_symmetric(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let kind = kind2(&mut rng);
        let x = random_connected_image(&mut rng, 4, kind);
        let kind = kind2(&mut rng);
        let y = random_connected_image(&mut rng, 4, kind);
        let f = random_continuous_map(&mut rng, &x, &y);
        let g = random_continuous_map(&mut rng, &x, &y);
        let m = rng.gen_range(0..=3);
        let limits = SearchLimits::default();
        let fg = search_homotopy(&f, &g, m, &limits).unwrap();
        let gf = search_homotopy(&g, &f, m, &limits).unwrap();
        prop_assert_eq!(fg.is_found(), gf.is_found());
        if let Some(h) = fg.witness() {
            prop_assert_eq!(h.verify(&f, &g), Ok(()));
            prop_assert!(h.steps() <= m);
            prop_assert_eq!(h.reverse().verify(&g, &f), Ok(()));
        }
    }

    #[test]
    fn homotopy_constructors_verify(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let kind = kind2(&mut rng);
        let x = random_image(&mut rng, 6, 3, kind);
        let kind = kind2(&mut rng);
        let y = random_image(&mut rng, 6, 3, kind);
        let f = random_continuous_map(&mut rng, &x, &y);
        let fixed = rng.gen_bool(0.3).then(|| rng.gen_range(0..x.len()));
        let steps = rng.gen_range(0..=3);
        let h1 = random_homotopy(&mut rng, &f, steps, fixed);
        let steps = rng.gen_range(0..=3);
        let h2 = random_homotopy(&mut rng, h1.end(), steps, fixed);
        let both = h1.concat(&h2).unwrap();
        prop_assert_eq!(both.verify(&f, h2.end()), Ok(()));
        prop_assert_eq!(both.reverse().verify(h2.end(), &f), Ok(()));
        prop_assert_eq!(both.reverse().reverse(), both);
    }

    #[test]
    fn ec_operations_stay_canonical(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let kind = kind2(&mut rng);
        let x = random_connected_image(&mut rng, 7, kind);
        let kind = kind2(&mut rng);
        let y = random_connected_image(&mut rng, 7, kind);
        let x0 = x.points().choose(&mut rng).unwrap().clone();
        let a = random_loop(&mut rng, &x, &x0, 6);
        let b = random_loop(&mut rng, &x, &x0, 6);
        let h = random_continuous_map(&mut rng, &x, &y);
        let ab = a.concat(&b).unwrap();
        let inv = a.inverse().unwrap();
        let pushed = a.push(&h).unwrap();
        for p in [&a, &ab, &inv, &pushed] {
            prop_assert!(canonical(p));
        }
        prop_assert!(pushed.is_loop());
        prop_assert_eq!(pushed.start(), h.apply(&x0).unwrap());
        prop_assert_eq!(ab.stabilization_index() <= a.stabilization_index() + b.stabilization_index(), true);
        let c = random_loop(&mut rng, &x, &x0, 6);
        prop_assert_eq!(ab.concat(&c).unwrap(), a.concat(&b.concat(&c).unwrap()).unwrap());
    }

    #[test]
    fn finite_long_real_round_trips(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let kind = kind2(&mut rng);
        let x = random_image(&mut rng, 6, 3, kind);
        let kind = kind2(&mut rng);
        let y = random_image(&mut rng, 6, 3, kind);
        let f = random_continuous_map(&mut rng, &x, &y);
        let fixed = rng.gen_bool(0.3).then(|| rng.gen_range(0..x.len()));
        let steps = rng.gen_range(0..=4);
        let h = random_homotopy(&mut rng, &f, steps, fixed);
        let (a, b) = (h.start(), h.end());
        let long = finite_to_long(&h);
        prop_assert_eq!(long.verify(a, b), Ok(()));
        prop_assert_eq!(long_to_finite(&long).verify(a, b), Ok(()));
        prop_assert_eq!(reverse_long(&reverse_long(&long)), long.clone());
        prop_assert_eq!(reverse_long(&long).verify(b, a), Ok(()));
        let real: RealHomotopy = finite_to_real(&h);
        prop_assert_eq!(real.verify(a, b), Ok(()));
        prop_assert_eq!(reverse_real(&reverse_real(&real)), real.clone());
        prop_assert_eq!(reverse_real(&real).verify(b, a), Ok(()));
        prop_assert_eq!(real_to_finite(&real).verify(a, b), Ok(()));
    }

    #[test]
    fn l_homotopies_are_constant_before_zero(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let n = rng.gen_range(1..=2);
        let kind = AdjacencyKind::new(n, rng.gen_range(1..=n)).unwrap();
        let center = Point::from_i64s(&vec![rng.gen_range(-3..=3); n]);
        let r = rng.gen_range(0..=2);
        let l = cube_contraction(&center, r, kind).unwrap();
        prop_assert!(l.stab().iter().all(|&s| s <= n * r));
        let long = l_to_long(&l);
        for t in long.t_min()..0 {
            prop_assert_eq!(long.layer(t), l.layer(0));
        }
        prop_assert_eq!(long.verify(l.layer(0), l.layer(l.horizon())), Ok(()));
    }

    #[test]
    fn shifted_constants_follow_neighbor_maxima(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let kind = kind2(&mut rng);
        let t = random_tree(&mut rng, 10, kind);
        let h = finite_to_long(&tree_contraction(&t).unwrap());
        let x = t.image();
        let ri = x.index_of(t.root()).unwrap();
        let di = *x.closed_neighborhood(ri).choose(&mut rng).unwrap() as usize;
        let out = shift_constant_target(&h, x.point(di)).unwrap();
        for i in 0..x.len() {
            let n_prime = out.bounds()[i] - 1;
            prop_assert!(n_prime >= h.bounds()[i]);
            if x.neighbor_indices(i).is_empty() {
                prop_assert_eq!(n_prime, h.bounds()[i]);
            }
            for t in (n_prime as i64 + 1)..=out.t_max() as i64 {
                prop_assert_eq!(out.layer(t).value_index(i), di);
            }
        }
    }

    #[test]
    fn similarity_truncation_and_collapse(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let kind = kind2(&mut rng);
        let t = random_tree(&mut rng, 10, kind);
        let depth = rng.gen_range(1..=5);
        let s = tree_similarity(&t, depth).unwrap();
        for j in 1..=depth {
            prop_assert_eq!(verify_similarity(&s.truncate(j), Some(j)), Ok(()));
        }
        if let Stable::Level { cert, .. } = extract_equivalence_when_stable(&s) {
            prop_assert_eq!(cert.verify(), Ok(()));
        }
        let eq = tree_equivalence(&t).unwrap();
        match extract_equivalence_when_stable(&from_equivalence(&eq, depth)) {
            Stable::Level { cert, level } => {
                prop_assert_eq!(level, 0);
                prop_assert_eq!(cert, eq);
            }
            Stable::NotStable => prop_assert!(false, "not stable"),
        }
    }

    #[test]
    fn gluing_commutes_with_forgetting_basepoints(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let kind = kind2(&mut rng);
        let a = random_tree_in(&mut rng, 6, kind, &[0, 0], &|c| c[1] >= 1);
        let b = random_tree_in(&mut rng, 6, kind, &[0, 0], &|c| c[1] <= -1);
        let root = |t: digitop::TreeImage| digitop::TreeImage::new(t.image().clone(), pt(&[0, 0])).unwrap();
        let (a, b) = (root(a), root(b));
        let ca = Certificate::Plain(tree_equivalence(&a).unwrap());
        let cb = Certificate::Plain(tree_equivalence(&b).unwrap());
        let w = wedge_certificates(&ca, &cb).unwrap();
        let forgot = w.unpointed().unwrap();
        prop_assert_eq!(forgot.verify(), Ok(()));
        let p = product_certificates(&[ca.clone(), ca]);
        if let Ok(p) = p {
            prop_assert_eq!(p.unpointed().unwrap().verify(), Ok(()));
        }
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let kind = kind2(&mut rng);
        let x = random_image(&mut rng, 6, 3, kind);
        let f = random_continuous_map(&mut rng, &x, &x);
        let steps = rng.gen_range(0..=3);
        let h = random_homotopy(&mut rng, &f, steps, None);
        prop_assert_eq!(digitop::DigitalImage::from_json(&x.to_json()).unwrap(), x);
        prop_assert_eq!(DigitalMap::from_json(&f.to_json()).unwrap(), f);
        prop_assert_eq!(digitop::Homotopy::from_json(&h.to_json()).unwrap(), h.clone());
        let long = finite_to_long(&h);
        prop_assert_eq!(digitop::LongHomotopy::from_json(&long.to_json()).unwrap(), long);
        let real: RealHomotopy = finite_to_real(&h);
        prop_assert_eq!(RealHomotopy::from_json(&real.to_json()).unwrap(), real);
        let kind = kind2(&mut rng);
        let t = random_tree(&mut rng, 6, kind);
        let c = Certificate::Similarity(tree_similarity(&t, 3).unwrap());
        let text = c.to_json();
        prop_assert_eq!(Certificate::from_json(&text).unwrap().to_json(), text);
    }
}
