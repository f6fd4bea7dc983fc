use std::collections::BTreeMap;

use isokit::cubelim::{
    complete_punctured, corner_map, factorize_limit, first_hypothesis_failure, hypothesis_holds,
    random_cube_map, CubeDiagram, CubeMap, FiniteDiagram,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every family in the product of the node sets compatible with all edges.
fn brute_limit(d: &FiniteDiagram) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &s in &d.sizes {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| (0..s).map(move |v| [t.clone(), vec![v]].concat()))
            .collect();
    }
    out.retain(|t| d.edges.iter().all(|(s, u, m)| m[t[*s]] == t[*u]));
    out
}

fn random_diagram(rng: &mut ChaCha8Rng) -> FiniteDiagram {
    let n = rng.gen_range(1..5);
    let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..4)).collect();
    let mut edges = vec![];
    for _ in 0..rng.gen_range(0..6) {
        let (s, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let m = (0..sizes[s]).map(|_| rng.gen_range(0..sizes[t])).collect();
        edges.push((s, t, m));
    }
    FiniteDiagram { sizes, edges }
}

fn cube_map(seed: u64, n: usize) -> Option<CubeMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..50).find_map(|_| random_cube_map(n, 4, &mut rng))
}

fn is_surjective(map: &[usize], size: usize) -> bool {
    (0..size).all(|y| map.contains(&y))
}

#[test]
fn non_commuting_square_rejected() {
    let mut maps = BTreeMap::new();
    maps.insert((0, 0), vec![0, 1]);
    maps.insert((0, 1), vec![0, 1]);
    maps.insert((1, 1), vec![0, 0]);
    maps.insert((2, 0), vec![0, 1]);
    assert!(CubeDiagram::new(2, vec![2, 2, 2, 2], maps).is_err());
}

#[test]
fn hypothesis_fails_at_initial_corner() {
    // X = Y = {0, 1} -> {0}, collapsed at the empty set
    let x = CubeDiagram::new(1, vec![2, 1], BTreeMap::from([((0, 0), vec![0, 0])])).unwrap();
    let m = CubeMap::new(x.clone(), x, vec![vec![0, 0], vec![0]]).unwrap();
    assert_eq!(first_hypothesis_failure(&m), Some((0, 0)));
    let f = factorize_limit(&m);
    assert!(!f.all_surjective());
    assert!(f.composite_matches);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn limit_matches_product_scan(seed in any::<u64>()) {
        let d = random_diagram(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(d.limit(), brute_limit(&d));
    }

    #[test]
    fn composite_edge_maps_agree(seed in any::<u64>(), n in 1usize..4) {
        let Some(m) = cube_map(seed, n) else { return Ok(()) };
        let x = &m.source;
        let full = x.full();
        for u in 0..=full {
            for v in (u..=full).filter(|v| u & !v == 0) {
                for t in (v..=full).filter(|t| v & !t == 0) {
                    for e in 0..x.sizes[u] {
                        prop_assert_eq!(x.map_between(v, t, x.map_between(u, v, e)), x.map_between(u, t, e));
                    }
                }
            }
        }
    }

    #[test]
    fn surjective_corners_give_surjective_limits(seed in any::<u64>(), n in 1usize..4) {
        let Some(m) = cube_map(seed, n) else { return Ok(()) };
        let f = factorize_limit(&m);
        prop_assert!(f.top_is_lim_x);
        prop_assert!(f.composite_matches);
        prop_assert_eq!(f.links.len(), 1 << n);
        if hypothesis_holds(&m) {
            prop_assert!(f.all_surjective(), "{:?}", f.links_surjective);
            prop_assert!(is_surjective(&m.components[0], m.target.sizes[0]));
        }
    }

    #[test]
    fn identity_maps_satisfy_hypothesis(seed in any::<u64>(), n in 1usize..4) {
        let Some(m) = cube_map(seed, n) else { return Ok(()) };
        let id = CubeMap::identity(&m.source);
        prop_assert!(hypothesis_holds(&id));
        prop_assert!(factorize_limit(&id).all_surjective());
    }

    #[test]
    fn punctured_completion_is_a_limit(seed in any::<u64>(), n in 1usize..4) {
        let Some(m) = cube_map(seed, n) else { return Ok(()) };
        let c = complete_punctured(&m.target);
        let checked = CubeDiagram::new(c.n, c.sizes.clone(), c.maps.clone());
        prop_assert!(checked.is_ok());
        prop_assume!(c.sizes[0] > 0);
        prop_assert!(corner_map(&c, 0).is_bijective());
    }
}
