mod common;

use isokit::gmap::pi0_link_check;
use isokit::{models, GComplex, GMap};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn regular(seed: u64, max_vertices: usize) -> GComplex {
    common::random_regular_complex(&mut ChaCha8Rng::seed_from_u64(seed), max_vertices)
}

/// Equivariant self-maps of `x`, at most `limit` of them.
fn some_self_maps(x: &GComplex, seed: u64, limit: usize) -> Vec<GMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![];
    common::for_each_equivariant_self_map(x, false, Some(&mut rng), &mut |f| {
        out.push(GMap::new(x.clone(), x.clone(), f.to_vec()).unwrap());
        out.len() < limit
    });
    out
}

#[test]
fn reflection_disk_maps() {
    assert!(models::centre_inclusion().is_isovariant().unwrap());
    assert!(models::rim_inclusion().is_isovariant().unwrap());
    // collapsing the disk onto its centre merges isotropy types
    assert!(!models::disk_collapse().is_isovariant().unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn isovariant_maps_preserve_vertex_isotropy(seed in any::<u64>()) {
        let x = regular(seed, 9);
        for f in some_self_maps(&x, seed, 30) {
            prop_assert!(f.is_equivariant());
            if f.is_isovariant().unwrap() {
                for v in 0..x.n_vertices() {
                    prop_assert_eq!(x.vertex_isotropy(v), x.vertex_isotropy(f.vertices[v]));
                }
            }
        }
    }

    #[test]
    fn automorphisms_are_isovariant(seed in any::<u64>()) {
        let x = regular(seed, 9);
        prop_assume!(x.group().order() <= 6);
        for f in some_self_maps(&x, seed, 60) {
            let mut img = f.vertices.clone();
            img.sort_unstable();
            img.dedup();
            if img.len() == x.n_vertices() {
                prop_assert!(f.is_isovariant().unwrap());
            }
        }
    }

    #[test]
    fn isovariance_survives_subdivision(seed in any::<u64>()) {
        let x = regular(seed, 8);
        for f in some_self_maps(&x, seed, 12) {
            prop_assert_eq!(f.subdivide().is_isovariant().unwrap(), f.is_isovariant().unwrap());
        }
    }

    #[test]
    fn identity_passes_pi0_check(seed in any::<u64>()) {
        let x = regular(seed, 10);
        let report = pi0_link_check(&GMap::identity(&x)).unwrap();
        prop_assert!(report.passed, "{}", report.summary);
        prop_assert!(report.items.iter().all(|i| i.bijective && i.source_components == i.target_components));
    }
}
