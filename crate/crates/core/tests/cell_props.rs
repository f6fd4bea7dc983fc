mod common;

use isokit::linking::{
    coarsen, decompose, phi_vertex_map, validate_cells, IsovariantCellStructure,
};
use isokit::{models, Error, GComplex};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Decomposes `x`, or its subdivision when orbits of vertices meet inside
/// a simplex.
fn cells(x: &GComplex) -> (GComplex, IsovariantCellStructure) {
    match decompose(x) {
        Ok(c) => (x.clone(), c),
        Err(Error::NotEquivariantTriangulation(_)) => {
            let (sd, _) = x.barycentric_subdivision();
            let c = decompose(&sd)
                .expect("a subdivided regular complex is an equivariant triangulation");
            (sd, c)
        }
        Err(e) => panic!("{e}"),
    }
}

#[test]
fn models_decompose() {
    for x in [
        models::square_wheel(),
        models::reflection_disk(),
        models::annulus(),
        models::klein_cross(),
        models::cone_wedge_sphere(),
    ] {
        let (y, c) = cells(&x);
        assert!(validate_cells(&c, &y).passed());
        assert_eq!(c.simplex_count(y.group()), y.n_simplices());
        let coarse = coarsen(&c, &y);
        assert!(
            validate_cells(&coarse, &y).passed(),
            "{:?}",
            validate_cells(&coarse, &y).failure
        );
        assert!(coarse.cells.len() <= c.cells.len());
    }
}

#[test]
fn square_wheel_fine_structure() {
    let x = models::square_wheel();
    let c = decompose(&x).unwrap();
    assert_eq!(c.cells.len(), 9);
    assert_eq!(c.simplex_count(x.group()), 17);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cell_counts_match_simplices(seed in any::<u64>()) {
        let x = common::random_regular_complex(&mut ChaCha8Rng::seed_from_u64(seed), 10);
        let (y, c) = cells(&x);
        let report = validate_cells(&c, &y);
        prop_assert!(report.passed(), "{:?}", report.failure);
        prop_assert_eq!(c.simplex_count(y.group()), y.n_simplices());
        let coarse = coarsen(&c, &y);
        let report = validate_cells(&coarse, &y);
        prop_assert!(report.passed(), "{:?}", report.failure);
        prop_assert_eq!(coarse.simplex_count(y.group()), y.n_simplices());
    }

    #[test]
    fn phi_is_a_bijection_on_indices(split in prop::collection::vec(1usize..4, 1..4)) {
        // a weakly decreasing list of subgroups of C2 x C2 with given runs
        let g = models::klein();
        let ladder = [g.whole(), g.subgroup(&[0, 1]).unwrap(), g.trivial_subgroup()];
        let mut groups = vec![];
        for (run, h) in split.iter().zip(&ladder) {
            groups.extend(std::iter::repeat_n(h.clone(), *run));
        }
        let phi = phi_vertex_map(&groups).unwrap();
        let mut hit = vec![0; groups.len()];
        for (i, &d) in phi.fiber_dims().iter().enumerate() {
            for l in 0..=d {
                let mut ells = vec![0; split.len()];
                ells[i] = l;
                hit[phi.apply(&ells, i)] += 1;
            }
        }
        prop_assert!(hit.iter().all(|&h| h == 1));
        prop_assert_eq!(phi.collapse.disk_dim(), groups.len() - split.len());
    }
}
