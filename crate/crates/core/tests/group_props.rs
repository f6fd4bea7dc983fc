mod common;

use std::collections::BTreeSet;

use isokit::group::{
    conjugacy_classes_of_subgroups, enumerate_subgroups, subconjugacy_total_order, table_of_marks,
};
use isokit::FiniteGroup;
use proptest::prelude::*;

fn quaternion() -> FiniteGroup {
    // left multiplication by i and j on 1, i, j, k, -1, -i, -j, -k
    let i = vec![1, 4, 3, 6, 5, 0, 7, 2];
    let j = vec![2, 7, 4, 1, 6, 3, 0, 5];
    FiniteGroup::from_permutations(8, &[i, j]).unwrap()
}

fn alternating4() -> FiniteGroup {
    FiniteGroup::from_permutations(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).unwrap()
}

fn group(k: usize) -> FiniteGroup {
    let c2 = FiniteGroup::cyclic(2);
    match k {
        0..=11 => FiniteGroup::cyclic(k + 1),
        12..=17 => FiniteGroup::dihedral(k - 9),
        18 => FiniteGroup::symmetric(3),
        19 => FiniteGroup::direct_product(&c2, &c2),
        20 => FiniteGroup::direct_product(&c2, &FiniteGroup::cyclic(6)),
        21 => quaternion(),
        22 => alternating4(),
        23 => FiniteGroup::direct_product(&FiniteGroup::symmetric(3), &c2),
        _ => FiniteGroup::symmetric(4),
    }
}

const GROUPS: usize = 25;

#[test]
fn named_small_groups() {
    assert_eq!(quaternion().order(), 8);
    assert_eq!(quaternion().subgroup_name(&quaternion().whole()), "Q8");
    assert_eq!(alternating4().subgroup_name(&alternating4().whole()), "A4");
    assert_eq!(enumerate_subgroups(&FiniteGroup::symmetric(4)).len(), 30);
    assert_eq!(
        conjugacy_classes_of_subgroups(&FiniteGroup::symmetric(4)).len(),
        11
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn subgroups_closed_under_conjugation(k in 0..GROUPS) {
        let g = group(k);
        let subs: BTreeSet<_> = enumerate_subgroups(&g).into_iter().collect();
        for h in &subs {
            for x in g.elements() {
                prop_assert!(subs.contains(&g.conjugate(x, h)));
            }
        }
    }

    #[test]
    fn subgroups_match_power_set_scan(k in 0..GROUPS) {
        let g = group(k);
        prop_assume!(g.order() <= 12);
        let ours: BTreeSet<Vec<usize>> = enumerate_subgroups(&g).iter().map(|h| h.elements().to_vec()).collect();
        prop_assert_eq!(ours, common::brute_subgroups(&g));
    }

    #[test]
    fn marks_table_triangular_and_invertible(k in 0..GROUPS) {
        let g = group(k);
        let t = table_of_marks(&g);
        for i in 0..t.size() {
            prop_assert!(t.matrix[i][i] > 0);
            for j in i + 1..t.size() {
                prop_assert_eq!(t.matrix[i][j], 0);
            }
        }
        // the first column counts cosets
        let lat = g.lattice();
        for i in 0..t.size() {
            prop_assert_eq!(t.matrix[i][0] as usize, g.order() / lat.classes()[i].order);
        }
    }

    #[test]
    fn total_order_extends_subconjugacy(k in 0..GROUPS) {
        let g = group(k);
        let lat = g.lattice();
        let all: Vec<usize> = (0..lat.classes().len()).collect();
        let order = subconjugacy_total_order(&g, &all);
        prop_assert_eq!(order.len(), all.len());
        let pos = |c: usize| order.iter().position(|&x| x == c).unwrap();
        for a in 0..all.len() {
            for b in 0..all.len() {
                if lat.is_properly_subconjugate(a, b) {
                    prop_assert!(pos(b) < pos(a));
                }
            }
        }
    }

    #[test]
    fn permutation_and_table_inputs_agree(k in 0..GROUPS) {
        let g = group(k);
        let h = FiniteGroup::from_table(g.table().to_vec()).unwrap();
        prop_assert_eq!(&g, &h);
        prop_assert_eq!(enumerate_subgroups(&g), enumerate_subgroups(&h));
    }
}
