//! Small equivariant complexes and maps used as worked examples, in tests
//! and in benchmarks.

use std::sync::Arc;

use crate::fixpoint::{AbelianGroup, PiData, TwistedSetup};
use crate::gcomplex::GComplex;
use crate::gmap::GMap;
use crate::group::FiniteGroup;

pub fn c2() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2))
}

/// `C2 x C2`; element `2a + b` is `(a, b)`.
pub fn klein() -> Arc<FiniteGroup> {
    let c = FiniteGroup::cyclic(2);
    Arc::new(FiniteGroup::direct_product(&c, &c))
}

fn c2_complex(n: usize, facets: Vec<Vec<usize>>, tau: Vec<usize>) -> GComplex {
    GComplex::from_partial_action(c2(), n, facets, &[(1, tau)]).expect("model complex is valid")
}

/// A square disk coned from its centre `0`, rim `1, 2, 3, 4`, with the
/// half-turn fixing only the centre.
pub fn square_wheel() -> GComplex {
    c2_complex(
        5,
        vec![vec![0, 1, 2], vec![0, 2, 3], vec![0, 3, 4], vec![0, 4, 1]],
        vec![0, 3, 4, 1, 2],
    )
}

/// An interval with the sign action (`1 <-> 2`) glued at its midpoint `0`
/// to a triangle `0, 3, 4` with trivial action.
pub fn disk_wedge_circle() -> GComplex {
    c2_complex(
        5,
        vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![3, 4], vec![0, 4]],
        vec![0, 2, 1, 3, 4],
    )
}

/// A cone over the boundary of the 5-dimensional cross-polytope with the
/// antipodal action (apex `0`, vertices `2i+1 = +e_i`, `2i+2 = -e_i`),
/// wedged at the apex with the boundary of a 4-simplex on `0, 11..=14`
/// carrying the trivial action.
pub fn cone_wedge_sphere() -> GComplex {
    let mut facets = vec![];
    for signs in 0..32usize {
        let mut f = vec![0];
        for i in 0..5 {
            f.push(2 * i + 1 + (signs >> i & 1));
        }
        facets.push(f);
    }
    let sphere = [0, 11, 12, 13, 14];
    for skip in 0..5 {
        facets.push(
            sphere
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &v)| v)
                .collect(),
        );
    }
    let mut tau: Vec<usize> = (0..15).collect();
    for i in 0..5 {
        tau.swap(2 * i + 1, 2 * i + 2);
    }
    c2_complex(15, facets, tau)
}

/// A hexagon `0..6` with the antipodal action.
pub fn hexagon() -> GComplex {
    c2_complex(
        6,
        (0..6).map(|i| vec![i, (i + 1) % 6]).collect(),
        (0..6).map(|i| (i + 3) % 6).collect(),
    )
}

pub fn hexagon_map(images: impl Fn(usize) -> usize) -> GMap {
    let x = hexagon();
    GMap::new(x.clone(), x, (0..6).map(images).collect()).expect("hexagon map is simplicial")
}

pub fn hexagon_identity() -> GMap {
    hexagon_map(|v| v)
}

/// Rotation by one step.
pub fn hexagon_rotation() -> GMap {
    hexagon_map(|v| (v + 1) % 6)
}

/// `v -> -v`, fixing `0` and `3`.
pub fn hexagon_reflection() -> GMap {
    hexagon_map(|v| (6 - v) % 6)
}

/// `π1 = Z` on the hexagon: tree `0-1-...-5`, edge `(5, 0)` labelled `1`.
pub fn hexagon_pi(phi: i64) -> PiData {
    PiData {
        setup: TwistedSetup::new(AbelianGroup { factors: vec![0] }, vec![vec![phi]])
            .expect("Z endomorphism"),
        tree: (0..5).map(|i| (i, i + 1)).collect(),
        labels: vec![((5, 0), vec![1])],
    }
}

/// A hexagonal disk coned from `0`, rim `1..=6` counterclockwise from the
/// top, reflected across the vertical axis through `1`, `0` and `4`.
pub fn reflection_disk() -> GComplex {
    let facets = (1..=6).map(|k| vec![0, k, k % 6 + 1]).collect();
    c2_complex(7, facets, vec![0, 1, 6, 5, 4, 3, 2])
}

/// The rim of [`reflection_disk`], with vertex `i` standing for rim vertex
/// `i + 1`.
pub fn reflection_circle() -> GComplex {
    c2_complex(
        6,
        (0..6).map(|i| vec![i, (i + 1) % 6]).collect(),
        vec![0, 5, 4, 3, 2, 1],
    )
}

pub fn point(group: Arc<FiniteGroup>) -> GComplex {
    GComplex::with_trivial_action(group, 1, vec![vec![0]]).expect("a point")
}

/// The fixed point inclusion `* -> D` at the centre of [`reflection_disk`].
pub fn centre_inclusion() -> GMap {
    GMap::new(point(c2()), reflection_disk(), vec![0]).expect("inclusion")
}

/// `D -> *`.
pub fn disk_collapse() -> GMap {
    GMap::new(reflection_disk(), point(c2()), vec![0; 7]).expect("collapse")
}

/// The rim inclusion, an injective equivariant map.
pub fn rim_inclusion() -> GMap {
    GMap::new(reflection_circle(), reflection_disk(), (1..=6).collect()).expect("inclusion")
}

/// An annulus of two hexagons `0..6` (inner) and `6..12` (outer) with the
/// free half-turn.
pub fn annulus() -> GComplex {
    let mut facets = vec![];
    for i in 0..6 {
        let j = (i + 1) % 6;
        facets.push(vec![i, j, 6 + i]);
        facets.push(vec![j, 6 + i, 6 + j]);
    }
    let tau = (0..12)
        .map(|v| if v < 6 { (v + 3) % 6 } else { 6 + (v + 3) % 6 })
        .collect();
    c2_complex(12, facets, tau)
}

/// A plus sign: centre `0`, arms east `1`, north `2`, west `3`, south `4`.
/// `(1, 0)` reflects east to west and `(0, 1)` north to south.
pub fn klein_cross() -> GComplex {
    let facets = (1..=4).map(|k| vec![0, k]).collect();
    GComplex::from_partial_action(
        klein(),
        5,
        facets,
        &[(2, vec![0, 3, 2, 1, 4]), (1, vec![0, 1, 4, 3, 2])],
    )
    .expect("cross is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn models_are_regular() {
        for x in [
            square_wheel(),
            disk_wedge_circle(),
            cone_wedge_sphere(),
            hexagon(),
            reflection_disk(),
            annulus(),
            klein_cross(),
        ] {
            assert!(x.is_regular());
        }
    }

    #[test]
    fn cone_wedge_sphere_shape() {
        let x = cone_wedge_sphere();
        assert_eq!(x.dim(), 5);
        assert_eq!(x.euler_characteristic(), 0);
        assert_eq!(x.vertex_isotropy(0).order(), 2);
        assert_eq!(x.vertex_isotropy(1).order(), 1);
    }
}
