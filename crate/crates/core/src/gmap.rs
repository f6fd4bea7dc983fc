//! Simplicial G-maps: equivariance and isovariance checks, restrictions to
//! strata, and component-level comparisons of strata and links.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::gcomplex::GComplex;
use crate::group::Element;

/// A simplicial map given on vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMap {
    pub source: GComplex,
    pub target: GComplex,
    pub vertices: Vec<usize>,
}

impl GMap {
    pub fn new(source: GComplex, target: GComplex, vertices: Vec<usize>) -> Result<Self> {
        if source.group() != target.group() {
            return Err(Error::InvalidMap(
                "source and target carry different groups".into(),
            ));
        }
        if vertices.len() != source.n_vertices() {
            return Err(Error::InvalidMap(format!(
                "{} vertex images given for {} source vertices",
                vertices.len(),
                source.n_vertices()
            )));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= target.n_vertices()) {
            return Err(Error::InvalidMap(format!("image vertex {v} out of range")));
        }
        for f in source.facets() {
            if target
                .find(&f.iter().map(|&v| vertices[v]).collect::<Vec<_>>())
                .is_none()
            {
                return Err(Error::NotSimplicial(f.clone()));
            }
        }
        Ok(GMap {
            source,
            target,
            vertices,
        })
    }

    pub fn identity(x: &GComplex) -> Self {
        GMap {
            source: x.clone(),
            target: x.clone(),
            vertices: (0..x.n_vertices()).collect(),
        }
    }

    pub fn is_self_map(&self) -> bool {
        self.source == self.target
    }

    /// Index in the target of the image of source simplex `idx`.
    pub fn image(&self, idx: usize) -> usize {
        let img: Vec<usize> = self
            .source
            .simplex(idx)
            .iter()
            .map(|&v| self.vertices[v])
            .collect();
        self.target.find(&img).expect("simplicial map")
    }

    /// First `(g, v)` with `f(g v) != g f(v)`.
    pub fn equivariance_failure(&self) -> Option<(Element, usize)> {
        for g in self.source.group().elements() {
            for v in 0..self.source.n_vertices() {
                if self.vertices[self.source.act_vertex(g, v)]
                    != self.target.act_vertex(g, self.vertices[v])
                {
                    return Some((g, v));
                }
            }
        }
        None
    }

    pub fn is_equivariant(&self) -> bool {
        self.equivariance_failure().is_none()
    }

    fn require_equivariant(&self) -> Result<()> {
        match self.equivariance_failure() {
            None => Ok(()),
            Some((element, vertex)) => Err(Error::NotEquivariant { element, vertex }),
        }
    }

    /// The induced map of barycentric subdivisions.
    pub fn subdivide(&self) -> GMap {
        let (sd_source, _) = self.source.barycentric_subdivision();
        let (sd_target, _) = self.target.barycentric_subdivision();
        let vertices = (0..self.source.n_simplices())
            .map(|i| self.image(i))
            .collect();
        GMap::new(sd_source, sd_target, vertices)
            .expect("subdivision of a simplicial map is simplicial")
    }

    /// Subdivides source and target together until both are regular.
    pub fn regularize(&self) -> Result<GMap> {
        let mut f = self.clone();
        for _ in 0..2 {
            if f.source.is_regular() && f.target.is_regular() {
                return Ok(f);
            }
            f = f.subdivide();
        }
        for x in [&f.source, &f.target] {
            if let Some(i) = x.first_irregular() {
                return Err(Error::NotRegular(x.simplex(i).clone()));
            }
        }
        Ok(f)
    }

    /// First source simplex whose isotropy differs from that of its image.
    /// Only meaningful on regular complexes.
    pub fn isovariance_failure(&self) -> Option<usize> {
        (0..self.source.n_simplices())
            .find(|&i| self.source.isotropy(i) != self.target.isotropy(self.image(i)))
    }

    /// Compares pointwise stabilizers simplexwise, after subdividing if the
    /// complexes are not regular.
    pub fn is_isovariant(&self) -> Result<bool> {
        self.require_equivariant()?;
        let f = self.regularize()?;
        Ok(f.isovariance_failure().is_none())
    }

    fn require_isovariant(&self) -> Result<()> {
        self.require_equivariant()?;
        if let Some(i) = self.isovariance_failure() {
            return Err(Error::NotIsovariant(self.source.simplex(i).clone()));
        }
        Ok(())
    }
}

/// The restriction of an isovariant map to one isotropy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumMap {
    pub class: usize,
    pub name: String,
    /// Source simplex to target simplex on the exact stratum `X_(H)`.
    pub exact: BTreeMap<usize, usize>,
    /// Vertex map on the fixed subcomplex `X^H` of the class representative.
    pub fixed: BTreeMap<usize, usize>,
}

pub fn stratum_maps(f: &GMap) -> Result<Vec<StratumMap>> {
    f.require_isovariant()?;
    let x = &f.source;
    let lat = x.group().lattice();
    let mut out = vec![];
    for s in x.strata() {
        let exact = s.simplices.iter().map(|&i| (i, f.image(i))).collect();
        let fixed_sub = x.fixed_subcomplex(lat.representative(s.class));
        let fixed = fixed_sub
            .vertices(x)
            .into_iter()
            .map(|v| (v, f.vertices[v]))
            .collect();
        out.push(StratumMap {
            class: s.class,
            name: lat.class_name(s.class).to_string(),
            exact,
            fixed,
        });
    }
    Ok(out)
}

/// Simplices of isotropy class `h0` having a face of isotropy class `h1`,
/// joined when one is a face of the other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    pub h0: usize,
    pub h1: usize,
    pub nodes: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    /// Components as lists of simplex indices, ordered by smallest member.
    pub components: Vec<Vec<usize>>,
    /// Number of G-orbits of components.
    pub component_orbits: usize,
}

/// Connected components of a set of simplices under the face relation.
fn face_components(
    x: &GComplex,
    nodes: &BTreeSet<usize>,
) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
    let list: Vec<usize> = nodes.iter().copied().collect();
    let pos: BTreeMap<usize, usize> = list.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut parent: Vec<usize> = (0..list.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut i = i;
        while p[i] != r {
            let n = p[i];
            p[i] = r;
            i = n;
        }
        r
    }
    let mut edges = vec![];
    for &s in &list {
        for face in x.all_faces(s) {
            if face != s {
                if let Some(&j) = pos.get(&face) {
                    edges.push((face, s));
                    let (a, b) = (find(&mut parent, pos[&s]), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &s) in list.iter().enumerate() {
        let r = find(&mut parent, i);
        groups.entry(r).or_default().push(s);
    }
    let mut comps: Vec<Vec<usize>> = groups.into_values().collect();
    comps.sort();
    edges.sort();
    (edges, comps)
}

fn component_orbit_count(x: &GComplex, comps: &[Vec<usize>]) -> usize {
    let mut comp_of = BTreeMap::new();
    for (c, comp) in comps.iter().enumerate() {
        for &s in comp {
            comp_of.insert(s, c);
        }
    }
    let mut seen = vec![false; comps.len()];
    let mut orbits = 0;
    for c in 0..comps.len() {
        if seen[c] {
            continue;
        }
        orbits += 1;
        for g in x.group().elements() {
            seen[comp_of[&x.act_index(g, comps[c][0])]] = true;
        }
    }
    orbits
}

pub fn link_graph(x: &GComplex, h0: usize, h1: usize) -> LinkGraph {
    let nodes: BTreeSet<usize> = (0..x.n_simplices())
        .filter(|&i| {
            x.isotropy_class(i) == h0 && x.all_faces(i).iter().any(|&f| x.isotropy_class(f) == h1)
        })
        .collect();
    let (edges, components) = face_components(x, &nodes);
    let component_orbits = component_orbit_count(x, &components);
    LinkGraph {
        h0,
        h1,
        nodes: nodes.into_iter().collect(),
        edges,
        components,
        component_orbits,
    }
}

/// Components of the exact stratum of class `h`.
pub fn stratum_components(x: &GComplex, h: usize) -> Vec<Vec<usize>> {
    let nodes: BTreeSet<usize> = (0..x.n_simplices())
        .filter(|&i| x.isotropy_class(i) == h)
        .collect();
    face_components(x, &nodes).1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi0Item {
    /// `"stratum"` or `"link"`.
    pub kind: String,
    /// Class names: one for a stratum, `[H0, H1]` for a link.
    pub classes: Vec<String>,
    pub source_components: usize,
    pub target_components: usize,
    pub bijective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pi0Report {
    pub items: Vec<Pi0Item>,
    pub passed: bool,
    pub summary: String,
}

/// Whether `map` (component index to component index) is a bijection.
fn induced_bijection(
    src: &[Vec<usize>],
    tgt: &[Vec<usize>],
    image: impl Fn(usize) -> usize,
) -> bool {
    let mut tgt_comp = BTreeMap::new();
    for (c, comp) in tgt.iter().enumerate() {
        for &s in comp {
            tgt_comp.insert(s, c);
        }
    }
    let mut hit = vec![false; tgt.len()];
    for comp in src {
        let Some(&c) = tgt_comp.get(&image(comp[0])) else {
            return false;
        };
        if hit[c] {
            return false;
        }
        hit[c] = true;
    }
    hit.iter().all(|&h| h)
}

/// Necessary conditions for an isovariant weak equivalence on components
/// of strata and of 1-dimensional link data. A failure certifies that `f`
/// is not an isovariant weak equivalence; a pass proves nothing more.
pub fn pi0_link_check(f: &GMap) -> Result<Pi0Report> {
    f.require_isovariant()?;
    let (x, y) = (&f.source, &f.target);
    let lat = x.group().lattice();
    let classes: BTreeSet<usize> = x
        .isotropy_classes()
        .into_iter()
        .chain(y.isotropy_classes())
        .collect();
    let mut items = vec![];
    for &h in &classes {
        let (sc, tc) = (stratum_components(x, h), stratum_components(y, h));
        items.push(Pi0Item {
            kind: "stratum".into(),
            classes: vec![lat.class_name(h).to_string()],
            source_components: sc.len(),
            target_components: tc.len(),
            bijective: induced_bijection(&sc, &tc, |s| f.image(s)),
        });
    }
    for &h0 in &classes {
        for &h1 in &classes {
            if !lat.is_properly_subconjugate(h0, h1) {
                continue;
            }
            let (gs, gt) = (link_graph(x, h0, h1), link_graph(y, h0, h1));
            items.push(Pi0Item {
                kind: "link".into(),
                classes: vec![
                    lat.class_name(h0).to_string(),
                    lat.class_name(h1).to_string(),
                ],
                source_components: gs.components.len(),
                target_components: gt.components.len(),
                bijective: induced_bijection(&gs.components, &gt.components, |s| f.image(s)),
            });
        }
    }
    let passed = items.iter().all(|i| i.bijective);
    let summary = if passed {
        "necessary conditions hold; sufficiency is not decided".to_string()
    } else {
        "not an isovariant weak equivalence".to_string()
    };
    Ok(Pi0Report {
        items,
        passed,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use std::sync::Arc;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn non_simplicial_rejected() {
        let g = c2();
        let x = GComplex::with_trivial_action(g.clone(), 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let r = GMap::new(x.clone(), x.clone(), vec![0, 2, 0]);
        assert!(matches!(r, Err(Error::NotSimplicial(_))));
    }

    #[test]
    fn free_orbit_into_two_orbits_fails_pi0() {
        let g = c2();
        let one =
            GComplex::from_partial_action(g.clone(), 2, vec![vec![0], vec![1]], &[(1, vec![1, 0])])
                .unwrap();
        let two = GComplex::from_partial_action(
            g.clone(),
            4,
            vec![vec![0], vec![1], vec![2], vec![3]],
            &[(1, vec![1, 0, 3, 2])],
        )
        .unwrap();
        let f = GMap::new(one, two, vec![0, 1]).unwrap();
        assert!(f.is_isovariant().unwrap());
        let r = pi0_link_check(&f).unwrap();
        assert!(!r.passed);
        assert_eq!(
            (r.items[0].source_components, r.items[0].target_components),
            (2, 4)
        );
    }

    #[test]
    fn inconsistent_map_is_not_equivariant() {
        let g = c2();
        let l = GComplex::from_partial_action(
            g.clone(),
            3,
            vec![vec![0, 2], vec![1, 2]],
            &[(1, vec![1, 0, 2])],
        )
        .unwrap();
        // free vertex 0 goes to the fixed vertex, its partner stays put
        let f = GMap::new(l.clone(), l, vec![2, 1, 2]).unwrap();
        assert!(!f.is_equivariant());
        assert!(matches!(
            f.is_isovariant(),
            Err(Error::NotEquivariant { .. })
        ));
    }
}
