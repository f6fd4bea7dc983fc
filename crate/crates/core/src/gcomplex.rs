//! Finite simplicial complexes with a simplicial group action.
//!
//! Simplices are sorted vertex lists. A complex stores every simplex once,
//! ordered by dimension then lexicographically, so a simplex is also
//! addressable by its index. Subcomplexes and strata are sets of such
//! indices.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{subconjugacy_total_order, Element, FiniteGroup, Subgroup};

pub type Simplex = Vec<usize>;

/// A set of simplices of a fixed complex, by index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Subcomplex {
    pub simplices: BTreeSet<usize>,
}

impl Subcomplex {
    pub fn new(simplices: BTreeSet<usize>) -> Self {
        Subcomplex { simplices }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.simplices.contains(&idx)
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex {
            simplices: self.simplices.union(&other.simplices).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex {
            simplices: self
                .simplices
                .intersection(&other.simplices)
                .copied()
                .collect(),
        }
    }

    /// Vertices of the 0-simplices in this set.
    pub fn vertices(&self, x: &GComplex) -> Vec<usize> {
        self.simplices
            .iter()
            .filter(|&&i| x.simplex(i).len() == 1)
            .map(|&i| x.simplex(i)[0])
            .collect()
    }

    /// Highest simplex dimension, or `None` if empty.
    pub fn dim(&self, x: &GComplex) -> Option<usize> {
        self.simplices.iter().map(|&i| x.simplex(i).len() - 1).max()
    }

    pub fn is_closed(&self, x: &GComplex) -> bool {
        self.simplices
            .iter()
            .all(|&i| x.faces(i).iter().all(|f| self.simplices.contains(f)))
    }

    pub fn as_simplices(&self, x: &GComplex) -> Vec<Simplex> {
        self.simplices
            .iter()
            .map(|&i| x.simplex(i).clone())
            .collect()
    }
}

/// Simplices whose pointwise stabilizer lies in one conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    /// Index of the class in the group's subgroup lattice.
    pub class: usize,
    pub simplices: BTreeSet<usize>,
}

/// Nested closed invariant subcomplexes `M_1 ⊆ ... ⊆ M_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    /// Isotropy classes in the order used to build the levels.
    pub order: Vec<usize>,
    pub levels: Vec<Subcomplex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionCondition {
    pub class: String,
    pub dim: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapCondition {
    /// The smaller isotropy class.
    pub lower: String,
    /// The larger isotropy class.
    pub upper: String,
    pub gap: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    /// Dimension used for each isotropy class, by name.
    pub dims: BTreeMap<String, usize>,
    pub dimension_conditions: Vec<DimensionCondition>,
    pub gap_conditions: Vec<GapCondition>,
    pub dim_at_least_3: bool,
    pub gap_at_least_2: bool,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.dim_at_least_3 && self.gap_at_least_2
    }

    /// First failing condition, described in words.
    pub fn first_failure(&self) -> Option<String> {
        if let Some(c) = self.dimension_conditions.iter().find(|c| !c.holds) {
            return Some(format!("dim X^{} = {} < 3", c.class, c.dim));
        }
        self.gap_conditions
            .iter()
            .find(|c| !c.holds)
            .map(|c| format!("dim X^{} - dim X^{} = {} < 2", c.lower, c.upper, c.gap))
    }
}

/// The quotient of a complex by its group action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitComplex {
    pub n_vertices: usize,
    pub facets: Vec<Simplex>,
    /// Orbit index of each vertex of the original complex.
    pub quotient: Vec<usize>,
}

/// A simplicial complex with a simplicial action of a finite group.
#[derive(Clone, Debug)]
pub struct GComplex {
    group: Arc<FiniteGroup>,
    n_vertices: usize,
    facets: Vec<Simplex>,
    simplices: Vec<Simplex>,
    index: HashMap<Simplex, usize>,
    action: Vec<Vec<usize>>,
    isotropy: Vec<Subgroup>,
}

impl PartialEq for GComplex {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group
            && self.n_vertices == other.n_vertices
            && self.facets == other.facets
            && self.action == other.action
    }
}

impl Eq for GComplex {}

impl GComplex {
    /// Builds a complex from facets and one vertex permutation per group
    /// element. Non-maximal facets in the input are dropped.
    pub fn new(
        group: Arc<FiniteGroup>,
        n_vertices: usize,
        facets: Vec<Vec<usize>>,
        action: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::InvalidComplex(format!(
                "action lists {} permutations for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for (g, p) in action.iter().enumerate() {
            let mut seen = vec![false; n_vertices];
            if p.len() != n_vertices
                || p.iter()
                    .any(|&v| v >= n_vertices || std::mem::replace(&mut seen[v], true))
            {
                return Err(Error::InvalidComplex(format!(
                    "action of element {g} is not a vertex permutation"
                )));
            }
        }
        if action[0].iter().enumerate().any(|(i, &v)| i != v) {
            return Err(Error::InvalidComplex(
                "identity element acts nontrivially".into(),
            ));
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                if (0..n_vertices).any(|v| action[ab][v] != action[a][action[b][v]]) {
                    return Err(Error::InvalidComplex(format!(
                        "action is not a homomorphism at ({a},{b})"
                    )));
                }
            }
        }

        let mut normalized: BTreeSet<Simplex> = BTreeSet::new();
        for f in facets {
            let set: BTreeSet<usize> = f.iter().copied().collect();
            if set.is_empty() {
                return Err(Error::InvalidComplex("empty facet".into()));
            }
            if set.len() != f.len() {
                return Err(Error::InvalidComplex(format!(
                    "facet {f:?} repeats a vertex"
                )));
            }
            if let Some(&v) = set.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::InvalidComplex(format!("vertex {v} out of range")));
            }
            normalized.insert(set.into_iter().collect());
        }
        let mut all: BTreeSet<Simplex> = BTreeSet::new();
        for f in &normalized {
            if f.len() > 24 {
                return Err(Error::InvalidComplex(format!(
                    "facet of dimension {} is too large",
                    f.len() - 1
                )));
            }
            for mask in 1u32..(1u32 << f.len()) {
                all.insert(
                    f.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect(),
                );
            }
        }
        let covered: BTreeSet<usize> = all.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect();
        if covered.len() != n_vertices {
            let missing = (0..n_vertices).find(|v| !covered.contains(v)).unwrap();
            return Err(Error::InvalidComplex(format!(
                "vertex {missing} lies in no facet"
            )));
        }
        let mut simplices: Vec<Simplex> = all.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let index: HashMap<Simplex, usize> = simplices
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();

        let mut non_maximal = vec![false; simplices.len()];
        for s in &simplices {
            if s.len() > 1 {
                for k in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(k);
                    non_maximal[index[&face]] = true;
                }
            }
        }
        let facets: Vec<Simplex> = simplices
            .iter()
            .enumerate()
            .filter(|(i, _)| !non_maximal[*i])
            .map(|(_, s)| s.clone())
            .collect();

        for (g, p) in action.iter().enumerate() {
            for f in &facets {
                let mut img: Simplex = f.iter().map(|&v| p[v]).collect();
                img.sort_unstable();
                if !index.contains_key(&img) {
                    return Err(Error::InvalidComplex(format!(
                        "element {g} maps simplex {f:?} to a non-simplex"
                    )));
                }
            }
        }

        let isotropy = simplices
            .iter()
            .map(|s| {
                let elems: Vec<Element> = group
                    .elements()
                    .filter(|&g| s.iter().all(|&v| action[g][v] == v))
                    .collect();
                Subgroup::from_sorted(elems)
            })
            .collect();

        Ok(GComplex {
            group,
            n_vertices,
            facets,
            simplices,
            index,
            action,
            isotropy,
        })
    }

    /// Builds the action from permutations for some elements (typically
    /// generators) by closing under composition.
    pub fn from_partial_action(
        group: Arc<FiniteGroup>,
        n_vertices: usize,
        facets: Vec<Vec<usize>>,
        partial: &[(Element, Vec<usize>)],
    ) -> Result<Self> {
        let n = group.order();
        let mut action: Vec<Option<Vec<usize>>> = vec![None; n];
        action[0] = Some((0..n_vertices).collect());
        for (g, p) in partial {
            if *g >= n {
                return Err(Error::InvalidComplex(format!(
                    "group element {g} out of range"
                )));
            }
            if p.len() != n_vertices || p.iter().any(|&v| v >= n_vertices) {
                return Err(Error::InvalidComplex(format!(
                    "action of element {g} is not a vertex permutation"
                )));
            }
            if let Some(existing) = &action[*g] {
                if existing != p {
                    return Err(Error::InvalidComplex(format!(
                        "conflicting permutations for element {g}"
                    )));
                }
            }
            action[*g] = Some(p.clone());
        }
        let mut changed = true;
        while changed {
            changed = false;
            let known: Vec<Element> = (0..n).filter(|&g| action[g].is_some()).collect();
            for &a in &known {
                for &b in &known {
                    let ab = group.mul(a, b);
                    let pa = action[a].as_ref().unwrap();
                    let pb = action[b].as_ref().unwrap();
                    let p: Vec<usize> = (0..n_vertices).map(|v| pa[pb[v]]).collect();
                    match &action[ab] {
                        None => {
                            action[ab] = Some(p);
                            changed = true;
                        }
                        Some(q) if *q != p => {
                            return Err(Error::InvalidComplex(format!(
                                "action is not a homomorphism at ({a},{b})"
                            )));
                        }
                        _ => {}
                    }
                }
            }
        }
        let action: Option<Vec<Vec<usize>>> = action.into_iter().collect();
        let action = action.ok_or_else(|| {
            Error::InvalidComplex("given permutations do not generate the group".into())
        })?;
        Self::new(group, n_vertices, facets, action)
    }

    pub fn with_trivial_action(
        group: Arc<FiniteGroup>,
        n_vertices: usize,
        facets: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let action = vec![(0..n_vertices).collect(); group.order()];
        Self::new(group, n_vertices, facets, action)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn n_simplices(&self) -> usize {
        self.simplices.len()
    }

    pub fn simplex(&self, idx: usize) -> &Simplex {
        &self.simplices[idx]
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Index of a simplex given by an unsorted vertex list.
    pub fn find(&self, s: &[usize]) -> Option<usize> {
        let mut v = s.to_vec();
        v.sort_unstable();
        v.dedup();
        self.index_of(&v)
    }

    pub fn vertex_index(&self, v: usize) -> usize {
        self.index[&vec![v]]
    }

    pub fn dim(&self) -> usize {
        self.facets.iter().map(|f| f.len() - 1).max().unwrap_or(0)
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    #[inline]
    pub fn act_vertex(&self, g: Element, v: usize) -> usize {
        self.action[g][v]
    }

    pub fn act_simplex(&self, g: Element, s: &[usize]) -> Simplex {
        let mut img: Simplex = s.iter().map(|&v| self.action[g][v]).collect();
        img.sort_unstable();
        img
    }

    pub fn act_index(&self, g: Element, idx: usize) -> usize {
        self.index[&self.act_simplex(g, &self.simplices[idx])]
    }

    /// Codimension-one faces, by index.
    pub fn faces(&self, idx: usize) -> Vec<usize> {
        let s = &self.simplices[idx];
        if s.len() == 1 {
            return vec![];
        }
        (0..s.len())
            .map(|k| {
                let mut f = s.clone();
                f.remove(k);
                self.index[&f]
            })
            .collect()
    }

    /// All nonempty faces including the simplex itself.
    pub fn all_faces(&self, idx: usize) -> Vec<usize> {
        let s = &self.simplices[idx];
        (1u32..(1u32 << s.len()))
            .map(|mask| {
                let f: Simplex = s
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                self.index[&f]
            })
            .collect()
    }

    /// Pointwise stabilizer; on a regular complex this is the isotropy of
    /// every interior point.
    pub fn isotropy(&self, idx: usize) -> &Subgroup {
        &self.isotropy[idx]
    }

    pub fn vertex_isotropy(&self, v: usize) -> &Subgroup {
        &self.isotropy[self.vertex_index(v)]
    }

    pub fn setwise_stabilizer(&self, idx: usize) -> Subgroup {
        let s = &self.simplices[idx];
        let elems = self
            .group
            .elements()
            .filter(|&g| self.act_simplex(g, s) == *s)
            .collect();
        Subgroup::from_sorted(elems)
    }

    /// First simplex fixed setwise but not pointwise by some element.
    pub fn first_irregular(&self) -> Option<usize> {
        (0..self.simplices.len()).find(|&i| {
            let s = &self.simplices[i];
            s.len() > 1
                && self
                    .group
                    .elements()
                    .any(|g| !self.isotropy[i].contains(g) && self.act_simplex(g, s) == *s)
        })
    }

    pub fn is_regular(&self) -> bool {
        self.first_irregular().is_none()
    }

    /// Barycentric subdivision. Vertex `i` of the result is the barycenter
    /// of simplex `i` of `self`; the returned vector maps new vertices to
    /// their carrier simplices.
    pub fn barycentric_subdivision(&self) -> (GComplex, Vec<Simplex>) {
        let mut facets: Vec<Vec<usize>> = vec![];
        for f in &self.facets {
            for_each_permutation(f.len(), &mut |perm| {
                let mut chain = Vec::with_capacity(perm.len());
                let mut face: Simplex = vec![];
                for &k in perm {
                    face.push(f[k]);
                    face.sort_unstable();
                    chain.push(self.index[&face]);
                }
                facets.push(chain);
            });
        }
        let action: Vec<Vec<usize>> = self
            .group
            .elements()
            .map(|g| {
                (0..self.simplices.len())
                    .map(|i| self.act_index(g, i))
                    .collect()
            })
            .collect();
        let sd = GComplex::new(self.group.clone(), self.simplices.len(), facets, action)
            .expect("subdivision of a valid complex is valid");
        (sd, self.simplices.clone())
    }

    /// Subdivides until the action is regular, at most twice. Returns the
    /// regular complex and the carrier map of each subdivision applied.
    pub fn make_regular_with_carriers(&self) -> Result<(GComplex, Vec<Vec<Simplex>>)> {
        let mut current = self.clone();
        let mut carriers = vec![];
        for _ in 0..2 {
            if current.is_regular() {
                return Ok((current, carriers));
            }
            let (sd, carrier) = current.barycentric_subdivision();
            carriers.push(carrier);
            current = sd;
        }
        match current.first_irregular() {
            None => Ok((current, carriers)),
            Some(i) => Err(Error::NotRegular(current.simplex(i).clone())),
        }
    }

    pub fn make_regular(&self) -> Result<GComplex> {
        self.make_regular_with_carriers().map(|(x, _)| x)
    }

    fn require_regular(&self) -> Result<()> {
        match self.first_irregular() {
            None => Ok(()),
            Some(i) => Err(Error::NotRegular(self.simplex(i).clone())),
        }
    }

    /// Simplices fixed pointwise by `h`.
    pub fn fixed_subcomplex(&self, h: &Subgroup) -> Subcomplex {
        Subcomplex::new(
            (0..self.simplices.len())
                .filter(|&i| h.is_subgroup_of(&self.isotropy[i]))
                .collect(),
        )
    }

    /// Simplices whose isotropy is conjugate to `h`.
    pub fn exact_stratum(&self, h: &Subgroup) -> Result<Stratum> {
        let lat = self.group.lattice();
        let class = lat
            .class_of(h)
            .ok_or_else(|| Error::UnknownSubgroup(h.to_string()))?;
        let simplices = (0..self.simplices.len())
            .filter(|&i| lat.class_of(&self.isotropy[i]) == Some(class))
            .collect();
        Ok(Stratum { class, simplices })
    }

    /// Simplices whose isotropy is exactly `h` (not merely conjugate).
    pub fn exact_isotropy_set(&self, h: &Subgroup) -> BTreeSet<usize> {
        (0..self.simplices.len())
            .filter(|&i| self.isotropy[i] == *h)
            .collect()
    }

    /// Lattice class index of the isotropy of each simplex.
    pub fn isotropy_class(&self, idx: usize) -> usize {
        self.group
            .lattice()
            .class_of(&self.isotropy[idx])
            .expect("isotropy is a subgroup")
    }

    /// Isotropy classes that occur, ascending.
    pub fn isotropy_classes(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = (0..self.simplices.len())
            .map(|i| self.isotropy_class(i))
            .collect();
        set.into_iter().collect()
    }

    /// Nonempty strata, ascending by class.
    pub fn strata(&self) -> Vec<Stratum> {
        let mut by_class: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for i in 0..self.simplices.len() {
            by_class
                .entry(self.isotropy_class(i))
                .or_default()
                .insert(i);
        }
        by_class
            .into_iter()
            .map(|(class, simplices)| Stratum { class, simplices })
            .collect()
    }

    /// The smallest closed subcomplex containing the given simplices.
    pub fn closure(&self, simplices: &BTreeSet<usize>) -> Subcomplex {
        let mut out = BTreeSet::new();
        for &i in simplices {
            out.extend(self.all_faces(i));
        }
        Subcomplex::new(out)
    }

    pub fn stratum_closure(&self, s: &Stratum) -> Subcomplex {
        self.closure(&s.simplices)
    }

    /// `X^{(H)}`: simplices fixed by some conjugate of `h`.
    pub fn fixed_by_class(&self, class: usize) -> Subcomplex {
        let lat = self.group.lattice();
        let members: Vec<&Subgroup> = lat.classes()[class]
            .members
            .iter()
            .map(|&m| &lat.subgroups()[m])
            .collect();
        Subcomplex::new(
            (0..self.simplices.len())
                .filter(|&i| members.iter().any(|h| h.is_subgroup_of(&self.isotropy[i])))
                .collect(),
        )
    }

    /// `M_k = X^{(H_1)} ∪ ... ∪ X^{(H_k)}` over the occurring isotropy
    /// classes, largest first.
    pub fn filtration(&self) -> Result<Filtration> {
        self.require_regular()?;
        let order = subconjugacy_total_order(&self.group, &self.isotropy_classes());
        let mut levels: Vec<Subcomplex> = vec![];
        let mut acc = Subcomplex::default();
        for &c in &order {
            acc = acc.union(&self.fixed_by_class(c));
            levels.push(acc.clone());
        }
        Ok(Filtration { order, levels })
    }

    /// Dimension and codimension conditions on fixed sets. `dims` maps
    /// class names to manifold dimensions of `X^H`; classes not listed use
    /// the simplicial dimension of the fixed subcomplex.
    pub fn check_hypotheses(&self, dims: &BTreeMap<String, usize>) -> Result<HypothesisReport> {
        let lat = self.group.lattice();
        let classes = self.isotropy_classes();
        for name in dims.keys() {
            let known = lat.class_by_name(name).or_else(|| {
                self.group
                    .parse_subgroup(name)
                    .ok()
                    .and_then(|h| lat.class_of(&h))
            });
            match known {
                Some(c) if classes.contains(&c) => {}
                _ => return Err(Error::MissingStratum(name.clone())),
            }
        }
        let lookup = |c: usize| -> usize {
            let name = lat.class_name(c);
            if let Some(&d) = dims.get(name) {
                return d;
            }
            for (k, &d) in dims {
                let kc = lat.class_by_name(k).or_else(|| {
                    self.group
                        .parse_subgroup(k)
                        .ok()
                        .and_then(|h| lat.class_of(&h))
                });
                if kc == Some(c) {
                    return d;
                }
            }
            self.fixed_subcomplex(lat.representative(c))
                .dim(self)
                .unwrap_or(0)
        };
        let used: BTreeMap<usize, usize> = classes.iter().map(|&c| (c, lookup(c))).collect();
        let dimension_conditions: Vec<DimensionCondition> = classes
            .iter()
            .map(|&c| DimensionCondition {
                class: lat.class_name(c).to_string(),
                dim: used[&c],
                holds: used[&c] >= 3,
            })
            .collect();
        let mut gap_conditions = vec![];
        for &lo in &classes {
            for &hi in &classes {
                if lat.is_properly_subconjugate(lo, hi) {
                    let gap = used[&lo] as i64 - used[&hi] as i64;
                    gap_conditions.push(GapCondition {
                        lower: lat.class_name(lo).to_string(),
                        upper: lat.class_name(hi).to_string(),
                        gap,
                        holds: gap >= 2,
                    });
                }
            }
        }
        Ok(HypothesisReport {
            dims: used
                .iter()
                .map(|(&c, &d)| (lat.class_name(c).to_string(), d))
                .collect(),
            dim_at_least_3: dimension_conditions.iter().all(|c| c.holds),
            gap_at_least_2: gap_conditions.iter().all(|c| c.holds),
            dimension_conditions,
            gap_conditions,
        })
    }

    /// Distinct isotropy subgroups that occur (not up to conjugacy).
    pub fn isotropy_subgroups(&self) -> Vec<Subgroup> {
        let set: BTreeSet<&Subgroup> = self.isotropy.iter().collect();
        set.into_iter().cloned().collect()
    }

    /// All isotropy subgroups normal, and the isotropy subgroups below each
    /// one totally ordered by inclusion.
    pub fn is_treelike(&self) -> bool {
        let iso = self.isotropy_subgroups();
        if !iso.iter().all(|h| self.group.is_normal(h)) {
            return false;
        }
        iso.iter().all(|h| {
            let below: Vec<&Subgroup> = iso.iter().filter(|k| k.is_subgroup_of(h)).collect();
            below.iter().all(|a| {
                below
                    .iter()
                    .all(|b| a.is_subgroup_of(b) || b.is_subgroup_of(a))
            })
        })
    }

    /// Vertex orbits, each sorted, ordered by smallest member.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n_vertices];
        let mut out = vec![];
        for v in 0..self.n_vertices {
            if !seen[v] {
                let orbit: BTreeSet<usize> =
                    self.group.elements().map(|g| self.action[g][v]).collect();
                for &w in &orbit {
                    seen[w] = true;
                }
                out.push(orbit.into_iter().collect());
            }
        }
        out
    }

    /// Orbit of a simplex under the action, as sorted simplex indices.
    pub fn simplex_orbit(&self, idx: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .group
            .elements()
            .map(|g| self.act_index(g, idx))
            .collect();
        set.into_iter().collect()
    }

    /// Orbits of simplices, each sorted, ordered by smallest member.
    pub fn simplex_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.simplices.len()];
        let mut out = vec![];
        for i in 0..self.simplices.len() {
            if !seen[i] {
                let orbit = self.simplex_orbit(i);
                for &j in &orbit {
                    seen[j] = true;
                }
                out.push(orbit);
            }
        }
        out
    }

    pub fn orbit_complex(&self) -> Result<OrbitComplex> {
        self.require_regular()?;
        let orbits = self.vertex_orbits();
        let mut quotient = vec![0; self.n_vertices];
        for (k, o) in orbits.iter().enumerate() {
            for &v in o {
                quotient[v] = k;
            }
        }
        let mut facets: BTreeSet<Simplex> = BTreeSet::new();
        for f in &self.facets {
            let img: BTreeSet<usize> = f.iter().map(|&v| quotient[v]).collect();
            if img.len() != f.len() {
                return Err(Error::NotEquivariantTriangulation(f.clone()));
            }
            facets.insert(img.into_iter().collect());
        }
        // Images of facets can be faces of other images; keep maximal ones.
        let all: Vec<Simplex> = facets.iter().cloned().collect();
        let maximal = all
            .iter()
            .filter(|s| {
                !all.iter()
                    .any(|t| t.len() > s.len() && s.iter().all(|v| t.contains(v)))
            })
            .cloned()
            .collect();
        Ok(OrbitComplex {
            n_vertices: orbits.len(),
            facets: maximal,
            quotient,
        })
    }

    /// Euler characteristic of a set of simplices.
    pub fn euler_characteristic_of(&self, set: &BTreeSet<usize>) -> i64 {
        set.iter()
            .map(|&i| {
                if self.simplices[i].len() % 2 == 1 {
                    1
                } else {
                    -1
                }
            })
            .sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .map(|s| if s.len() % 2 == 1 { 1i64 } else { -1 })
            .sum()
    }
}

/// Calls `f` with every permutation of `0..n` in lexicographic order.
pub(crate) fn for_each_permutation(n: usize, f: &mut dyn FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        f(&perm);
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    fn swapped_edge() -> GComplex {
        GComplex::from_partial_action(c2(), 2, vec![vec![0, 1]], &[(1, vec![1, 0])]).unwrap()
    }

    fn hexagon_antipodal() -> GComplex {
        let facets = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
        GComplex::from_partial_action(
            c2(),
            6,
            facets,
            &[(1, (0..6).map(|i| (i + 3) % 6).collect())],
        )
        .unwrap()
    }

    #[test]
    fn swapped_edge_needs_subdivision() {
        let x = swapped_edge();
        assert!(!x.is_regular());
        let (r, carriers) = x.make_regular_with_carriers().unwrap();
        assert_eq!(carriers.len(), 1);
        assert_eq!(r.n_vertices(), 3);
        assert_eq!(r.facets().len(), 2);
        // the barycenter of the edge is the only fixed vertex
        let fixed = r.fixed_subcomplex(&r.group().whole());
        assert_eq!(fixed.as_simplices(&r), vec![vec![2]]);
    }

    #[test]
    fn hexagon_is_regular_and_orbit_complex_is_triangle() {
        let x = hexagon_antipodal();
        assert!(x.is_regular());
        assert_eq!(x.make_regular().unwrap(), x);
        let q = x.orbit_complex().unwrap();
        assert_eq!(q.n_vertices, 3);
        assert_eq!(q.facets, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert!(x.fixed_subcomplex(&x.group().whole()).is_empty());
    }

    #[test]
    fn trivial_action_strata() {
        let x = GComplex::with_trivial_action(c2(), 3, vec![vec![0, 1, 2]]).unwrap();
        let e = x.group().trivial_subgroup();
        assert!(x.exact_stratum(&e).unwrap().simplices.is_empty());
        assert_eq!(x.fixed_subcomplex(&e).len(), 7);
        let f = x.filtration().unwrap();
        assert_eq!(f.levels.len(), 1);
        assert!(x.is_treelike());
        assert_eq!(x.orbit_complex().unwrap().facets, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(GComplex::new(c2(), 2, vec![vec![0, 1]], vec![vec![0, 1]]).is_err());
        assert!(GComplex::new(c2(), 2, vec![vec![0, 1]], vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(GComplex::new(c2(), 3, vec![vec![0, 1]], vec![vec![0, 1, 2]; 2]).is_err());
        // not a homomorphism: order-2 element acting by a 3-cycle
        let bad = GComplex::new(
            c2(),
            3,
            vec![vec![0, 1, 2]],
            vec![vec![0, 1, 2], vec![1, 2, 0]],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn non_maximal_facets_dropped() {
        let x = GComplex::with_trivial_action(c2(), 3, vec![vec![0, 1, 2], vec![0, 1]]).unwrap();
        assert_eq!(x.facets(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn hypothesis_arithmetic() {
        let x = swapped_edge().make_regular().unwrap();
        let dims =
            |e: usize, c: usize| BTreeMap::from([("e".to_string(), e), ("C2".to_string(), c)]);
        assert!(x.check_hypotheses(&dims(5, 3)).unwrap().holds());
        let r = x.check_hypotheses(&dims(4, 3)).unwrap();
        assert!(r.dim_at_least_3 && !r.gap_at_least_2);
        let missing = BTreeMap::from([("C3".to_string(), 1)]);
        assert!(matches!(
            x.check_hypotheses(&missing),
            Err(Error::MissingStratum(_))
        ));
    }

    #[test]
    fn permutations_enumerated() {
        let mut n = 0;
        for_each_permutation(4, &mut |_| n += 1);
        assert_eq!(n, 24);
    }
}
