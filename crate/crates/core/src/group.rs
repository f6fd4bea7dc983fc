//! Finite groups given by multiplication tables, their subgroup lattices,
//! conjugacy classes of subgroups and tables of marks.
//!
//! Every group is stored as a full Cayley table with element `0` as the
//! identity, so all later operations are table lookups. Groups given by
//! permutation generators are expanded to a table on construction.
//!
//! Subgroup enumeration starts from the cyclic subgroups and closes under
//! joins with cyclic subgroups. Every subgroup is the join of its cyclic
//! subgroups, so this reaches all of them. The cost is roughly
//! `#subgroups * #cyclic * |G|^2` table lookups, comfortable for `|G| <= 48`.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

pub type Element = usize;

/// A subgroup, stored as the sorted list of its elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup(Vec<Element>);

impl Subgroup {
    /// Wraps a sorted, duplicate-free element list without checking closure.
    pub(crate) fn from_sorted(elements: Vec<Element>) -> Self {
        Subgroup(elements)
    }

    pub fn elements(&self) -> &[Element] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, g: Element) -> bool {
        self.0.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.0.iter().all(|&g| other.contains(g))
    }

    pub fn is_proper_subgroup_of(&self, other: &Subgroup) -> bool {
        self.order() < other.order() && self.is_subgroup_of(other)
    }

    pub fn is_trivial(&self) -> bool {
        self.0.len() == 1
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

/// A strictly increasing chain `H_0 < H_1 < ... < H_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubgroupChain(Vec<Subgroup>);

impl SubgroupChain {
    pub fn new(groups: Vec<Subgroup>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::NotStrictChain("empty chain".into()));
        }
        for (i, w) in groups.windows(2).enumerate() {
            if !w[0].is_proper_subgroup_of(&w[1]) {
                return Err(Error::NotStrictChain(format!(
                    "{} is not a proper subgroup of {} (positions {} and {})",
                    w[0],
                    w[1],
                    i,
                    i + 1
                )));
            }
        }
        Ok(SubgroupChain(groups))
    }

    pub fn groups(&self) -> &[Subgroup] {
        &self.0
    }

    /// Number of strict inclusions, i.e. the dimension of the linking simplex.
    pub fn length(&self) -> usize {
        self.0.len() - 1
    }

    pub fn smallest(&self) -> &Subgroup {
        &self.0[0]
    }

    /// The subchain at the given (sorted, nonempty) positions.
    pub fn subchain(&self, positions: &[usize]) -> SubgroupChain {
        SubgroupChain(positions.iter().map(|&p| self.0[p].clone()).collect())
    }
}

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    /// Indices into [`SubgroupLattice::subgroups`], ascending. The first
    /// member is the class representative.
    pub members: Vec<usize>,
    pub order: usize,
    pub name: String,
}

impl SubgroupClass {
    pub fn representative(&self) -> usize {
        self.members[0]
    }
}

/// All subgroups of a group together with their conjugacy classes and the
/// subconjugacy relation between classes.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    subgroups: Vec<Subgroup>,
    index: HashMap<Subgroup, usize>,
    classes: Vec<SubgroupClass>,
    class_of: Vec<usize>,
    /// `subconj[a][b]`: some conjugate of class `a` is contained in class `b`.
    subconj: Vec<Vec<bool>>,
}

impl SubgroupLattice {
    /// Subgroups sorted by order, then lexicographically.
    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    /// Classes sorted by order, then by representative.
    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.index.get(h).copied()
    }

    pub fn class_of_index(&self, subgroup_index: usize) -> usize {
        self.class_of[subgroup_index]
    }

    pub fn class_of(&self, h: &Subgroup) -> Option<usize> {
        self.index_of(h).map(|i| self.class_of[i])
    }

    pub fn representative(&self, class: usize) -> &Subgroup {
        &self.subgroups[self.classes[class].representative()]
    }

    pub fn class_name(&self, class: usize) -> &str {
        &self.classes[class].name
    }

    pub fn class_by_name(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    /// Some conjugate of class `a` is contained in (a representative of) class `b`.
    pub fn is_subconjugate(&self, a: usize, b: usize) -> bool {
        self.subconj[a][b]
    }

    /// `(a) < (b)`: subconjugate and distinct classes.
    pub fn is_properly_subconjugate(&self, a: usize, b: usize) -> bool {
        a != b && self.subconj[a][b]
    }
}

/// A finite group given by its multiplication table; element `0` is the
/// identity and `table[i][j] = i * j`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    table: Vec<Vec<Element>>,
    inverse: Vec<Element>,
    lattice: OnceLock<SubgroupLattice>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for FiniteGroup {}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<Element>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has length {} (expected {n})",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!(
                    "entry {bad} in row {i} out of range"
                )));
            }
        }
        if (0..n).any(|i| table[0][i] != i || table[i][0] != i) {
            return Err(Error::InvalidGroup("element 0 is not the identity".into()));
        }
        let mut inverse = vec![usize::MAX; n];
        for i in 0..n {
            match (0..n).find(|&j| table[i][j] == 0) {
                Some(j) if table[j][i] == 0 => inverse[i] = j,
                _ => {
                    return Err(Error::InvalidGroup(format!(
                        "element {i} has no two-sided inverse"
                    )))
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails for ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            inverse,
            lattice: OnceLock::new(),
        })
    }

    /// Expands permutation generators on `{0..degree-1}` to a Cayley table.
    /// Elements are numbered in breadth-first order from the identity.
    pub fn from_permutations(degree: usize, generators: &[Vec<usize>]) -> Result<Self> {
        for (k, p) in generators.iter().enumerate() {
            let mut seen = vec![false; degree];
            if p.len() != degree
                || p.iter()
                    .any(|&x| x >= degree || std::mem::replace(&mut seen[x], true))
            {
                return Err(Error::InvalidGroup(format!(
                    "generator {k} is not a permutation of degree {degree}"
                )));
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let prod = compose(g, &elements[i]);
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(prod);
                }
            }
        }
        let table = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&compose(a, b)]).collect())
            .collect();
        Self::from_table(table)
    }

    pub fn trivial() -> Self {
        Self::from_table(vec![vec![0]]).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0);
        let table = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        Self::from_table(table).expect("cyclic group")
    }

    /// The dihedral group of order `2n` acting on an `n`-gon (`n >= 3`).
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3);
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(n, &[rot, refl]).expect("dihedral group")
    }

    pub fn symmetric(n: usize) -> Self {
        assert!(n >= 1);
        if n == 1 {
            return Self::trivial();
        }
        let mut gens = vec![];
        let mut swap: Vec<usize> = (0..n).collect();
        swap.swap(0, 1);
        gens.push(swap);
        if n > 2 {
            gens.push((0..n).map(|i| (i + 1) % n).collect());
        }
        Self::from_permutations(n, &gens).expect("symmetric group")
    }

    /// `a x b` with element `(i, j)` numbered `i * |b| + j`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let table = (0..na * nb)
            .map(|x| {
                (0..na * nb)
                    .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("direct product")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<Element>] {
        &self.table
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: Element) -> Element {
        self.inverse[a]
    }

    pub fn identity(&self) -> Element {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order()
    }

    pub fn element_order(&self, g: Element) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `g x g^-1`.
    pub fn conjugate_element(&self, g: Element, x: Element) -> Element {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `g H g^-1`.
    pub fn conjugate(&self, g: Element, h: &Subgroup) -> Subgroup {
        let mut v: Vec<Element> = h
            .elements()
            .iter()
            .map(|&x| self.conjugate_element(g, x))
            .collect();
        v.sort_unstable();
        Subgroup(v)
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.elements().all(|g| {
            h.elements()
                .iter()
                .all(|&x| h.contains(self.conjugate_element(g, x)))
        })
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup(self.elements().collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup(vec![0])
    }

    /// The subgroup generated by `gens`.
    pub fn generated(&self, gens: &[Element]) -> Subgroup {
        let mut members: BTreeSet<Element> = BTreeSet::from([0]);
        let mut queue: VecDeque<Element> = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if members.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        Subgroup(members.into_iter().collect())
    }

    /// Checks that `elements` form a subgroup.
    pub fn subgroup(&self, elements: &[Element]) -> Result<Subgroup> {
        let set: BTreeSet<Element> = elements.iter().copied().collect();
        if set.iter().any(|&x| x >= self.order()) {
            return Err(Error::InvalidGroup(format!(
                "element out of range in {elements:?}"
            )));
        }
        if !set.contains(&0) {
            return Err(Error::InvalidGroup(format!(
                "{elements:?} does not contain the identity"
            )));
        }
        for &a in &set {
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::InvalidGroup(format!(
                        "{elements:?} is not closed under multiplication"
                    )));
                }
            }
        }
        Ok(Subgroup(set.into_iter().collect()))
    }

    /// Left coset `g H` as a sorted list.
    pub fn left_coset(&self, g: Element, h: &Subgroup) -> Vec<Element> {
        let mut v: Vec<Element> = h.elements().iter().map(|&x| self.mul(g, x)).collect();
        v.sort_unstable();
        v
    }

    /// Left cosets of `h`, ordered by their smallest element; each coset is
    /// returned with that smallest element as representative.
    pub fn left_cosets(&self, h: &Subgroup) -> Vec<(Element, Vec<Element>)> {
        let mut seen = vec![false; self.order()];
        let mut out = vec![];
        for g in self.elements() {
            if !seen[g] {
                let coset = self.left_coset(g, h);
                for &x in &coset {
                    seen[x] = true;
                }
                out.push((g, coset));
            }
        }
        out
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        self.lattice.get_or_init(|| build_lattice(self))
    }

    /// Resolves a subgroup description: `e`, `1`, `G`, a class name such as
    /// `C2` or `C2_1`, a class index `#k`, or an explicit element set
    /// `{0,3}`. Class names resolve to the class representative.
    pub fn parse_subgroup(&self, spec: &str) -> Result<Subgroup> {
        let s = spec.trim();
        if s == "G" {
            return Ok(self.whole());
        }
        if s == "e" || s == "1" {
            return Ok(self.trivial_subgroup());
        }
        if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let elems: std::result::Result<Vec<usize>, _> = inner
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<usize>())
                .collect();
            let elems = elems.map_err(|_| Error::UnknownSubgroup(spec.to_string()))?;
            return self.subgroup(&elems);
        }
        let lat = self.lattice();
        if let Some(k) = s.strip_prefix('#') {
            let k: usize = k
                .parse()
                .map_err(|_| Error::UnknownSubgroup(spec.to_string()))?;
            if k < lat.classes().len() {
                return Ok(lat.representative(k).clone());
            }
            return Err(Error::UnknownSubgroup(spec.to_string()));
        }
        lat.class_by_name(s)
            .map(|c| lat.representative(c).clone())
            .ok_or_else(|| Error::UnknownSubgroup(spec.to_string()))
    }

    /// Parses `"H0<H1<...<Hn"`. Named classes are realised by conjugates
    /// chosen so that the chain is strict; the first such choice in
    /// lexicographic order is used.
    pub fn parse_chain(&self, spec: &str) -> Result<SubgroupChain> {
        let parts: Vec<&str> = spec.split('<').map(str::trim).collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(Error::Parse(format!("malformed chain `{spec}`")));
        }
        let lat = self.lattice();
        // Candidate subgroups per position: explicit sets are fixed, class
        // names range over the whole conjugacy class.
        let mut candidates: Vec<Vec<Subgroup>> = vec![];
        for p in &parts {
            let h = self.parse_subgroup(p)?;
            let explicit = p.starts_with('{');
            if explicit {
                candidates.push(vec![h]);
            } else {
                let class = lat.class_of(&h).expect("subgroup in lattice");
                candidates.push(
                    lat.classes()[class]
                        .members
                        .iter()
                        .map(|&i| lat.subgroups()[i].clone())
                        .collect(),
                );
            }
        }
        fn search(cands: &[Vec<Subgroup>], pos: usize, acc: &mut Vec<Subgroup>) -> bool {
            if pos == cands.len() {
                return true;
            }
            for h in &cands[pos] {
                if acc.last().is_none_or(|prev| prev.is_proper_subgroup_of(h)) {
                    acc.push(h.clone());
                    if search(cands, pos + 1, acc) {
                        return true;
                    }
                    acc.pop();
                }
            }
            false
        }
        let mut acc = vec![];
        if search(&candidates, 0, &mut acc) {
            SubgroupChain::new(acc)
        } else {
            Err(Error::NotStrictChain(format!(
                "no strict chain realises `{spec}`"
            )))
        }
    }

    /// Display name of a subgroup: its class name.
    pub fn subgroup_name(&self, h: &Subgroup) -> String {
        let lat = self.lattice();
        match lat.class_of(h) {
            Some(c) => lat.class_name(c).to_string(),
            None => h.to_string(),
        }
    }
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&x| p[x]).collect()
}

/// All subgroups, sorted by cardinality then lexicographically.
pub fn enumerate_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    g.lattice().subgroups().to_vec()
}

/// Conjugacy classes of subgroups; each inner list holds all conjugates.
pub fn conjugacy_classes_of_subgroups(g: &FiniteGroup) -> Vec<Vec<Subgroup>> {
    let lat = g.lattice();
    lat.classes()
        .iter()
        .map(|c| {
            c.members
                .iter()
                .map(|&i| lat.subgroups()[i].clone())
                .collect()
        })
        .collect()
}

/// Orders the given classes so that whenever `(H) < (K)`, `K` comes first.
/// Ties are broken by descending order, then by lexicographic
/// representative.
///
/// A proper subconjugate has strictly smaller order, so sorting by
/// descending order already extends the subconjugacy order.
pub fn subconjugacy_total_order(g: &FiniteGroup, classes: &[usize]) -> Vec<usize> {
    let lat = g.lattice();
    let mut out: Vec<usize> = classes
        .iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    out.sort_by(|&a, &b| {
        lat.classes()[b]
            .order
            .cmp(&lat.classes()[a].order)
            .then_with(|| lat.representative(a).cmp(lat.representative(b)))
    });
    out
}

/// The table of marks `m[i][j] = |(G/H_i)^{H_j}|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarksTable {
    /// Class indices, ascending (compatible with subconjugacy: subconjugate
    /// classes come first).
    pub classes: Vec<usize>,
    pub matrix: Vec<Vec<i64>>,
}

impl MarksTable {
    pub fn size(&self) -> usize {
        self.classes.len()
    }
}

/// Computes the table of marks over all conjugacy classes of subgroups,
/// rows and columns in ascending class order.
pub fn table_of_marks(g: &FiniteGroup) -> MarksTable {
    let lat = g.lattice();
    let k = lat.classes().len();
    let mut matrix = vec![vec![0i64; k]; k];
    for (i, row) in matrix.iter_mut().enumerate() {
        let hi = lat.representative(i);
        for (j, entry) in row.iter_mut().enumerate() {
            let hj = lat.representative(j);
            // xH_i is fixed by H_j iff x^-1 H_j x <= H_i.
            let count = g
                .elements()
                .filter(|&x| {
                    hj.elements()
                        .iter()
                        .all(|&h| hi.contains(g.conjugate_element(g.inv(x), h)))
                })
                .count();
            *entry = (count / hi.order()) as i64;
        }
    }
    MarksTable {
        classes: (0..k).collect(),
        matrix,
    }
}

/// All strict chains with at most `maxlen` inclusions, ordered by length and
/// then lexicographically by subgroup index.
pub fn chains_between(g: &FiniteGroup, maxlen: usize) -> Vec<SubgroupChain> {
    let lat = g.lattice();
    let subs = lat.subgroups();
    let mut by_len: Vec<Vec<Vec<usize>>> = vec![(0..subs.len()).map(|i| vec![i]).collect()];
    for _ in 0..maxlen {
        let mut next = vec![];
        for chain in by_len.last().unwrap() {
            let top = &subs[*chain.last().unwrap()];
            for (j, s) in subs.iter().enumerate() {
                if top.is_proper_subgroup_of(s) {
                    let mut c = chain.clone();
                    c.push(j);
                    next.push(c);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        by_len.push(next);
    }
    by_len
        .into_iter()
        .flat_map(|level| {
            let mut level = level;
            level.sort();
            level
        })
        .map(|c| SubgroupChain(c.into_iter().map(|i| subs[i].clone()).collect()))
        .collect()
}

fn build_lattice(g: &FiniteGroup) -> SubgroupLattice {
    let mut cyclic: Vec<Subgroup> = g
        .elements()
        .map(|x| g.generated(&[x]))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    cyclic.sort();
    let mut all: HashSet<Subgroup> = cyclic.iter().cloned().collect();
    let mut frontier: Vec<Subgroup> = cyclic.clone();
    while !frontier.is_empty() {
        let mut next = vec![];
        for a in &frontier {
            for c in &cyclic {
                if c.is_subgroup_of(a) {
                    continue;
                }
                let mut gens: Vec<Element> = a.elements().to_vec();
                gens.extend_from_slice(c.elements());
                let j = g.generated(&gens);
                if all.insert(j.clone()) {
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    let mut subgroups: Vec<Subgroup> = all.into_iter().collect();
    subgroups.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    let index: HashMap<Subgroup, usize> = subgroups
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();

    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut classes: Vec<SubgroupClass> = vec![];
    for i in 0..subgroups.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let members: BTreeSet<usize> = g
            .elements()
            .map(|x| index[&g.conjugate(x, &subgroups[i])])
            .collect();
        let c = classes.len();
        for &m in &members {
            class_of[m] = c;
        }
        classes.push(SubgroupClass {
            members: members.into_iter().collect(),
            order: subgroups[i].order(),
            name: String::new(),
        });
    }

    let k = classes.len();
    let mut subconj = vec![vec![false; k]; k];
    for a in 0..k {
        let ra = &subgroups[classes[a].representative()];
        for b in 0..k {
            let rb = &subgroups[classes[b].representative()];
            subconj[a][b] = ra.order() <= rb.order()
                && rb.order().is_multiple_of(ra.order())
                && g.elements().any(|x| g.conjugate(x, ra).is_subgroup_of(rb));
        }
    }

    let base: Vec<String> = classes
        .iter()
        .map(|c| base_name(g, &subgroups[c.representative()]))
        .collect();
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for b in &base {
        *counts.entry(b.as_str()).or_default() += 1;
    }
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let names: Vec<String> = base
        .iter()
        .map(|b| {
            if counts[b.as_str()] > 1 {
                let n = seen.entry(b.as_str()).or_default();
                *n += 1;
                format!("{b}_{n}")
            } else {
                b.clone()
            }
        })
        .collect();
    for (c, name) in classes.iter_mut().zip(names) {
        c.name = name;
    }

    SubgroupLattice {
        subgroups,
        index,
        classes,
        class_of,
        subconj,
    }
}

/// Isomorphism-type name for small subgroups; falls back to `G<order>`.
fn base_name(g: &FiniteGroup, h: &Subgroup) -> String {
    let n = h.order();
    if n == 1 {
        return "e".into();
    }
    let orders: Vec<usize> = h.elements().iter().map(|&x| g.element_order(x)).collect();
    let max_order = *orders.iter().max().unwrap();
    if max_order == n {
        return format!("C{n}");
    }
    let abelian = h
        .elements()
        .iter()
        .all(|&a| h.elements().iter().all(|&b| g.mul(a, b) == g.mul(b, a)));
    if abelian {
        let factors = abelian_invariant_factors(&orders, n);
        return factors
            .iter()
            .map(|d| format!("C{d}"))
            .collect::<Vec<_>>()
            .join("x");
    }
    let involutions = orders.iter().filter(|&&o| o == 2).count();
    let half = n / 2;
    if n.is_multiple_of(2) && max_order == half {
        // Dihedral: every element outside a cyclic subgroup of index 2 is an involution.
        let c = h.elements()[orders.iter().position(|&o| o == half).unwrap()];
        let rot = g.generated(&[c]);
        if h.elements()
            .iter()
            .zip(&orders)
            .all(|(&x, &o)| rot.contains(x) || o == 2)
        {
            return if n == 6 { "S3".into() } else { format!("D{n}") };
        }
    }
    match (n, involutions, max_order) {
        (8, 1, 4) => "Q8".into(),
        (12, 3, 3) => "A4".into(),
        (12, 1, 6) => "Dic12".into(),
        (24, 9, 4) => "S4".into(),
        (24, 1, 6) => "SL(2,3)".into(),
        _ => format!("G{n}"),
    }
}

/// Invariant factors `d_1 | d_2 | ...` of an abelian group from the orders
/// of its elements.
fn abelian_invariant_factors(orders: &[usize], n: usize) -> Vec<usize> {
    let mut primes = vec![];
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        if m.is_multiple_of(p) {
            primes.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    let mut per_prime: Vec<(usize, Vec<u32>)> = vec![];
    for &p in &primes {
        // #{x : x^(p^k) = 1} = p^(s_k) and s_k - s_(k-1) = #{i : e_i >= k}.
        let mut at_least = vec![];
        let mut prev = 0usize;
        for k in 1u32.. {
            let pk = p.pow(k);
            let mut count = orders.iter().filter(|&&o| pk % o == 0).count();
            let mut s = 0;
            while count > 1 {
                count /= p;
                s += 1;
            }
            if s == prev {
                break;
            }
            at_least.push(s - prev);
            prev = s;
        }
        let mut e_list = vec![];
        for (idx, &cnt) in at_least.iter().enumerate() {
            let next = at_least.get(idx + 1).copied().unwrap_or(0);
            e_list.extend(std::iter::repeat_n(idx as u32 + 1, cnt - next));
        }
        e_list.reverse();
        per_prime.push((p, e_list));
    }
    let r = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    let mut factors: Vec<usize> = (0..r)
        .map(|i| {
            per_prime
                .iter()
                .map(|(p, e)| e.get(i).map_or(1, |&x| p.pow(x)))
                .product()
        })
        .collect();
    factors.sort_unstable();
    factors
}
