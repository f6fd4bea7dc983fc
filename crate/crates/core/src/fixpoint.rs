//! Fixed-point invariants of simplicial self-maps.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_rational::Ratio;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gcomplex::GComplex;
use crate::gmap::GMap;
use crate::group::{table_of_marks, FiniteGroup};
use crate::snf::{mat_vec, smith_normal_form};

/// Sign of the permutation sorting `v`, or `None` if `v` repeats a value.
fn sort_sign(v: &[usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            match v[i].cmp(&v[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => sign = -sign,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some(sign)
}

/// Diagonal entry of the chain map at simplex `idx`: the orientation sign
/// if `f` maps the simplex onto itself, zero otherwise.
fn chain_diagonal(f: &GMap, idx: usize) -> i64 {
    let s = f.source.simplex(idx);
    let img: Vec<usize> = s.iter().map(|&v| f.vertices[v]).collect();
    match sort_sign(&img) {
        Some(sign) => {
            let mut sorted = img;
            sorted.sort_unstable();
            if sorted == *s {
                sign
            } else {
                0
            }
        }
        None => 0,
    }
}

/// Alternating chain-level trace over the given simplices, which must form
/// a subcomplex mapped into itself by `f`.
pub fn lefschetz_on(f: &GMap, simplices: &BTreeSet<usize>) -> i64 {
    simplices
        .iter()
        .map(|&i| {
            let dim = f.source.simplex(i).len() - 1;
            let t = chain_diagonal(f, i);
            if dim.is_multiple_of(2) {
                t
            } else {
                -t
            }
        })
        .sum()
}

pub fn lefschetz(f: &GMap) -> Result<i64> {
    if !f.is_self_map() {
        return Err(Error::NotSelfMap);
    }
    Ok(lefschetz_on(f, &(0..f.source.n_simplices()).collect()))
}

/// Simplices mapped onto themselves as sets.
pub fn fixed_simplices(f: &GMap) -> Vec<usize> {
    (0..f.source.n_simplices())
        .filter(|&i| {
            let mut img: Vec<usize> = f.source.simplex(i).iter().map(|&v| f.vertices[v]).collect();
            img.sort_unstable();
            img.dedup();
            img == *f.source.simplex(i)
        })
        .collect()
}

/// A self-map has a fixed point iff some simplex is mapped onto itself:
/// a point of an open simplex `σ` fixed by `f` forces `σ ⊆ f(σ)`, hence
/// equality, and conversely Brouwer applies.
pub fn is_fixed_point_free(f: &GMap) -> bool {
    fixed_simplices(f).is_empty()
}

fn require_isovariant_self_map(f: &GMap) -> Result<()> {
    if !f.is_self_map() {
        return Err(Error::NotSelfMap);
    }
    if let Some((element, vertex)) = f.equivariance_failure() {
        return Err(Error::NotEquivariant { element, vertex });
    }
    if let Some(i) = f.isovariance_failure() {
        return Err(Error::NotIsovariant(f.source.simplex(i).clone()));
    }
    Ok(())
}

/// `L(f|X^H)` for every conjugacy class of subgroups, indexed by lattice
/// class. Classes with empty fixed set get zero.
pub fn lefschetz_marks(f: &GMap) -> Result<Vec<i64>> {
    require_isovariant_self_map(f)?;
    let x = &f.source;
    let lat = x.group().lattice();
    Ok((0..lat.classes().len())
        .map(|c| lefschetz_on(f, &x.fixed_subcomplex(lat.representative(c)).simplices))
        .collect())
}

/// `L(f|X^H)` for the isotropy classes occurring in the complex, by name.
pub fn lefschetz_fixed_sets(f: &GMap) -> Result<BTreeMap<String, i64>> {
    let marks = lefschetz_marks(f)?;
    let lat = f.source.group().lattice();
    Ok(f.source
        .isotropy_classes()
        .into_iter()
        .map(|c| (lat.class_name(c).to_string(), marks[c]))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    Marks,
    Orbits,
}

/// An element of the Burnside ring as an integer vector over all conjugacy
/// classes of subgroups (ascending lattice order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurnsideElement {
    pub basis: Basis,
    pub coefficients: Vec<i64>,
}

impl BurnsideElement {
    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    /// Nonzero terms, e.g. `[("C2/e", 1)]` style pairs keyed by class name.
    pub fn named(&self, g: &FiniteGroup) -> Vec<(String, i64)> {
        let lat = g.lattice();
        self.coefficients
            .iter()
            .enumerate()
            .map(|(c, &k)| (lat.class_name(c).to_string(), k))
            .collect()
    }
}

/// Orbit-basis coefficients with the given marks: solves
/// `marks_j = Σ_i c_i m[i][j]` by back substitution over the rationals.
pub fn burnside_from_marks(g: &FiniteGroup, marks: &[i64]) -> Result<BurnsideElement> {
    let k = g.lattice().classes().len();
    if marks.len() != k {
        return Err(Error::Parse(format!(
            "marks vector has length {} but the group has {k} subgroup classes",
            marks.len()
        )));
    }
    let c = rational_orbit_coefficients(g, marks);
    if c.iter().any(|r| !r.is_integer()) {
        return Err(Error::NonIntegral(
            c.iter().map(|r| r.to_string()).collect(),
        ));
    }
    Ok(BurnsideElement {
        basis: Basis::Orbits,
        coefficients: c.iter().map(|r| r.to_integer() as i64).collect(),
    })
}

/// Marks of an orbit-basis element.
pub fn marks_of(g: &FiniteGroup, orbit_coeffs: &[i64]) -> Vec<i64> {
    let table = table_of_marks(g);
    (0..table.size())
        .map(|j| {
            (0..table.size())
                .map(|i| orbit_coeffs[i] * table.matrix[i][j])
                .sum()
        })
        .collect()
}

pub fn burnside_lefschetz(f: &GMap) -> Result<BurnsideElement> {
    let marks = lefschetz_marks(f)?;
    burnside_from_marks(f.source.group(), &marks)
}

/// A finitely generated abelian group `Z^a x Z/n_1 x ...`, one entry per
/// cyclic factor: `0` for `Z`, `n > 1` for `Z/n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub factors: Vec<u64>,
}

impl AbelianGroup {
    /// Parses `"Z"`, `"Z^2"`, `"Z/3"`, `"Z x Z/2"`, `"0"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut factors = vec![];
        let t = s.trim();
        if t == "0" || t == "1" {
            return Ok(AbelianGroup { factors });
        }
        for part in t.split(['x', '×', '+']) {
            let p = part.trim().replace(' ', "");
            if let Some(n) = p.strip_prefix("Z/") {
                let n: u64 = n
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad factor `{p}`")))?;
                if n == 0 {
                    return Err(Error::Parse("Z/0 is not allowed; write Z".into()));
                }
                if n > 1 {
                    factors.push(n);
                }
            } else if let Some(k) = p.strip_prefix("Z^") {
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad factor `{p}`")))?;
                factors.extend(std::iter::repeat_n(0, k));
            } else if p == "Z" {
                factors.push(0);
            } else {
                return Err(Error::NonAbelianPi(format!(
                    "cannot read `{p}` as an abelian factor"
                )));
            }
        }
        Ok(AbelianGroup { factors })
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(&self.factors)
            .map(|(&a, &n)| if n == 0 { a } else { a.rem_euclid(n as i64) })
            .collect()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }
}

/// Endomorphism data for twisted conjugacy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedSetup {
    pub pi: AbelianGroup,
    /// `phi[i][j]`: coefficient of generator `i` in the image of generator `j`.
    pub phi: Vec<Vec<i64>>,
}

impl TwistedSetup {
    #[allow(clippy::needless_range_loop)]
    pub fn new(pi: AbelianGroup, phi: Vec<Vec<i64>>) -> Result<Self> {
        let k = pi.rank();
        if phi.len() != k || phi.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidEndomorphism(format!("phi must be {k}x{k}")));
        }
        // Relations n_j e_j must map into the relation lattice.
        for j in 0..k {
            let nj = pi.factors[j] as i64;
            if nj == 0 {
                continue;
            }
            for i in 0..k {
                let ni = pi.factors[i] as i64;
                let v = nj * phi[i][j];
                let ok = if ni == 0 { v == 0 } else { v % ni == 0 };
                if !ok {
                    return Err(Error::InvalidEndomorphism(format!(
                        "image of torsion generator {j} has wrong order"
                    )));
                }
            }
        }
        Ok(TwistedSetup { pi, phi })
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        let y: Vec<i64> = (0..self.pi.rank())
            .map(|i| (0..self.pi.rank()).map(|j| self.phi[i][j] * x[j]).sum())
            .collect();
        self.pi.reduce(&y)
    }
}

/// The cokernel of `id - φ` on `π`, i.e. the set of twisted conjugacy
/// classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedClasses {
    /// Nontrivial torsion invariants of the cokernel.
    pub torsion: Vec<u64>,
    pub free_rank: usize,
    /// Number of classes, `None` when infinite.
    pub count: Option<u64>,
    /// Representatives in `π` coordinates when the cokernel is finite.
    pub representatives: Vec<Vec<i64>>,
    u: Vec<Vec<i128>>,
    u_inv: Vec<Vec<i128>>,
    diag: Vec<i128>,
    pi: AbelianGroup,
}

impl TwistedClasses {
    /// Canonical coordinates of the class of `x`: one entry per
    /// nontrivial cokernel factor.
    pub fn class_of(&self, x: &[i64]) -> Vec<i64> {
        let xi: Vec<i128> = x.iter().map(|&a| i128::from(a)).collect();
        let y = mat_vec(&self.u, &xi);
        y.iter()
            .zip(&self.diag)
            .filter(|(_, &d)| d != 1)
            .map(|(&a, &d)| {
                if d == 0 {
                    a as i64
                } else {
                    a.rem_euclid(d) as i64
                }
            })
            .collect()
    }

    /// Human-readable label: the reduced representative in `π`.
    pub fn label(&self, class: &[i64]) -> Vec<i64> {
        let mut y: Vec<i128> = vec![0; self.diag.len()];
        let mut it = class.iter();
        for (i, &d) in self.diag.iter().enumerate() {
            if d != 1 {
                y[i] = i128::from(*it.next().unwrap());
            }
        }
        let x = mat_vec(&self.u_inv, &y);
        self.pi
            .reduce(&x.iter().map(|&a| a as i64).collect::<Vec<_>>())
    }
}

pub fn twisted_classes(setup: &TwistedSetup) -> TwistedClasses {
    let k = setup.pi.rank();
    // Relations of π followed by the columns of id - φ.
    let mut m: Vec<Vec<i128>> = vec![vec![]; k];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, &n) in setup.pi.factors.iter().enumerate() {
            row.push(if i == j { i128::from(n) } else { 0 });
        }
        for j in 0..k {
            row.push(i128::from(i == j) - i128::from(setup.phi[i][j]));
        }
    }
    let s = smith_normal_form(&m);
    let mut diag = s.diagonal();
    diag.resize(k, 0);
    let torsion: Vec<u64> = diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
    let free_rank = diag.iter().filter(|&&d| d == 0).count();
    let count = if free_rank == 0 {
        Some(torsion.iter().product())
    } else {
        None
    };
    let mut tc = TwistedClasses {
        torsion: torsion.clone(),
        free_rank,
        count,
        representatives: vec![],
        u: s.u,
        u_inv: s.u_inv,
        diag,
        pi: setup.pi.clone(),
    };
    if let Some(n) = count {
        if n <= 10_000 {
            let mut classes: Vec<Vec<i64>> = vec![vec![]];
            for &t in &torsion {
                classes = classes
                    .into_iter()
                    .flat_map(|c| (0..t as i64).map(move |a| [c.clone(), vec![a]].concat()))
                    .collect();
            }
            tc.representatives = classes.iter().map(|c| tc.label(c)).collect();
        }
    }
    tc
}

/// Fundamental group data: a spanning tree of the 1-skeleton and a label in
/// `π` for every edge outside it (oriented as given).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiData {
    pub setup: TwistedSetup,
    pub tree: Vec<(usize, usize)>,
    pub labels: Vec<((usize, usize), Vec<i64>)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReidemeisterTrace {
    pub classes: TwistedClasses,
    /// Nonzero coefficients keyed by class coordinates.
    pub coefficients: BTreeMap<Vec<i64>, i64>,
}

impl ReidemeisterTrace {
    pub fn total(&self) -> i64 {
        self.coefficients.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `(label in π, coefficient)` pairs.
    pub fn labelled(&self) -> Vec<(Vec<i64>, i64)> {
        self.coefficients
            .iter()
            .map(|(c, &k)| (self.classes.label(c), k))
            .collect()
    }
}

struct EdgeLabels<'a> {
    pi: &'a AbelianGroup,
    map: HashMap<(usize, usize), Vec<i64>>,
}

impl EdgeLabels<'_> {
    fn get(&self, u: usize, v: usize) -> Vec<i64> {
        if u == v {
            return self.pi.zero();
        }
        self.map.get(&(u, v)).cloned().expect("edge labelled")
    }
}

fn add(pi: &AbelianGroup, a: &[i64], b: &[i64]) -> Vec<i64> {
    pi.reduce(&a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>())
}

fn sub(pi: &AbelianGroup, a: &[i64], b: &[i64]) -> Vec<i64> {
    pi.reduce(&a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>())
}

fn build_labels<'a>(x: &GComplex, data: &'a PiData) -> Result<EdgeLabels<'a>> {
    let pi = &data.setup.pi;
    let bad = |m: String| Error::InconsistentLabels(m);
    let n = x.n_vertices();
    if data.tree.len() + 1 != n {
        return Err(bad(format!(
            "a spanning tree on {n} vertices has {} edges, got {}",
            n.saturating_sub(1),
            data.tree.len()
        )));
    }
    let mut map: HashMap<(usize, usize), Vec<i64>> = HashMap::new();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            i = p[i];
        }
        i
    }
    for &(u, v) in &data.tree {
        if u >= n || v >= n || x.find(&[u, v]).is_none() || u == v {
            return Err(bad(format!("tree edge ({u},{v}) is not an edge")));
        }
        let (a, b) = (root(&mut parent, u), root(&mut parent, v));
        if a == b {
            return Err(bad(format!("tree edge ({u},{v}) closes a cycle")));
        }
        parent[a] = b;
        map.insert((u, v), pi.zero());
        map.insert((v, u), pi.zero());
    }
    for ((u, v), label) in &data.labels {
        if label.len() != pi.rank() {
            return Err(bad(format!(
                "label on ({u},{v}) has {} coordinates, expected {}",
                label.len(),
                pi.rank()
            )));
        }
        if x.find(&[*u, *v]).is_none() || u == v {
            return Err(bad(format!("labelled pair ({u},{v}) is not an edge")));
        }
        if map.contains_key(&(*u, *v)) {
            return Err(bad(format!(
                "edge ({u},{v}) is labelled twice or lies in the tree"
            )));
        }
        map.insert((*u, *v), pi.reduce(label));
        map.insert(
            (*v, *u),
            pi.reduce(&label.iter().map(|a| -a).collect::<Vec<_>>()),
        );
    }
    for s in x.simplices().iter().filter(|s| s.len() == 2) {
        if !map.contains_key(&(s[0], s[1])) {
            return Err(bad(format!("edge ({},{}) has no label", s[0], s[1])));
        }
    }
    let labels = EdgeLabels { pi, map };
    for s in x.simplices().iter().filter(|s| s.len() == 3) {
        let (a, b, c) = (s[0], s[1], s[2]);
        if add(pi, &labels.get(a, b), &labels.get(b, c)) != labels.get(a, c) {
            return Err(bad(format!("labels are not a cocycle on triangle {s:?}")));
        }
    }
    Ok(labels)
}

/// The Reidemeister trace of a self-map for abelian `π`, as a vector over
/// twisted conjugacy classes.
///
/// With `c(v)` the label of the image of the tree path from the base vertex
/// to `v`, the lift `f~(v, a) = (f v, φ(a) + c(v))` commutes with the lifted
/// edges exactly when `φ(ℓ(u,v)) = c(u) + ℓ(fu, fv) - c(v)` for all edges.
/// Each simplex is lifted at its smallest vertex; a simplex mapped onto
/// itself contributes its orientation sign at the class of the translate.
pub fn reidemeister_trace(f: &GMap, data: &PiData) -> Result<ReidemeisterTrace> {
    if !f.is_self_map() {
        return Err(Error::NotSelfMap);
    }
    let x = &f.source;
    let setup = &data.setup;
    let pi = &setup.pi;
    let labels = build_labels(x, data)?;

    // c(v) by breadth-first search over the tree from vertex 0.
    let mut adj: Vec<Vec<usize>> = vec![vec![]; x.n_vertices()];
    for &(u, v) in &data.tree {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut c: Vec<Option<Vec<i64>>> = vec![None; x.n_vertices()];
    c[0] = Some(pi.zero());
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if c[v].is_none() {
                let step = labels.get(f.vertices[u], f.vertices[v]);
                c[v] = Some(add(pi, c[u].as_ref().unwrap(), &step));
                queue.push_back(v);
            }
        }
    }
    let c: Vec<Vec<i64>> = c.into_iter().map(|o| o.expect("tree spans")).collect();

    for s in x.simplices().iter().filter(|s| s.len() == 2) {
        let (u, v) = (s[0], s[1]);
        let lhs = setup.apply(&labels.get(u, v));
        let rhs = sub(
            pi,
            &add(pi, &c[u], &labels.get(f.vertices[u], f.vertices[v])),
            &c[v],
        );
        if lhs != rhs {
            return Err(Error::InconsistentLabels(format!(
                "phi does not match the map on edge ({u},{v}): expected {rhs:?}, got {lhs:?}"
            )));
        }
    }

    let classes = twisted_classes(setup);
    let mut coefficients: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for i in fixed_simplices(f) {
        let s = x.simplex(i);
        let img: Vec<usize> = s.iter().map(|&v| f.vertices[v]).collect();
        let sign = sort_sign(&img).expect("fixed simplex is nondegenerate");
        let v0 = s[0];
        let j = img
            .iter()
            .position(|&w| w == v0)
            .expect("min vertex is hit");
        let offset = add(pi, &setup.apply(&labels.get(v0, s[j])), &c[s[j]]);
        let dim_sign = if (s.len() - 1).is_multiple_of(2) {
            1
        } else {
            -1
        };
        *coefficients.entry(classes.class_of(&offset)).or_insert(0) += sign * dim_sign;
    }
    coefficients.retain(|_, v| *v != 0);
    Ok(ReidemeisterTrace {
        classes,
        coefficients,
    })
}

/// Vertices fixed by every isovariant simplicial self-map.
///
/// An isovariant map sends each exact stratum `X_(K)` into itself, hence its
/// closure into its closure, and sends `v` to a vertex of isotropy exactly
/// `G_v`. If `v` is the only such vertex in some closure, it is fixed.
pub fn forced_fixed_points(x: &GComplex) -> Vec<usize> {
    let closures: Vec<BTreeSet<usize>> = x
        .strata()
        .iter()
        .map(|s| {
            let cl = x.stratum_closure(s);
            cl.vertices(x).into_iter().collect()
        })
        .collect();
    (0..x.n_vertices())
        .filter(|&v| {
            let gv = x.vertex_isotropy(v);
            closures.iter().any(|cl| {
                cl.contains(&v) && cl.iter().all(|&w| w == v || x.vertex_isotropy(w) != gv)
            })
        })
        .collect()
}

/// Whether isovariant removal of fixed points is possible, as far as the
/// computable data decides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Removability {
    /// The map has no fixed points.
    AlreadyFree,
    /// Some vertex is fixed by every isovariant self-map.
    Impossible,
    /// Hypotheses hold: removable iff the equivariant Reidemeister trace
    /// vanishes, which is not computed here.
    IffReidemeisterVanishes,
    /// Hypotheses fail and nothing else decides.
    Unknown,
}

impl Removability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Removability::AlreadyFree => "already-free",
            Removability::Impossible => "impossible",
            Removability::IffReidemeisterVanishes => "iff-reidemeister-vanishes",
            Removability::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub fixed_point_free: bool,
    pub hypotheses: crate::gcomplex::HypothesisReport,
    pub forced: Vec<usize>,
    /// `L(f|X^H)` per subgroup class, by name.
    pub marks: Vec<(String, i64)>,
    pub orbit_coeffs: Vec<(String, i64)>,
    pub equivariant_invariants_vanish: bool,
    pub isovariantly_removable: Removability,
    pub verdict: String,
}

pub fn removal_verdict(f: &GMap, dims: &BTreeMap<String, usize>) -> Result<Verdict> {
    require_isovariant_self_map(f)?;
    let x = &f.source;
    let g = x.group();
    let lat = g.lattice();
    let hypotheses = x.check_hypotheses(dims)?;
    let forced = forced_fixed_points(x);
    let marks = lefschetz_marks(f)?;
    let burnside = burnside_from_marks(g, &marks)?;
    let fixed_point_free = is_fixed_point_free(f);
    let vanish = marks.iter().all(|&m| m == 0);
    let forced_str = format!(
        "{{{}}}",
        forced
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    );

    let (removable, verdict) = if fixed_point_free {
        (
            Removability::AlreadyFree,
            "already fixed-point-free".to_string(),
        )
    } else if hypotheses.holds() && !forced.is_empty() {
        // The dimension checks pass but the space cannot be a manifold
        // meeting them: some point is pinned by isotropy alone.
        let s = format!(
            "dimension hypotheses hold, but forced fixed points {forced_str} are fixed by every isovariant self-map; not isovariantly removable"
        );
        (Removability::Impossible, s)
    } else if hypotheses.holds() {
        let mut s = "isovariantly removable iff R_G(f)=0 (hypotheses hold)".to_string();
        if vanish {
            s.push_str("; computed necessary invariants vanish");
        }
        (Removability::IffReidemeisterVanishes, s)
    } else {
        let mut s = format!(
            "hypotheses fail ({}); no conclusion from the theorem; note forced fixed points: {forced_str}",
            hypotheses.first_failure().unwrap_or_default()
        );
        if forced.is_empty() {
            (Removability::Unknown, s)
        } else {
            if vanish {
                s.push_str("; equivariant Lefschetz invariants vanish, but the forced points cannot be removed isovariantly");
            } else {
                s.push_str("; the forced points cannot be removed isovariantly");
            }
            (Removability::Impossible, s)
        }
    };

    let named = |v: &[i64]| -> Vec<(String, i64)> {
        v.iter()
            .enumerate()
            .map(|(c, &k)| (lat.class_name(c).to_string(), k))
            .collect()
    };
    Ok(Verdict {
        fixed_point_free,
        hypotheses,
        forced,
        marks: named(&marks),
        orbit_coeffs: named(&burnside.coefficients),
        equivariant_invariants_vanish: vanish,
        isovariantly_removable: removable,
        verdict,
    })
}

/// Orbit-basis coefficients over the rationals, by back substitution
/// through the lower-triangular table of marks.
pub fn rational_orbit_coefficients(g: &FiniteGroup, marks: &[i64]) -> Vec<Ratio<i128>> {
    let table = table_of_marks(g);
    let k = table.size();
    let mut c: Vec<Ratio<i128>> = vec![Ratio::zero(); k];
    for j in (0..k).rev() {
        let mut rhs = Ratio::from_integer(i128::from(marks[j]));
        for (i, ci) in c.iter().enumerate().skip(j + 1) {
            rhs -= *ci * Ratio::from_integer(i128::from(table.matrix[i][j]));
        }
        c[j] = rhs / Ratio::from_integer(i128::from(table.matrix[j][j]));
    }
    c
}

/// A presentation of abelian `π` by a spanning tree and labels on the
/// remaining edges, in the form [`PiData`] expects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiPresentation {
    pub pi: AbelianGroup,
    pub tree: Vec<(usize, usize)>,
    pub labels: Vec<((usize, usize), Vec<i64>)>,
}

/// Abelianized fundamental group of a connected complex together with a
/// spanning tree and edge labels presenting it, read off from the Smith form
/// of the triangle relations on the edges outside a breadth-first tree.
pub fn abelian_pi_data(x: &GComplex) -> Result<PiPresentation> {
    let n = x.n_vertices();
    let edges: Vec<(usize, usize)> = x
        .simplices()
        .iter()
        .filter(|s| s.len() == 2)
        .map(|s| (s[0], s[1]))
        .collect();
    let mut adj: Vec<Vec<usize>> = vec![vec![]; n];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut tree = vec![];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                tree.push((u.min(v), u.max(v)));
                queue.push_back(v);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::InconsistentLabels(
            "the complex is not connected".into(),
        ));
    }
    let in_tree: BTreeSet<(usize, usize)> = tree.iter().copied().collect();
    let free: Vec<(usize, usize)> = edges
        .iter()
        .copied()
        .filter(|e| !in_tree.contains(e))
        .collect();
    let column = |a: usize, b: usize| free.iter().position(|&e| e == (a, b));
    let mut rel: Vec<Vec<i128>> = vec![vec![]; free.len()];
    for s in x.simplices().iter().filter(|s| s.len() == 3) {
        // l(a,b) + l(b,c) - l(a,c) = 0
        for row in rel.iter_mut() {
            row.push(0);
        }
        for ((a, b), sign) in [((s[0], s[1]), 1), ((s[1], s[2]), 1), ((s[0], s[2]), -1)] {
            if let Some(j) = column(a, b) {
                *rel[j].last_mut().unwrap() += sign;
            }
        }
    }
    let smith = smith_normal_form(&rel);
    let mut diag = smith.diagonal();
    diag.resize(free.len(), 0);
    let kept: Vec<usize> = (0..free.len()).filter(|&i| diag[i] != 1).collect();
    let pi = AbelianGroup {
        factors: kept.iter().map(|&i| diag[i] as u64).collect(),
    };
    let labels = free
        .iter()
        .enumerate()
        .map(|(j, &e)| {
            (
                e,
                pi.reduce(
                    &kept
                        .iter()
                        .map(|&i| smith.u[i][j] as i64)
                        .collect::<Vec<_>>(),
                ),
            )
        })
        .collect();
    Ok(PiPresentation { pi, tree, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    #[test]
    fn burnside_over_c2() {
        let g = FiniteGroup::cyclic(2);
        assert_eq!(
            burnside_from_marks(&g, &[2, 0]).unwrap().coefficients,
            vec![1, 0]
        );
        assert_eq!(
            burnside_from_marks(&g, &[0, 0]).unwrap().coefficients,
            vec![0, 0]
        );
        assert!(matches!(
            burnside_from_marks(&g, &[1, 0]),
            Err(Error::NonIntegral(_))
        ));
    }

    #[test]
    fn abelian_group_parsing() {
        assert_eq!(AbelianGroup::parse("Z").unwrap().factors, vec![0]);
        assert_eq!(AbelianGroup::parse("Z^2").unwrap().factors, vec![0, 0]);
        assert_eq!(AbelianGroup::parse("Z x Z/2").unwrap().factors, vec![0, 2]);
        assert!(matches!(
            AbelianGroup::parse("F2"),
            Err(Error::NonAbelianPi(_))
        ));
    }

    #[test]
    fn twisted_class_counts() {
        let z = AbelianGroup::parse("Z").unwrap();
        let t = twisted_classes(&TwistedSetup::new(z.clone(), vec![vec![-1]]).unwrap());
        assert_eq!(t.count, Some(2));
        let t = twisted_classes(&TwistedSetup::new(z, vec![vec![1]]).unwrap());
        assert_eq!((t.count, t.free_rank), (None, 1));
        let z3 = AbelianGroup::parse("Z/3").unwrap();
        let t = twisted_classes(&TwistedSetup::new(z3, vec![vec![1]]).unwrap());
        assert_eq!(t.count, Some(3));
        assert_eq!(t.representatives.len(), 3);
    }

    #[test]
    fn invalid_endomorphism() {
        let pi = AbelianGroup::parse("Z x Z/2").unwrap();
        // the order-2 generator cannot map to a free element
        assert!(TwistedSetup::new(pi, vec![vec![1, 1], vec![0, 1]]).is_err());
    }

    #[test]
    fn lefschetz_of_collapsed_edge_is_one() {
        let g = Arc::new(FiniteGroup::trivial());
        let x = GComplex::with_trivial_action(g, 2, vec![vec![0, 1]]).unwrap();
        let f = GMap::new(x.clone(), x, vec![0, 0]).unwrap();
        assert_eq!(lefschetz(&f).unwrap(), 1);
    }

    #[test]
    fn hexagon_presents_integers() {
        let x = crate::models::hexagon();
        let PiPresentation { pi, tree, labels } = abelian_pi_data(&x).unwrap();
        assert_eq!(pi.factors, vec![0]);
        assert_eq!(tree.len(), 5);
        assert_eq!(labels.len(), 1);
        assert_eq!(labels[0].1[0].abs(), 1);
        let setup = TwistedSetup::new(pi, vec![vec![-1]]).unwrap();
        let data = PiData {
            setup,
            tree,
            labels,
        };
        let r = reidemeister_trace(&crate::models::hexagon_reflection(), &data).unwrap();
        assert_eq!(r.coefficients.len(), 2);
        assert_eq!(r.total(), 2);
    }

    #[test]
    fn disk_is_simply_connected() {
        let PiPresentation { pi, tree, labels } =
            abelian_pi_data(&crate::models::reflection_disk()).unwrap();
        assert!(pi.factors.is_empty());
        assert_eq!(tree.len(), 6);
        assert!(labels.iter().all(|(_, l)| l.is_empty()));
    }
}
