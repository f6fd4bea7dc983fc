//! Cubical diagrams of finite sets, their corner maps, and the factorization
//! of `lim X -> lim Y` through intermediate limits, with surjections as the
//! distinguished class of maps.
//!
//! A set of size `k` is `{0, ..., k-1}`. Cube vertices are subsets of
//! `{1..n}` encoded as bitmasks (coordinate `i` is bit `i - 1`), and a cube
//! stores one map per edge `U -> U ∪ {i}`.

use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// A finite diagram of finite sets: node sizes and maps along edges.
#[derive(Clone, Debug, Default)]
pub struct FiniteDiagram {
    pub sizes: Vec<usize>,
    pub edges: Vec<(usize, usize, Vec<usize>)>,
}

impl FiniteDiagram {
    /// All compatible families, one value per node, in lexicographic order.
    /// Nodes should be listed so that every non-source node has an incoming
    /// edge from an earlier node; then only sources are enumerated freely.
    pub fn limit(&self) -> Vec<Vec<usize>> {
        let n = self.sizes.len();
        let mut incoming: Vec<Vec<usize>> = vec![vec![]; n];
        let mut outgoing: Vec<Vec<usize>> = vec![vec![]; n];
        for (e, (s, t, _)) in self.edges.iter().enumerate() {
            incoming[*t].push(e);
            outgoing[*s].push(e);
        }
        let mut out = vec![];
        let mut assign = vec![0usize; n];
        self.extend(0, &mut assign, &incoming, &outgoing, &mut out);
        out
    }

    fn extend(
        &self,
        k: usize,
        assign: &mut Vec<usize>,
        inc: &[Vec<usize>],
        outg: &[Vec<usize>],
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == self.sizes.len() {
            out.push(assign.clone());
            return;
        }
        let forced = inc[k]
            .iter()
            .map(|&e| &self.edges[e])
            .find(|(s, _, _)| *s < k)
            .map(|(s, _, m)| m[assign[*s]]);
        let candidates: Vec<usize> = match forced {
            Some(v) => vec![v],
            None => (0..self.sizes[k]).collect(),
        };
        for v in candidates {
            let ok_in = inc[k]
                .iter()
                .map(|&e| &self.edges[e])
                .all(|(s, _, m)| *s >= k || m[assign[*s]] == v);
            let ok_out = outg[k]
                .iter()
                .map(|&e| &self.edges[e])
                .all(|(_, t, m)| *t > k || m[v] == if *t == k { v } else { assign[*t] });
            if ok_in && ok_out {
                assign[k] = v;
                self.extend(k + 1, assign, inc, outg, out);
            }
        }
    }
}

/// A functor from the subsets of `{1..n}` to finite sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeDiagram {
    pub n: usize,
    /// Size of the set at each subset mask.
    pub sizes: Vec<usize>,
    /// `maps[(u, i)]`: the map `X(u) -> X(u | 1 << i)` for bit `i` not in `u`.
    pub maps: BTreeMap<(usize, usize), Vec<usize>>,
}

impl CubeDiagram {
    pub fn new(
        n: usize,
        sizes: Vec<usize>,
        maps: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self> {
        let c = CubeDiagram { n, sizes, maps };
        c.validate()?;
        Ok(c)
    }

    /// The cube with every set of size `k` and identity maps.
    pub fn constant(n: usize, k: usize) -> Self {
        let mut maps = BTreeMap::new();
        for u in 0..1usize << n {
            for i in 0..n {
                if u >> i & 1 == 0 {
                    maps.insert((u, i), (0..k).collect());
                }
            }
        }
        CubeDiagram {
            n,
            sizes: vec![k; 1 << n],
            maps,
        }
    }

    pub fn full(&self) -> usize {
        (1 << self.n) - 1
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidCube(m));
        if self.sizes.len() != 1 << self.n {
            return bad(format!(
                "expected {} vertex sets, got {}",
                1usize << self.n,
                self.sizes.len()
            ));
        }
        for u in 0..1usize << self.n {
            for i in 0..self.n {
                if u >> i & 1 == 1 {
                    continue;
                }
                let Some(m) = self.maps.get(&(u, i)) else {
                    return bad(format!(
                        "missing map from {} adding {}",
                        subset_label(u),
                        i + 1
                    ));
                };
                let t = u | 1 << i;
                if m.len() != self.sizes[u] || m.iter().any(|&v| v >= self.sizes[t]) {
                    return bad(format!(
                        "map from {} adding {} is not a function",
                        subset_label(u),
                        i + 1
                    ));
                }
            }
        }
        if self.maps.len() != self.n << self.n.saturating_sub(1) {
            return bad("maps listed for non-edges".into());
        }
        for u in 0..1usize << self.n {
            for i in 0..self.n {
                for j in i + 1..self.n {
                    if u >> i & 1 == 1 || u >> j & 1 == 1 {
                        continue;
                    }
                    let (ui, uj) = (u | 1 << i, u | 1 << j);
                    for x in 0..self.sizes[u] {
                        let a = self.maps[&(ui, j)][self.maps[&(u, i)][x]];
                        let b = self.maps[&(uj, i)][self.maps[&(u, j)][x]];
                        if a != b {
                            return bad(format!(
                                "square at {} for {} and {} does not commute",
                                subset_label(u),
                                i + 1,
                                j + 1
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The composite `X(u) -> X(t)` for `u ⊆ t`.
    pub fn map_between(&self, u: usize, t: usize, x: usize) -> usize {
        debug_assert_eq!(u & !t, 0);
        let mut cur = u;
        let mut val = x;
        for i in 0..self.n {
            if t >> i & 1 == 1 && cur >> i & 1 == 0 {
                val = self.maps[&(cur, i)][val];
                cur |= 1 << i;
            }
        }
        val
    }

    /// The subdiagram on the given masks with cover edges between them.
    /// Masks are reordered by size so that sources come first; the returned
    /// vector gives the node order.
    pub fn subdiagram(&self, masks: &[usize]) -> (FiniteDiagram, Vec<usize>) {
        let mut nodes = masks.to_vec();
        nodes.sort_by_key(|&m| (m.count_ones(), m));
        let pos: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut edges = vec![];
        for &u in &nodes {
            for i in 0..self.n {
                let t = u | 1 << i;
                if t != u {
                    if let Some(&pt) = pos.get(&t) {
                        edges.push((pos[&u], pt, self.maps[&(u, i)].clone()));
                    }
                }
            }
        }
        (
            FiniteDiagram {
                sizes: nodes.iter().map(|&m| self.sizes[m]).collect(),
                edges,
            },
            nodes,
        )
    }

    /// The corner map of the subcube `[lo, hi]` at `lo`.
    pub fn interval_corner(&self, lo: usize, hi: usize) -> CornerMap {
        let (nodes, limit) = self.interval_limit(lo, hi);
        let index: HashMap<&Vec<usize>, usize> =
            limit.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let map = (0..self.sizes[lo])
            .map(|x| {
                let tuple: Vec<usize> = nodes.iter().map(|&w| self.map_between(lo, w, x)).collect();
                index[&tuple]
            })
            .collect();
        CornerMap { nodes, limit, map }
    }

    /// The limit over `lo ⊊ W ⊆ hi`, as node masks and compatible tuples.
    pub fn interval_limit(&self, lo: usize, hi: usize) -> (Vec<usize>, Vec<Vec<usize>>) {
        let masks: Vec<usize> = (0..1usize << self.n)
            .filter(|&w| w != lo && w & lo == lo && w & !hi == 0)
            .collect();
        let (diagram, nodes) = self.subdiagram(&masks);
        (nodes, diagram.limit())
    }
}

pub fn subset_label(mask: usize) -> String {
    let elems: Vec<String> = (0..usize::BITS as usize)
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", elems.join(","))
}

/// A map from a cube vertex to the limit over its strict supersets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerMap {
    /// Masks of the limit diagram, in tuple order.
    pub nodes: Vec<usize>,
    /// The limit as compatible tuples.
    pub limit: Vec<Vec<usize>>,
    /// Index into `limit` of the image of each element.
    pub map: Vec<usize>,
}

impl CornerMap {
    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.limit.len()];
        for &i in &self.map {
            hit[i] = true;
        }
        hit.iter().all(|&h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.is_surjective() && self.map.len() == self.limit.len()
    }
}

/// `X(u) -> lim_{u ⊊ T} X(T)`.
pub fn corner_map(x: &CubeDiagram, u: usize) -> CornerMap {
    x.interval_corner(u, x.full())
}

/// A natural transformation between cubes of the same dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeMap {
    pub source: CubeDiagram,
    pub target: CubeDiagram,
    /// `components[u]`: the map `X(u) -> Y(u)`.
    pub components: Vec<Vec<usize>>,
}

impl CubeMap {
    pub fn new(
        source: CubeDiagram,
        target: CubeDiagram,
        components: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if source.n != target.n {
            return Err(Error::InvalidCube(
                "source and target dimensions differ".into(),
            ));
        }
        if components.len() != source.sizes.len() {
            return Err(Error::InvalidCube(
                "one component per vertex is required".into(),
            ));
        }
        for (u, c) in components.iter().enumerate() {
            if c.len() != source.sizes[u] || c.iter().any(|&y| y >= target.sizes[u]) {
                return Err(Error::InvalidCube(format!(
                    "component at {} is not a function",
                    subset_label(u)
                )));
            }
        }
        for (&(u, i), m) in &source.maps {
            let t = u | 1 << i;
            for x in 0..source.sizes[u] {
                if components[t][m[x]] != target.maps[&(u, i)][components[u][x]] {
                    return Err(Error::InvalidCube(format!(
                        "naturality fails at {} adding {}",
                        subset_label(u),
                        i + 1
                    )));
                }
            }
        }
        Ok(CubeMap {
            source,
            target,
            components,
        })
    }

    pub fn identity(x: &CubeDiagram) -> Self {
        CubeMap {
            source: x.clone(),
            target: x.clone(),
            components: x.sizes.iter().map(|&k| (0..k).collect()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.source.n
    }

    /// The `(n+1)`-cube with the source on bit `n` clear and the target on
    /// bit `n` set.
    pub fn to_cube(&self) -> CubeDiagram {
        let n = self.n();
        let top = 1usize << n;
        let mut sizes = vec![0; top << 1];
        let mut maps = BTreeMap::new();
        for u in 0..top {
            sizes[u] = self.source.sizes[u];
            sizes[u | top] = self.target.sizes[u];
            maps.insert((u, n), self.components[u].clone());
            for i in 0..n {
                if u >> i & 1 == 0 {
                    maps.insert((u, i), self.source.maps[&(u, i)].clone());
                    maps.insert((u | top, i), self.target.maps[&(u, i)].clone());
                }
            }
        }
        CubeDiagram {
            n: n + 1,
            sizes,
            maps,
        }
    }
}

/// The corner map of the subcube map `∂_u^t X -> ∂_u^t Y`, viewed as a
/// `(|t - u| + 1)`-cube, at its initial vertex `X(u)`.
pub fn cube_map_corner(m: &CubeMap, u: usize, t: usize) -> CornerMap {
    let z = m.to_cube();
    z.interval_corner(u, t | 1 << m.n())
}

/// Whether every subcube corner map is surjective.
pub fn hypothesis_holds(m: &CubeMap) -> bool {
    first_hypothesis_failure(m).is_none()
}

/// First `(u, t)` whose subcube corner map is not surjective.
pub fn first_hypothesis_failure(m: &CubeMap) -> Option<(usize, usize)> {
    let full = m.source.full();
    for t in 0..=full {
        for u in 0..=full {
            if u & !t == 0 && !cube_map_corner(m, u, t).is_surjective() {
                return Some((u, t));
            }
        }
    }
    None
}

/// The chain `lim X = L_top -> ... -> L_0 -> lim Y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Vertex masks of `X` in the order they are added (final vertex first).
    pub order: Vec<usize>,
    /// Sizes of `L_0, ..., L_top`.
    pub limit_sizes: Vec<usize>,
    /// `links[i]` maps `L_{i+1} -> L_i`; the last entry maps `L_0 -> Y(∅)`.
    pub links: Vec<Vec<usize>>,
    pub links_surjective: Vec<bool>,
    /// `L_top -> X(∅)` is a bijection.
    pub top_is_lim_x: bool,
    /// The composite agrees with `X(∅) -> Y(∅)` elementwise.
    pub composite_matches: bool,
}

impl Factorization {
    pub fn all_surjective(&self) -> bool {
        self.links_surjective.iter().all(|&s| s)
    }
}

/// Vertices of `X` by distance from the final vertex, ties broken by the
/// lexicographic order of the removed set.
pub fn vertex_order(n: usize) -> Vec<usize> {
    let full = (1usize << n) - 1;
    let mut removed: Vec<Vec<usize>> = (0..1usize << n)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
        .collect();
    removed.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    removed
        .into_iter()
        .map(|r| full & !r.iter().fold(0, |acc, &i| acc | 1 << i))
        .collect()
}

fn surjective(map: &[usize], size: usize) -> bool {
    let mut hit = vec![false; size];
    for &v in map {
        hit[v] = true;
    }
    hit.iter().all(|&h| h)
}

pub fn factorize_limit(m: &CubeMap) -> Factorization {
    let n = m.n();
    let top = 1usize << n;
    let z = m.to_cube();
    let order = vertex_order(n);
    let y_nodes: Vec<usize> = (0..top).map(|u| u | top).collect();

    let mut limits: Vec<(Vec<usize>, Vec<Vec<usize>>)> = vec![];
    for i in 0..order.len() {
        let mut masks = y_nodes.clone();
        masks.extend_from_slice(&order[..=i]);
        let (d, nodes) = z.subdiagram(&masks);
        limits.push((nodes, d.limit()));
    }

    let restrict =
        |from: &(Vec<usize>, Vec<Vec<usize>>), to: &(Vec<usize>, Vec<Vec<usize>>)| -> Vec<usize> {
            let index: HashMap<&Vec<usize>, usize> =
                to.1.iter().enumerate().map(|(i, t)| (t, i)).collect();
            let pos: Vec<usize> =
                to.0.iter()
                    .map(|w| from.0.iter().position(|v| v == w).unwrap())
                    .collect();
            from.1
                .iter()
                .map(|t| index[&pos.iter().map(|&p| t[p]).collect::<Vec<_>>()])
                .collect()
        };

    let mut links = vec![];
    let mut links_surjective = vec![];
    for i in 1..limits.len() {
        let link = restrict(&limits[i], &limits[i - 1]);
        links_surjective.push(surjective(&link, limits[i - 1].1.len()));
        links.push(link);
    }
    let y0 = limits[0].0.iter().position(|&w| w == top).unwrap();
    let last: Vec<usize> = limits[0].1.iter().map(|t| t[y0]).collect();
    links_surjective.push(surjective(&last, m.target.sizes[0]));
    links.push(last);

    let (top_nodes, top_limit) = limits.last().unwrap();
    let x0 = top_nodes.iter().position(|&w| w == 0).unwrap();
    let proj: Vec<usize> = top_limit.iter().map(|t| t[x0]).collect();
    let top_is_lim_x = proj.len() == m.source.sizes[0] && surjective(&proj, m.source.sizes[0]);

    let mut composite_matches = true;
    for (e, t) in top_limit.iter().enumerate() {
        let mut idx = e;
        for link in links[..links.len() - 1].iter().rev() {
            idx = link[idx];
        }
        let y = links.last().unwrap()[idx];
        if y != m.components[0][t[x0]] {
            composite_matches = false;
        }
    }

    Factorization {
        order,
        limit_sizes: limits.iter().map(|(_, l)| l.len()).collect(),
        links,
        links_surjective,
        top_is_lim_x,
        composite_matches,
    }
}

/// Fills in the initial vertex of a punctured cube by the limit of the
/// rest. `sizes[0]` and the maps out of the empty set are ignored.
pub fn complete_punctured(x: &CubeDiagram) -> CubeDiagram {
    let masks: Vec<usize> = (1..1usize << x.n).collect();
    let (d, nodes) = x.subdiagram(&masks);
    let limit = d.limit();
    let mut out = x.clone();
    out.sizes[0] = limit.len();
    for i in 0..x.n {
        let p = nodes.iter().position(|&w| w == 1 << i).unwrap();
        out.maps
            .insert((0, i), limit.iter().map(|t| t[p]).collect());
    }
    out
}

/// Builds a random cube map satisfying the surjectivity hypothesis at the
/// top-level corners, or `None` if a limit is empty or too large.
///
/// `Y` is built from the final vertex backwards, each new set mapping into
/// the limit of what is already there. `X(u)` is then a set surjecting onto
/// the corner limit of the subcube map `[u, full]`.
pub fn random_cube_map<R: Rng>(n: usize, max_size: usize, rng: &mut R) -> Option<CubeMap> {
    let top = 1usize << n;
    let order = vertex_order(n);
    let mut z = CubeDiagram {
        n: n + 1,
        sizes: vec![0; top << 1],
        maps: BTreeMap::new(),
    };

    // Y lives on masks with bit n set.
    for &u in &order {
        let y = u | top;
        let size = rng.gen_range(1..=max_size);
        z.sizes[y] = size;
        if u == top - 1 {
            continue;
        }
        let corner = z.interval_limit(y, (top << 1) - 1);
        if corner.1.is_empty() {
            return None;
        }
        let picks: Vec<usize> = (0..size)
            .map(|_| rng.gen_range(0..corner.1.len()))
            .collect();
        assign_maps(&mut z, y, &corner, &picks);
    }
    for &u in &order {
        let corner = z.interval_limit(u, (top << 1) - 1);
        let c = corner.1.len();
        if c == 0 || c > max_size {
            return None;
        }
        let size = rng.gen_range(c..=max_size);
        let mut picks: Vec<usize> = (0..c).collect();
        picks.extend((c..size).map(|_| rng.gen_range(0..c)));
        picks.shuffle(rng);
        z.sizes[u] = size;
        assign_maps(&mut z, u, &corner, &picks);
    }

    let mut source = CubeDiagram {
        n,
        sizes: z.sizes[..top].to_vec(),
        maps: BTreeMap::new(),
    };
    let mut target = CubeDiagram {
        n,
        sizes: z.sizes[top..].to_vec(),
        maps: BTreeMap::new(),
    };
    for u in 0..top {
        for i in 0..n {
            if u >> i & 1 == 0 {
                source.maps.insert((u, i), z.maps[&(u, i)].clone());
                target.maps.insert((u, i), z.maps[&(u | top, i)].clone());
            }
        }
    }
    let components = (0..top).map(|u| z.maps[&(u, n)].clone()).collect();
    Some(CubeMap::new(source, target, components).expect("random cube map is valid"))
}

/// Sets the edge maps out of `u` from chosen limit tuples.
fn assign_maps(
    z: &mut CubeDiagram,
    u: usize,
    corner: &(Vec<usize>, Vec<Vec<usize>>),
    picks: &[usize],
) {
    let (nodes, limit) = corner;
    for i in 0..z.n {
        let t = u | 1 << i;
        if t == u || t >= z.sizes.len() {
            continue;
        }
        let p = nodes.iter().position(|&w| w == t).unwrap();
        z.maps
            .insert((u, i), picks.iter().map(|&k| limit[k][p]).collect());
    }
}

/// Outcome of randomized testing of the cube lemma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialSummary {
    pub accepted: usize,
    pub generated: usize,
    /// Accepted trials where `lim X -> lim Y` was surjective.
    pub surjective: usize,
    /// Accepted trials whose factorization had surjective links and composed
    /// to `lim X -> lim Y`.
    pub factorization_ok: usize,
}

/// Generates cube maps until `trials` satisfy the full hypothesis, checking
/// the conclusion on each.
pub fn run_trials<R: Rng>(n: usize, max_size: usize, trials: usize, rng: &mut R) -> TrialSummary {
    let mut s = TrialSummary {
        accepted: 0,
        generated: 0,
        surjective: 0,
        factorization_ok: 0,
    };
    while s.accepted < trials {
        s.generated += 1;
        let Some(m) = random_cube_map(n, max_size, rng) else {
            continue;
        };
        if !hypothesis_holds(&m) {
            continue;
        }
        s.accepted += 1;
        if surjective(&m.components[0], m.target.sizes[0]) {
            s.surjective += 1;
        }
        let f = factorize_limit(&m);
        if f.all_surjective() && f.top_is_lim_x && f.composite_matches {
            s.factorization_ok += 1;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_cube(a: usize, b: usize, f: Vec<usize>) -> CubeDiagram {
        CubeDiagram::new(1, vec![a, b], BTreeMap::from([((0, 0), f)])).unwrap()
    }

    #[test]
    fn one_cube_corner_is_the_map() {
        let x = one_cube(3, 2, vec![0, 1, 1]);
        let c = corner_map(&x, 0);
        assert_eq!(c.limit, vec![vec![0], vec![1]]);
        assert_eq!(c.map, vec![0, 1, 1]);
    }

    #[test]
    fn constant_cube_corners_are_bijections() {
        let x = CubeDiagram::constant(3, 2);
        for u in 0..7 {
            assert!(corner_map(&x, u).is_bijective());
        }
        // the final vertex maps to the one-point limit of the empty diagram
        assert_eq!(corner_map(&x, 7).limit.len(), 1);
    }

    #[test]
    fn pullback_corner_is_bijection() {
        // X({1}) = 2, X({2}) = 3, X({1,2}) = 2; X(∅) is their pullback.
        let mut p = CubeDiagram {
            n: 2,
            sizes: vec![0, 2, 3, 2],
            maps: BTreeMap::from([((1, 1), vec![0, 1]), ((2, 0), vec![0, 1, 1])]),
        };
        p.maps.insert((0, 0), vec![]);
        p.maps.insert((0, 1), vec![]);
        let full = complete_punctured(&p);
        assert_eq!(full.sizes[0], 3);
        assert!(CubeDiagram::new(2, full.sizes.clone(), full.maps.clone()).is_ok());
        assert!(corner_map(&full, 0).is_bijective());
    }

    #[test]
    fn non_commuting_square_rejected() {
        let maps = BTreeMap::from([
            ((0, 0), vec![0]),
            ((0, 1), vec![0]),
            ((1, 1), vec![0]),
            ((2, 0), vec![1]),
        ]);
        assert!(CubeDiagram::new(2, vec![1, 1, 1, 2], maps).is_err());
    }

    #[test]
    fn vertex_order_by_distance() {
        assert_eq!(vertex_order(2), vec![0b11, 0b10, 0b01, 0b00]);
    }

    #[test]
    fn identity_map_factorizes_into_bijections() {
        let m = CubeMap::identity(&CubeDiagram::constant(2, 3));
        let f = factorize_limit(&m);
        assert!(f.all_surjective() && f.top_is_lim_x && f.composite_matches);
        assert!(f.limit_sizes.iter().all(|&s| s == 3));
    }

    #[test]
    fn random_trials_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = run_trials(2, 4, 20, &mut rng);
        assert_eq!(s.accepted, 20);
        assert_eq!(s.surjective, 20);
        assert_eq!(s.factorization_ok, 20);
    }
}
