//! Independent oracles and random generators shared by the integration
//! tests. Nothing here calls the library routine it is used to check.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use isokit::{FiniteGroup, GComplex, GMap};
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

type Q = Ratio<i64>;

/// Every subset of `G` closed under multiplication, by scanning the power set.
pub fn brute_subgroups(g: &FiniteGroup) -> BTreeSet<Vec<usize>> {
    let n = g.order();
    assert!(n <= 16);
    let mut out = BTreeSet::new();
    for mask in 1u32..(1u32 << n) {
        if mask & 1 == 0 {
            continue;
        }
        let elems: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let closed = elems
            .iter()
            .all(|&a| elems.iter().all(|&b| mask >> g.mul(a, b) & 1 == 1));
        if closed {
            out.insert(elems);
        }
    }
    out
}

/// Reduced row echelon form; returns pivot columns.
fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::one() / m[r][c];
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                let pivot = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot) {
                    *x -= *p * f;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Basis of the null space of `m` (as column vectors of length `cols`).
fn null_space(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f];
            }
            v
        })
        .collect()
}

fn rank(vectors: &[Vec<Q>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let mut a = vectors.to_vec();
    rref(&mut a).len()
}

/// Solves `basis * c = v` for `c` (columns are basis vectors); the system
/// must be consistent.
fn coordinates(basis: &[Vec<Q>], v: &[Q]) -> Vec<Q> {
    let n = v.len();
    let k = basis.len();
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..k).map(|j| basis[j][i]).chain([v[i]]).collect())
        .collect();
    let pivots = rref(&mut a);
    assert!(!pivots.contains(&k), "vector outside the span");
    let mut c = vec![Q::zero(); k];
    for (r, &p) in pivots.iter().enumerate() {
        c[p] = a[r][k];
    }
    c
}

/// Simplices of `x` grouped by dimension, with index maps.
struct Chains {
    by_dim: Vec<Vec<usize>>,
    pos: HashMap<usize, usize>,
}

fn chains(x: &GComplex) -> Chains {
    let mut by_dim: Vec<Vec<usize>> = vec![vec![]; x.dim() + 1];
    let mut pos = HashMap::new();
    for i in 0..x.n_simplices() {
        let d = x.simplex(i).len() - 1;
        pos.insert(i, by_dim[d].len());
        by_dim[d].push(i);
    }
    Chains { by_dim, pos }
}

/// Matrix of `∂_d: C_d -> C_{d-1}` as rows over `C_{d-1}`.
fn boundary_matrix(x: &GComplex, c: &Chains, d: usize) -> Vec<Vec<Q>> {
    let mut m = vec![vec![Q::zero(); c.by_dim[d].len()]; c.by_dim[d - 1].len()];
    for (j, &s) in c.by_dim[d].iter().enumerate() {
        let verts = x.simplex(s);
        for k in 0..verts.len() {
            let mut face = verts.clone();
            face.remove(k);
            let fi = x.index_of(&face).unwrap();
            m[c.pos[&fi]][j] = if k % 2 == 0 { Q::one() } else { -Q::one() };
        }
    }
    m
}

/// Image of simplex `s` under `f` on oriented chains: `±` the image simplex,
/// or zero if degenerate.
fn chain_image(f: &GMap, s: usize) -> Option<(usize, i64)> {
    let img: Vec<usize> = f.source.simplex(s).iter().map(|&v| f.vertices[v]).collect();
    let mut sorted = img.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != img.len() {
        return None;
    }
    let mut inversions = 0;
    for a in 0..img.len() {
        for b in a + 1..img.len() {
            if img[a] > img[b] {
                inversions += 1;
            }
        }
    }
    Some((
        f.target.index_of(&sorted).unwrap(),
        if inversions % 2 == 0 { 1 } else { -1 },
    ))
}

/// Rational Betti numbers.
pub fn betti(x: &GComplex) -> Vec<usize> {
    let c = chains(x);
    let top = x.dim();
    let ranks: Vec<usize> = (0..=top + 1)
        .map(|d| {
            if d == 0 || d > top {
                0
            } else {
                let m = boundary_matrix(x, &c, d);
                let mut a = m.clone();
                rref(&mut a).len()
            }
        })
        .collect();
    (0..=top)
        .map(|d| c.by_dim[d].len() - ranks[d] - ranks[d + 1])
        .collect()
}

/// `Σ (-1)^d tr(f_* | H_d(X; Q))`, computed from a homology basis.
pub fn lefschetz_by_homology(f: &GMap) -> i64 {
    let x = &f.source;
    let c = chains(x);
    let top = x.dim();
    let mut total = Q::zero();
    for d in 0..=top {
        let n = c.by_dim[d].len();
        let cycles = if d == 0 {
            identity_basis(n)
        } else {
            null_space(&boundary_matrix(x, &c, d), n)
        };
        let boundaries: Vec<Vec<Q>> = if d == top {
            vec![]
        } else {
            let m = boundary_matrix(x, &c, d + 1);
            (0..c.by_dim[d + 1].len())
                .map(|j| m.iter().map(|row| row[j]).collect())
                .collect()
        };
        // independent boundary vectors, then cycles extending them
        let mut basis: Vec<Vec<Q>> = vec![];
        for b in boundaries {
            let mut t = basis.clone();
            t.push(b.clone());
            if rank(&t) > basis.len() {
                basis.push(b);
            }
        }
        let n_b = basis.len();
        for z in cycles {
            let mut t = basis.clone();
            t.push(z.clone());
            if rank(&t) > basis.len() {
                basis.push(z);
            }
        }
        let mut trace = Q::zero();
        for (h, z) in basis.iter().enumerate().skip(n_b) {
            let mut img = vec![Q::zero(); n];
            for (j, &s) in c.by_dim[d].iter().enumerate() {
                if z[j].is_zero() {
                    continue;
                }
                if let Some((t, sign)) = chain_image(f, s) {
                    img[c.pos[&t]] += z[j] * Q::from_integer(sign);
                }
            }
            trace += coordinates(&basis, &img)[h];
        }
        if d % 2 == 0 {
            total += trace;
        } else {
            total -= trace;
        }
    }
    assert!(total.is_integer());
    total.to_integer()
}

fn identity_basis(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect()
}

/// Twisted classes of `φ` on `Z^r` by flood fill inside a box: points of a
/// core window are joined along `x -> x ± (h - φ h)` for basis vectors `h`.
/// Returns the number of classes meeting the core, which equals the class
/// count when that count is finite and the box is large enough.
pub fn twisted_count_window(phi: &[Vec<i64>], core: i64, radius: i64) -> usize {
    let r = phi.len();
    let steps: Vec<Vec<i64>> = (0..r)
        .map(|j| (0..r).map(|i| i64::from(i == j) - phi[i][j]).collect())
        .collect();
    let side = (2 * radius + 1) as usize;
    let total = side.pow(r as u32);
    let encode = |p: &[i64]| -> Option<usize> {
        let mut idx = 0;
        for &c in p {
            if c.abs() > radius {
                return None;
            }
            idx = idx * side + (c + radius) as usize;
        }
        Some(idx)
    };
    let decode = |mut idx: usize| -> Vec<i64> {
        let mut p = vec![0; r];
        for k in (0..r).rev() {
            p[k] = (idx % side) as i64 - radius;
            idx /= side;
        }
        p
    };
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for idx in 0..total {
        let p = decode(idx);
        for s in &steps {
            let q: Vec<i64> = p.iter().zip(s).map(|(a, b)| a + b).collect();
            if let Some(j) = encode(&q) {
                let (a, b) = (find(&mut parent, idx), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut roots = BTreeSet::new();
    let mut core_point = vec![0i64; r];
    loop {
        roots.insert(find(&mut parent, encode(&core_point).unwrap()));
        let mut k = 0;
        while k < r {
            core_point[k] += 1;
            if core_point[k] < core {
                break;
            }
            core_point[k] = 0;
            k += 1;
        }
        if k == r {
            break;
        }
    }
    roots.len()
}

fn random_group<R: Rng>(rng: &mut R) -> Arc<FiniteGroup> {
    let c2 = FiniteGroup::cyclic(2);
    Arc::new(match rng.gen_range(0..4) {
        0 => c2,
        1 => FiniteGroup::cyclic(3),
        2 => FiniteGroup::direct_product(&c2, &c2),
        _ => FiniteGroup::symmetric(3),
    })
}

/// A random complex with a simplicial action, built from orbits `G/H` of
/// vertices and orbits of random facets of dimension at most 2. The result
/// may be irregular.
pub fn random_complex<R: Rng>(rng: &mut R, max_vertices: usize) -> GComplex {
    loop {
        let g = random_group(rng);
        let subs: Vec<_> = g.lattice().subgroups().to_vec();
        let mut orbits = vec![];
        let mut count = 0;
        loop {
            let h = subs.choose(rng).unwrap().clone();
            let size = g.order() / h.order();
            if count + size > max_vertices {
                break;
            }
            count += size;
            orbits.push(h);
            if rng.gen_bool(0.35) {
                break;
            }
        }
        if orbits.is_empty() {
            continue;
        }
        // vertex = (orbit, coset); g acts by left multiplication
        let mut labels: Vec<(usize, Vec<usize>)> = vec![];
        for (o, h) in orbits.iter().enumerate() {
            for (_, coset) in g.left_cosets(h) {
                labels.push((o, coset));
            }
        }
        let index: HashMap<(usize, Vec<usize>), usize> = labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        let n = labels.len();
        let action: Vec<Vec<usize>> = g
            .elements()
            .map(|a| {
                labels
                    .iter()
                    .map(|(o, c)| {
                        let mut img: Vec<usize> = c.iter().map(|&x| g.mul(a, x)).collect();
                        img.sort_unstable();
                        index[&(*o, img)]
                    })
                    .collect()
            })
            .collect();
        let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for _ in 0..rng.gen_range(1..=4) {
            let k = rng.gen_range(2..=3).min(n);
            let mut verts: Vec<usize> = (0..n).collect();
            verts.shuffle(rng);
            let base: Vec<usize> = verts[..k].to_vec();
            for p in &action {
                let mut s: Vec<usize> = base.iter().map(|&v| p[v]).collect();
                s.sort_unstable();
                facets.insert(s);
            }
        }
        for v in 0..n {
            facets.insert(vec![v]);
        }
        if let Ok(x) = GComplex::new(g, n, facets.into_iter().collect(), action) {
            return x;
        }
    }
}

/// A random regular complex with at most `max_vertices` vertices after
/// regularization.
pub fn random_regular_complex<R: Rng>(rng: &mut R, max_vertices: usize) -> GComplex {
    loop {
        let x = random_complex(rng, max_vertices);
        if let Ok(y) = x.make_regular() {
            if y.n_vertices() <= max_vertices {
                return y;
            }
        }
    }
}

/// Enumerates equivariant simplicial self-maps by choosing images of
/// vertex-orbit representatives. With `exact_isotropy`, images must have
/// the same vertex isotropy (necessary for isovariance). `visit` returns
/// `false` to stop early. Candidate order is shuffled when `rng` is given.
pub fn for_each_equivariant_self_map<R: Rng>(
    x: &GComplex,
    exact_isotropy: bool,
    mut rng: Option<&mut R>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let g = x.group();
    let n = x.n_vertices();
    let mut orbit_reps = vec![];
    let mut seen = vec![false; n];
    for v in 0..n {
        if !seen[v] {
            orbit_reps.push(v);
            for a in g.elements() {
                seen[x.act_vertex(a, v)] = true;
            }
        }
    }
    let candidates: Vec<Vec<usize>> = orbit_reps
        .iter()
        .map(|&v| {
            let hv = x.vertex_isotropy(v);
            let mut c: Vec<usize> = (0..n)
                .filter(|&w| {
                    let hw = x.vertex_isotropy(w);
                    if exact_isotropy {
                        hw == hv
                    } else {
                        hv.is_subgroup_of(hw)
                    }
                })
                .collect();
            if let Some(r) = rng.as_deref_mut() {
                c.shuffle(r);
            }
            c
        })
        .collect();
    let mut images: Vec<Option<usize>> = vec![None; n];
    let _ = assign(x, &orbit_reps, &candidates, 0, &mut images, visit);
}

fn assign(
    x: &GComplex,
    reps: &[usize],
    cands: &[Vec<usize>],
    k: usize,
    images: &mut Vec<Option<usize>>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if k == reps.len() {
        let f: Vec<usize> = images.iter().map(|o| o.unwrap()).collect();
        return visit(&f);
    }
    let g = x.group();
    let v = reps[k];
    for &w in &cands[k] {
        let mut touched = vec![];
        let mut ok = true;
        for a in g.elements() {
            let (gv, gw) = (x.act_vertex(a, v), x.act_vertex(a, w));
            match images[gv] {
                Some(y) if y != gw => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    images[gv] = Some(gw);
                    touched.push(gv);
                }
            }
        }
        // facets with all vertices assigned must map to simplices
        if ok {
            ok = x.facets().iter().all(|f| {
                let img: Option<Vec<usize>> = f.iter().map(|&u| images[u]).collect();
                img.is_none_or(|s| x.find(&s).is_some())
            });
        }
        if ok && !assign(x, reps, cands, k + 1, images, visit) {
            for t in touched {
                images[t] = None;
            }
            return false;
        }
        for t in touched {
            images[t] = None;
        }
    }
    true
}

/// Some equivariant simplicial self-map, chosen at random.
pub fn random_equivariant_self_map<R: Rng>(x: &GComplex, rng: &mut R) -> GMap {
    let mut found = None;
    for_each_equivariant_self_map(x, false, Some(rng), &mut |f| {
        found = Some(f.to_vec());
        false
    });
    GMap::new(x.clone(), x.clone(), found.expect("the identity exists")).unwrap()
}

/// All isovariant simplicial self-maps of a regular complex.
pub fn isovariant_self_maps(x: &GComplex) -> Vec<GMap> {
    let mut out = vec![];
    for_each_equivariant_self_map::<rand_chacha::ChaCha8Rng>(x, true, None, &mut |f| {
        let m = GMap::new(x.clone(), x.clone(), f.to_vec()).unwrap();
        if m.is_isovariant().unwrap() {
            out.push(m);
        }
        true
    });
    out
}
