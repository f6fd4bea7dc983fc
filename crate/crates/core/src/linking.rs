//! Linking simplices, Illman simplices and isovariant cell decompositions.
//!
//! Both linking and Illman simplices are realised as coset complexes. For
//! subgroups `L_0, ..., L_n` attached to the vertices of a standard simplex
//! and totally ordered by inclusion, the quotient of `G x Δ^n` identifies
//! `(g, x)` with `(g', x)` on the open face spanned by positions `S` iff
//! `g L = g' L` for the smallest `L` among `S`. Such a face is therefore
//! determined by the cosets at its vertices, so the complex whose vertices
//! are the pairs `(q, g L_q)` and whose facets are `{(q, g L_q)}_q` is an
//! exact model of the quotient.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gcomplex::{GComplex, Simplex, Subcomplex};
use crate::group::{Element, FiniteGroup, Subgroup, SubgroupChain};

/// A vertex of a coset complex: a chain position and a left coset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CosetVertex {
    pub position: usize,
    pub coset: Vec<Element>,
}

/// `Δ^H_G` for a strict chain `H_0 < ... < H_n`. Vertex positions follow the
/// chain: the vertex at position `k` for `g` is `g H_k`.
#[derive(Clone, Debug)]
pub struct LinkingSimplex {
    pub chain: SubgroupChain,
    pub complex: GComplex,
    pub vertices: Vec<CosetVertex>,
}

/// Illman's equivariant simplex for a weakly decreasing list
/// `H_0 >= ... >= H_n`; position `j` carries `H_j`.
#[derive(Clone, Debug)]
pub struct IllmanSimplex {
    pub groups: Vec<Subgroup>,
    pub complex: GComplex,
    pub vertices: Vec<CosetVertex>,
}

/// The image of a proper subchain's linking simplex inside a boundary.
#[derive(Clone, Debug)]
pub struct BoundaryPiece {
    /// Positions of the subchain inside the full chain.
    pub positions: Vec<usize>,
    pub chain: SubgroupChain,
    /// Vertex map from `build_linking(subchain)` into the full complex.
    pub vertex_map: Vec<usize>,
    pub image: Subcomplex,
}

#[derive(Clone, Debug)]
pub struct Boundary {
    pub subcomplex: Subcomplex,
    /// One piece per proper nonempty subchain, ordered by size then positions.
    pub pieces: Vec<BoundaryPiece>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalDomain {
    /// The facet `{e H_0, ..., e H_n}`, vertices in position order.
    pub facet: Vec<usize>,
    /// `g` and the facet `g . fd`, for every group element.
    pub translates: Vec<(Element, Vec<usize>)>,
}

/// Builds the coset complex for `groups[q]` at position `q`. The groups
/// must be totally ordered by inclusion.
fn coset_complex(group: &Arc<FiniteGroup>, groups: &[Subgroup]) -> (GComplex, Vec<CosetVertex>) {
    // Enumerate the quotient of G x {vertices of Δ^n}: (g, q) ~ (g', q)
    // iff g L_q = g' L_q.
    let mut labels: BTreeSet<CosetVertex> = BTreeSet::new();
    for g in group.elements() {
        for (q, l) in groups.iter().enumerate() {
            labels.insert(CosetVertex {
                position: q,
                coset: group.left_coset(g, l),
            });
        }
    }
    let vertices: Vec<CosetVertex> = labels.into_iter().collect();
    let index: HashMap<&CosetVertex, usize> =
        vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let lookup = |g: Element, q: usize| {
        index[&CosetVertex {
            position: q,
            coset: group.left_coset(g, &groups[q]),
        }]
    };
    let facets: Vec<Vec<usize>> = group
        .elements()
        .map(|g| (0..groups.len()).map(|q| lookup(g, q)).collect())
        .collect();
    let action: Vec<Vec<usize>> = group
        .elements()
        .map(|a| {
            vertices
                .iter()
                .map(|v| {
                    let mut c: Vec<Element> = v.coset.iter().map(|&x| group.mul(a, x)).collect();
                    c.sort_unstable();
                    index[&CosetVertex {
                        position: v.position,
                        coset: c,
                    }]
                })
                .collect()
        })
        .collect();
    let complex = GComplex::new(group.clone(), vertices.len(), facets, action)
        .expect("coset complex is valid");
    (complex, vertices)
}

pub fn build_linking(group: &Arc<FiniteGroup>, chain: &SubgroupChain) -> Result<LinkingSimplex> {
    let chain = SubgroupChain::new(chain.groups().to_vec())?;
    for h in chain.groups() {
        if h.elements().iter().any(|&x| x >= group.order()) || group.subgroup(h.elements()).is_err()
        {
            return Err(Error::UnknownSubgroup(h.to_string()));
        }
    }
    let (complex, vertices) = coset_complex(group, chain.groups());
    Ok(LinkingSimplex {
        chain,
        complex,
        vertices,
    })
}

pub fn build_illman(group: &Arc<FiniteGroup>, groups: &[Subgroup]) -> Result<IllmanSimplex> {
    check_weakly_decreasing(groups)?;
    let (complex, vertices) = coset_complex(group, groups);
    Ok(IllmanSimplex {
        groups: groups.to_vec(),
        complex,
        vertices,
    })
}

fn check_weakly_decreasing(groups: &[Subgroup]) -> Result<()> {
    if groups.is_empty() {
        return Err(Error::NotWeaklyDecreasing(0));
    }
    for (j, w) in groups.windows(2).enumerate() {
        if !w[1].is_subgroup_of(&w[0]) {
            return Err(Error::NotWeaklyDecreasing(j + 1));
        }
    }
    Ok(())
}

impl LinkingSimplex {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.complex.group_arc()
    }

    /// Vertex for the coset `g H_k`.
    pub fn vertex(&self, g: Element, position: usize) -> usize {
        let coset = self.group().left_coset(g, &self.chain.groups()[position]);
        self.vertices
            .iter()
            .position(|v| v.position == position && v.coset == coset)
            .expect("coset vertex")
    }

    /// Vertices of the facet `{g H_0, ..., g H_n}`, in position order.
    pub fn facet_of(&self, g: Element) -> Vec<usize> {
        (0..self.chain.groups().len())
            .map(|k| self.vertex(g, k))
            .collect()
    }

    /// The embedding of `build_linking(subchain)` for the given positions.
    pub fn embed_subchain(&self, positions: &[usize]) -> Result<(LinkingSimplex, Vec<usize>)> {
        let sub = build_linking(self.group(), &self.chain.subchain(positions))?;
        let map = sub
            .vertices
            .iter()
            .map(|v| {
                let full = CosetVertex {
                    position: positions[v.position],
                    coset: v.coset.clone(),
                };
                self.vertices
                    .iter()
                    .position(|w| *w == full)
                    .expect("subchain coset vertex")
            })
            .collect();
        Ok((sub, map))
    }
}

/// The boundary of a linking simplex and its decomposition into images of
/// linking simplices of proper subchains.
pub fn boundary(l: &LinkingSimplex) -> Result<Boundary> {
    let n = l.chain.length();
    if n == 0 {
        return Err(Error::ZeroChain);
    }
    let x = &l.complex;
    let subcomplex = Subcomplex::new(
        (0..x.n_simplices())
            .filter(|&i| x.simplex(i).len() <= n)
            .collect(),
    );
    let mut subsets: Vec<Vec<usize>> = (1u32..(1u32 << (n + 1)) - 1)
        .map(|mask| (0..=n).filter(|&k| mask >> k & 1 == 1).collect())
        .collect();
    subsets.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let mut pieces = vec![];
    for positions in subsets {
        let (sub, vertex_map) = l.embed_subchain(&positions)?;
        let image = Subcomplex::new(
            sub.complex
                .simplices()
                .iter()
                .map(|s| {
                    x.find(&s.iter().map(|&v| vertex_map[v]).collect::<Vec<_>>())
                        .expect("image is a simplex")
                })
                .collect(),
        );
        pieces.push(BoundaryPiece {
            chain: sub.chain.clone(),
            positions,
            vertex_map,
            image,
        });
    }
    Ok(Boundary { subcomplex, pieces })
}

pub fn fundamental_domain(l: &LinkingSimplex) -> FundamentalDomain {
    let facet = l.facet_of(0);
    let translates = l.group().elements().map(|g| (g, l.facet_of(g))).collect();
    FundamentalDomain { facet, translates }
}

/// The collapse of a weakly decreasing list onto its distinct members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collapse {
    /// `K_0 > K_1 > ... > K_k`.
    pub k_groups: Vec<Subgroup>,
    /// The ordered surjection `p: {0..n} -> {0..k}`.
    pub p: Vec<usize>,
}

impl Collapse {
    pub fn k(&self) -> usize {
        self.k_groups.len() - 1
    }

    pub fn n(&self) -> usize {
        self.p.len() - 1
    }

    /// `K` as an ascending strict chain.
    pub fn chain(&self) -> SubgroupChain {
        SubgroupChain::new(self.k_groups.iter().rev().cloned().collect())
            .expect("collapsed list is strict")
    }

    /// `n_i = |p^-1(i)| - 1`.
    pub fn fiber_dims(&self) -> Vec<usize> {
        (0..=self.k())
            .map(|i| self.p.iter().filter(|&&x| x == i).count() - 1)
            .collect()
    }

    pub fn fiber_start(&self, i: usize) -> usize {
        self.p
            .iter()
            .position(|&x| x == i)
            .expect("p is surjective")
    }

    /// Disk dimension `n - k` of the cell `D^{n-k} x Δ^K`.
    pub fn disk_dim(&self) -> usize {
        self.n() - self.k()
    }
}

pub fn collapse_map(groups: &[Subgroup]) -> Result<Collapse> {
    check_weakly_decreasing(groups)?;
    let mut k_groups: Vec<Subgroup> = vec![];
    let mut p = vec![];
    for h in groups {
        if k_groups.last() != Some(h) {
            k_groups.push(h.clone());
        }
        p.push(k_groups.len() - 1);
    }
    Ok(Collapse { k_groups, p })
}

/// The vertex assignment `φ` from `Δ^{n_0} x ... x Δ^{n_k} x fd(Δ^K)` to the
/// fundamental domain `w_0, ..., w_n` of the Illman simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiMap {
    pub collapse: Collapse,
}

impl PhiMap {
    pub fn fiber_dims(&self) -> Vec<usize> {
        self.collapse.fiber_dims()
    }

    /// `(v_{ℓ_0}, ..., v_{ℓ_k}, v_{K_i}) ↦ w_{min p^-1(i) + ℓ_i}`.
    pub fn apply(&self, ells: &[usize], i: usize) -> usize {
        self.collapse.fiber_start(i) + ells[i]
    }

    /// All product vertices `(ℓ_0, ..., ℓ_k)`, lexicographically.
    pub fn product_vertices(&self) -> Vec<Vec<usize>> {
        let dims = self.fiber_dims();
        let mut out = vec![vec![]];
        for &d in &dims {
            out = out
                .into_iter()
                .flat_map(|t| (0..=d).map(move |l| [t.clone(), vec![l]].concat()))
                .collect();
        }
        out
    }

    /// The full table, ordered by product vertex then `i`.
    pub fn table(&self) -> Vec<(Vec<usize>, usize, usize)> {
        let mut out = vec![];
        for ells in self.product_vertices() {
            for i in 0..=self.collapse.k() {
                out.push((ells.clone(), i, self.apply(&ells, i)));
            }
        }
        out
    }

    /// Maximal simplices of the staircase triangulation of the product of
    /// simplices: monotone lattice paths from `(0,...,0)` to `(n_0,...,n_k)`.
    pub fn staircase_simplices(&self) -> Vec<Vec<Vec<usize>>> {
        let dims = self.fiber_dims();
        let mut out = vec![];
        let mut path = vec![vec![0; dims.len()]];
        staircase(&dims, &mut path, &mut out);
        out
    }
}

fn staircase(dims: &[usize], path: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
    let cur = path.last().unwrap().clone();
    if cur.iter().zip(dims).all(|(a, b)| a == b) {
        out.push(path.clone());
        return;
    }
    for i in 0..dims.len() {
        if cur[i] < dims[i] {
            let mut next = cur.clone();
            next[i] += 1;
            path.push(next);
            staircase(dims, path, out);
            path.pop();
        }
    }
}

pub fn phi_vertex_map(groups: &[Subgroup]) -> Result<PhiMap> {
    Ok(PhiMap {
        collapse: collapse_map(groups)?,
    })
}

/// One orbit simplex inside a cell, placed by a group translate so that the
/// pieces of a cell glue along shared walls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellPiece {
    pub translate: Element,
    /// Index of the orbit representative in the complex.
    pub representative: usize,
    /// Vertices `w_0, ..., w_n` of `translate . representative`, ordered by
    /// isotropy descending.
    pub simplex: Vec<usize>,
    /// Isotropy of `w_0, ..., w_n`.
    pub groups: Vec<Subgroup>,
    pub collapse: Collapse,
}

impl CellPiece {
    pub fn phi(&self) -> PhiMap {
        PhiMap {
            collapse: self.collapse.clone(),
        }
    }

    /// Image in the complex of the domain vertex `(ℓ, g . v_{K_i})`.
    pub fn phi_image(&self, x: &GComplex, ells: &[usize], i: usize, g: Element) -> usize {
        x.act_vertex(g, self.simplex[self.phi().apply(ells, i)])
    }

    fn sorted_simplex(&self) -> Simplex {
        let mut s = self.simplex.clone();
        s.sort_unstable();
        s
    }
}

/// A cell `D^m x Δ^K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub disk_dim: usize,
    /// `K` descending, as realised by the first piece.
    pub k_groups: Vec<Subgroup>,
    /// Orbit dimension of the first piece.
    pub orbit_dim: usize,
    pub pieces: Vec<CellPiece>,
}

impl Cell {
    pub fn chain(&self) -> SubgroupChain {
        SubgroupChain::new(self.k_groups.iter().rev().cloned().collect()).expect("strict")
    }

    /// Index of `G/K_min`, the number of simplices in each piece's orbit.
    pub fn orbit_size(&self, g: &FiniteGroup) -> usize {
        g.order() / self.k_groups.last().unwrap().order()
    }

    /// Simplices in the open cell: the orbits of all pieces.
    pub fn interior(&self, x: &GComplex) -> BTreeSet<usize> {
        self.pieces
            .iter()
            .flat_map(|p| x.simplex_orbit(p.representative))
            .collect()
    }

    /// Simplices of the closed cell.
    pub fn closure(&self, x: &GComplex) -> BTreeSet<usize> {
        x.closure(&self.interior(x)).simplices
    }

    /// The attaching region: closed cell minus open cell.
    pub fn attaching(&self, x: &GComplex) -> BTreeSet<usize> {
        let interior = self.interior(x);
        self.closure(x).difference(&interior).copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsovariantCellStructure {
    pub cells: Vec<Cell>,
    /// `skeleta[d]`: simplices of dimension at most `d`.
    pub skeleta: Vec<Subcomplex>,
}

impl IsovariantCellStructure {
    /// Cells whose chain has length at least one.
    pub fn mixed_cells(&self) -> Vec<&Cell> {
        self.cells.iter().filter(|c| c.k_groups.len() > 1).collect()
    }

    /// Cell owning each simplex of `x`.
    pub fn cell_of_simplex(&self, x: &GComplex) -> Vec<Option<usize>> {
        let mut owner = vec![None; x.n_simplices()];
        for (c, cell) in self.cells.iter().enumerate() {
            for s in cell.interior(x) {
                owner[s] = Some(c);
            }
        }
        owner
    }

    /// `Σ |G/K_min| * #pieces` over cells.
    pub fn simplex_count(&self, g: &FiniteGroup) -> usize {
        self.cells
            .iter()
            .map(|c| c.orbit_size(g) * c.pieces.len())
            .sum()
    }
}

/// Vertices of a simplex sorted by isotropy descending (ties by vertex
/// index), provided the isotropies are totally ordered by inclusion.
fn illman_order(x: &GComplex, idx: usize) -> Option<(Vec<usize>, Vec<Subgroup>)> {
    let mut verts = x.simplex(idx).clone();
    verts.sort_by(|&a, &b| {
        let (ha, hb) = (x.vertex_isotropy(a), x.vertex_isotropy(b));
        hb.order().cmp(&ha.order()).then(a.cmp(&b))
    });
    let groups: Vec<Subgroup> = verts
        .iter()
        .map(|&v| x.vertex_isotropy(v).clone())
        .collect();
    if groups.windows(2).all(|w| w[1].is_subgroup_of(&w[0])) {
        Some((verts, groups))
    } else {
        None
    }
}

/// Checks that the closed orbit of simplex `idx` is isomorphic to the Illman
/// simplex for its vertex isotropies.
fn check_illman_orbit(x: &GComplex, idx: usize, verts: &[usize], groups: &[Subgroup]) -> bool {
    let orbit_of: Vec<usize> = {
        let mut o = vec![0; x.n_vertices()];
        for (k, orb) in x.vertex_orbits().iter().enumerate() {
            for &v in orb {
                o[v] = k;
            }
        }
        o
    };
    let distinct: BTreeSet<usize> = verts.iter().map(|&v| orbit_of[v]).collect();
    if distinct.len() != verts.len() {
        return false;
    }
    let Ok(ill) = build_illman(x.group_arc(), groups) else {
        return false;
    };
    // (j, g H_j) ↦ g . w_j
    let map: Vec<usize> = ill
        .vertices
        .iter()
        .map(|cv| x.act_vertex(cv.coset[0], verts[cv.position]))
        .collect();
    for cv in &ill.vertices {
        if cv.coset.iter().any(|&h| {
            x.act_vertex(h, verts[cv.position]) != x.act_vertex(cv.coset[0], verts[cv.position])
        }) {
            return false;
        }
    }
    let image: BTreeSet<usize> = map.iter().copied().collect();
    if image.len() != map.len() {
        return false;
    }
    let closure = x.closure(&x.simplex_orbit(idx).into_iter().collect());
    let mut images = BTreeSet::new();
    for s in ill.complex.simplices() {
        match x.find(&s.iter().map(|&v| map[v]).collect::<Vec<_>>()) {
            Some(i) => {
                images.insert(i);
            }
            None => return false,
        }
    }
    images == closure.simplices && ill.complex.n_simplices() == closure.len()
}

/// One cell per orbit of simplices, attached in orbit-dimension order.
pub fn decompose(x: &GComplex) -> Result<IsovariantCellStructure> {
    if let Some(i) = x.first_irregular() {
        return Err(Error::NotEquivariantTriangulation(x.simplex(i).clone()));
    }
    let mut cells = vec![];
    for orbit in x.simplex_orbits() {
        let rep = orbit[0];
        let (verts, groups) = illman_order(x, rep)
            .ok_or_else(|| Error::NotEquivariantTriangulation(x.simplex(rep).clone()))?;
        if !check_illman_orbit(x, rep, &verts, &groups) {
            return Err(Error::NotEquivariantTriangulation(x.simplex(rep).clone()));
        }
        let collapse = collapse_map(&groups)?;
        cells.push(Cell {
            disk_dim: collapse.disk_dim(),
            k_groups: collapse.k_groups.clone(),
            orbit_dim: verts.len() - 1,
            pieces: vec![CellPiece {
                translate: 0,
                representative: rep,
                simplex: verts,
                groups,
                collapse,
            }],
        });
    }
    // Simplex orbits are already ordered by smallest member, and simplices
    // are sorted by dimension, so this is a stable sort by orbit dimension.
    cells.sort_by_key(|c| c.orbit_dim);
    let skeleta = (0..=x.dim())
        .map(|d| {
            Subcomplex::new(
                (0..x.n_simplices())
                    .filter(|&i| x.simplex(i).len() <= d + 1)
                    .collect(),
            )
        })
        .collect();
    Ok(IsovariantCellStructure { cells, skeleta })
}

/// Merges pairs of cells `D^{m+1} x Δ^K` across a shared wall `D^m x Δ^K`.
///
/// A wall cell with a single piece qualifies when its representative has
/// exactly two cofaces one dimension up, these lie in two different cells,
/// and both have the same `K` and disk dimension `m + 1`. The union of two
/// disks glued along a disk in their boundaries is again a disk, so the
/// merged cell is `D^{m+1} x Δ^K`. Merging repeats until no wall qualifies;
/// the merged cell takes the later of the two positions.
pub fn coarsen(cs: &IsovariantCellStructure, x: &GComplex) -> IsovariantCellStructure {
    let mut cells = cs.cells.clone();
    let g = x.group();
    'outer: loop {
        let owner = IsovariantCellStructure {
            cells: cells.clone(),
            skeleta: vec![],
        }
        .cell_of_simplex(x);
        for (wi, wall) in cells.iter().enumerate() {
            if wall.pieces.len() != 1 {
                continue;
            }
            let w = wall.pieces[0].representative;
            let ws = x.simplex(w);
            let cofaces: Vec<usize> = (0..x.n_simplices())
                .filter(|&i| {
                    x.simplex(i).len() == ws.len() + 1
                        && ws.iter().all(|v| x.simplex(i).contains(v))
                })
                .collect();
            if cofaces.len() != 2 {
                continue;
            }
            let (Some(c1), Some(c2)) = (owner[cofaces[0]], owner[cofaces[1]]) else {
                continue;
            };
            if c1 == c2 || c1 == wi || c2 == wi {
                continue;
            }
            let same_type = |c: &Cell| {
                c.disk_dim == wall.disk_dim + 1 && c.k_groups.len() == wall.k_groups.len()
            };
            if !same_type(&cells[c1]) || !same_type(&cells[c2]) {
                continue;
            }
            // K must agree after placing everything around the wall.
            let Some(a) = locate(x, &cells[c1], cofaces[0]) else {
                continue;
            };
            let Some(b) = locate(x, &cells[c2], cofaces[1]) else {
                continue;
            };
            // cofaces[0] = a.0 . piece a.1 of c1; bring the wall and c2 into
            // the frame of c1's pieces.
            let a_inv = g.inv(a.0);
            let shift2 = g.mul(a_inv, b.0);
            let mut pieces = cells[c1].pieces.clone();
            let mut wall_piece = wall.pieces[0].clone();
            retranslate(x, &mut wall_piece, a_inv);
            pieces.push(wall_piece.clone());
            for p in &cells[c2].pieces {
                let mut q = p.clone();
                retranslate(x, &mut q, shift2);
                pieces.push(q);
            }
            let wall_k: Vec<Subgroup> = collapse_map(&wall_piece.groups).unwrap().k_groups;
            let consistent = pieces.iter().all(|p| p.collapse.k_groups == wall_k);
            if !consistent {
                continue;
            }
            let (first, last) = (c1.min(c2), c1.max(c2));
            let mut merged = cells[last].clone();
            merged.pieces = pieces;
            merged.k_groups = wall_k;
            let mut next = vec![];
            for (i, c) in cells.iter().enumerate() {
                if i == last {
                    next.push(merged.clone());
                } else if i != first && i != wi {
                    next.push(c.clone());
                }
            }
            cells = next;
            continue 'outer;
        }
        break;
    }
    IsovariantCellStructure {
        cells,
        skeleta: cs.skeleta.clone(),
    }
}

/// Finds `(g, piece)` with `g . piece.simplex = simplex idx`.
fn locate(x: &GComplex, cell: &Cell, idx: usize) -> Option<(Element, usize)> {
    for (pi, p) in cell.pieces.iter().enumerate() {
        let s = p.sorted_simplex();
        for g in x.group().elements() {
            if x.act_simplex(g, &s) == *x.simplex(idx) {
                return Some((g, pi));
            }
        }
    }
    None
}

/// Replaces a piece by its translate under `h`.
fn retranslate(x: &GComplex, p: &mut CellPiece, h: Element) {
    let g = x.group();
    p.translate = g.mul(h, p.translate);
    p.simplex = p.simplex.iter().map(|&v| x.act_vertex(h, v)).collect();
    p.groups = p.groups.iter().map(|s| g.conjugate(h, s)).collect();
    p.collapse = collapse_map(&p.groups).expect("conjugation preserves order");
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellFailure {
    pub cell: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellReport {
    pub cells_checked: usize,
    pub failure: Option<CellFailure>,
}

impl CellReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks each cell's characteristic vertex map: isotropy preservation,
/// surjectivity onto the closed cell, injectivity of the index assignment,
/// and that the attaching region lies in earlier cells.
pub fn validate_cells(c: &IsovariantCellStructure, x: &GComplex) -> CellReport {
    let fail = |cell: usize, reason: String| CellReport {
        cells_checked: cell,
        failure: Some(CellFailure { cell, reason }),
    };
    let g = x.group();
    let owner = c.cell_of_simplex(x);
    let mut covered = vec![0usize; x.n_simplices()];
    for cell in &c.cells {
        for s in cell.interior(x) {
            covered[s] += 1;
        }
    }
    for (ci, cell) in c.cells.iter().enumerate() {
        let mut image_vertices: BTreeSet<usize> = BTreeSet::new();
        for piece in &cell.pieces {
            if piece.simplex.len() != piece.groups.len()
                || piece.collapse.p.len() != piece.simplex.len()
            {
                return fail(ci, "piece data has inconsistent lengths".into());
            }
            let phi = piece.phi();
            let k = piece.collapse.k();
            // index map (i, ℓ) -> min p^-1(i) + ℓ is a bijection onto 0..n
            let mut hit = vec![0; piece.simplex.len()];
            for (i, &d) in phi.fiber_dims().iter().enumerate() {
                for l in 0..=d {
                    let mut ells = vec![0; k + 1];
                    ells[i] = l;
                    let j = phi.apply(&ells, i);
                    if j >= hit.len() {
                        return fail(ci, format!("φ index {j} out of range"));
                    }
                    hit[j] += 1;
                }
            }
            if hit.iter().any(|&h| h != 1) {
                return fail(ci, "φ is not injective on the open cell".into());
            }
            for (ells, i, _) in phi.table() {
                let v = piece.phi_image(x, &ells, i, 0);
                let expected = &piece.collapse.k_groups[i];
                if x.vertex_isotropy(v) != expected {
                    return fail(
                        ci,
                        format!(
                            "vertex {v} has isotropy {} but φ requires {}",
                            x.vertex_isotropy(v),
                            expected
                        ),
                    );
                }
                if !g
                    .elements()
                    .any(|h| g.conjugate(h, &cell.k_groups[i]) == *expected)
                {
                    return fail(
                        ci,
                        format!("piece chain at {i} is not conjugate to the cell chain"),
                    );
                }
                for h in g.elements() {
                    image_vertices.insert(piece.phi_image(x, &ells, i, h));
                }
            }
            // each staircase simplex times fd(Δ^K) maps onto the piece simplex
            let target: BTreeSet<usize> = piece.simplex.iter().copied().collect();
            for path in phi.staircase_simplices() {
                let img: BTreeSet<usize> = path
                    .iter()
                    .flat_map(|ells| {
                        (0..=k)
                            .map(|i| piece.phi_image(x, ells, i, 0))
                            .collect::<Vec<_>>()
                    })
                    .collect();
                if img != target {
                    return fail(ci, "φ does not map a top simplex onto the piece".into());
                }
            }
            if x.find(&piece.simplex).is_none() {
                return fail(ci, "piece is not a simplex".into());
            }
        }
        let closure_vertices: BTreeSet<usize> = cell
            .closure(x)
            .iter()
            .filter(|&&s| x.simplex(s).len() == 1)
            .map(|&s| x.simplex(s)[0])
            .collect();
        if image_vertices != closure_vertices {
            return fail(
                ci,
                "φ is not surjective onto the closed cell vertices".into(),
            );
        }
        for s in cell.interior(x) {
            if covered[s] != 1 {
                return fail(
                    ci,
                    format!(
                        "simplex {:?} lies in {} open cells",
                        x.simplex(s),
                        covered[s]
                    ),
                );
            }
        }
        for s in cell.attaching(x) {
            match owner[s] {
                Some(o) if o < ci => {}
                _ => {
                    return fail(
                        ci,
                        format!(
                            "attaching simplex {:?} is not in an earlier cell",
                            x.simplex(s)
                        ),
                    )
                }
            }
        }
    }
    if let Some(s) = covered.iter().position(|&k| k == 0) {
        return fail(
            c.cells.len(),
            format!("simplex {:?} lies in no cell", x.simplex(s)),
        );
    }
    CellReport {
        cells_checked: c.cells.len(),
        failure: None,
    }
}

/// Name of `D^m x Δ^K`, e.g. `D^1 x Δ^{e<C2}`.
pub fn cell_label(g: &FiniteGroup, cell: &Cell) -> String {
    let names: Vec<String> = cell
        .k_groups
        .iter()
        .rev()
        .map(|h| g.subgroup_name(h))
        .collect();
    format!("D^{} x Δ^{{{}}}", cell.disk_dim, names.join("<"))
}

/// Count of cells by label.
pub fn cell_census(g: &FiniteGroup, c: &IsovariantCellStructure) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for cell in &c.cells {
        *out.entry(cell_label(g, cell)).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn linking_e_c2() {
        let g = c2();
        let l = build_linking(&g, &g.parse_chain("e<C2").unwrap()).unwrap();
        assert_eq!(l.complex.n_vertices(), 3);
        assert_eq!(l.complex.facets(), &[vec![0, 2], vec![1, 2]]);
        assert_eq!(l.complex.vertex_isotropy(2), &g.whole());
        assert!(l.complex.vertex_isotropy(0).is_trivial());
    }

    #[test]
    fn single_group_is_discrete() {
        let g = Arc::new(FiniteGroup::symmetric(3));
        let h = g.parse_subgroup("C2").unwrap();
        let l = build_linking(&g, &SubgroupChain::new(vec![h]).unwrap()).unwrap();
        assert_eq!(l.complex.n_vertices(), 3);
        assert_eq!(l.complex.dim(), 0);
        assert!(matches!(boundary(&l), Err(Error::ZeroChain)));
    }

    #[test]
    fn collapse_examples() {
        let g = c2();
        let (big, e) = (g.whole(), g.trivial_subgroup());
        let c = collapse_map(&[big.clone(), e.clone(), e.clone()]).unwrap();
        assert_eq!(c.k_groups, vec![big.clone(), e.clone()]);
        assert_eq!(c.p, vec![0, 1, 1]);
        assert_eq!(
            collapse_map(&[big.clone(), e.clone()]).unwrap().p,
            vec![0, 1]
        );
        assert_eq!(
            collapse_map(&[e.clone(), e.clone(), e.clone()]).unwrap().p,
            vec![0, 0, 0]
        );
        assert!(matches!(
            collapse_map(&[e.clone(), big.clone()]),
            Err(Error::NotWeaklyDecreasing(1))
        ));
    }

    #[test]
    fn phi_repeated_pair() {
        let g = c2();
        let h = g.whole();
        let phi = phi_vertex_map(&[h.clone(), h]).unwrap();
        assert_eq!(phi.apply(&[0], 0), 0);
        assert_eq!(phi.apply(&[1], 0), 1);
    }

    #[test]
    fn fundamental_domain_of_e_c3() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let l = build_linking(&g, &g.parse_chain("e<C3").unwrap()).unwrap();
        let fd = fundamental_domain(&l);
        assert_eq!(fd.facet.len(), 2);
        let distinct: BTreeSet<Vec<usize>> = fd.translates.iter().map(|(_, f)| f.clone()).collect();
        assert_eq!(distinct.len(), 3);
    }
}
