//! Command-line front end for isokit.
//!
//! Every command prints one JSON report with sorted keys:
//! `{"command", "inputs", "result", "status"}`, where `inputs` maps each
//! input path to the SHA-256 of its bytes and `status` is `"ok"` or
//! `{"error": {"code", "message"}}`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use isokit::cubelim::{self, CubeMap};
use isokit::fixpoint::{self, AbelianGroup, PiData, TwistedSetup};
use isokit::gmap::pi0_link_check;
use isokit::io::{self, Loader, DEFAULT_MAX_GROUP_ORDER};
use isokit::linking::{self, IsovariantCellStructure};
use isokit::{Error, FiniteGroup, GComplex, GMap};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_BAD_INPUT: i32 = 65;
pub const EXIT_DOMAIN: i32 = 70;

pub const MAX_GROUP_ORDER_VAR: &str = "ISOKIT_MAX_GROUP_ORDER";

#[derive(Parser, Debug)]
#[command(
    name = "isokit",
    version,
    about = "Exact computations on equivariant simplicial complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Subgroup lattice, conjugacy classes and table of marks.
    Group(GroupArgs),
    /// Summary of a complex; `--regularize` also emits the regular subdivision.
    Complex(ComplexArgs),
    /// Linking simplices of subgroup chains.
    #[command(subcommand)]
    Linking(LinkingCommand),
    /// Isovariant cell structure of an equivariant triangulation.
    Decompose(DecomposeArgs),
    /// Exit 0 if isovariant, 1 if only equivariant, 2 if not equivariant.
    CheckIsovariant(MapArgs),
    /// Isotropy strata, their closures and the filtration.
    Strata(ComplexArgs),
    /// Lefschetz number of a self-map and of its restrictions to fixed sets.
    Lefschetz(MapArgs),
    /// Burnside-ring Lefschetz class of a map, or inversion of a marks vector.
    Burnside(BurnsideArgs),
    /// Reidemeister trace for abelian fundamental group.
    Reidemeister(ReidemeisterArgs),
    /// Fixed-point removal verdict for an isovariant self-map.
    Verdict(VerdictArgs),
    /// Cube diagrams of finite sets.
    #[command(subcommand)]
    Cube(CubeCommand),
    /// DOT graph of the stratification poset.
    ExportDot(DotArgs),
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// Group JSON file.
    #[arg(long, alias = "group")]
    file: PathBuf,
}

#[derive(Args, Debug)]
struct ComplexArgs {
    /// Complex JSON file.
    #[arg(long, alias = "file")]
    complex: PathBuf,
    #[arg(long)]
    regularize: bool,
}

#[derive(Subcommand, Debug)]
enum LinkingCommand {
    /// Emit the linking simplex of a chain as complex JSON.
    Build(ChainArgs),
    /// Boundary pieces of the linking simplex.
    Boundary(ChainArgs),
}

#[derive(Args, Debug)]
struct ChainArgs {
    #[arg(long)]
    group: PathBuf,
    /// Strict chain such as `e<C2`.
    #[arg(long)]
    chain: String,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(long, alias = "file")]
    complex: PathBuf,
    /// Merge cells across walls into `D^m x Δ^K` cells.
    #[arg(long)]
    coarsen: bool,
    /// Subdivide first when an orbit of simplices is not an equivariant simplex.
    #[arg(long)]
    subdivide: bool,
}

#[derive(Args, Debug)]
struct MapArgs {
    /// Map JSON file.
    #[arg(long, alias = "file")]
    map: PathBuf,
}

#[derive(Args, Debug)]
struct BurnsideArgs {
    #[arg(long, conflicts_with_all = ["group", "marks"])]
    map: Option<PathBuf>,
    #[arg(long, requires = "marks")]
    group: Option<PathBuf>,
    /// Marks vector over all subgroup classes, e.g. `[2,0]`.
    #[arg(long, requires = "group")]
    marks: Option<String>,
}

#[derive(Args, Debug)]
struct ReidemeisterArgs {
    #[arg(long)]
    map: PathBuf,
    /// Abelian fundamental group, e.g. `Z`, `Z^2`, `Z x Z/2`.
    #[arg(long)]
    pi: String,
    /// Matrix of the induced endomorphism, e.g. `[-1]` or `[[0,1],[1,0]]`.
    #[arg(long)]
    phi: String,
    /// Spanning tree and edge labels: `{"tree": [[u,v],...], "labels": [{"edge": [u,v], "value": [...]}]}`.
    /// Derived from the complex when omitted.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerdictArgs {
    #[arg(long)]
    map: PathBuf,
    /// Manifold dimensions per isotropy class, e.g. `{"e":5,"C2":3}`.
    #[arg(long)]
    dims: Option<String>,
}

#[derive(Subcommand, Debug)]
enum CubeCommand {
    /// Check the corner hypothesis and the surjectivity of the limit map.
    Check(CubeArgs),
}

#[derive(Args, Debug)]
struct CubeArgs {
    /// Cube or cube map JSON; a single cube is read as its identity map.
    #[arg(long, required_unless_present = "trials")]
    file: Option<PathBuf>,
    /// Run randomized trials instead of (or after) checking a file.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cube dimension for randomized trials.
    #[arg(long, default_value_t = 3)]
    dim: usize,
    /// Largest vertex set in randomized trials.
    #[arg(long, default_value_t = 5)]
    max_size: usize,
}

#[derive(Args, Debug)]
struct DotArgs {
    #[arg(long, alias = "file")]
    complex: PathBuf,
    /// Also write the DOT text to this file.
    #[arg(long)]
    output: Option<PathBuf>,
}

/// What a run produced: the exit code and the text for stdout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

enum Failure {
    Usage(String),
    BadInput(String, String),
    Domain(String, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::BadInput(e.code().into(), e.to_string())
        } else {
            Failure::Domain(e.code().into(), e.to_string())
        }
    }
}

fn bad_input(msg: impl Into<String>) -> Failure {
    Failure::BadInput("Parse".into(), msg.into())
}

struct Context {
    loader: Loader,
    inputs: BTreeMap<String, String>,
}

impl Context {
    /// Reads a JSON file, recording its digest and those of the files it
    /// names under `group`, `source` or `target`.
    fn read(&mut self, path: &Path) -> Result<Value, Failure> {
        let bytes =
            std::fs::read(path).map_err(|e| bad_input(format!("{}: {e}", path.display())))?;
        self.inputs.insert(
            path.display().to_string(),
            hex::encode(Sha256::digest(&bytes)),
        );
        let v: Value = serde_json::from_slice(&bytes)
            .map_err(|e| bad_input(format!("{}: {e}", path.display())))?;
        let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        for key in ["group", "source", "target"] {
            if let Some(Value::String(p)) = v.get(key) {
                let nested = dir.join(p);
                if !self.inputs.contains_key(&nested.display().to_string())
                    && self.inputs.len() < 64
                {
                    // unreadable references are reported by the loader
                    let _ = self.read(&nested);
                }
            }
        }
        Ok(v)
    }

    fn loader_for(&self, path: &Path) -> Loader {
        Loader {
            base: path.parent().map(Path::to_path_buf).unwrap_or_default(),
            max_group_order: self.loader.max_group_order,
        }
    }

    fn group(&mut self, path: &Path) -> Result<FiniteGroup, Failure> {
        let v = self.read(path)?;
        Ok(self.loader_for(path).group(&v)?)
    }

    fn complex(&mut self, path: &Path) -> Result<GComplex, Failure> {
        let v = self.read(path)?;
        Ok(self.loader_for(path).complex(&v)?)
    }

    fn map(&mut self, path: &Path) -> Result<GMap, Failure> {
        let v = self.read(path)?;
        Ok(self.loader_for(path).map(&v)?)
    }
}

/// Runs the command line `argv` (program name first).
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let code = if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand {
                        EXIT_USAGE
                    } else {
                        0
                    };
                    Outcome {
                        code,
                        stdout: e.render().to_string(),
                    }
                }
                _ => report(
                    "usage",
                    BTreeMap::new(),
                    Err(Failure::Usage(
                        e.render().to_string().trim_end().to_string(),
                    )),
                ),
            };
        }
    };
    let max_group_order = match std::env::var(MAX_GROUP_ORDER_VAR) {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => {
                let msg = format!("{MAX_GROUP_ORDER_VAR} must be a positive integer, got `{s}`");
                return report("usage", BTreeMap::new(), Err(Failure::Usage(msg)));
            }
        },
        Err(_) => DEFAULT_MAX_GROUP_ORDER,
    };
    let mut ctx = Context {
        loader: Loader::new(max_group_order),
        inputs: BTreeMap::new(),
    };
    let name = command_name(&cli.command);
    let result = dispatch(&cli.command, &mut ctx);
    match result {
        Ok((value, code)) => {
            let mut out = report(name, ctx.inputs, Ok(value));
            out.code = code;
            out
        }
        Err(f) => report(name, ctx.inputs, Err(f)),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Group(_) => "group",
        Command::Complex(_) => "complex",
        Command::Linking(LinkingCommand::Build(_)) => "linking build",
        Command::Linking(LinkingCommand::Boundary(_)) => "linking boundary",
        Command::Decompose(_) => "decompose",
        Command::CheckIsovariant(_) => "check-isovariant",
        Command::Strata(_) => "strata",
        Command::Lefschetz(_) => "lefschetz",
        Command::Burnside(_) => "burnside",
        Command::Reidemeister(_) => "reidemeister",
        Command::Verdict(_) => "verdict",
        Command::Cube(CubeCommand::Check(_)) => "cube check",
        Command::ExportDot(_) => "export-dot",
    }
}

fn report(
    command: &str,
    inputs: BTreeMap<String, String>,
    result: Result<Value, Failure>,
) -> Outcome {
    let (result, status, code) = match result {
        Ok(v) => (v, json!("ok"), 0),
        Err(Failure::Usage(m)) => (
            Value::Null,
            json!({"error": {"code": "Usage", "message": m}}),
            EXIT_USAGE,
        ),
        Err(Failure::BadInput(c, m)) => (
            Value::Null,
            json!({"error": {"code": c, "message": m}}),
            EXIT_BAD_INPUT,
        ),
        Err(Failure::Domain(c, m)) => (
            Value::Null,
            json!({"error": {"code": c, "message": m}}),
            EXIT_DOMAIN,
        ),
    };
    let v = json!({"command": command, "inputs": inputs, "result": result, "status": status});
    Outcome {
        code,
        stdout: canonical(&v),
    }
}

/// Pretty JSON with object keys sorted at every level.
pub fn canonical(v: &Value) -> String {
    fn sort(v: &Value) -> Value {
        match v {
            Value::Object(m) => {
                let mut entries: Vec<(&String, &Value)> = m.iter().collect();
                entries.sort_by(|a, b| a.0.cmp(b.0));
                Value::Object(
                    entries
                        .into_iter()
                        .map(|(k, v)| (k.clone(), sort(v)))
                        .collect(),
                )
            }
            Value::Array(a) => Value::Array(a.iter().map(sort).collect()),
            other => other.clone(),
        }
    }
    let mut s = serde_json::to_string_pretty(&sort(v)).expect("JSON values serialize");
    s.push('\n');
    s
}

type Step = Result<(Value, i32), Failure>;

fn ok(v: Value) -> Step {
    Ok((v, 0))
}

fn dispatch(c: &Command, ctx: &mut Context) -> Step {
    match c {
        Command::Group(a) => group_cmd(&ctx.group(&a.file)?),
        Command::Complex(a) => complex_cmd(&ctx.complex(&a.complex)?, a.regularize),
        Command::Linking(LinkingCommand::Build(a)) => {
            let g = std::sync::Arc::new(ctx.group(&a.group)?);
            let chain = g.parse_chain(&a.chain)?;
            ok(io::complex_to_json(
                &linking::build_linking(&g, &chain)?.complex,
            ))
        }
        Command::Linking(LinkingCommand::Boundary(a)) => {
            let g = std::sync::Arc::new(ctx.group(&a.group)?);
            let chain = g.parse_chain(&a.chain)?;
            boundary_cmd(&g, &linking::build_linking(&g, &chain)?)
        }
        Command::Decompose(a) => decompose_cmd(&ctx.complex(&a.complex)?, a.coarsen, a.subdivide),
        Command::CheckIsovariant(a) => check_isovariant_cmd(&ctx.map(&a.map)?),
        Command::Strata(a) => strata_cmd(&ctx.complex(&a.complex)?),
        Command::Lefschetz(a) => lefschetz_cmd(&ctx.map(&a.map)?),
        Command::Burnside(a) => match (&a.map, &a.group, &a.marks) {
            (Some(m), _, _) => burnside_map_cmd(&ctx.map(m)?),
            (None, Some(g), Some(marks)) => burnside_marks_cmd(&ctx.group(g)?, marks),
            _ => Err(Failure::Usage(
                "burnside needs --map, or --group with --marks".into(),
            )),
        },
        Command::Reidemeister(a) => {
            let f = ctx.map(&a.map)?;
            let labels = match &a.labels {
                Some(p) => Some(ctx.read(p)?),
                None => None,
            };
            reidemeister_cmd(&f, &a.pi, &a.phi, labels.as_ref())
        }
        Command::Verdict(a) => verdict_cmd(&ctx.map(&a.map)?, a.dims.as_deref()),
        Command::Cube(CubeCommand::Check(a)) => {
            let cube = match &a.file {
                Some(p) => Some(ctx.read(p)?),
                None => None,
            };
            cube_cmd(cube.as_ref(), a)
        }
        Command::ExportDot(a) => {
            let x = ctx.complex(&a.complex)?;
            let dot = export_dot(&x)?;
            if let Some(out) = &a.output {
                std::fs::write(out, &dot)
                    .map_err(|e| bad_input(format!("{}: {e}", out.display())))?;
            }
            ok(json!({"dot": dot}))
        }
    }
}

fn class_names(g: &FiniteGroup, classes: &[usize]) -> Vec<String> {
    let lat = g.lattice();
    classes
        .iter()
        .map(|&c| lat.class_name(c).to_string())
        .collect()
}

/// Covering relations of proper subconjugacy among the given classes.
fn covers(g: &FiniteGroup, classes: &[usize]) -> Vec<(usize, usize)> {
    let lat = g.lattice();
    let mut out = vec![];
    for &a in classes {
        for &b in classes {
            if lat.is_properly_subconjugate(a, b)
                && !classes.iter().any(|&c| {
                    lat.is_properly_subconjugate(a, c) && lat.is_properly_subconjugate(c, b)
                })
            {
                out.push((a, b));
            }
        }
    }
    out
}

fn group_cmd(g: &FiniteGroup) -> Step {
    let lat = g.lattice();
    let all: Vec<usize> = (0..lat.classes().len()).collect();
    let classes: Vec<Value> = lat
        .classes()
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "order": c.order,
                "conjugates": c.members.len(),
                "representative": lat.subgroups()[c.representative()].elements(),
            })
        })
        .collect();
    let hasse: Vec<Value> = covers(g, &all)
        .into_iter()
        .map(|(a, b)| json!([lat.class_name(a), lat.class_name(b)]))
        .collect();
    ok(json!({
        "order": g.order(),
        "abelian": g.is_abelian(),
        "subgroups": lat.subgroups().len(),
        "classes": classes,
        "subconjugacy_covers": hasse,
        "table_of_marks": isokit::group::table_of_marks(g).matrix,
    }))
}

fn complex_cmd(x: &GComplex, regularize: bool) -> Step {
    let mut f_vector = vec![0usize; x.dim() + 1];
    for s in x.simplices() {
        f_vector[s.len() - 1] += 1;
    }
    let mut v = json!({
        "vertices": x.n_vertices(),
        "simplices": x.n_simplices(),
        "dim": x.dim(),
        "f_vector": f_vector,
        "euler_characteristic": x.euler_characteristic(),
        "regular": x.is_regular(),
        "isotropy_classes": class_names(x.group(), &x.isotropy_classes()),
        "vertex_orbits": x.vertex_orbits().len(),
        "simplex_orbits": x.simplex_orbits().len(),
    });
    if regularize {
        v["regularized"] = io::complex_to_json(&x.make_regular()?);
    }
    ok(v)
}

fn boundary_cmd(g: &FiniteGroup, l: &linking::LinkingSimplex) -> Step {
    let b = linking::boundary(l)?;
    let x = &l.complex;
    let pieces: Vec<Value> = b
        .pieces
        .iter()
        .map(|p| {
            json!({
                "positions": p.positions,
                "chain": p.chain.groups().iter().map(|h| g.subgroup_name(h)).collect::<Vec<_>>(),
                "vertex_map": p.vertex_map,
                "simplices": p.image.len(),
            })
        })
        .collect();
    ok(json!({
        "pieces": pieces,
        "boundary": b.subcomplex.as_simplices(x),
        "complex": io::complex_to_json(x),
    }))
}

fn cells_json(x: &GComplex, cs: &IsovariantCellStructure) -> Value {
    let g = x.group();
    let cells: Vec<Value> = cs
        .cells
        .iter()
        .map(|cell| {
            let pieces: Vec<Value> = cell
                .pieces
                .iter()
                .map(|p| {
                    let phi: Vec<Value> = p
                        .phi()
                        .table()
                        .into_iter()
                        .map(|(ells, i, _)| json!({"ell": ells, "i": i, "vertex": p.phi_image(x, &ells, i, g.identity())}))
                        .collect();
                    json!({"translate": p.translate, "simplex": p.simplex, "phi": phi})
                })
                .collect();
            let attach: Vec<&Vec<usize>> = cell.attaching(x).iter().map(|&s| x.simplex(s)).collect();
            json!({
                "m": cell.disk_dim,
                "chain": cell.k_groups.iter().rev().map(|h| g.subgroup_name(h)).collect::<Vec<_>>(),
                "label": linking::cell_label(g, cell),
                "orbit_dim": cell.orbit_dim,
                "pieces": pieces,
                "attach": attach,
            })
        })
        .collect();
    json!(cells)
}

fn decompose_cmd(x: &GComplex, coarsen: bool, subdivide: bool) -> Step {
    let (y, cs) = match linking::decompose(x) {
        Ok(cs) => (x.clone(), cs),
        Err(Error::NotEquivariantTriangulation(_)) if subdivide => {
            let (sd, _) = x.make_regular()?.barycentric_subdivision();
            let cs = linking::decompose(&sd)?;
            (sd, cs)
        }
        Err(e) => return Err(e.into()),
    };
    let cs = if coarsen {
        linking::coarsen(&cs, &y)
    } else {
        cs
    };
    let check = linking::validate_cells(&cs, &y);
    let mut v = json!({
        "cells": cells_json(&y, &cs),
        "census": linking::cell_census(y.group(), &cs),
        "valid": check.passed(),
        "subdivided": y.n_vertices() != x.n_vertices(),
    });
    if let Some(f) = check.failure {
        v["failure"] = json!({"cell": f.cell, "reason": f.reason});
    }
    if y.n_vertices() != x.n_vertices() {
        v["complex"] = io::complex_to_json(&y);
    }
    ok(v)
}

fn check_isovariant_cmd(f: &GMap) -> Step {
    if let Some((element, vertex)) = f.equivariance_failure() {
        return Ok((
            json!({"equivariant": false, "isovariant": false, "witness": {"element": element, "vertex": vertex}}),
            2,
        ));
    }
    let iso = f.is_isovariant()?;
    let mut v = json!({"equivariant": true, "isovariant": iso});
    if !iso {
        let r = f.regularize()?;
        if let Some(i) = r.isovariance_failure() {
            v["witness"] = json!({"simplex": r.source.simplex(i), "subdivided": r.source.n_vertices() != f.source.n_vertices()});
        }
    } else {
        let p = pi0_link_check(&f.regularize()?)?;
        v["pi0_check"] = json!({"passed": p.passed, "summary": p.summary});
    }
    Ok((v, if iso { 0 } else { 1 }))
}

fn strata_cmd(x: &GComplex) -> Step {
    let y = x.make_regular()?;
    let g = y.group();
    let lat = g.lattice();
    let strata: Vec<Value> = y
        .strata()
        .iter()
        .map(|s| {
            let closure = y.stratum_closure(s);
            json!({
                "class": lat.class_name(s.class),
                "order": lat.classes()[s.class].order,
                "simplices": s.simplices.len(),
                "closure_simplices": closure.len(),
                "closure_vertices": closure.vertices(&y),
                "components": isokit::gmap::stratum_components(&y, s.class).len(),
                "fixed_set_dim": y.fixed_subcomplex(lat.representative(s.class)).dim(&y),
            })
        })
        .collect();
    let f = y.filtration()?;
    let filtration: Vec<Value> = f
        .order
        .iter()
        .zip(&f.levels)
        .map(|(&c, level)| json!({"class": lat.class_name(c), "simplices": level.len()}))
        .collect();
    ok(json!({
        "regularized": y.n_vertices() != x.n_vertices(),
        "strata": strata,
        "filtration": filtration,
        "forced_fixed_points": fixpoint::forced_fixed_points(&y),
        "treelike": y.is_treelike(),
    }))
}

fn named(pairs: Vec<(String, i64)>) -> Value {
    json!(pairs.into_iter().collect::<BTreeMap<_, _>>())
}

fn lefschetz_cmd(f: &GMap) -> Step {
    let l = fixpoint::lefschetz(f)?;
    let mut v = json!({
        "lefschetz": l,
        "fixed_simplices": fixpoint::fixed_simplices(f).iter().map(|&i| f.source.simplex(i)).collect::<Vec<_>>(),
        "fixed_point_free": fixpoint::is_fixed_point_free(f),
        "marks": Value::Null,
    });
    if f.is_equivariant() && f.isovariance_failure().is_none() {
        v["marks"] = json!(fixpoint::lefschetz_fixed_sets(f)?);
    }
    ok(v)
}

fn burnside_map_cmd(f: &GMap) -> Step {
    let b = fixpoint::burnside_lefschetz(f)?;
    let g = f.source.group();
    let marks = fixpoint::marks_of(g, &b.coefficients);
    let lat = g.lattice();
    ok(json!({
        "orbit_coeffs": named(b.named(g)),
        "marks": named(marks.iter().enumerate().map(|(c, &m)| (lat.class_name(c).to_string(), m)).collect()),
        "zero": b.is_zero(),
    }))
}

fn burnside_marks_cmd(g: &FiniteGroup, marks: &str) -> Step {
    let marks: Vec<i64> =
        serde_json::from_str(marks).map_err(|e| bad_input(format!("--marks: {e}")))?;
    let b = fixpoint::burnside_from_marks(g, &marks)?;
    ok(json!({"orbit_coeffs": named(b.named(g)), "zero": b.is_zero()}))
}

fn parse_phi(s: &str, rank: usize) -> Result<Vec<Vec<i64>>, Failure> {
    let v: Value = serde_json::from_str(s).map_err(|e| bad_input(format!("--phi: {e}")))?;
    let err = || bad_input(format!("--phi must be a {rank}x{rank} integer matrix"));
    let rows: Vec<Value> = match v {
        Value::Array(a) => a,
        _ => return Err(err()),
    };
    // `[a]` is accepted for a 1x1 matrix
    if rank == 1 && rows.len() == 1 && rows[0].is_i64() {
        return Ok(vec![vec![rows[0].as_i64().unwrap()]]);
    }
    let m: Vec<Vec<i64>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .and_then(|r| r.iter().map(Value::as_i64).collect::<Option<Vec<_>>>())
                .ok_or_else(err)
        })
        .collect::<Result<_, _>>()?;
    if m.len() != rank || m.iter().any(|r| r.len() != rank) {
        return Err(err());
    }
    Ok(m)
}

type Labels = (Vec<(usize, usize)>, Vec<((usize, usize), Vec<i64>)>);

fn parse_labels(v: &Value) -> Result<Labels, Failure> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Spec {
        tree: Vec<(usize, usize)>,
        labels: Vec<Label>,
    }
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Label {
        edge: (usize, usize),
        value: Vec<i64>,
    }
    let s: Spec =
        serde_json::from_value(v.clone()).map_err(|e| bad_input(format!("labels: {e}")))?;
    Ok((
        s.tree,
        s.labels.into_iter().map(|l| (l.edge, l.value)).collect(),
    ))
}

fn reidemeister_cmd(f: &GMap, pi: &str, phi: &str, labels: Option<&Value>) -> Step {
    let pi = AbelianGroup::parse(pi)?;
    let phi = parse_phi(phi, pi.rank())?;
    let (tree, labels) = match labels {
        Some(v) => parse_labels(v)?,
        None => {
            let derived = fixpoint::abelian_pi_data(&f.source)?;
            if derived.pi != pi {
                return Err(Error::InconsistentLabels(format!(
                    "the complex has abelianized fundamental group with factors {:?}, not {:?}; pass --labels",
                    derived.pi.factors, pi.factors
                ))
                .into());
            }
            (derived.tree, derived.labels)
        }
    };
    let data = PiData {
        setup: TwistedSetup::new(pi, phi)?,
        tree,
        labels,
    };
    let r = fixpoint::reidemeister_trace(f, &data)?;
    let classes: Vec<Value> = r
        .labelled()
        .into_iter()
        .map(|(label, k)| json!({"class": label, "coefficient": k}))
        .collect();
    ok(json!({
        "classes": classes,
        "total": r.total(),
        "lefschetz": fixpoint::lefschetz(f)?,
        "twisted_class_count": r.classes.count,
        "cokernel": {"torsion": r.classes.torsion, "free_rank": r.classes.free_rank},
        "zero": r.is_zero(),
    }))
}

fn verdict_cmd(f: &GMap, dims: Option<&str>) -> Step {
    let dims: BTreeMap<String, usize> = match dims {
        Some(s) => serde_json::from_str(s).map_err(|e| bad_input(format!("--dims: {e}")))?,
        None => BTreeMap::new(),
    };
    let v = fixpoint::removal_verdict(f, &dims)?;
    let h = &v.hypotheses;
    ok(json!({
        "fixed_point_free": v.fixed_point_free,
        "forced": v.forced,
        "marks": named(v.marks),
        "orbit_coeffs": named(v.orbit_coeffs),
        "equivariant_invariants_vanish": v.equivariant_invariants_vanish,
        "removable": v.isovariantly_removable.as_str(),
        "verdict": v.verdict,
        "hypotheses": {
            "holds": h.holds(),
            "dims": h.dims,
            "dim_at_least_3": h.dim_at_least_3,
            "gap_at_least_2": h.gap_at_least_2,
            "first_failure": h.first_failure(),
            "dimension_conditions": h.dimension_conditions.iter().map(|c| json!({"class": c.class, "dim": c.dim, "holds": c.holds})).collect::<Vec<_>>(),
            "gap_conditions": h.gap_conditions.iter().map(|c| json!({"lower": c.lower, "upper": c.upper, "gap": c.gap, "holds": c.holds})).collect::<Vec<_>>(),
        },
    }))
}

fn cube_map_json(m: &CubeMap) -> Value {
    let failure = cubelim::first_hypothesis_failure(m);
    let f = cubelim::factorize_limit(m);
    let surjective = (0..m.target.sizes[0]).all(|y| m.components[0].contains(&y));
    json!({
        "n": m.n(),
        "hypothesis": failure.is_none(),
        "first_failure": failure.map(|(u, t)| json!({"from": cubelim::subset_label(u), "to": cubelim::subset_label(t)})),
        "surjective": surjective,
        "factorization": {
            "order": f.order.iter().map(|&u| cubelim::subset_label(u)).collect::<Vec<_>>(),
            "limit_sizes": f.limit_sizes,
            "links_surjective": f.links_surjective,
            "composes": f.composite_matches && f.top_is_lim_x,
        },
    })
}

fn cube_cmd(file: Option<&Value>, a: &CubeArgs) -> Step {
    let mut v = json!({});
    if let Some(file) = file {
        v = cube_map_json(&io::cube_map_from_json(file)?);
    }
    if let Some(trials) = a.trials {
        if a.dim == 0 || a.dim > 4 {
            return Err(Failure::Usage("--dim must lie in 1..=4".into()));
        }
        if a.max_size == 0 || a.max_size > 8 {
            return Err(Failure::Usage("--max-size must lie in 1..=8".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        let s = cubelim::run_trials(a.dim, a.max_size, trials, &mut rng);
        v["trials"] = json!({
            "seed": a.seed,
            "dim": a.dim,
            "max_size": a.max_size,
            "accepted": s.accepted,
            "generated": s.generated,
            "surjective": s.surjective,
            "factorization_ok": s.factorization_ok,
            "all_surjective": s.surjective == s.accepted,
        });
    }
    let code = if v.get("surjective") == Some(&json!(false))
        && v.get("hypothesis") == Some(&json!(true))
    {
        EXIT_DOMAIN
    } else {
        0
    };
    Ok((v, code))
}

/// DOT text of the stratification poset: one node per isotropy class with
/// its stratum size, one edge per subconjugacy cover.
pub fn export_dot(x: &GComplex) -> isokit::Result<String> {
    let y = x.make_regular()?;
    let g = y.group();
    let lat = g.lattice();
    let strata = y.strata();
    let classes: Vec<usize> = strata.iter().map(|s| s.class).collect();
    let mut out = String::from("digraph strata {\n  rankdir=BT;\n");
    for s in &strata {
        let name = lat.class_name(s.class);
        out.push_str(&format!(
            "  \"{name}\" [label=\"{name} ({})\"];\n",
            s.simplices.len()
        ));
    }
    for (a, b) in covers(g, &classes) {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\";\n",
            lat.class_name(a),
            lat.class_name(b)
        ));
    }
    out.push_str("}\n");
    Ok(out)
}
