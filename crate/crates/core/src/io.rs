//! JSON file formats for groups, complexes, maps and cubes.
//!
//! Group: `{"order": n, "table": [[...]]}` or `{"degree": d, "generators": [[...]]}`.
//! Complex: `{"group": <path or group object>, "vertices": n, "facets": [[...]],
//! "action": {"<element>": [perm], ...}}`; elements missing from `action`
//! are filled in by composition.
//! Map: `{"source": <path or complex>, "target": <path or complex>, "vertices": [...]}`.
//! Cube: `{"n": n, "vertices": [{"subset": [..], "size": k}], "maps":
//! [{"from": [..], "add": i, "map": [...]}]}`; a cube map is
//! `{"source": cube, "target": cube, "components": [{"subset": [..], "map": [...]}]}`.
//!
//! Relative paths inside a file are resolved against that file's directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cubelim::{CubeDiagram, CubeMap};
use crate::error::{Error, Result};
use crate::gcomplex::GComplex;
use crate::gmap::GMap;
use crate::group::FiniteGroup;

pub const DEFAULT_MAX_GROUP_ORDER: usize = 48;

#[derive(Deserialize)]
#[serde(untagged)]
enum GroupSpec {
    Table {
        order: usize,
        table: Vec<Vec<usize>>,
    },
    Perms {
        degree: usize,
        generators: Vec<Vec<usize>>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexSpec {
    group: Value,
    vertices: usize,
    facets: Vec<Vec<usize>>,
    #[serde(default)]
    action: BTreeMap<String, Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSpec {
    source: Value,
    target: Value,
    vertices: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CubeSpec {
    n: usize,
    vertices: Vec<CubeVertex>,
    maps: Vec<CubeEdge>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CubeVertex {
    subset: Vec<usize>,
    size: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CubeEdge {
    from: Vec<usize>,
    add: usize,
    map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CubeMapSpec {
    source: CubeSpec,
    target: CubeSpec,
    components: Vec<CubeComponent>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CubeComponent {
    subset: Vec<usize>,
    map: Vec<usize>,
}

fn parse_err(what: &str, e: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{what}: {e}"))
}

/// Resolves nested file references and enforces the group-order cap.
#[derive(Clone, Debug)]
pub struct Loader {
    pub base: PathBuf,
    pub max_group_order: usize,
}

impl Default for Loader {
    fn default() -> Self {
        Loader {
            base: PathBuf::from("."),
            max_group_order: DEFAULT_MAX_GROUP_ORDER,
        }
    }
}

impl Loader {
    pub fn new(max_group_order: usize) -> Self {
        Loader {
            max_group_order,
            ..Default::default()
        }
    }

    fn relative_to(&self, path: &Path) -> Loader {
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Loader {
            base,
            max_group_order: self.max_group_order,
        }
    }

    fn resolve(&self, path: &str) -> PathBuf {
        self.base.join(path)
    }

    /// Returns the value at `v`, reading it from a file if `v` is a string.
    fn deref(&self, v: &Value) -> Result<(Value, Loader)> {
        match v {
            Value::String(p) => {
                let path = self.resolve(p);
                Ok((read_json(&path)?, self.relative_to(&path)))
            }
            other => Ok((other.clone(), self.clone())),
        }
    }

    pub fn group(&self, v: &Value) -> Result<FiniteGroup> {
        let (v, _) = self.deref(v)?;
        let spec: GroupSpec = serde_json::from_value(v).map_err(|e| parse_err("group", e))?;
        let g = match spec {
            GroupSpec::Table { order, table } => {
                if order != table.len() {
                    return Err(Error::InvalidGroup(format!(
                        "order {order} but table has {} rows",
                        table.len()
                    )));
                }
                self.check_order(order)?;
                FiniteGroup::from_table(table)?
            }
            GroupSpec::Perms { degree, generators } => {
                let g = FiniteGroup::from_permutations(degree, &generators)?;
                self.check_order(g.order())?;
                g
            }
        };
        Ok(g)
    }

    fn check_order(&self, order: usize) -> Result<()> {
        if order > self.max_group_order {
            return Err(Error::GroupTooLarge {
                order,
                max: self.max_group_order,
            });
        }
        Ok(())
    }

    pub fn complex(&self, v: &Value) -> Result<GComplex> {
        let (v, inner) = self.deref(v)?;
        let spec: ComplexSpec = serde_json::from_value(v).map_err(|e| parse_err("complex", e))?;
        let group = Arc::new(inner.group(&spec.group)?);
        let mut partial = vec![];
        for (k, p) in spec.action {
            let g: usize = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("action key `{k}` is not an element index")))?;
            partial.push((g, p));
        }
        GComplex::from_partial_action(group, spec.vertices, spec.facets, &partial)
    }

    pub fn map(&self, v: &Value) -> Result<GMap> {
        let (v, inner) = self.deref(v)?;
        let spec: MapSpec = serde_json::from_value(v).map_err(|e| parse_err("map", e))?;
        let source = inner.complex(&spec.source)?;
        let target = match (&spec.source, &spec.target) {
            (Value::String(a), Value::String(b)) if a == b => source.clone(),
            _ => inner.complex(&spec.target)?,
        };
        GMap::new(source, target, spec.vertices)
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn load_group(path: &Path, max_group_order: usize) -> Result<FiniteGroup> {
    let l = Loader::new(max_group_order);
    l.relative_to(path).group(&read_json(path)?)
}

pub fn load_complex(path: &Path, max_group_order: usize) -> Result<GComplex> {
    let l = Loader::new(max_group_order);
    l.relative_to(path).complex(&read_json(path)?)
}

pub fn load_map(path: &Path, max_group_order: usize) -> Result<GMap> {
    let l = Loader::new(max_group_order);
    l.relative_to(path).map(&read_json(path)?)
}

pub fn group_to_json(g: &FiniteGroup) -> Value {
    json!({ "order": g.order(), "table": g.table() })
}

/// The complex with its group inlined as a table and the full action.
pub fn complex_to_json(x: &GComplex) -> Value {
    let action: serde_json::Map<String, Value> = x
        .action()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(g, p)| (g.to_string(), json!(p)))
        .collect();
    json!({
        "group": group_to_json(x.group()),
        "vertices": x.n_vertices(),
        "facets": x.facets(),
        "action": action,
    })
}

pub fn map_to_json(f: &GMap) -> Value {
    json!({
        "source": complex_to_json(&f.source),
        "target": complex_to_json(&f.target),
        "vertices": f.vertices,
    })
}

fn subset_mask(subset: &[usize], n: usize) -> Result<usize> {
    let mut m = 0usize;
    for &i in subset {
        if i == 0 || i > n {
            return Err(Error::InvalidCube(format!(
                "coordinate {i} outside 1..={n}"
            )));
        }
        if m >> (i - 1) & 1 == 1 {
            return Err(Error::InvalidCube(format!("coordinate {i} repeated")));
        }
        m |= 1 << (i - 1);
    }
    Ok(m)
}

fn mask_subset(mask: usize, n: usize) -> Vec<usize> {
    (0..n)
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

fn cube_from_spec(spec: CubeSpec) -> Result<CubeDiagram> {
    if spec.n > 6 {
        return Err(Error::InvalidCube(format!(
            "dimension {} is too large",
            spec.n
        )));
    }
    let mut sizes = vec![None; 1 << spec.n];
    for v in &spec.vertices {
        let m = subset_mask(&v.subset, spec.n)?;
        if sizes[m].replace(v.size).is_some() {
            return Err(Error::InvalidCube(format!(
                "vertex {:?} listed twice",
                v.subset
            )));
        }
    }
    let sizes: Option<Vec<usize>> = sizes.into_iter().collect();
    let sizes =
        sizes.ok_or_else(|| Error::InvalidCube("every subset needs a vertex set".into()))?;
    let mut maps = BTreeMap::new();
    for e in spec.maps {
        let m = subset_mask(&e.from, spec.n)?;
        if e.add == 0 || e.add > spec.n || m >> (e.add - 1) & 1 == 1 {
            return Err(Error::InvalidCube(format!(
                "cannot add {} to {:?}",
                e.add, e.from
            )));
        }
        if maps.insert((m, e.add - 1), e.map).is_some() {
            return Err(Error::InvalidCube(format!(
                "map from {:?} adding {} listed twice",
                e.from, e.add
            )));
        }
    }
    CubeDiagram::new(spec.n, sizes, maps)
}

fn cube_to_spec(x: &CubeDiagram) -> CubeSpec {
    CubeSpec {
        n: x.n,
        vertices: (0..x.sizes.len())
            .map(|m| CubeVertex {
                subset: mask_subset(m, x.n),
                size: x.sizes[m],
            })
            .collect(),
        maps: x
            .maps
            .iter()
            .map(|(&(m, i), f)| CubeEdge {
                from: mask_subset(m, x.n),
                add: i + 1,
                map: f.clone(),
            })
            .collect(),
    }
}

pub fn cube_from_json(v: &Value) -> Result<CubeDiagram> {
    cube_from_spec(serde_json::from_value(v.clone()).map_err(|e| parse_err("cube", e))?)
}

pub fn cube_to_json(x: &CubeDiagram) -> Value {
    serde_json::to_value(cube_to_spec(x)).expect("cube serializes")
}

/// Parses either a cube map or a single cube, read as its identity map.
pub fn cube_map_from_json(v: &Value) -> Result<CubeMap> {
    if v.get("components").is_none() {
        return Ok(CubeMap::identity(&cube_from_json(v)?));
    }
    let spec: CubeMapSpec =
        serde_json::from_value(v.clone()).map_err(|e| parse_err("cube map", e))?;
    let source = cube_from_spec(spec.source)?;
    let target = cube_from_spec(spec.target)?;
    let mut components = vec![None; source.sizes.len()];
    for c in spec.components {
        let m = subset_mask(&c.subset, source.n)?;
        if components[m].replace(c.map).is_some() {
            return Err(Error::InvalidCube(format!(
                "component at {:?} listed twice",
                c.subset
            )));
        }
    }
    let components: Option<Vec<Vec<usize>>> = components.into_iter().collect();
    let components =
        components.ok_or_else(|| Error::InvalidCube("every subset needs a component".into()))?;
    CubeMap::new(source, target, components)
}

pub fn cube_map_to_json(m: &CubeMap) -> Value {
    let spec = CubeMapSpec {
        source: cube_to_spec(&m.source),
        target: cube_to_spec(&m.target),
        components: m
            .components
            .iter()
            .enumerate()
            .map(|(u, c)| CubeComponent {
                subset: mask_subset(u, m.n()),
                map: c.clone(),
            })
            .collect(),
    };
    serde_json::to_value(spec).expect("cube map serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Value {
        json!({"order": 2, "table": [[0, 1], [1, 0]]})
    }

    #[test]
    fn group_formats_agree() {
        let l = Loader::default();
        let a = l.group(&c2()).unwrap();
        let b = l
            .group(&json!({"degree": 2, "generators": [[1, 0]]}))
            .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn group_cap_enforced() {
        let l = Loader::new(4);
        let err = l
            .group(&json!({"degree": 3, "generators": [[1, 2, 0], [1, 0, 2]]}))
            .unwrap_err();
        assert_eq!(err, Error::GroupTooLarge { order: 6, max: 4 });
    }

    #[test]
    fn complex_round_trip() {
        let l = Loader::default();
        let v = json!({"group": c2(), "vertices": 3, "facets": [[0, 2], [1, 2]], "action": {"1": [1, 0, 2]}});
        let x = l.complex(&v).unwrap();
        let emitted = complex_to_json(&x);
        assert_eq!(emitted, v);
        assert_eq!(l.complex(&emitted).unwrap(), x);
    }

    #[test]
    fn bad_action_key() {
        let v = json!({"group": c2(), "vertices": 1, "facets": [[0]], "action": {"tau": [0]}});
        assert!(matches!(
            Loader::default().complex(&v),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn cube_round_trip() {
        let x = CubeDiagram::constant(2, 2);
        let v = cube_to_json(&x);
        assert_eq!(cube_from_json(&v).unwrap(), x);
        let m = cube_map_from_json(&v).unwrap();
        assert_eq!(m, CubeMap::identity(&x));
        assert_eq!(cube_map_from_json(&cube_map_to_json(&m)).unwrap(), m);
    }
}
