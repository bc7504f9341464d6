//! Graph JSON interchange:
//!
//! ```json
//! {"n": 4, "edges": [[0, 1], [0, 2]],
//!  "meta": {"family": "complete", "params": {"n": 4}, "seed": 0, "perturbation": null}}
//! ```
//!
//! `perturbation` holds the comma-separated history of applied
//! perturbations, e.g. `"shadow:2"` or `"delete:0-1,pendant:3-4"`.

use std::io::Read;
use std::path::Path;

use cutlab_core::graph::{AppliedPerturbation, Family, Graph, GraphMeta};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    meta: MetaFile,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetaFile {
    #[serde(default = "custom")]
    family: String,
    #[serde(default)]
    params: Map<String, Value>,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    perturbation: Option<String>,
}

fn custom() -> String {
    "custom".into()
}

impl Default for MetaFile {
    fn default() -> Self {
        Self {
            family: custom(),
            params: Map::new(),
            seed: 0,
            perturbation: None,
        }
    }
}

fn family_params(family: &Family) -> Map<String, Value> {
    let v = match *family {
        Family::Complete { n } | Family::Path { n } | Family::Cycle { n } | Family::Empty { n } => {
            json!({ "n": n })
        }
        Family::ErdosRenyi { n, q } => json!({ "n": n, "q": q }),
        Family::BinaryTree { height } => json!({ "height": height }),
        Family::RaryTree { arity, n } => json!({ "arity": arity, "n": n }),
        Family::RandomRegular { degree, n } => json!({ "degree": degree, "n": n }),
        Family::Star { leaves } => json!({ "leaves": leaves }),
        Family::Custom => json!({}),
    };
    match v {
        Value::Object(m) => m,
        _ => unreachable!(),
    }
}

fn parse_family(tag: &str, params: &Map<String, Value>) -> Result<Family> {
    let int = |key: &str| -> Result<usize> {
        params
            .get(key)
            .and_then(Value::as_u64)
            .map(|x| x as usize)
            .ok_or_else(|| Error::Format(format!("family {tag} needs integer param {key:?}")))
    };
    Ok(match tag {
        "complete" => Family::Complete { n: int("n")? },
        "erdos_renyi" => Family::ErdosRenyi {
            n: int("n")?,
            q: params
                .get("q")
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::Format("family erdos_renyi needs param \"q\"".into()))?,
        },
        "binary_tree" => Family::BinaryTree {
            height: int("height")?,
        },
        "rary_tree" => Family::RaryTree {
            arity: int("arity")?,
            n: int("n")?,
        },
        "regular" => Family::RandomRegular {
            degree: int("degree")?,
            n: int("n")?,
        },
        "path" => Family::Path { n: int("n")? },
        "cycle" => Family::Cycle { n: int("n")? },
        "star" => Family::Star {
            leaves: int("leaves")?,
        },
        "empty" => Family::Empty { n: int("n")? },
        "custom" => Family::Custom,
        other => return Err(Error::Format(format!("unknown family {other:?}"))),
    })
}

fn to_file(g: &Graph) -> GraphFile {
    let meta = g.meta();
    GraphFile {
        n: g.n(),
        edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
        meta: MetaFile {
            family: meta.family.tag().into(),
            params: family_params(&meta.family),
            seed: meta.seed,
            perturbation: meta.perturbation_string(),
        },
    }
}

pub fn to_value(g: &Graph) -> Value {
    serde_json::to_value(to_file(g)).expect("graph serializes")
}

pub fn to_json(g: &Graph, pretty: bool) -> String {
    let file = to_file(g);
    if pretty {
        serde_json::to_string_pretty(&file)
    } else {
        serde_json::to_string(&file)
    }
    .expect("graph serializes")
}

pub fn from_json(text: &str) -> Result<Graph> {
    let file: GraphFile =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let family = parse_family(&file.meta.family, &file.meta.params)?;
    let mut meta = GraphMeta::new(family, file.meta.seed);
    if let Some(p) = &file.meta.perturbation {
        meta.perturbations = GraphMeta::parse_perturbations(p)?;
    }
    Ok(Graph::with_meta(
        file.n,
        file.edges.into_iter().map(|[u, v]| (u, v)),
        meta,
    )?)
}

/// Reads `path`, or standard input for `-`.
pub fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::io("<stdin>", e))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
    }
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    from_json(&read_text(path)?)
}

/// Content-derived label, stable across file names and pipes. The size is
/// that of the unperturbed graph.
pub fn graph_label(g: &Graph) -> String {
    let meta = g.meta();
    let added: usize = meta
        .perturbations
        .iter()
        .map(|p| match p {
            AppliedPerturbation::Shadow { count } => *count,
            AppliedPerturbation::PendantEdge { .. } => 1,
            AppliedPerturbation::DeleteEdge { .. } => 0,
        })
        .sum();
    let mut label = format!("{}_n{}", meta.family.tag(), g.n() - added);
    if let Some(p) = meta.perturbation_string() {
        label.push('+');
        label.push_str(&p);
    }
    label
}
