//! The TOML input document: one graph and any number of named maps.
//!
//! ```toml
//! format = 1
//! [graph]
//! vertices = 2
//! edges = ["1-2"]
//! [maps.tent.edges."1-2"]
//! breaks = ["0", "1/2", "1"]
//! laps = ["1-2@0..1", "1-2@1..0"]
//! ```
//!
//! Edge lengths default to 1 and may be set under `[graph.lengths]`.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc as Shared;

use serde::Deserialize;

use crate::graph::{build_graph, EdgeId, FiniteGraph, GraphError, GraphPoint, GraphSpec};
use crate::map::{MapError, MapSpec, PLGraphMap};
use crate::path::{EdgePath, PathError};
use crate::rational::parse_q;

pub const FORMAT_VERSION: i64 = 1;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed document: {0}")]
    Syntax(String),
    #[error("unsupported format version {0}")]
    Format(i64),
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    #[error("map {map}, edge {edge}: bad fraction {value:?}")]
    Fraction { map: String, edge: String, value: String },
    #[error("map {map}, edge {edge}: {source}")]
    Path { map: String, edge: String, source: PathError },
    #[error("map {map}: {source}")]
    Map { map: String, source: MapError },
    #[error("no map named {0:?}")]
    UnknownMap(String),
    #[error("bad itinerary: {0}")]
    Itinerary(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    format: Option<i64>,
    graph: RawGraph,
    #[serde(default)]
    maps: BTreeMap<String, RawMap>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    vertices: usize,
    edges: Vec<String>,
    #[serde(default)]
    lengths: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    edges: BTreeMap<String, RawEdge>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    breaks: Vec<String>,
    laps: Vec<String>,
}

/// A parsed and validated input document.
#[derive(Debug, Clone)]
pub struct InputDocument {
    pub graph: Shared<FiniteGraph>,
    pub maps: BTreeMap<String, PLGraphMap>,
}

impl InputDocument {
    pub fn map(&self, name: &str) -> Result<&PLGraphMap, InputError> {
        self.maps.get(name).ok_or_else(|| InputError::UnknownMap(name.to_string()))
    }
}

pub fn read_document(path: impl AsRef<Path>) -> Result<InputDocument, InputError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|source| InputError::Io { path: path.display().to_string(), source })?;
    parse_document(&text)
}

pub fn parse_document(text: &str) -> Result<InputDocument, InputError> {
    let raw: RawDoc = toml::from_str(text).map_err(|e| InputError::Syntax(e.message().to_string()))?;
    if let Some(v) = raw.format {
        if v != FORMAT_VERSION {
            return Err(InputError::Format(v));
        }
    }
    let graph = Shared::new(parse_graph(&raw.graph)?);
    let mut maps = BTreeMap::new();
    for (name, m) in &raw.maps {
        let mut spec = MapSpec::new();
        for (label, edge) in &m.edges {
            let e: EdgeId = label.parse()?;
            let breaks = edge
                .breaks
                .iter()
                .map(|b| {
                    parse_q(b).map_err(|_| InputError::Fraction {
                        map: name.clone(),
                        edge: label.clone(),
                        value: b.clone(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            let laps = edge
                .laps
                .iter()
                .map(|l| {
                    EdgePath::parse(&graph, l).map_err(|source| InputError::Path {
                        map: name.clone(),
                        edge: label.clone(),
                        source,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            spec.insert(e, (breaks, laps));
        }
        let f = PLGraphMap::new(graph.clone(), spec)
            .map_err(|source| InputError::Map { map: name.clone(), source })?;
        maps.insert(name.clone(), f);
    }
    Ok(InputDocument { graph, maps })
}

fn parse_graph(raw: &RawGraph) -> Result<FiniteGraph, InputError> {
    let mut spec = GraphSpec { vertices: raw.vertices, edges: Vec::new() };
    for label in &raw.edges {
        let bad = || GraphError::BadEdgeLabel(label.clone());
        let (a, b) = label.split_once('-').ok_or_else(bad)?;
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        spec.edges.push((a, b, None));
    }
    for (label, len) in &raw.lengths {
        let e: EdgeId = label.parse()?;
        let len = parse_q(len).map_err(|_| InputError::Syntax(format!("bad length {len:?} for edge {e}")))?;
        let slot = spec
            .edges
            .iter_mut()
            .find(|(a, b, _)| EdgeId::new(*a, *b) == Some(e))
            .ok_or(GraphError::UnknownEdge(e))?;
        slot.2 = Some(len);
    }
    Ok(build_graph(&spec)?)
}

/// Parses `pre=[p0,p1,...];cycle=[c0,...]`; `pre` may be omitted.
pub fn parse_itinerary(g: &FiniteGraph, spec: &str) -> Result<(Vec<GraphPoint>, Vec<GraphPoint>), InputError> {
    let bad = |m: &str| InputError::Itinerary(format!("{m} in {spec:?}"));
    let mut pre = None;
    let mut cycle = None;
    for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, list) = part.split_once('=').ok_or_else(|| bad("missing '='"))?;
        let body = list
            .trim()
            .strip_prefix('[')
            .and_then(|l| l.strip_suffix(']'))
            .ok_or_else(|| bad("list must be bracketed"))?;
        let points = body
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| g.parse_point(p).map_err(|e| InputError::Itinerary(e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let slot = match key.trim() {
            "pre" => &mut pre,
            "cycle" => &mut cycle,
            other => return Err(bad(&format!("unknown key {other:?}"))),
        };
        if slot.replace(points).is_some() {
            return Err(bad("repeated key"));
        }
    }
    let cycle = cycle.ok_or_else(|| bad("missing cycle"))?;
    if cycle.is_empty() {
        return Err(bad("empty cycle"));
    }
    Ok((pre.unwrap_or_default(), cycle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::TENTS_TOML;
    use crate::rational::q;

    #[test]
    fn parses_catalog() {
        let d = parse_document(TENTS_TOML).unwrap();
        assert_eq!(d.maps.keys().cloned().collect::<Vec<_>>(), vec!["fixed_fold", "g3", "identity", "skew", "tent"]);
        assert!(d.map("nope").is_err());
    }

    #[test]
    fn rejects_bad_documents() {
        let dup = "[graph]\nvertices = 2\nedges = [\"1-2\", \"2-1\"]\n";
        assert!(matches!(parse_document(dup), Err(InputError::Graph(GraphError::DuplicateEdge(_)))));
        let fmt = "format = 2\n[graph]\nvertices = 2\nedges = [\"1-2\"]\n";
        assert!(matches!(parse_document(fmt), Err(InputError::Format(2))));
        let frac = "[graph]\nvertices = 2\nedges = [\"1-2\"]\n[maps.f.edges.\"1-2\"]\nbreaks = [\"0\", \"x\"]\nlaps = [\"1-2@0..1\"]\n";
        assert!(matches!(parse_document(frac), Err(InputError::Fraction { .. })));
        assert!(matches!(parse_document("graph = 3"), Err(InputError::Syntax(_))));
    }

    #[test]
    fn edge_lengths() {
        let d = parse_document("[graph]\nvertices = 3\nedges = [\"1-2\", \"2-3\"]\n[graph.lengths]\n\"2-3\" = \"3/2\"\n").unwrap();
        assert_eq!(d.graph.length(EdgeId::new(2, 3).unwrap()), &q(3, 2));
        assert_eq!(d.graph.diameter(), &q(5, 2));
    }

    #[test]
    fn itinerary_grammar() {
        let d = parse_document(TENTS_TOML).unwrap();
        let (pre, cyc) = parse_itinerary(&d.graph, "pre=[edge:1-2@2/5];cycle=[1-2@0, 1-2@1, 1-2@4/10]").unwrap();
        assert_eq!(pre.len(), 1);
        assert_eq!(cyc[2], GraphPoint::on_edge(EdgeId::new(1, 2).unwrap(), q(2, 5)));
        assert_eq!(parse_itinerary(&d.graph, "cycle=[1-2@0]").unwrap().0, vec![]);
        for bad in ["pre=[1-2@0]", "cycle=1-2@0", "cycle=[]", "cycle=[1-3@0]", "x=[1-2@0];cycle=[1-2@0]"] {
            assert!(parse_itinerary(&d.graph, bad).is_err(), "{bad}");
        }
    }
}
