//! Finite graphs as exact metric spaces.
//!
//! Vertices are numbered `1..=n`. An edge joins `v_i` and `v_j` with `i < j`
//! and carries a positive rational length; a point on it is addressed by its
//! normalized arclength `t ∈ [0, 1]` measured from `v_i`. Distances are
//! shortest edge-path lengths.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{fmt_q, parse_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge {0} listed more than once")]
    DuplicateEdge(EdgeId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge {0} has nonpositive length")]
    NonpositiveLength(EdgeId),
    #[error("vertex {0} is out of range")]
    UnknownVertex(usize),
    #[error("graph has no edges")]
    NoEdges,
    #[error("malformed edge label {0:?}")]
    BadEdgeLabel(String),
    #[error("malformed point {0:?}")]
    BadPoint(String),
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeId),
}

/// An edge `e_ij` with `i < j`. The derived order is the lexicographic
/// order on vertex pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId {
    lo: usize,
    hi: usize,
}

impl EdgeId {
    /// Builds the edge joining `a` and `b` in either order; `None` for a loop.
    pub fn new(a: usize, b: usize) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(EdgeId { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Some(EdgeId { lo: b, hi: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }

    /// Normalized position of vertex `v` on this edge: 0 at `lo`, 1 at `hi`.
    pub fn vertex_position(&self, v: usize) -> Option<Q> {
        if v == self.lo {
            Some(Q::zero())
        } else if v == self.hi {
            Some(Q::one())
        } else {
            None
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl FromStr for EdgeId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::BadEdgeLabel(s.to_string());
        let (a, b) = s.trim().split_once('-').ok_or_else(bad)?;
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a >= b {
            return Err(bad());
        }
        Ok(EdgeId { lo: a, hi: b })
    }
}

impl Serialize for EdgeId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for EdgeId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A point of the graph in canonical form: vertices are stored as vertices,
/// never as an edge endpoint, so every point has exactly one representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphPoint {
    Vertex(usize),
    Interior { edge: EdgeId, t: Q },
}

impl GraphPoint {
    /// Canonical point at position `t` of `edge`. `t` must lie in `[0, 1]`.
    pub fn on_edge(edge: EdgeId, t: Q) -> Self {
        debug_assert!(t >= Q::zero() && t <= Q::one(), "position {t} off edge {edge}");
        if t.is_zero() {
            GraphPoint::Vertex(edge.lo)
        } else if t.is_one() {
            GraphPoint::Vertex(edge.hi)
        } else {
            GraphPoint::Interior { edge, t }
        }
    }

    pub fn vertex(&self) -> Option<usize> {
        match self {
            GraphPoint::Vertex(v) => Some(*v),
            GraphPoint::Interior { .. } => None,
        }
    }

    /// Position of this point on `edge`, if it lies on that edge.
    pub fn position_on(&self, edge: EdgeId) -> Option<Q> {
        match self {
            GraphPoint::Vertex(v) => edge.vertex_position(*v),
            GraphPoint::Interior { edge: e, t } if *e == edge => Some(t.clone()),
            GraphPoint::Interior { .. } => None,
        }
    }

    /// `(edge, t)` representation; vertices use the least incident edge.
    pub fn edge_repr(&self, g: &FiniteGraph) -> (EdgeId, Q) {
        match self {
            GraphPoint::Interior { edge, t } => (*edge, t.clone()),
            GraphPoint::Vertex(v) => {
                let e = g.incident_edges(*v)[0];
                (e, e.vertex_position(*v).expect("incident edge"))
            }
        }
    }

    /// Text form `i-j@t`, the same grammar [`FiniteGraph::parse_point`] reads.
    pub fn display(&self, g: &FiniteGraph) -> String {
        let (e, t) = self.edge_repr(g);
        format!("{e}@{}", fmt_q(&t))
    }
}

/// A closed arc `[a, b]` inside one edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub edge: EdgeId,
    pub a: Q,
    pub b: Q,
}

impl Arc {
    pub fn new(edge: EdgeId, a: Q, b: Q) -> Self {
        debug_assert!(a <= b, "arc endpoints out of order");
        Arc { edge, a, b }
    }

    pub fn whole(edge: EdgeId) -> Self {
        Arc::new(edge, Q::zero(), Q::one())
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    pub fn contains_position(&self, t: &Q) -> bool {
        &self.a <= t && t <= &self.b
    }

    pub fn contains_point(&self, p: &GraphPoint) -> bool {
        p.position_on(self.edge)
            .is_some_and(|t| self.contains_position(&t))
    }

    pub fn contains_arc(&self, other: &Arc) -> bool {
        self.edge == other.edge && self.a <= other.a && other.b <= self.b
    }

    pub fn start(&self) -> GraphPoint {
        GraphPoint::on_edge(self.edge, self.a.clone())
    }

    pub fn end(&self) -> GraphPoint {
        GraphPoint::on_edge(self.edge, self.b.clone())
    }

    /// Parameter-length `b - a`.
    pub fn span(&self) -> Q {
        &self.b - &self.a
    }

    /// Common part of two arcs on the same edge.
    pub fn intersect(&self, other: &Arc) -> Option<Arc> {
        if self.edge != other.edge {
            return None;
        }
        let a = if self.a >= other.a { &self.a } else { &other.a };
        let b = if self.b <= other.b { &self.b } else { &other.b };
        (a <= b).then(|| Arc::new(self.edge, a.clone(), b.clone()))
    }

    /// `self` minus the open interior `(other.a, other.b)`, in the topology of
    /// the edge. The result is a list of closed arcs, in order.
    pub fn minus_interior(&self, other: &Arc) -> Vec<Arc> {
        if self.edge != other.edge || other.a >= other.b || other.b <= self.a || other.a >= self.b
        {
            return vec![self.clone()];
        }
        let mut out = Vec::new();
        if self.a <= other.a {
            out.push(Arc::new(self.edge, self.a.clone(), other.a.clone()));
        }
        if other.b <= self.b {
            out.push(Arc::new(self.edge, other.b.clone(), self.b.clone()));
        }
        out
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}, {}]", self.edge, fmt_q(&self.a), fmt_q(&self.b))
    }
}

/// Parsed, not yet validated, graph description.
#[derive(Debug, Clone, Default)]
pub struct GraphSpec {
    pub vertices: usize,
    pub edges: Vec<(usize, usize, Option<Q>)>,
}

/// A connected finite graph with its path metric precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGraph {
    vertex_count: usize,
    lengths: BTreeMap<EdgeId, Q>,
    incident: Vec<Vec<EdgeId>>,
    vertex_dist: Vec<Vec<Option<Q>>>,
    detour: BTreeMap<EdgeId, Option<Q>>,
    diameter: Q,
}

/// Validates a graph description and precomputes its metric data.
pub fn build_graph(spec: &GraphSpec) -> Result<FiniteGraph, GraphError> {
    let n = spec.vertices;
    let mut lengths = BTreeMap::new();
    for (a, b, len) in &spec.edges {
        for v in [*a, *b] {
            if v == 0 || v > n {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        let e = EdgeId::new(*a, *b).ok_or(GraphError::SelfLoop(*a))?;
        let len = len.clone().unwrap_or_else(Q::one);
        if len <= Q::zero() {
            return Err(GraphError::NonpositiveLength(e));
        }
        if lengths.insert(e, len).is_some() {
            return Err(GraphError::DuplicateEdge(e));
        }
    }
    if lengths.is_empty() {
        return Err(GraphError::NoEdges);
    }
    let mut incident = vec![Vec::new(); n + 1];
    for e in lengths.keys() {
        incident[e.lo].push(*e);
        incident[e.hi].push(*e);
    }
    // connectivity by BFS from vertex 1
    let mut seen = vec![false; n + 1];
    let mut queue = VecDeque::from([1usize]);
    seen[1] = true;
    while let Some(v) = queue.pop_front() {
        for e in &incident[v] {
            let w = if e.lo == v { e.hi } else { e.lo };
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    if seen[1..].iter().any(|s| !s) {
        return Err(GraphError::Disconnected);
    }

    let vertex_dist = shortest_paths(n, &lengths, None);
    let detour = lengths
        .keys()
        .map(|e| (*e, shortest_paths(n, &lengths, Some(*e))[e.lo][e.hi].clone()))
        .collect();
    let mut g = FiniteGraph {
        vertex_count: n,
        lengths,
        incident,
        vertex_dist,
        detour,
        diameter: Q::zero(),
    };
    let edges: Vec<EdgeId> = g.edges().collect();
    let mut diam = Q::zero();
    for (i, e1) in edges.iter().enumerate() {
        for e2 in &edges[i..] {
            let d = g.max_distance(&Arc::whole(*e1), &Arc::whole(*e2));
            if d > diam {
                diam = d;
            }
        }
    }
    g.diameter = diam;
    Ok(g)
}

fn shortest_paths(
    n: usize,
    lengths: &BTreeMap<EdgeId, Q>,
    skip: Option<EdgeId>,
) -> Vec<Vec<Option<Q>>> {
    let mut d: Vec<Vec<Option<Q>>> = vec![vec![None; n + 1]; n + 1];
    for (v, row) in d.iter_mut().enumerate().skip(1) {
        row[v] = Some(Q::zero());
    }
    for (e, len) in lengths {
        if Some(*e) == skip {
            continue;
        }
        for (x, y) in [(e.lo, e.hi), (e.hi, e.lo)] {
            if d[x][y].as_ref().is_none_or(|cur| len < cur) {
                d[x][y] = Some(len.clone());
            }
        }
    }
    for k in 1..=n {
        let row_k = d[k].clone();
        for row in d.iter_mut().skip(1) {
            let Some(dik) = row[k].clone() else { continue };
            for (j, dkj) in row_k.iter().enumerate().skip(1) {
                let Some(dkj) = dkj.as_ref() else { continue };
                let via = &dik + dkj;
                if row[j].as_ref().is_none_or(|cur| &via < cur) {
                    row[j] = Some(via);
                }
            }
        }
    }
    d
}

/// A linear function `cs·s + ct·t + c0` of two arc parameters.
#[derive(Clone)]
struct Lin {
    cs: Q,
    ct: Q,
    c0: Q,
}

impl FiniteGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.vertex_count
    }

    /// Edges in lexicographic order (the edge index set).
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.lengths.keys().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.lengths.contains_key(&e)
    }

    pub fn length(&self, e: EdgeId) -> &Q {
        &self.lengths[&e]
    }

    pub fn incident_edges(&self, v: usize) -> &[EdgeId] {
        &self.incident[v]
    }

    pub fn vertex_degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    /// Number of edges having `p` as an endpoint; interior points have degree 0.
    pub fn degree(&self, p: &GraphPoint) -> usize {
        match p {
            GraphPoint::Vertex(v) => self.vertex_degree(*v),
            GraphPoint::Interior { .. } => 0,
        }
    }

    /// Vertices of degree at least three.
    pub fn branch_vertices(&self) -> BTreeSet<usize> {
        self.vertices().filter(|v| self.vertex_degree(*v) >= 3).collect()
    }

    /// Vertices of degree one.
    pub fn endpoints(&self) -> BTreeSet<usize> {
        self.vertices().filter(|v| self.vertex_degree(*v) == 1).collect()
    }

    /// Path-metric diameter of the whole graph.
    pub fn diameter(&self) -> &Q {
        &self.diameter
    }

    /// True when the graph is an arc: a path with no branching and no cycle.
    pub fn is_arc(&self) -> bool {
        self.edge_count() + 1 == self.vertex_count
            && self.vertices().all(|v| self.vertex_degree(v) <= 2)
    }

    pub fn vertex_distance(&self, u: usize, v: usize) -> &Q {
        self.vertex_dist[u][v].as_ref().expect("graph is connected")
    }

    pub fn parse_point(&self, s: &str) -> Result<GraphPoint, GraphError> {
        let bad = || GraphError::BadPoint(s.to_string());
        let body = s.trim();
        let body = body.strip_prefix("edge:").unwrap_or(body);
        let (e, t) = body.split_once('@').ok_or_else(bad)?;
        let e: EdgeId = e.parse()?;
        if !self.has_edge(e) {
            return Err(GraphError::UnknownEdge(e));
        }
        let t = parse_q(t).map_err(|_| bad())?;
        if t < Q::zero() || t > Q::one() {
            return Err(bad());
        }
        Ok(GraphPoint::on_edge(e, t))
    }

    fn anchors(&self, p: &GraphPoint) -> Vec<(usize, Q)> {
        match p {
            GraphPoint::Vertex(v) => vec![(*v, Q::zero())],
            GraphPoint::Interior { edge, t } => {
                let len = self.length(*edge);
                vec![(edge.lo, t * len), (edge.hi, (Q::one() - t) * len)]
            }
        }
    }

    /// Length of a shortest edge-path from `p` to `q`.
    pub fn graph_metric(&self, p: &GraphPoint, q: &GraphPoint) -> Q {
        let mut best: Option<Q> = None;
        if let (
            GraphPoint::Interior { edge: e1, t: s },
            GraphPoint::Interior { edge: e2, t },
        ) = (p, q)
        {
            if e1 == e2 {
                let diff = if s >= t { s - t } else { t - s };
                best = Some(diff * self.length(*e1));
            }
        }
        for (u, du) in self.anchors(p) {
            for (w, dw) in self.anchors(q) {
                let d = &du + self.vertex_distance(u, w) + &dw;
                if best.as_ref().is_none_or(|b| &d < b) {
                    best = Some(d);
                }
            }
        }
        best.expect("at least one anchor pair")
    }

    /// Diameter of a single arc, using the shortest detour around its edge.
    pub fn arc_diameter(&self, arc: &Arc) -> Q {
        let len = self.length(arc.edge);
        let direct = arc.span() * len;
        match &self.detour[&arc.edge] {
            None => direct,
            Some(detour) => {
                let around = (len + detour) / crate::rational::int(2);
                if direct <= around {
                    direct
                } else {
                    around
                }
            }
        }
    }

    /// Diameter of a finite union of arcs.
    pub fn set_diameter(&self, arcs: &[Arc]) -> Q {
        let Some(first) = arcs.first() else {
            return Q::zero();
        };
        if arcs.iter().all(|a| a.edge == first.edge) {
            let merged = merge_arcs(arcs.to_vec());
            if merged.len() == 1 {
                return self.arc_diameter(&merged[0]);
            }
        }
        let mut best = Q::zero();
        for (i, x) in arcs.iter().enumerate() {
            for y in &arcs[i..] {
                let d = self.max_distance(x, y);
                if d > best {
                    best = d;
                }
            }
        }
        best
    }

    /// Exact `max d(x, y)` over `x ∈ X`, `y ∈ Y`.
    ///
    /// On the parameter box the distance is a minimum of linear functions
    /// (split along `s = t` when both arcs share an edge), so the maximum is
    /// attained where two of the break lines or box sides cross.
    pub fn max_distance(&self, x: &Arc, y: &Arc) -> Q {
        let l1 = self.length(x.edge).clone();
        let l2 = self.length(y.edge).clone();
        let zero = Q::zero();
        let to_end = |len: &Q, at_lo: bool, param_s: bool| -> Lin {
            // distance from the parametrized point to the lo/hi end of its edge
            let (c, k) = if at_lo {
                (len.clone(), zero.clone())
            } else {
                (-len.clone(), len.clone())
            };
            if param_s {
                Lin { cs: c, ct: zero.clone(), c0: k }
            } else {
                Lin { cs: zero.clone(), ct: c, c0: k }
            }
        };
        let mut funcs: Vec<Lin> = Vec::new();
        for (u, ulo) in [(x.edge.lo, true), (x.edge.hi, false)] {
            for (w, wlo) in [(y.edge.lo, true), (y.edge.hi, false)] {
                let a = to_end(&l1, ulo, true);
                let b = to_end(&l2, wlo, false);
                funcs.push(Lin {
                    cs: a.cs + b.cs,
                    ct: a.ct + b.ct,
                    c0: a.c0 + b.c0 + self.vertex_distance(u, w),
                });
            }
        }
        let mut lines: Vec<Lin> = vec![
            Lin { cs: Q::one(), ct: zero.clone(), c0: -x.a.clone() },
            Lin { cs: Q::one(), ct: zero.clone(), c0: -x.b.clone() },
            Lin { cs: zero.clone(), ct: Q::one(), c0: -y.a.clone() },
            Lin { cs: zero.clone(), ct: Q::one(), c0: -y.b.clone() },
        ];
        if x.edge == y.edge {
            funcs.push(Lin { cs: -l1.clone(), ct: l1.clone(), c0: zero.clone() });
            funcs.push(Lin { cs: l1.clone(), ct: -l1.clone(), c0: zero.clone() });
            lines.push(Lin { cs: Q::one(), ct: -Q::one(), c0: zero.clone() });
        }
        for i in 0..funcs.len() {
            for j in i + 1..funcs.len() {
                let (f, h) = (&funcs[i], &funcs[j]);
                lines.push(Lin {
                    cs: &f.cs - &h.cs,
                    ct: &f.ct - &h.ct,
                    c0: &f.c0 - &h.c0,
                });
            }
        }
        let mut best = Q::zero();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let (p, r) = (&lines[i], &lines[j]);
                let det = &p.cs * &r.ct - &p.ct * &r.cs;
                if det.is_zero() {
                    continue;
                }
                // p.cs s + p.ct t = -p.c0, r.cs s + r.ct t = -r.c0
                let s = (-&p.c0 * &r.ct + &r.c0 * &p.ct) / &det;
                let t = (-&r.c0 * &p.cs + &p.c0 * &r.cs) / &det;
                if !x.contains_position(&s) || !y.contains_position(&t) {
                    continue;
                }
                let d = self.graph_metric(
                    &GraphPoint::on_edge(x.edge, s),
                    &GraphPoint::on_edge(y.edge, t),
                );
                if d > best {
                    best = d;
                }
            }
        }
        best
    }
}

/// Sorts arcs and merges those that overlap or touch on the same edge.
pub fn merge_arcs(mut arcs: Vec<Arc>) -> Vec<Arc> {
    arcs.sort();
    let mut out: Vec<Arc> = Vec::with_capacity(arcs.len());
    for arc in arcs {
        if let Some(last) = out.last_mut() {
            if last.edge == arc.edge && arc.a <= last.b {
                if arc.b > last.b {
                    last.b = arc.b;
                }
                continue;
            }
        }
        out.push(arc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};

    fn spec(n: usize, edges: &[(usize, usize)]) -> GraphSpec {
        GraphSpec {
            vertices: n,
            edges: edges.iter().map(|&(a, b)| (a, b, None)).collect(),
        }
    }

    fn interval() -> FiniteGraph {
        build_graph(&spec(2, &[(1, 2)])).unwrap()
    }

    fn triod() -> FiniteGraph {
        build_graph(&spec(4, &[(1, 4), (2, 4), (3, 4)])).unwrap()
    }

    fn e(a: usize, b: usize) -> EdgeId {
        EdgeId::new(a, b).unwrap()
    }

    #[test]
    fn interval_structure() {
        let g = interval();
        assert_eq!(g.endpoints(), BTreeSet::from([1, 2]));
        assert!(g.branch_vertices().is_empty());
        assert_eq!(g.diameter(), &int(1));
        assert!(g.is_arc());
    }

    #[test]
    fn triod_structure() {
        let g = triod();
        assert_eq!(g.branch_vertices(), BTreeSet::from([4]));
        assert_eq!(g.endpoints(), BTreeSet::from([1, 2, 3]));
        assert_eq!(g.diameter(), &int(2));
        assert!(!g.is_arc());
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            build_graph(&spec(2, &[(1, 2), (1, 2)])),
            Err(GraphError::DuplicateEdge(e(1, 2)))
        );
        assert_eq!(build_graph(&spec(2, &[(2, 2)])), Err(GraphError::SelfLoop(2)));
        assert_eq!(
            build_graph(&spec(4, &[(1, 2), (3, 4)])),
            Err(GraphError::Disconnected)
        );
        let neg = GraphSpec { vertices: 2, edges: vec![(1, 2, Some(int(0)))] };
        assert_eq!(build_graph(&neg), Err(GraphError::NonpositiveLength(e(1, 2))));
        assert_eq!(build_graph(&spec(2, &[(1, 3)])), Err(GraphError::UnknownVertex(3)));
    }

    #[test]
    fn degrees() {
        let g = interval();
        assert_eq!(g.degree(&GraphPoint::Vertex(1)), 1);
        assert_eq!(g.degree(&GraphPoint::on_edge(e(1, 2), q(1, 2))), 0);
        assert_eq!(triod().degree(&GraphPoint::Vertex(4)), 3);
        let t = triod();
        let total: usize = t.vertices().map(|v| t.degree(&GraphPoint::Vertex(v))).sum();
        assert_eq!(total, 2 * t.edge_count());
    }

    #[test]
    fn metric_examples() {
        let g = interval();
        let p = GraphPoint::on_edge(e(1, 2), q(1, 4));
        let r = GraphPoint::on_edge(e(1, 2), q(3, 4));
        assert_eq!(g.graph_metric(&p, &r), q(1, 2));
        assert_eq!(g.graph_metric(&p, &p), int(0));
        let t = triod();
        assert_eq!(t.graph_metric(&GraphPoint::Vertex(1), &GraphPoint::Vertex(2)), int(2));
    }

    #[test]
    fn canonical_vertices() {
        assert_eq!(GraphPoint::on_edge(e(1, 4), int(1)), GraphPoint::Vertex(4));
        assert_eq!(GraphPoint::on_edge(e(2, 4), int(1)), GraphPoint::Vertex(4));
        let t = triod();
        assert_eq!(GraphPoint::Vertex(4).display(&t), "1-4@1");
        assert_eq!(t.parse_point("edge:2-4@1").unwrap(), GraphPoint::Vertex(4));
        assert_eq!(t.parse_point("2-4@2/4").unwrap().display(&t), "2-4@1/2");
    }

    #[test]
    fn cycle_diameter_uses_interior_points() {
        // triangle with unit edges: perimeter 3, diameter 3/2
        let g = build_graph(&spec(3, &[(1, 2), (2, 3), (1, 3)])).unwrap();
        assert_eq!(g.diameter(), &q(3, 2));
        assert_eq!(g.arc_diameter(&Arc::whole(e(1, 2))), int(1));
        let long = GraphSpec {
            vertices: 3,
            edges: vec![(1, 2, Some(int(5))), (2, 3, None), (1, 3, None)],
        };
        let g = build_graph(&long).unwrap();
        // the long edge has a detour of length 2 between its ends
        assert_eq!(g.arc_diameter(&Arc::whole(e(1, 2))), q(7, 2));
        assert_eq!(
            g.set_diameter(&[Arc::whole(e(1, 2))]),
            g.max_distance(&Arc::whole(e(1, 2)), &Arc::whole(e(1, 2)))
        );
    }

    #[test]
    fn arc_difference() {
        let a = Arc::new(e(1, 2), int(0), q(1, 2));
        let b = Arc::new(e(1, 2), q(1, 2), int(1));
        assert_eq!(a.minus_interior(&b), vec![a.clone()]);
        let c = Arc::new(e(1, 2), q(1, 4), int(1));
        assert_eq!(a.minus_interior(&c), vec![Arc::new(e(1, 2), int(0), q(1, 4))]);
        let inner = Arc::new(e(1, 2), q(1, 8), q(1, 4));
        assert_eq!(a.minus_interior(&inner).len(), 2);
    }
}
