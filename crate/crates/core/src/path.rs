//! Edge-paths: the explicit traversal a lap of a map is carried along.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::graph::{Arc, EdgeId, FiniteGraph, GraphError, GraphPoint};
use crate::rational::{fmt_q, parse_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("empty edge-path")]
    Empty,
    #[error("malformed path segment {0:?}")]
    BadSegment(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("segment {0} of the path is degenerate")]
    DegenerateSegment(usize),
    #[error("segments {0} and {1} do not meet at a vertex")]
    Disconnected(usize, usize),
    #[error("path revisits edge {0} or one of its vertices")]
    NotSimple(EdgeId),
}

/// One straight run along a single edge, from position `from` to `to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segment {
    pub edge: EdgeId,
    pub from: Q,
    pub to: Q,
}

impl Segment {
    fn start(&self) -> GraphPoint {
        GraphPoint::on_edge(self.edge, self.from.clone())
    }

    fn end(&self) -> GraphPoint {
        GraphPoint::on_edge(self.edge, self.to.clone())
    }

    fn span(&self) -> Q {
        if self.to >= self.from {
            &self.to - &self.from
        } else {
            &self.from - &self.to
        }
    }

    fn position_at(&self, frac: &Q) -> Q {
        &self.from + (&self.to - &self.from) * frac
    }
}

/// The direction in which a path leaves a point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Germ {
    /// Leaving an interior point of `edge`, toward increasing `t` or not.
    Along { edge: EdgeId, increasing: bool },
    /// Leaving a vertex into `edge`.
    Into { edge: EdgeId },
}

/// A simple edge-path, or a single point when the path is constant.
///
/// Consecutive segments meet at a vertex; interior segments are whole edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgePath {
    segments: Vec<Segment>,
    // arclength at which each segment starts, plus the total at the end
    offsets: Vec<Q>,
}

impl EdgePath {
    pub fn new(g: &FiniteGraph, segments: Vec<Segment>) -> Result<Self, PathError> {
        if segments.is_empty() {
            return Err(PathError::Empty);
        }
        for seg in &segments {
            if !g.has_edge(seg.edge) {
                return Err(GraphError::UnknownEdge(seg.edge).into());
            }
            for t in [&seg.from, &seg.to] {
                if *t < Q::zero() || *t > Q::one() {
                    return Err(PathError::BadSegment(format!(
                        "{}@{}..{}",
                        seg.edge,
                        fmt_q(&seg.from),
                        fmt_q(&seg.to)
                    )));
                }
            }
        }
        let constant = segments.len() == 1 && segments[0].from == segments[0].to;
        if !constant {
            if let Some(i) = segments.iter().position(|s| s.from == s.to) {
                return Err(PathError::DegenerateSegment(i));
            }
        }
        let mut edges = BTreeSet::new();
        let mut visited = BTreeSet::new();
        if let GraphPoint::Vertex(v) = segments[0].start() {
            visited.insert(v);
        }
        for (i, seg) in segments.iter().enumerate() {
            if !edges.insert(seg.edge) {
                return Err(PathError::NotSimple(seg.edge));
            }
            if i + 1 < segments.len() {
                let end = seg.end();
                if end != segments[i + 1].start() || end.vertex().is_none() {
                    return Err(PathError::Disconnected(i, i + 1));
                }
            }
            if !constant {
                if let GraphPoint::Vertex(v) = seg.end() {
                    if !visited.insert(v) {
                        return Err(PathError::NotSimple(seg.edge));
                    }
                }
            }
        }
        let mut offsets = Vec::with_capacity(segments.len() + 1);
        let mut acc = Q::zero();
        for seg in &segments {
            offsets.push(acc.clone());
            acc += seg.span() * g.length(seg.edge);
        }
        offsets.push(acc);
        Ok(EdgePath { segments, offsets })
    }

    /// Parses `i-j@a..b, k-l@c..d, ...`.
    pub fn parse(g: &FiniteGraph, s: &str) -> Result<Self, PathError> {
        let mut segments = Vec::new();
        for part in s.split(',') {
            let bad = || PathError::BadSegment(part.trim().to_string());
            let (e, range) = part.trim().split_once('@').ok_or_else(bad)?;
            let edge: EdgeId = e.parse()?;
            let (from, to) = range.split_once("..").ok_or_else(bad)?;
            let from = parse_q(from).map_err(|_| bad())?;
            let to = parse_q(to).map_err(|_| bad())?;
            segments.push(Segment { edge, from, to });
        }
        EdgePath::new(g, segments)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Total arclength; zero exactly for a constant path.
    pub fn length(&self) -> &Q {
        self.offsets.last().expect("nonempty")
    }

    pub fn is_constant(&self) -> bool {
        self.length().is_zero()
    }

    pub fn start(&self) -> GraphPoint {
        self.segments[0].start()
    }

    pub fn end(&self) -> GraphPoint {
        self.segments.last().expect("nonempty").end()
    }

    /// Point at arclength `s` from the start, `0 <= s <= length`.
    pub fn point_at(&self, s: &Q) -> GraphPoint {
        if self.is_constant() {
            return self.start();
        }
        let i = self.segment_index(s);
        let seg = &self.segments[i];
        let seg_len = &self.offsets[i + 1] - &self.offsets[i];
        let frac = (s - &self.offsets[i]) / seg_len;
        GraphPoint::on_edge(seg.edge, seg.position_at(&frac))
    }

    fn segment_index(&self, s: &Q) -> usize {
        // last segment whose start offset is <= s
        let n = self.segments.len();
        let idx = self.offsets[..n].partition_point(|o| o <= s);
        idx.saturating_sub(1).min(n - 1)
    }

    /// All arclength parameters at which the path passes through `p`.
    pub fn params_of(&self, p: &GraphPoint) -> Vec<Q> {
        let mut out: Vec<Q> = Vec::new();
        if self.is_constant() {
            if self.start() == *p {
                out.push(Q::zero());
            }
            return out;
        }
        for (i, seg) in self.segments.iter().enumerate() {
            let Some(pos) = p.position_on(seg.edge) else { continue };
            let (lo, hi) = if seg.from <= seg.to { (&seg.from, &seg.to) } else { (&seg.to, &seg.from) };
            if &pos < lo || &pos > hi {
                continue;
            }
            let frac = (&pos - &seg.from) / (&seg.to - &seg.from);
            let s = &self.offsets[i] + frac * (&self.offsets[i + 1] - &self.offsets[i]);
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out.sort();
        out
    }

    /// Arcs traced while the parameter runs over `[s0, s1]`, one per segment
    /// touched with positive length.
    pub fn image_arcs(&self, s0: &Q, s1: &Q) -> Vec<Arc> {
        let mut out = Vec::new();
        if self.is_constant() || s0 >= s1 {
            let seg = &self.segments[self.segment_index(s0)];
            let pos = match self.point_at(s0).position_on(seg.edge) {
                Some(t) => t,
                None => seg.from.clone(),
            };
            out.push(Arc::new(seg.edge, pos.clone(), pos));
            return out;
        }
        for (i, seg) in self.segments.iter().enumerate() {
            let (o0, o1) = (&self.offsets[i], &self.offsets[i + 1]);
            let lo = if s0 > o0 { s0 } else { o0 };
            let hi = if s1 < o1 { s1 } else { o1 };
            if lo >= hi {
                continue;
            }
            let seg_len = o1 - o0;
            let p0 = seg.position_at(&((lo - o0) / &seg_len));
            let p1 = seg.position_at(&((hi - o0) / &seg_len));
            let (a, b) = if p0 <= p1 { (p0, p1) } else { (p1, p0) };
            out.push(Arc::new(seg.edge, a, b));
        }
        out
    }

    /// Parameter intervals (within `[s0, s1]`) mapped into `target`, merged.
    pub fn preimage_params(&self, target: &Arc, s0: &Q, s1: &Q) -> Vec<(Q, Q)> {
        let mut pieces: Vec<(Q, Q)> = Vec::new();
        if self.is_constant() {
            if target.contains_point(&self.start()) {
                pieces.push((s0.clone(), s1.clone()));
            }
            return pieces;
        }
        for (i, seg) in self.segments.iter().enumerate() {
            let (o0, o1) = (&self.offsets[i], &self.offsets[i + 1]);
            if seg.edge == target.edge {
                // positions along the segment are affine in s
                let seg_len = o1 - o0;
                let param = |pos: &Q| o0 + (pos - &seg.from) / (&seg.to - &seg.from) * &seg_len;
                let (pa, pb) = (param(&target.a), param(&target.b));
                let (mut lo, mut hi) = if pa <= pb { (pa, pb) } else { (pb, pa) };
                if &lo < o0 {
                    lo = o0.clone();
                }
                if &hi > o1 {
                    hi = o1.clone();
                }
                if lo <= hi {
                    pieces.push((lo, hi));
                }
            } else {
                for (pt, s) in [(seg.start(), o0), (seg.end(), o1)] {
                    if target.contains_point(&pt) {
                        pieces.push((s.clone(), s.clone()));
                    }
                }
            }
        }
        let mut clipped: Vec<(Q, Q)> = pieces
            .into_iter()
            .filter_map(|(a, b)| {
                let a = if &a < s0 { s0.clone() } else { a };
                let b = if &b > s1 { s1.clone() } else { b };
                (a <= b).then_some((a, b))
            })
            .collect();
        clipped.sort();
        let mut merged: Vec<(Q, Q)> = Vec::new();
        for (a, b) in clipped {
            if let Some(last) = merged.last_mut() {
                if a <= last.1 {
                    if b > last.1 {
                        last.1 = b;
                    }
                    continue;
                }
            }
            merged.push((a, b));
        }
        merged
    }

    /// Direction in which the path leaves its start point.
    pub fn start_germ(&self) -> Option<Germ> {
        if self.is_constant() {
            return None;
        }
        let seg = &self.segments[0];
        Some(germ_leaving(seg.edge, &seg.from, &seg.to))
    }

    /// Direction from which the path arrives at its end point, expressed as
    /// the germ of the reversed path.
    pub fn end_germ(&self) -> Option<Germ> {
        if self.is_constant() {
            return None;
        }
        let seg = self.segments.last().expect("nonempty");
        Some(germ_leaving(seg.edge, &seg.to, &seg.from))
    }
}

fn germ_leaving(edge: EdgeId, at: &Q, toward: &Q) -> Germ {
    if at.is_zero() || at.is_one() {
        Germ::Into { edge }
    } else {
        Germ::Along { edge, increasing: toward > at }
    }
}

impl fmt::Display for EdgePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}@{}..{}", seg.edge, fmt_q(&seg.from), fmt_q(&seg.to))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_graph, GraphSpec};
    use crate::rational::{int, q};

    fn triod() -> FiniteGraph {
        build_graph(&GraphSpec {
            vertices: 4,
            edges: vec![(1, 4, None), (2, 4, None), (3, 4, None)],
        })
        .unwrap()
    }

    #[test]
    fn parse_and_walk_across_a_vertex() {
        let g = triod();
        let p = EdgePath::parse(&g, "1-4@1/2..1, 2-4@1..0").unwrap();
        assert_eq!(p.length(), &q(3, 2));
        assert_eq!(p.point_at(&q(1, 2)), GraphPoint::Vertex(4));
        assert_eq!(p.point_at(&int(1)), g.parse_point("2-4@1/2").unwrap());
        assert_eq!(p.params_of(&GraphPoint::Vertex(4)), vec![q(1, 2)]);
        let arcs = p.image_arcs(&q(1, 4), &int(1));
        assert_eq!(arcs.len(), 2);
        assert_eq!(p.end(), GraphPoint::Vertex(2));
    }

    #[test]
    fn rejects_bad_paths() {
        let g = triod();
        assert!(matches!(
            EdgePath::parse(&g, "1-4@0..1/2, 2-4@1..0"),
            Err(PathError::Disconnected(0, 1))
        ));
        assert!(matches!(
            EdgePath::parse(&g, "1-4@0..1, 1-4@1..0"),
            Err(PathError::NotSimple(_))
        ));
        assert!(EdgePath::parse(&g, "1-2@0..1").is_err());
        assert!(EdgePath::parse(&g, "1-4@0..1/2..").is_err());
        assert!(EdgePath::parse(&g, "1-4@1/3..1/3").unwrap().is_constant());
    }

    #[test]
    fn germs() {
        let g = triod();
        let p = EdgePath::parse(&g, "1-4@1/2..1, 3-4@1..0").unwrap();
        assert_eq!(p.start_germ(), Some(Germ::Along { edge: "1-4".parse().unwrap(), increasing: true }));
        assert_eq!(p.end_germ(), Some(Germ::Into { edge: "3-4".parse().unwrap() }));
    }

    #[test]
    fn preimage_parameters() {
        let g = triod();
        let p = EdgePath::parse(&g, "1-4@0..1, 2-4@1..0").unwrap();
        let target = Arc::new("2-4".parse().unwrap(), q(1, 2), int(1));
        assert_eq!(p.preimage_params(&target, &int(0), &int(2)), vec![(int(1), q(3, 2))]);
    }
}
