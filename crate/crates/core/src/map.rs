//! Piecewise-linear self-maps of a finite graph.
//!
//! Each edge is cut by rational breakpoints into laps; a lap is carried
//! affinely (in arclength) along an explicit [`EdgePath`].

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc as Shared;

use num_traits::{One, Zero};

use crate::graph::{Arc, EdgeId, FiniteGraph, GraphPoint};
use crate::markov::{compute_markov_partition, index_sets, DEFAULT_PARTITION_CAP};
use crate::path::{EdgePath, Germ};
use crate::rational::{fmt_q, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("no lap data for edge {0}")]
    MissingEdge(EdgeId),
    #[error("lap data given for edge {0}, which is not in the graph")]
    UnknownEdge(EdgeId),
    #[error("breakpoints on edge {0} must increase strictly from 0 to 1")]
    BadBreakpoints(EdgeId),
    #[error("edge {edge} has {breaks} breakpoints but {laps} lap images")]
    LapCountMismatch { edge: EdgeId, breaks: usize, laps: usize },
    #[error("map is discontinuous at {0}")]
    Discontinuous(String),
    #[error("fold at branch vertex {0}: turning points must avoid vertices of degree >= 3")]
    FoldAtBranchVertex(usize),
    #[error("lap {lap} of edge {edge} is constant")]
    ConstantLap { edge: EdgeId, lap: usize },
}

/// One linear piece: `[t0, t1]` of `edge` carried along `path`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lap {
    pub edge: EdgeId,
    pub t0: Q,
    pub t1: Q,
    pub path: EdgePath,
}

impl Lap {
    /// Arclength parameter along the image path for domain position `t`.
    fn param(&self, t: &Q) -> Q {
        (t - &self.t0) / (&self.t1 - &self.t0) * self.path.length()
    }

    /// Domain position for arclength parameter `s`.
    fn position(&self, s: &Q) -> Q {
        &self.t0 + s / self.path.length() * (&self.t1 - &self.t0)
    }
}

/// A fold of the map: a breakpoint where both adjacent laps leave the image
/// point in the same direction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TurningPoint {
    pub location: GraphPoint,
    /// `(edge, lap index)` of the two laps meeting at the fold.
    pub laps: [(EdgeId, usize); 2],
    /// Common direction in which both laps leave the image point.
    pub direction: Germ,
}

/// Outcome of the check that some preimage iterate is multivalued everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MultivaluedVerdict {
    /// Every column of the `n`-th transition-matrix power sums to at least 2.
    Verified(usize),
    /// Some cell interior has a single preimage under every iterate.
    Failed,
    /// Neither outcome within the iteration cap (or no Markov structure).
    Undetermined(usize),
}

/// Verdicts on the three standing assumptions of the local-structure theorem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionReport {
    pub isolated_preimages: bool,
    pub nonexpanding_preimages: bool,
    pub eventually_multivalued_preimages: MultivaluedVerdict,
}

impl AssumptionReport {
    pub fn all_hold(&self) -> bool {
        self.isolated_preimages
            && self.nonexpanding_preimages
            && matches!(self.eventually_multivalued_preimages, MultivaluedVerdict::Verified(_))
    }
}

/// Breakpoints and lap images for every edge, before validation.
pub type MapSpec = BTreeMap<EdgeId, (Vec<Q>, Vec<EdgePath>)>;

#[derive(Debug, Clone, PartialEq)]
pub struct PLGraphMap {
    graph: Shared<FiniteGraph>,
    laps: BTreeMap<EdgeId, Vec<Lap>>,
}

impl PLGraphMap {
    pub fn new(graph: Shared<FiniteGraph>, spec: MapSpec) -> Result<Self, MapError> {
        for e in spec.keys() {
            if !graph.has_edge(*e) {
                return Err(MapError::UnknownEdge(*e));
            }
        }
        let mut laps = BTreeMap::new();
        for e in graph.edges() {
            let (breaks, paths) = spec.get(&e).ok_or(MapError::MissingEdge(e))?;
            let ok = breaks.len() >= 2
                && breaks[0].is_zero()
                && breaks.last().is_some_and(|b| b.is_one())
                && breaks.windows(2).all(|w| w[0] < w[1]);
            if !ok {
                return Err(MapError::BadBreakpoints(e));
            }
            if paths.len() + 1 != breaks.len() {
                return Err(MapError::LapCountMismatch {
                    edge: e,
                    breaks: breaks.len(),
                    laps: paths.len(),
                });
            }
            let edge_laps: Vec<Lap> = paths
                .iter()
                .enumerate()
                .map(|(k, p)| Lap {
                    edge: e,
                    t0: breaks[k].clone(),
                    t1: breaks[k + 1].clone(),
                    path: p.clone(),
                })
                .collect();
            for (k, w) in edge_laps.windows(2).enumerate() {
                if w[0].path.end() != w[1].path.start() {
                    return Err(MapError::Discontinuous(format!(
                        "{}@{} (between laps {} and {})",
                        e,
                        fmt_q(&w[0].t1),
                        k,
                        k + 1
                    )));
                }
            }
            laps.insert(e, edge_laps);
        }
        let map = PLGraphMap { graph, laps };
        for v in map.graph.vertices() {
            let images: BTreeSet<GraphPoint> =
                map.vertex_laps(v).map(|(_, _, img, _)| img).collect();
            if images.len() > 1 {
                return Err(MapError::Discontinuous(format!("vertex {v}")));
            }
        }
        for v in map.graph.branch_vertices() {
            let germs: Vec<Germ> = map.vertex_laps(v).filter_map(|(_, _, _, g)| g).collect();
            let distinct: BTreeSet<&Germ> = germs.iter().collect();
            if distinct.len() < germs.len() {
                return Err(MapError::FoldAtBranchVertex(v));
            }
        }
        Ok(map)
    }

    /// The same map with its laps additionally cut at every point of `cuts`.
    pub fn refined_at(&self, cuts: &BTreeMap<EdgeId, Vec<Q>>) -> PLGraphMap {
        let mut laps = BTreeMap::new();
        for (e, edge_laps) in &self.laps {
            let mut out = Vec::new();
            for lap in edge_laps {
                let mut pts: Vec<Q> = vec![lap.t0.clone()];
                if let Some(c) = cuts.get(e) {
                    pts.extend(c.iter().filter(|t| **t > lap.t0 && **t < lap.t1).cloned());
                }
                pts.push(lap.t1.clone());
                pts.sort();
                pts.dedup();
                for w in pts.windows(2) {
                    let s0 = lap.param(&w[0]);
                    let s1 = lap.param(&w[1]);
                    out.push(Lap {
                        edge: *e,
                        t0: w[0].clone(),
                        t1: w[1].clone(),
                        path: sub_path(&self.graph, &lap.path, &s0, &s1),
                    });
                }
            }
            laps.insert(*e, out);
        }
        PLGraphMap { graph: self.graph.clone(), laps }
    }

    pub fn graph(&self) -> &FiniteGraph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Shared<FiniteGraph> {
        self.graph.clone()
    }

    pub fn laps(&self, e: EdgeId) -> &[Lap] {
        &self.laps[&e]
    }

    pub fn all_laps(&self) -> impl Iterator<Item = &Lap> {
        self.laps.values().flatten()
    }

    /// Breakpoints of edge `e`, including 0 and 1.
    pub fn breakpoints(&self, e: EdgeId) -> Vec<Q> {
        let laps = &self.laps[&e];
        let mut out: Vec<Q> = laps.iter().map(|l| l.t0.clone()).collect();
        out.push(laps.last().expect("at least one lap").t1.clone());
        out
    }

    pub fn has_constant_lap(&self) -> bool {
        self.all_laps().any(|l| l.path.is_constant())
    }

    fn first_constant_lap(&self) -> Option<MapError> {
        self.laps.iter().find_map(|(e, laps)| {
            laps.iter()
                .position(|l| l.path.is_constant())
                .map(|lap| MapError::ConstantLap { edge: *e, lap })
        })
    }

    /// For each edge incident to `v`: the edge, the lap index at `v`, the
    /// image of `v`, and the direction in which that lap leaves the image.
    fn vertex_laps(&self, v: usize) -> impl Iterator<Item = (EdgeId, usize, GraphPoint, Option<Germ>)> + '_ {
        self.graph.incident_edges(v).iter().map(move |e| {
            let laps = &self.laps[e];
            if e.lo() == v {
                (*e, 0, laps[0].path.start(), laps[0].path.start_germ())
            } else {
                let k = laps.len() - 1;
                (*e, k, laps[k].path.end(), laps[k].path.end_germ())
            }
        })
    }

    /// Index of the lap of `e` containing position `t` (the left one at a breakpoint).
    pub fn lap_index(&self, e: EdgeId, t: &Q) -> usize {
        let laps = &self.laps[&e];
        let idx = laps.partition_point(|l| &l.t1 < t);
        idx.min(laps.len() - 1)
    }

    /// Image of a point.
    pub fn eval(&self, p: &GraphPoint) -> GraphPoint {
        let (e, t) = p.edge_repr(&self.graph);
        let lap = &self.laps[&e][self.lap_index(e, &t)];
        lap.path.point_at(&lap.param(&t))
    }

    /// Every point mapped onto `q`.
    pub fn preimages(&self, q: &GraphPoint) -> Result<BTreeSet<GraphPoint>, MapError> {
        if let Some(err) = self.first_constant_lap() {
            return Err(err);
        }
        let mut out = BTreeSet::new();
        for lap in self.all_laps() {
            for s in lap.path.params_of(q) {
                out.insert(GraphPoint::on_edge(lap.edge, lap.position(&s)));
            }
        }
        Ok(out)
    }

    /// Turning points at edge interiors and at degree-2 vertices.
    pub fn turning_points(&self) -> BTreeSet<TurningPoint> {
        let mut out = BTreeSet::new();
        for (e, laps) in &self.laps {
            for (k, w) in laps.windows(2).enumerate() {
                if let (Some(g0), Some(g1)) = (w[0].path.end_germ(), w[1].path.start_germ()) {
                    if g0 == g1 {
                        out.insert(TurningPoint {
                            location: GraphPoint::on_edge(*e, w[0].t1.clone()),
                            laps: [(*e, k), (*e, k + 1)],
                            direction: g0,
                        });
                    }
                }
            }
        }
        for v in self.graph.vertices().filter(|v| self.graph.vertex_degree(*v) == 2) {
            let sides: Vec<_> = self.vertex_laps(v).collect();
            if let (Some(g0), Some(g1)) = (&sides[0].3, &sides[1].3) {
                if g0 == g1 {
                    out.insert(TurningPoint {
                        location: GraphPoint::Vertex(v),
                        laps: [(sides[0].0, sides[0].1), (sides[1].0, sides[1].1)],
                        direction: g0.clone(),
                    });
                }
            }
        }
        out
    }

    /// Ratio of image arclength to domain arclength for every lap.
    pub fn stretch_factors(&self) -> Vec<Q> {
        self.all_laps()
            .map(|l| l.path.length() / ((&l.t1 - &l.t0) * self.graph.length(l.edge)))
            .collect()
    }

    /// Image of an arc as merged arcs.
    pub fn image_of_arc(&self, arc: &Arc) -> Vec<Arc> {
        let mut out = Vec::new();
        for lap in &self.laps[&arc.edge] {
            let lo = if arc.a > lap.t0 { &arc.a } else { &lap.t0 };
            let hi = if arc.b < lap.t1 { &arc.b } else { &lap.t1 };
            if lo > hi || (lo == hi && !arc.is_degenerate()) {
                continue;
            }
            out.extend(lap.path.image_arcs(&lap.param(lo), &lap.param(hi)));
            if arc.is_degenerate() {
                break;
            }
        }
        crate::graph::merge_arcs(out)
    }

    /// Image of a finite union of arcs.
    pub fn image_of_arcs(&self, arcs: &[Arc]) -> Vec<Arc> {
        crate::graph::merge_arcs(arcs.iter().flat_map(|a| self.image_of_arc(a)).collect())
    }

    /// `f⁻¹(target) ∩ cell`, where `cell` lies inside a single lap.
    pub fn preimage_in_cell(&self, cell: &Arc, target: &Arc) -> Vec<Arc> {
        let lap = &self.laps[&cell.edge][self.lap_index(cell.edge, &cell.b)];
        debug_assert!(lap.t0 <= cell.a, "cell {cell} crosses a breakpoint");
        let s0 = lap.param(&cell.a);
        let s1 = lap.param(&cell.b);
        let mut out: Vec<Arc> = lap
            .path
            .preimage_params(target, &s0, &s1)
            .into_iter()
            .map(|(a, b)| {
                if lap.path.is_constant() {
                    Arc::new(cell.edge, cell.a.clone(), cell.b.clone())
                } else {
                    let (x, y) = (lap.position(&a), lap.position(&b));
                    if x <= y {
                        Arc::new(cell.edge, x, y)
                    } else {
                        Arc::new(cell.edge, y, x)
                    }
                }
            })
            .collect();
        out.sort();
        out
    }

    /// Checks the standing assumptions; `cap` bounds both the partition
    /// closure and the matrix-power search.
    pub fn check_standing_assumptions(&self, cap: usize) -> AssumptionReport {
        let isolated = !self.has_constant_lap();
        let nonexpanding = self.stretch_factors().iter().all(|s| *s >= Q::one());
        let multivalued = if !isolated {
            MultivaluedVerdict::Undetermined(cap)
        } else {
            match compute_markov_partition(self, cap.min(DEFAULT_PARTITION_CAP))
                .and_then(|p| index_sets(self, &p))
            {
                Ok(data) => data.eventually_multivalued(cap),
                Err(_) => MultivaluedVerdict::Undetermined(cap),
            }
        };
        AssumptionReport {
            isolated_preimages: isolated,
            nonexpanding_preimages: nonexpanding,
            eventually_multivalued_preimages: multivalued,
        }
    }
}

/// The piece of `path` between arclength parameters `s0 < s1`.
fn sub_path(g: &FiniteGraph, path: &EdgePath, s0: &Q, s1: &Q) -> EdgePath {
    use crate::path::Segment;
    if path.is_constant() {
        return path.clone();
    }
    let start = path.point_at(s0);
    let mut segments = Vec::new();
    let mut cursor = start;
    for arc in path.image_arcs(s0, s1) {
        let from = cursor.position_on(arc.edge).expect("consecutive arcs share a point");
        let to = if from == arc.a { arc.b.clone() } else { arc.a.clone() };
        cursor = GraphPoint::on_edge(arc.edge, to.clone());
        segments.push(Segment { edge: arc.edge, from, to });
    }
    EdgePath::new(g, segments).expect("sub-path of a valid path")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::rational::{int, q};

    fn pt(f: &PLGraphMap, s: &str) -> GraphPoint {
        f.graph().parse_point(s).unwrap()
    }

    #[test]
    fn tent_eval() {
        let f = tent();
        assert_eq!(f.eval(&pt(&f, "1-2@1/4")), pt(&f, "1-2@1/2"));
        assert_eq!(f.eval(&pt(&f, "1-2@1/2")), GraphPoint::Vertex(2));
        assert_eq!(f.eval(&GraphPoint::Vertex(2)), GraphPoint::Vertex(1));
        let id = identity_interval();
        assert_eq!(id.eval(&pt(&id, "1-2@3/7")), pt(&id, "1-2@3/7"));
    }

    #[test]
    fn tent_preimages() {
        let f = tent();
        let pre = f.preimages(&pt(&f, "1-2@1/2")).unwrap();
        assert_eq!(pre, BTreeSet::from([pt(&f, "1-2@1/4"), pt(&f, "1-2@3/4")]));
        let pre0 = f.preimages(&GraphPoint::Vertex(1)).unwrap();
        assert_eq!(pre0, BTreeSet::from([GraphPoint::Vertex(1), GraphPoint::Vertex(2)]));
    }

    #[test]
    fn turning_point_examples() {
        let t: Vec<GraphPoint> = tent().turning_points().into_iter().map(|t| t.location).collect();
        assert_eq!(t, vec![pt(&tent(), "1-2@1/2")]);
        assert!(identity_interval().turning_points().is_empty());
        let g: Vec<GraphPoint> = g3().turning_points().into_iter().map(|t| t.location).collect();
        assert_eq!(g, vec![pt(&g3(), "1-2@2/5")]);
        assert!(identity_triod().turning_points().is_empty());
    }

    #[test]
    fn fold_at_degree_two_vertex() {
        // a path 1-2-3 folded at v2 onto edge 1-2
        let f = map_from(
            "[graph]\nvertices = 3\nedges = [\"1-2\", \"2-3\"]\n\
             [maps.f.edges.\"1-2\"]\nbreaks = [\"0\", \"1\"]\nlaps = [\"1-2@0..1\"]\n\
             [maps.f.edges.\"2-3\"]\nbreaks = [\"0\", \"1\"]\nlaps = [\"1-2@1..0\"]\n",
            "f",
        );
        let tps = f.turning_points();
        assert_eq!(tps.len(), 1);
        assert_eq!(tps.iter().next().unwrap().location, GraphPoint::Vertex(2));
    }

    #[test]
    fn rejects_fold_on_branch_vertex() {
        let err = try_map_from(
            "[graph]\nvertices = 4\nedges = [\"1-4\", \"2-4\", \"3-4\"]\n\
             [maps.f.edges.\"1-4\"]\nbreaks = [\"0\", \"1\"]\nlaps = [\"1-4@0..1\"]\n\
             [maps.f.edges.\"2-4\"]\nbreaks = [\"0\", \"1\"]\nlaps = [\"1-4@0..1\"]\n\
             [maps.f.edges.\"3-4\"]\nbreaks = [\"0\", \"1\"]\nlaps = [\"3-4@0..1\"]\n",
            "f",
        )
        .unwrap_err();
        assert!(err.to_string().contains("branch vertex 4"), "{err}");
    }

    #[test]
    fn rejects_discontinuity() {
        let err = try_map_from(
            "[graph]\nvertices = 2\nedges = [\"1-2\"]\n\
             [maps.f.edges.\"1-2\"]\nbreaks = [\"0\", \"1/2\", \"1\"]\nlaps = [\"1-2@0..1\", \"1-2@1/2..0\"]\n",
            "f",
        )
        .unwrap_err();
        assert!(err.to_string().contains("discontinuous"), "{err}");
    }

    #[test]
    fn assumption_reports() {
        let r = tent().check_standing_assumptions(100);
        assert_eq!(r.eventually_multivalued_preimages, MultivaluedVerdict::Verified(1));
        assert!(r.all_hold());
        assert_eq!(tent().stretch_factors(), vec![int(2), int(2)]);

        let r = g3().check_standing_assumptions(100);
        assert_eq!(g3().stretch_factors(), vec![q(3, 2), q(5, 3)]);
        assert!(r.isolated_preimages && r.nonexpanding_preimages);
        assert_eq!(r.eventually_multivalued_preimages, MultivaluedVerdict::Verified(2));

        // first lap stretched by 1/2: [0,1/2] -> [0,1/4]
        let f = map_from(
            "[graph]\nvertices = 2\nedges = [\"1-2\"]\n\
             [maps.f.edges.\"1-2\"]\nbreaks = [\"0\", \"1/2\", \"1\"]\nlaps = [\"1-2@0..1/4\", \"1-2@1/4..1\"]\n",
            "f",
        );
        assert!(!f.check_standing_assumptions(100).nonexpanding_preimages);

        assert_eq!(
            identity_interval().check_standing_assumptions(100).eventually_multivalued_preimages,
            MultivaluedVerdict::Failed
        );
    }

    #[test]
    fn constant_lap_breaks_isolation() {
        let f = map_from(
            "[graph]\nvertices = 2\nedges = [\"1-2\"]\n\
             [maps.f.edges.\"1-2\"]\nbreaks = [\"0\", \"1/3\", \"2/3\", \"1\"]\n\
             laps = [\"1-2@0..1/2\", \"1-2@1/2..1/2\", \"1-2@1/2..1\"]\n",
            "f",
        );
        assert!(matches!(
            f.preimages(&GraphPoint::Vertex(1)),
            Err(MapError::ConstantLap { lap: 1, .. })
        ));
        let r = f.check_standing_assumptions(10);
        assert!(!r.isolated_preimages);
        assert!(!r.all_hold());
    }

    #[test]
    fn refinement_keeps_the_function() {
        let f = g3();
        let cuts = BTreeMap::from([(e12(), vec![q(1, 5), q(19, 25)])]);
        let r = f.refined_at(&cuts);
        assert_eq!(r.laps(e12()).len(), 4);
        for k in 0..=50 {
            let p = GraphPoint::on_edge(e12(), q(k, 50));
            assert_eq!(f.eval(&p), r.eval(&p));
        }
    }

    #[test]
    fn image_and_cell_preimage() {
        let f = g3();
        let img = f.image_of_arc(&Arc::new(e12(), q(2, 5), int(1)));
        assert_eq!(img, vec![Arc::whole(e12())]);
        let pre = f.preimage_in_cell(&Arc::new(e12(), q(2, 5), int(1)), &Arc::new(e12(), int(0), q(2, 5)));
        assert_eq!(pre, vec![Arc::new(e12(), q(19, 25), int(1))]);
    }
}
