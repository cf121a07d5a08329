//! Exact forward orbits, ω-limit sets of turning points and endpoint orbits.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::graph::GraphPoint;
use crate::map::PLGraphMap;

pub const DEFAULT_ORBIT_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbitError {
    #[error("no repetition within {cap} iterates")]
    CapExceeded { cap: usize, partial: Box<OmegaSet> },
}

impl OrbitError {
    fn bare(cap: usize) -> Self {
        OrbitError::CapExceeded { cap, partial: Box::default() }
    }

    pub fn cap(&self) -> usize {
        match self {
            OrbitError::CapExceeded { cap, .. } => *cap,
        }
    }
}

/// An eventually periodic orbit: `orbit[preperiod..]` is the cycle, listed once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub start: GraphPoint,
    pub preperiod: usize,
    pub period: usize,
    pub orbit: Vec<GraphPoint>,
}

impl OrbitRecord {
    pub fn cycle(&self) -> &[GraphPoint] {
        &self.orbit[self.preperiod..]
    }
}

pub fn orbit_record(f: &PLGraphMap, p: &GraphPoint, cap: usize) -> Result<OrbitRecord, OrbitError> {
    let mut seen: HashMap<GraphPoint, usize> = HashMap::new();
    let mut orbit = Vec::new();
    let mut x = p.clone();
    for i in 0..=cap {
        if let Some(&j) = seen.get(&x) {
            return Ok(OrbitRecord { start: p.clone(), preperiod: j, period: i - j, orbit });
        }
        seen.insert(x.clone(), i);
        let next = f.eval(&x);
        orbit.push(x);
        x = next;
    }
    Err(OrbitError::bare(cap))
}

/// A finite forward-invariant set together with the points whose orbits
/// produced it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OmegaSet {
    pub points: BTreeSet<GraphPoint>,
    /// Source point ↦ its cycle (or full orbit, for endpoint closures).
    pub sources: BTreeMap<GraphPoint, Vec<GraphPoint>>,
}

impl OmegaSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &GraphPoint) -> bool {
        self.points.contains(p)
    }
}

/// `ω(P_f)`: the union of the cycles reached by the turning points.
pub fn omega_of_turning_points(f: &PLGraphMap, cap: usize) -> Result<OmegaSet, OrbitError> {
    let starts: BTreeSet<GraphPoint> = f.turning_points().into_iter().map(|t| t.location).collect();
    collect(f, starts, cap, |r| r.cycle().to_vec())
}

/// `⋃_{p≥0} f^p(E_G)` for the degree-one vertices `E_G`.
pub fn endpoint_orbit_closure(f: &PLGraphMap, cap: usize) -> Result<OmegaSet, OrbitError> {
    let starts = f.graph().endpoints().into_iter().map(GraphPoint::Vertex).collect();
    collect(f, starts, cap, |r| r.orbit.clone())
}

fn collect(
    f: &PLGraphMap,
    starts: BTreeSet<GraphPoint>,
    cap: usize,
    part: impl Fn(&OrbitRecord) -> Vec<GraphPoint>,
) -> Result<OmegaSet, OrbitError> {
    let mut out = OmegaSet::default();
    let mut failed = false;
    for s in starts {
        match orbit_record(f, &s, cap) {
            Ok(r) => {
                let pts = part(&r);
                out.points.extend(pts.iter().cloned());
                out.sources.insert(s, pts);
            }
            Err(_) => failed = true,
        }
    }
    if failed {
        Err(OrbitError::CapExceeded { cap, partial: Box::new(out) })
    } else {
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::rational::q;

    fn pt(a: i64, b: i64) -> GraphPoint {
        GraphPoint::on_edge(e12(), q(a, b))
    }

    #[test]
    fn tent_half() {
        let r = orbit_record(&tent(), &pt(1, 2), 100).unwrap();
        assert_eq!((r.preperiod, r.period), (2, 1));
        assert_eq!(r.orbit, vec![pt(1, 2), pt(1, 1), pt(0, 1)]);
        let z = orbit_record(&tent(), &pt(0, 1), 100).unwrap();
        assert_eq!((z.preperiod, z.period), (0, 1));
    }

    #[test]
    fn g3_cycle() {
        let r = orbit_record(&g3(), &pt(2, 5), 100).unwrap();
        assert_eq!((r.preperiod, r.period), (0, 3));
        assert_eq!(r.orbit, vec![pt(2, 5), pt(1, 1), pt(0, 1)]);
    }

    #[test]
    fn omega_sets() {
        let t = omega_of_turning_points(&tent(), 100).unwrap();
        assert_eq!(t.points, BTreeSet::from([pt(0, 1)]));
        let g = omega_of_turning_points(&g3(), 100).unwrap();
        assert_eq!(g.len(), 3);
        assert!(omega_of_turning_points(&identity_interval(), 100).unwrap().is_empty());
        for (f, s) in [(tent(), t), (g3(), g)] {
            assert!(s.points.iter().all(|p| s.contains(&f.eval(p))));
        }
    }

    #[test]
    fn endpoint_closures() {
        assert_eq!(endpoint_orbit_closure(&tent(), 100).unwrap().points, BTreeSet::from([pt(0, 1), pt(1, 1)]));
        assert_eq!(endpoint_orbit_closure(&g3(), 100).unwrap().len(), 3);
        let tri = endpoint_orbit_closure(&identity_triod(), 100).unwrap();
        assert_eq!(tri.points, BTreeSet::from([2, 3, 4].map(GraphPoint::Vertex)));
    }

    #[test]
    fn tight_cap_is_reported() {
        // 1/7 under the tent has period 3; a tight cap must refuse
        let err = orbit_record(&tent(), &pt(1, 7), 2).unwrap_err();
        assert_eq!(err.cap(), 2);
        assert_eq!(orbit_record(&tent(), &pt(1, 7), 10).unwrap().period, 3);
    }

    #[test]
    fn minimality_against_brute_force() {
        let f = tent();
        for d in 2..30 {
            for n in 0..=d {
                let r = orbit_record(&f, &pt(n, d), 1000).unwrap();
                let len = r.preperiod + r.period;
                let mut x = r.start.clone();
                let mut pts = vec![];
                for _ in 0..=len {
                    pts.push(x.clone());
                    x = f.eval(&x);
                }
                assert_eq!(pts[r.preperiod], pts[len]);
                for a in 0..len {
                    for b in a + 1..len {
                        assert_ne!(pts[a], pts[b]);
                    }
                }
            }
        }
    }
}
