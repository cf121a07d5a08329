//! Eventually periodic points of the inverse limit, written as backward
//! itineraries `(x_0, x_1, …)` with `f(x_{i+1}) = x_i`.

use num_integer::Integer;
use num_traits::Zero;

use crate::graph::{FiniteGraph, GraphPoint};
use crate::map::PLGraphMap;
use crate::orbits::{orbit_record, OrbitError};
use crate::rational::{int, pow2_inv, Q};
use crate::refinement::graph_normalized_diameter;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ItineraryError {
    #[error("cycle is empty")]
    EmptyCycle,
    #[error("f(x_{}) != x_{index}", index + 1)]
    Broken { index: usize },
    #[error("point is not periodic (preperiod {0})")]
    NotPeriodic(usize),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
}

/// `x_i = pre[i]` for `i < p`, then `x_{p+i} = cycle[i mod q]`.
#[derive(Debug, Clone, Eq)]
pub struct BackwardItinerary {
    pre: Vec<GraphPoint>,
    cycle: Vec<GraphPoint>,
}

impl BackwardItinerary {
    /// Checks `f(x_{i+1}) = x_i` across the seam and around the cycle.
    pub fn new(f: &PLGraphMap, pre: Vec<GraphPoint>, cycle: Vec<GraphPoint>) -> Result<Self, ItineraryError> {
        if cycle.is_empty() {
            return Err(ItineraryError::EmptyCycle);
        }
        let x = BackwardItinerary { pre, cycle };
        let span = x.pre.len() + x.cycle.len();
        for i in 0..span {
            if f.eval(&x.project(i + 1)) != x.project(i) {
                return Err(ItineraryError::Broken { index: i });
            }
        }
        Ok(x)
    }

    /// The itinerary of a periodic point `z_0` with cycle `z_0 → z_1 → …`:
    /// `(z_0, z_{q-1}, …, z_1)` repeated.
    pub fn from_periodic_point(f: &PLGraphMap, z: &GraphPoint, cap: usize) -> Result<Self, ItineraryError> {
        let r = orbit_record(f, z, cap)?;
        if r.preperiod != 0 {
            return Err(ItineraryError::NotPeriodic(r.preperiod));
        }
        let mut cycle = vec![r.orbit[0].clone()];
        cycle.extend(r.orbit[1..].iter().rev().cloned());
        Ok(BackwardItinerary { pre: Vec::new(), cycle })
    }

    pub fn preperiodic(&self) -> &[GraphPoint] {
        &self.pre
    }

    pub fn cycle(&self) -> &[GraphPoint] {
        &self.cycle
    }

    /// `π_n(x) = x_n`.
    pub fn project(&self, n: usize) -> GraphPoint {
        match self.pre.get(n) {
            Some(p) => p.clone(),
            None => self.cycle[(n - self.pre.len()) % self.cycle.len()].clone(),
        }
    }

    /// Shortest description of the same sequence: primitive cycle, and the
    /// preperiodic part folded into the cycle where possible.
    pub fn normalized(&self) -> Self {
        let q = self.cycle.len();
        let period = (1..=q)
            .filter(|d| q.is_multiple_of(*d))
            .find(|d| (0..q).all(|i| self.cycle[i] == self.cycle[i % d]))
            .unwrap_or(q);
        let mut cycle: Vec<GraphPoint> = self.cycle[..period].to_vec();
        let mut pre = self.pre.clone();
        while pre.last().is_some_and(|p| Some(p) == cycle.last()) {
            pre.pop();
            cycle.rotate_right(1);
        }
        BackwardItinerary { pre, cycle }
    }

    /// The shift homeomorphism: `(f(x_0), x_0, x_1, …)`.
    pub fn shift(&self, f: &PLGraphMap) -> Self {
        let mut pre = vec![f.eval(&self.project(0))];
        pre.extend(self.pre.iter().cloned());
        BackwardItinerary { pre, cycle: self.cycle.clone() }
    }

    /// Every coordinate value that occurs at or after index `from`.
    pub fn values_from(&self, from: usize) -> Vec<GraphPoint> {
        let mut out: Vec<GraphPoint> = self.pre.iter().skip(from).cloned().collect();
        out.extend(self.cycle.iter().cloned());
        out
    }

    /// Every coordinate value.
    pub fn values(&self) -> Vec<GraphPoint> {
        self.values_from(0)
    }

    pub fn display(&self, g: &FiniteGraph) -> String {
        let list = |v: &[GraphPoint]| v.iter().map(|p| p.display(g)).collect::<Vec<_>>().join(",");
        format!("pre=[{}];cycle=[{}]", list(&self.pre), list(&self.cycle))
    }
}

impl PartialEq for BackwardItinerary {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.normalized(), other.normalized());
        a.pre == b.pre && a.cycle == b.cycle
    }
}

/// A certified enclosure `[lo, hi]` of the inverse-limit distance, plus the
/// exact value obtained by summing the periodic tail in closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceEnclosure {
    pub lo: Q,
    pub hi: Q,
    pub exact: Q,
    /// Coordinates summed before the tail bound.
    pub terms: usize,
}

/// `d(x, y) = Σ_{i≥0} d̄(x_i, y_i) / 2^i` with `d̄ = d / (2·diam G)`.
pub fn distance(f: &PLGraphMap, x: &BackwardItinerary, y: &BackwardItinerary, precision: &Q) -> DistanceEnclosure {
    assert!(*precision > Q::zero(), "precision must be positive");
    let g = f.graph();
    let term = |i: usize| -> Q {
        let d = g.graph_metric(&x.project(i), &y.project(i));
        d / (int(2) * g.diameter()) * pow2_inv(i as u32)
    };
    // smallest n with D̄·2^{-n} ≤ precision
    let mut n = 0usize;
    while graph_normalized_diameter() * pow2_inv(n as u32) > *precision {
        n += 1;
    }
    let lo: Q = (0..=n).map(term).sum();
    let hi = &lo + graph_normalized_diameter() * pow2_inv(n as u32);

    let start = x.pre.len().max(y.pre.len());
    let period = x.cycle.len().lcm(&y.cycle.len());
    let head: Q = (0..start).map(term).sum();
    let block: Q = (start..start + period).map(term).sum();
    let exact = head + block / (Q::from_integer(1.into()) - pow2_inv(period as u32));
    DistanceEnclosure { lo, hi, exact, terms: n + 1 }
}
