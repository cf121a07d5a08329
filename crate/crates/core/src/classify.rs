//! Local structure of inverse-limit points and comparison of two spaces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::chain::{LinkId, Pattern};
use crate::graph::{EdgeId, GraphPoint};
use crate::itinerary::BackwardItinerary;
use crate::map::{AssumptionReport, PLGraphMap};
use crate::markov::{markov_data, MarkovData, DEFAULT_PARTITION_CAP};
use crate::orbits::{endpoint_orbit_closure, omega_of_turning_points, OrbitError};
use crate::rational::Q;
use crate::refinement::{joint_sequence, RefinementError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error("degree hypothesis fails: the cycle meets the branch vertex {0}")]
    HypothesisFailed(usize),
    #[error("point is not exceptional")]
    NotExceptional,
    #[error("maps act on different graphs")]
    DifferentGraphs,
    #[error("joint refinement failed: {0}")]
    Refinement(#[from] RefinementError),
    #[error("internal contradiction: {0}")]
    Contradiction(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Product,
    Exceptional,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Product => "PRODUCT",
            Verdict::Exceptional => "EXCEPTIONAL",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub degree_hypothesis: bool,
    /// Some coordinate avoids the forward orbits of the endpoints.
    pub condition_i: bool,
    /// Some coordinate avoids `ω(P_f)`.
    pub condition_ii: bool,
}

/// Decides whether `x` has a neighbourhood homeomorphic to `(0,1) × S`.
pub fn classify_point(f: &PLGraphMap, x: &BackwardItinerary, cap: usize) -> Result<Classification, ClassifyError> {
    let branch = f.graph().branch_vertices();
    if let Some(v) = x.cycle().iter().find_map(|p| p.vertex().filter(|v| branch.contains(v))) {
        return Err(ClassifyError::HypothesisFailed(v));
    }
    let ends = endpoint_orbit_closure(f, cap)?;
    let omega = omega_of_turning_points(f, cap)?;
    let coords = x.values();
    let condition_i = coords.iter().any(|p| !ends.contains(p));
    let condition_ii = coords.iter().any(|p| !omega.contains(p));
    let verdict = if condition_i && condition_ii { Verdict::Product } else { Verdict::Exceptional };
    Ok(Classification { verdict, degree_hypothesis: true, condition_i, condition_ii })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Diagnosis {
    EndpointCondition,
    SinCurveLike,
    IndecomposableLike,
    Undetermined,
}

impl fmt::Display for Diagnosis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Diagnosis::EndpointCondition => "ENDPOINT_CONDITION",
            Diagnosis::SinCurveLike => "SIN_CURVE_LIKE",
            Diagnosis::IndecomposableLike => "INDECOMPOSABLE_LIKE",
            Diagnosis::Undetermined => "UNDETERMINED",
        })
    }
}

/// Evidence gathered by [`exceptional_diagnosis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagnosisReport {
    pub code: Diagnosis,
    /// Least `ℓ₀ ≤ depth` such that `M^ℓ` has an entry of at least 2 on
    /// the cycle's links for every `ℓ₀ ≤ ℓ ≤ depth`.
    pub two_pass_from: Option<usize>,
    /// Fewest iterates taking a turning point onto the cycle, if `≤ depth`.
    pub fold_hits_cycle: Option<usize>,
}

/// Bounded-depth guess at why an exceptional point fails the product
/// structure. The labels are heuristics, not certified facts.
///
/// A failed endpoint condition wins outright. Otherwise, with `K` the
/// Markov links holding the cycle of `x`, a two-pass entry of `M^ℓ` on
/// `K × K` recurring up to `depth` reads as an indecomposable piece, and a
/// turning point landing on the cycle reads as a single fold.
pub fn exceptional_diagnosis(
    f: &PLGraphMap,
    data: &MarkovData,
    x: &BackwardItinerary,
    depth: usize,
    cap: usize,
) -> Result<DiagnosisReport, ClassifyError> {
    let c = classify_point(f, x, cap)?;
    if c.verdict != Verdict::Exceptional {
        return Err(ClassifyError::NotExceptional);
    }
    let cycle: BTreeSet<&GraphPoint> = x.cycle().iter().collect();
    let k: Vec<usize> = data
        .links()
        .iter()
        .enumerate()
        .filter(|(_, l)| cycle.iter().any(|p| data.cell(**l).contains_point(p)))
        .map(|(i, _)| i)
        .collect();
    let two = BigUint::from(2u8);
    let two_pass: Vec<bool> = (1..=depth)
        .map(|l| {
            let m = data.transition_matrix_power(l);
            k.iter().any(|&i| k.iter().any(|&j| m[i][j] >= two))
        })
        .collect();
    let run = two_pass.iter().rev().take_while(|b| **b).count();
    let two_pass_from = (run > 0).then(|| depth - run + 1);
    let fold_hits_cycle = f
        .turning_points()
        .into_iter()
        .filter_map(|t| {
            let mut p = t.location;
            for n in 0..=depth {
                if cycle.contains(&p) {
                    return Some(n);
                }
                p = f.eval(&p);
            }
            None
        })
        .min();
    let code = if !c.condition_i {
        Diagnosis::EndpointCondition
    } else if depth == 0 {
        Diagnosis::Undetermined
    } else if two_pass_from.is_some() {
        Diagnosis::IndecomposableLike
    } else if fold_hits_cycle.is_some() {
        Diagnosis::SinCurveLike
    } else {
        Diagnosis::Undetermined
    };
    Ok(DiagnosisReport { code, two_pass_from, fold_hits_cycle })
}

/// The per-edge correspondence `c^i_k ↔ d^i_k`, with the shared relation
/// `f(c^i_k) = c^p_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    pub cuts_f: BTreeMap<EdgeId, Vec<Q>>,
    pub cuts_g: BTreeMap<EdgeId, Vec<Q>>,
    pub relation: BTreeSet<((EdgeId, usize), (EdgeId, usize))>,
}

/// Checks that `f` and `g` move their partition points with the same
/// index pattern. Returns the correspondence when they do.
pub fn pattern_equivalent(f: &PLGraphMap, df: &MarkovData, g: &PLGraphMap, dg: &MarkovData) -> Option<Correspondence> {
    if f.graph() != g.graph() {
        return None;
    }
    let (cf, cg) = (df.partition().cuts(), dg.partition().cuts());
    if cf.len() != cg.len() || cf.iter().zip(cg).any(|((e1, a), (e2, b))| e1 != e2 || a.len() != b.len()) {
        return None;
    }
    let relation = df.point_image_relation(f);
    (relation == dg.point_image_relation(g)).then(|| Correspondence {
        cuts_f: cf.clone(),
        cuts_g: cg.clone(),
        relation,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Homeomorphic { witness: Vec<Pattern>, bounds: Vec<Vec<Q>> },
    Distinguished { omega_f: usize, omega_g: usize },
    Inconclusive,
}

impl Outcome {
    pub fn label(&self) -> &'static str {
        match self {
            Outcome::Homeomorphic { .. } => "HOMEOMORPHIC",
            Outcome::Distinguished { .. } => "DISTINGUISHED",
            Outcome::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonVerdict {
    pub outcome: Outcome,
    /// `|ω(P_f)|`, `|ω(P_g)|` when computed exactly.
    pub omega: (Option<usize>, Option<usize>),
    pub reports: (AssumptionReport, AssumptionReport),
    pub pattern_equivalent: bool,
    pub interval_graph: bool,
    pub notes: Vec<String>,
}

/// Decides whether the two inverse limits are homeomorphic, provably
/// different, or neither as far as this library can tell.
pub fn compare_spaces(f: &PLGraphMap, g: &PLGraphMap, depth: usize, cap: usize) -> Result<ComparisonVerdict, ClassifyError> {
    if f.graph() != g.graph() {
        return Err(ClassifyError::DifferentGraphs);
    }
    let omega = |m: &PLGraphMap| omega_of_turning_points(m, cap).ok().map(|o| o.len());
    let omega = (omega(f), omega(g));
    let reports = (f.check_standing_assumptions(cap), g.check_standing_assumptions(cap));
    let interval_graph = f.graph().is_arc();
    let mut notes = Vec::new();

    let part_cap = cap.min(DEFAULT_PARTITION_CAP);
    let data = match (markov_data(f, part_cap), markov_data(g, part_cap)) {
        (Ok(df), Ok(dg)) => Some((df, dg)),
        (a, b) => {
            for (name, r) in [("f", a.err()), ("g", b.err())] {
                if let Some(e) = r {
                    notes.push(format!("{name} has no Markov structure: {e}"));
                }
            }
            None
        }
    };
    let equivalent = data.as_ref().is_some_and(|(df, dg)| pattern_equivalent(f, df, g, dg).is_some());

    let outcome = if let (true, Some((df, dg))) = (equivalent, &data) {
        let j = joint_sequence(&[(f, df), (g, dg)], depth)?;
        if let (Some(n), Some(m)) = omega {
            if n != m {
                return Err(ClassifyError::Contradiction(format!(
                    "pattern-equivalent maps with |ω(P_f)| = {n} and |ω(P_g)| = {m}"
                )));
            }
        }
        Outcome::Homeomorphic { witness: j.patterns(), bounds: j.bounds() }
    } else {
        match omega {
            (Some(n), Some(m)) if n != m => {
                if !reports.0.all_hold() || !reports.1.all_hold() {
                    notes.push("standing assumptions not verified for both maps".into());
                    Outcome::Inconclusive
                } else if !interval_graph {
                    notes.push(format!(
                        "|ω(P_f)| = {n} differs from |ω(P_g)| = {m}, but the counting argument is only available for interval maps"
                    ));
                    Outcome::Inconclusive
                } else {
                    Outcome::Distinguished { omega_f: n, omega_g: m }
                }
            }
            (Some(_), Some(_)) => {
                notes.push("ω-limit sets of the turning points have equal size".into());
                Outcome::Inconclusive
            }
            _ => {
                notes.push(format!("some turning-point orbit is not eventually periodic within {cap} iterates"));
                Outcome::Inconclusive
            }
        }
    };
    if matches!(outcome, Outcome::Distinguished { .. }) {
        notes.push("a dense-orbit hypothesis is not checked".into());
    }
    Ok(ComparisonVerdict { outcome, omega, reports, pattern_equivalent: equivalent, interval_graph, notes })
}

/// Markov links whose cells contain `p`.
pub fn links_at(data: &MarkovData, p: &GraphPoint) -> Vec<LinkId> {
    data.links().iter().copied().filter(|l| data.cell(*l).contains_point(p)).collect()
}
