//! Mesh bounds for pulled-back chains and the joint refinement sequence.
//!
//! Distances are normalized: `d̄ = d / (2·diam G)`, so the whole graph has
//! normalized diameter `D̄ = 1/2`. The inverse-limit metric weights
//! coordinate `i` by `2^{-i}`, starting from 0.

use std::collections::BTreeMap;

use num_traits::One;

use crate::chain::{refine_uniform, GraphChain, LinkId, Pattern, RefineCounts};
use crate::chain::mesh_count;
use crate::classify::pattern_equivalent;
use crate::fhat::{fhat, FhatError, Provenance};
use crate::graph::{Arc, FiniteGraph};
use crate::map::PLGraphMap;
use crate::markov::{markov_data, MarkovData, MarkovError, DEFAULT_PARTITION_CAP};
use crate::rational::{int, pow2_inv, q, Q};

/// Halvings of `δ` tried before giving up on a round.
const MAX_HALVINGS: u32 = 64;
/// Bisection steps used to enlarge an accepted `δ`.
const BISECTION_STEPS: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RefinementError {
    #[error("standing assumption missing: {0}")]
    AssumptionMissing(String),
    #[error(transparent)]
    Markov(#[from] MarkovError),
    #[error(transparent)]
    Fhat(#[from] FhatError),
    #[error("maps are not pattern equivalent")]
    NotPatternEquivalent,
    #[error("pattern functions diverge at round {0}")]
    PatternDivergence(usize),
    #[error("no mesh scale reaches the target at round {0}")]
    NoDelta(usize),
}

/// Normalized diameter of a union of arcs.
pub fn normalized_diameter(g: &FiniteGraph, arcs: &[Arc]) -> Q {
    g.set_diameter(arcs) / (int(2) * g.diameter())
}

/// Normalized diameter of the whole graph.
pub fn graph_normalized_diameter() -> Q {
    q(1, 2)
}

/// Upper bound on the mesh of `π_n⁻¹(chain)` in the inverse limit:
/// `max_A Σ_{i=0}^{n} d̄(f^{n-i}(A))/2^i + D̄·2^{-n}`.
pub fn invlim_mesh_bound(f: &PLGraphMap, chain: &GraphChain, n: usize) -> Result<Q, RefinementError> {
    if let Some(s) = f.stretch_factors().into_iter().find(|s| *s < Q::one()) {
        return Err(RefinementError::AssumptionMissing(format!("lap with stretch factor {s} < 1")));
    }
    Ok(mesh_bound(f, chain, n))
}

/// The same bound without the expansion precondition; the sum is a valid
/// bound for any map, the precondition only guarantees it can be driven
/// to zero by refining.
fn mesh_bound(f: &PLGraphMap, chain: &GraphChain, n: usize) -> Q {
    let g = f.graph();
    let tail = graph_normalized_diameter() * pow2_inv(n as u32);
    let mut best = Q::from_integer(0.into());
    for (_, link) in chain.iter() {
        let mut image = vec![link.clone()];
        let mut sum = Q::from_integer(0.into());
        for j in 0..=n {
            // f^j(A) sits in coordinate n - j
            sum += normalized_diameter(g, &image) * pow2_inv((n - j) as u32);
            if j < n {
                image = f.image_of_arcs(&image);
            }
        }
        if sum > best {
            best = sum;
        }
    }
    best + tail
}

/// One level `C_k` of a refinement sequence for one map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Round {
    pub chain: GraphChain,
    /// `h_k`: each link ↦ the link of `C_{k-1}` (of `T^f` when `k = 1`)
    /// that `f` carries it onto.
    pub pattern: Pattern,
    /// Each link ↦ the Markov link containing it.
    pub into_markov: Pattern,
    /// Certified bound on the mesh of `π_k⁻¹(C_k)`.
    pub mesh_bound: Q,
    pub delta: Q,
}

/// Refinement sequences built in lockstep for several maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointRefinement {
    pub per_map: Vec<Vec<Round>>,
}

impl JointRefinement {
    /// The shared patterns `h_1 … h_depth`.
    pub fn patterns(&self) -> Vec<Pattern> {
        self.per_map[0].iter().map(|r| r.pattern.clone()).collect()
    }

    /// Mesh bounds per round, one entry per map.
    pub fn bounds(&self) -> Vec<Vec<Q>> {
        let depth = self.per_map[0].len();
        (0..depth)
            .map(|k| self.per_map.iter().map(|m| m[k].mesh_bound.clone()).collect())
            .collect()
    }
}

/// A parent chain for one map, ready to be refined: the units are the
/// links of `chain`, keyed by `key` so counts can be shared across maps.
struct Stage<K> {
    chain: GraphChain,
    keys: BTreeMap<LinkId, K>,
    /// parent link ↦ pattern target (`T^f` link or `C_{k-1}` link)
    upward: Pattern,
    into_markov: Pattern,
}

/// Builds `C_1 … C_depth` for every map with shared per-unit counts, and
/// checks that the pattern functions agree at every round.
pub fn joint_sequence(maps: &[(&PLGraphMap, &MarkovData)], depth: usize) -> Result<JointRefinement, RefinementError> {
    assert!(!maps.is_empty());
    let mut per_map: Vec<Vec<Round>> = vec![Vec::new(); maps.len()];
    let mut prev_bound: Option<Q> = None;
    for k in 1..=depth {
        let stages: Vec<Stage<Provenance>> = if k == 1 {
            maps.iter()
                .map(|(_, d)| {
                    let t = d.chain();
                    let keys = t.ids().into_iter().map(|l| (l, Provenance { source: l, cell: l })).collect();
                    let id = Pattern::identity(&t);
                    Stage { chain: t, keys, upward: id.clone(), into_markov: id }
                })
                .collect()
        } else {
            let mut out = Vec::new();
            for ((f, d), rounds) in maps.iter().zip(&per_map) {
                let last = rounds.last().unwrap();
                let r = fhat(f, d, &last.chain, &last.into_markov)?;
                out.push(Stage {
                    chain: r.chain,
                    keys: r.provenance,
                    upward: r.pattern_into_source,
                    into_markov: r.pattern_into_parent,
                });
            }
            out
        };
        let units: Vec<Provenance> = stages[0].keys.values().copied().collect();
        for s in &stages[1..] {
            if s.keys.values().copied().collect::<Vec<_>>() != units {
                return Err(RefinementError::PatternDivergence(k));
            }
        }

        let target = {
            let cap = pow2_inv(k as u32);
            match &prev_bound {
                Some(b) if *b < cap => b.clone(),
                _ => cap,
            }
        };
        let attempt = |delta: &Q| -> Option<Vec<Round>> {
            let mut counts: BTreeMap<Provenance, usize> = BTreeMap::new();
            for s in &stages {
                for (id, key) in &s.keys {
                    let g = maps[0].0.graph();
                    let arc = s.chain.link(*id);
                    let c = mesh_count(&(arc.span() * g.length(arc.edge)), delta);
                    let slot = counts.entry(*key).or_insert(1);
                    *slot = (*slot).max(c);
                }
            }
            let mut rounds = Vec::new();
            for ((f, _), s) in maps.iter().zip(&stages) {
                let per_link = s.keys.iter().map(|(id, key)| (*id, counts[key])).collect();
                let (child, up) = refine_uniform(f.graph(), &s.chain, &RefineCounts::PerLink(per_link));
                let bound = mesh_bound(f, &child, k);
                if bound >= target {
                    return None;
                }
                rounds.push(Round {
                    pattern: up.then(&s.upward).expect("total pattern"),
                    into_markov: up.then(&s.into_markov).expect("total pattern"),
                    chain: child,
                    mesh_bound: bound,
                    delta: delta.clone(),
                });
            }
            Some(rounds)
        };

        let mut hi = pow2_inv(k as u32);
        let mut found = None;
        for _ in 0..MAX_HALVINGS {
            if let Some(r) = attempt(&hi) {
                found = Some((hi.clone(), r));
                break;
            }
            hi /= int(2);
        }
        let (mut lo, mut best) = found.ok_or(RefinementError::NoDelta(k))?;
        let mut top = &lo * int(2);
        if lo < pow2_inv(k as u32) {
            for _ in 0..BISECTION_STEPS {
                let mid = (&lo + &top) / int(2);
                match attempt(&mid) {
                    Some(r) => {
                        lo = mid;
                        best = r;
                    }
                    None => top = mid,
                }
            }
        }

        let h = &best[0].pattern;
        if best.iter().any(|r| &r.pattern != h) {
            return Err(RefinementError::PatternDivergence(k));
        }
        prev_bound = best.iter().map(|r| r.mesh_bound.clone()).max();
        for (rounds, r) in per_map.iter_mut().zip(best) {
            rounds.push(r);
        }
    }
    Ok(JointRefinement { per_map })
}

/// The refinement sequence of a single map.
pub fn refinement_sequence(f: &PLGraphMap, depth: usize) -> Result<Vec<Round>, RefinementError> {
    let d = markov_data(f, DEFAULT_PARTITION_CAP)?;
    Ok(joint_sequence(&[(f, &d)], depth)?.per_map.remove(0))
}

/// The proof's construction for a pattern-equivalent pair.
pub fn joint_refinement_sequence(f: &PLGraphMap, g: &PLGraphMap, depth: usize) -> Result<JointRefinement, RefinementError> {
    let df = markov_data(f, DEFAULT_PARTITION_CAP)?;
    let dg = markov_data(g, DEFAULT_PARTITION_CAP)?;
    if pattern_equivalent(f, &df, g, &dg).is_none() {
        return Err(RefinementError::NotPatternEquivalent);
    }
    joint_sequence(&[(f, &df), (g, &dg)], depth)
}
