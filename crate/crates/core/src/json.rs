//! JSON output documents. Every document carries `"format": 1`; fractions
//! are strings in lowest terms; field order is fixed by the struct layout.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chain::{GraphChain, LinkId, Pattern};
use crate::classify::{Classification, ComparisonVerdict, DiagnosisReport, Outcome};
use crate::graph::{Arc, EdgeId, FiniteGraph, GraphPoint};
use crate::input::FORMAT_VERSION;
use crate::itinerary::{BackwardItinerary, DistanceEnclosure};
use crate::map::{AssumptionReport, MultivaluedVerdict};
use crate::markov::MarkovData;
use crate::orbits::{OmegaSet, OrbitRecord};
use crate::rational::{fmt_q, parse_q, Q};
use crate::refinement::Round;

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error(transparent)]
    Serde(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Format(i64),
    #[error("bad fraction {0:?}")]
    Fraction(String),
    #[error("link {0} is not a single arc on its own edge")]
    BadLink(LinkId),
}

/// `[edge, "a", "b"]`.
pub type ArcJson = (EdgeId, String, String);

fn arc_json(a: &Arc) -> ArcJson {
    (a.edge, fmt_q(&a.a), fmt_q(&a.b))
}

fn arc_from_json((e, a, b): &ArcJson) -> Result<Arc, JsonError> {
    let p = |s: &String| parse_q(s).map_err(|_| JsonError::Fraction(s.clone()));
    Ok(Arc::new(*e, p(a)?, p(b)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkJson {
    pub id: LinkId,
    pub arcs: Vec<ArcJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub format: i64,
    pub links: Vec<LinkJson>,
}

impl ChainJson {
    pub fn new(c: &GraphChain) -> Self {
        ChainJson {
            format: FORMAT_VERSION,
            links: c.iter().map(|(id, a)| LinkJson { id, arcs: vec![arc_json(a)] }).collect(),
        }
    }

    pub fn to_chain(&self) -> Result<GraphChain, JsonError> {
        check_format(self.format)?;
        let mut links: BTreeMap<EdgeId, Vec<Arc>> = BTreeMap::new();
        for l in &self.links {
            let [arc] = l.arcs.as_slice() else { return Err(JsonError::BadLink(l.id)) };
            let arc = arc_from_json(arc)?;
            let slot = links.entry(l.id.edge).or_default();
            if arc.edge != l.id.edge || slot.len() + 1 != l.id.k {
                return Err(JsonError::BadLink(l.id));
            }
            slot.push(arc);
        }
        Ok(GraphChain::from_links(links))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    pub format: i64,
    /// `[[child], [parent]]` pairs.
    pub pairs: Vec<(LinkId, LinkId)>,
}

impl PatternJson {
    pub fn new(p: &Pattern) -> Self {
        PatternJson { format: FORMAT_VERSION, pairs: p.0.iter().map(|(c, p)| (*c, *p)).collect() }
    }

    pub fn to_pattern(&self) -> Result<Pattern, JsonError> {
        check_format(self.format)?;
        Ok(Pattern(self.pairs.iter().copied().collect()))
    }
}

fn check_format(v: i64) -> Result<(), JsonError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(JsonError::Format(v))
    }
}

pub fn chain_from_str(s: &str) -> Result<GraphChain, JsonError> {
    serde_json::from_str::<ChainJson>(s)?.to_chain()
}

pub fn pattern_from_str(s: &str) -> Result<Pattern, JsonError> {
    serde_json::from_str::<PatternJson>(s)?.to_pattern()
}

fn point(g: &FiniteGraph, p: &GraphPoint) -> String {
    p.display(g)
}

fn points<'a>(g: &FiniteGraph, ps: impl IntoIterator<Item = &'a GraphPoint>) -> Vec<String> {
    ps.into_iter().map(|p| point(g, p)).collect()
}

#[derive(Debug, Serialize)]
pub struct IndexSetJson {
    pub link: LinkId,
    pub cell: ArcJson,
    #[serde(rename = "A")]
    pub image_links: Vec<LinkId>,
    #[serde(rename = "S")]
    pub preimage_links: Vec<LinkId>,
}

#[derive(Debug, Serialize)]
pub struct PartitionJson {
    pub format: i64,
    pub map: String,
    pub partition: BTreeMap<EdgeId, Vec<String>>,
    pub links: Vec<IndexSetJson>,
    /// Row `(p,r)`, column `(i,k)`: 1 when `(p,r) ∈ S_{i,k}`.
    pub matrix: Vec<Vec<u8>>,
}

impl PartitionJson {
    pub fn new(name: &str, d: &MarkovData) -> Self {
        PartitionJson {
            format: FORMAT_VERSION,
            map: name.to_string(),
            partition: d.partition().cuts().iter().map(|(e, c)| (*e, c.iter().map(fmt_q).collect())).collect(),
            links: d
                .links()
                .iter()
                .map(|l| IndexSetJson {
                    link: *l,
                    cell: arc_json(&d.cell(*l)),
                    image_links: d.index_set(*l).iter().copied().collect(),
                    preimage_links: d.inverse_index_set(*l).iter().copied().collect(),
                })
                .collect(),
            matrix: d.transition_matrix().to_vec(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OrbitJson {
    pub start: String,
    pub preperiod: usize,
    pub period: usize,
    pub orbit: Vec<String>,
}

impl OrbitJson {
    pub fn new(g: &FiniteGraph, r: &OrbitRecord) -> Self {
        OrbitJson { start: point(g, &r.start), preperiod: r.preperiod, period: r.period, orbit: points(g, &r.orbit) }
    }
}

#[derive(Debug, Serialize)]
pub struct OrbitsJson {
    pub format: i64,
    pub map: String,
    pub cap: usize,
    pub turning_points: Vec<OrbitJson>,
    /// `null` when some turning-point orbit hit the cap.
    pub omega: Option<Vec<String>>,
    pub omega_size: Option<usize>,
    pub endpoint_orbits: Option<Vec<String>>,
}

impl OrbitsJson {
    pub fn new(
        g: &FiniteGraph,
        name: &str,
        cap: usize,
        records: &[OrbitRecord],
        omega: Option<&OmegaSet>,
        ends: Option<&OmegaSet>,
    ) -> Self {
        OrbitsJson {
            format: FORMAT_VERSION,
            map: name.to_string(),
            cap,
            turning_points: records.iter().map(|r| OrbitJson::new(g, r)).collect(),
            omega: omega.map(|o| points(g, &o.points)),
            omega_size: omega.map(OmegaSet::len),
            endpoint_orbits: ends.map(|o| points(g, &o.points)),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct AssumptionsJson {
    pub isolated_preimages: bool,
    pub nonexpanding_preimages: bool,
    /// `"verified"`, `"failed"` or `"undetermined"`.
    pub eventually_multivalued_preimages: &'static str,
    /// The power `n` at which every column of `M^n` sums to 2 or more.
    pub multivalued_at: Option<usize>,
    pub all_hold: bool,
}

impl AssumptionsJson {
    pub fn new(r: &AssumptionReport) -> Self {
        let (label, at) = match r.eventually_multivalued_preimages {
            MultivaluedVerdict::Verified(n) => ("verified", Some(n)),
            MultivaluedVerdict::Failed => ("failed", None),
            MultivaluedVerdict::Undetermined(_) => ("undetermined", None),
        };
        AssumptionsJson {
            isolated_preimages: r.isolated_preimages,
            nonexpanding_preimages: r.nonexpanding_preimages,
            eventually_multivalued_preimages: label,
            multivalued_at: at,
            all_hold: r.all_hold(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RoundJson {
    pub round: usize,
    pub delta: String,
    pub mesh_bound: String,
    pub links: usize,
    pub chain: ChainJson,
    pub pattern: PatternJson,
}

impl RoundJson {
    pub fn new(k: usize, r: &Round) -> Self {
        RoundJson {
            round: k,
            delta: fmt_q(&r.delta),
            mesh_bound: fmt_q(&r.mesh_bound),
            links: r.chain.len(),
            chain: ChainJson::new(&r.chain),
            pattern: PatternJson::new(&r.pattern),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RefineJson {
    pub format: i64,
    pub map: String,
    pub rounds: Vec<RoundJson>,
}

#[derive(Debug, Serialize)]
pub struct OmegaJson {
    pub f: Option<usize>,
    pub g: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct HypothesesJson {
    pub f: AssumptionsJson,
    pub g: AssumptionsJson,
    pub pattern_equivalent: bool,
    pub interval_graph: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct VerdictJson {
    pub format: i64,
    pub maps: [String; 2],
    pub outcome: &'static str,
    /// `h_1 … h_depth` for a homeomorphic pair, empty otherwise.
    pub witness: Vec<PatternJson>,
    pub mesh_bounds: Vec<Vec<String>>,
    pub omega: OmegaJson,
    pub hypotheses: HypothesesJson,
}

impl VerdictJson {
    pub fn new(names: [&str; 2], v: &ComparisonVerdict) -> Self {
        let (witness, mesh_bounds) = match &v.outcome {
            Outcome::Homeomorphic { witness, bounds } => (
                witness.iter().map(PatternJson::new).collect(),
                bounds.iter().map(|r| r.iter().map(fmt_q).collect()).collect(),
            ),
            _ => (Vec::new(), Vec::new()),
        };
        VerdictJson {
            format: FORMAT_VERSION,
            maps: names.map(String::from),
            outcome: v.outcome.label(),
            witness,
            mesh_bounds,
            omega: OmegaJson { f: v.omega.0, g: v.omega.1 },
            hypotheses: HypothesesJson {
                f: AssumptionsJson::new(&v.reports.0),
                g: AssumptionsJson::new(&v.reports.1),
                pattern_equivalent: v.pattern_equivalent,
                interval_graph: v.interval_graph,
                notes: v.notes.clone(),
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClassificationJson {
    pub format: i64,
    pub map: String,
    pub itinerary: String,
    pub verdict: String,
    pub degree_hypothesis: bool,
    pub condition_i: bool,
    pub condition_ii: bool,
    pub diagnosis: Option<String>,
    pub two_pass_from: Option<usize>,
    pub fold_hits_cycle: Option<usize>,
}

impl ClassificationJson {
    pub fn new(
        g: &FiniteGraph,
        name: &str,
        x: &BackwardItinerary,
        c: &Classification,
        d: Option<&DiagnosisReport>,
    ) -> Self {
        ClassificationJson {
            format: FORMAT_VERSION,
            map: name.to_string(),
            itinerary: x.display(g),
            verdict: c.verdict.to_string(),
            degree_hypothesis: c.degree_hypothesis,
            condition_i: c.condition_i,
            condition_ii: c.condition_ii,
            diagnosis: d.map(|d| d.code.to_string()),
            two_pass_from: d.and_then(|d| d.two_pass_from),
            fold_hits_cycle: d.and_then(|d| d.fold_hits_cycle),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DistanceJson {
    pub format: i64,
    pub lo: String,
    pub hi: String,
    pub exact: String,
    pub terms: usize,
}

impl DistanceJson {
    pub fn new(d: &DistanceEnclosure) -> Self {
        DistanceJson { format: FORMAT_VERSION, lo: fmt_q(&d.lo), hi: fmt_q(&d.hi), exact: fmt_q(&d.exact), terms: d.terms }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_string<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// Parses a fraction string as written in documents.
pub fn fraction(s: &str) -> Result<Q, JsonError> {
    parse_q(s).map_err(|_| JsonError::Fraction(s.to_string()))
}
