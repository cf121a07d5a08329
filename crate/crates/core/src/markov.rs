//! Markov partitions, index sets and transition matrices.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigUint;
use num_traits::Zero;

use crate::chain::{GraphChain, LinkId};
use crate::graph::{Arc, EdgeId, GraphPoint};
use crate::map::{MultivaluedVerdict, PLGraphMap};
use crate::rational::Q;

/// Default number of image-closure rounds before giving up on a partition.
pub const DEFAULT_PARTITION_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MarkovError {
    #[error("partition closure did not stabilize within {0} rounds")]
    NotEventuallyPeriodic(usize),
    #[error("map has a constant lap on edge {0}")]
    ConstantLap(EdgeId),
    #[error("partition is not forward invariant: {0}")]
    NotInvariant(String),
    #[error("cell {0} crosses a breakpoint of the map")]
    CellSpansBreakpoint(LinkId),
    #[error("image of cell {0} is not a union of cells")]
    NotMarkovOnCells(LinkId),
    #[error("index sets and inverse index sets disagree at {0}")]
    DualityBroken(LinkId),
}

/// Sorted cut points `0 = c_0 < c_1 < ... < c_n = 1` on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovPartition {
    cuts: BTreeMap<EdgeId, Vec<Q>>,
}

impl MarkovPartition {
    pub fn from_cuts(cuts: BTreeMap<EdgeId, Vec<Q>>) -> Self {
        MarkovPartition { cuts }
    }

    pub fn cuts(&self) -> &BTreeMap<EdgeId, Vec<Q>> {
        &self.cuts
    }

    pub fn edge_cuts(&self, e: EdgeId) -> &[Q] {
        &self.cuts[&e]
    }

    /// Number of cells `n_e` on edge `e`.
    pub fn cell_count(&self, e: EdgeId) -> usize {
        self.cuts[&e].len() - 1
    }

    /// The `k`-th cell (1-based) of edge `e`.
    pub fn cell(&self, link: LinkId) -> Arc {
        let c = &self.cuts[&link.edge];
        Arc::new(link.edge, c[link.k - 1].clone(), c[link.k].clone())
    }

    pub fn contains(&self, p: &GraphPoint) -> bool {
        let (edge, t) = match p {
            GraphPoint::Vertex(_) => return true,
            GraphPoint::Interior { edge, t } => (edge, t),
        };
        self.cuts.get(edge).is_some_and(|c| c.binary_search(t).is_ok())
    }

    /// Cut points as graph points, vertices once.
    pub fn points(&self) -> BTreeSet<GraphPoint> {
        self.cuts
            .iter()
            .flat_map(|(e, c)| c.iter().map(|t| GraphPoint::on_edge(*e, t.clone())))
            .collect()
    }

    /// The closed chain whose links are the cells.
    pub fn chain(&self) -> GraphChain {
        GraphChain::from_links(
            self.cuts
                .iter()
                .map(|(e, c)| {
                    let links = c
                        .windows(2)
                        .map(|w| Arc::new(*e, w[0].clone(), w[1].clone()))
                        .collect();
                    (*e, links)
                })
                .collect(),
        )
    }

    /// Edge-wise link identifiers in order.
    pub fn links(&self) -> Vec<LinkId> {
        self.cuts
            .iter()
            .flat_map(|(e, c)| (1..c.len()).map(|k| LinkId::new(*e, k)))
            .collect()
    }
}

/// Smallest forward-invariant set containing vertices, turning points and
/// breakpoints, found by iterating images until nothing new appears.
pub fn compute_markov_partition(f: &PLGraphMap, cap: usize) -> Result<MarkovPartition, MarkovError> {
    if let Some(l) = f.all_laps().find(|l| l.path.is_constant()) {
        return Err(MarkovError::ConstantLap(l.edge));
    }
    let g = f.graph();
    let mut set: BTreeSet<GraphPoint> = g.vertices().map(GraphPoint::Vertex).collect();
    for e in g.edges() {
        for t in f.breakpoints(e) {
            set.insert(GraphPoint::on_edge(e, t));
        }
    }
    set.extend(f.turning_points().into_iter().map(|t| t.location));
    let mut frontier: Vec<GraphPoint> = set.iter().cloned().collect();
    let mut rounds = 0;
    while !frontier.is_empty() {
        if rounds == cap {
            return Err(MarkovError::NotEventuallyPeriodic(cap));
        }
        rounds += 1;
        let mut next = Vec::new();
        for p in &frontier {
            let img = f.eval(p);
            if set.insert(img.clone()) {
                next.push(img);
            }
        }
        frontier = next;
    }
    let mut cuts: BTreeMap<EdgeId, Vec<Q>> = g.edges().map(|e| (e, Vec::new())).collect();
    for p in &set {
        match p {
            GraphPoint::Vertex(v) => {
                for e in g.incident_edges(*v) {
                    cuts.get_mut(e).expect("edge").push(e.vertex_position(*v).expect("incident"));
                }
            }
            GraphPoint::Interior { edge, t } => cuts.get_mut(edge).expect("edge").push(t.clone()),
        }
    }
    for c in cuts.values_mut() {
        c.sort();
        c.dedup();
    }
    Ok(MarkovPartition { cuts })
}

/// Partition, index sets `A`, inverse index sets `S` and the 0/1 transition
/// matrix of a Markov map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovData {
    partition: MarkovPartition,
    links: Vec<LinkId>,
    index_sets: BTreeMap<LinkId, BTreeSet<LinkId>>,
    inverse_index_sets: BTreeMap<LinkId, BTreeSet<LinkId>>,
    matrix: Vec<Vec<u8>>,
}

/// Computes `A` from cell images and `S` from cell preimages, and checks
/// that the two agree.
pub fn index_sets(f: &PLGraphMap, part: &MarkovPartition) -> Result<MarkovData, MarkovError> {
    for p in part.points() {
        let img = f.eval(&p);
        if !part.contains(&img) {
            return Err(MarkovError::NotInvariant(format!(
                "{} maps to {}",
                p.display(f.graph()),
                img.display(f.graph())
            )));
        }
    }
    let links = part.links();
    for link in &links {
        let cell = part.cell(*link);
        let lap = &f.laps(link.edge)[f.lap_index(link.edge, &cell.b)];
        if cell.a < lap.t0 {
            return Err(MarkovError::CellSpansBreakpoint(*link));
        }
        if lap.path.is_constant() {
            return Err(MarkovError::ConstantLap(link.edge));
        }
    }

    let mut a_sets = BTreeMap::new();
    for link in &links {
        let mut covered = BTreeSet::new();
        for arc in f.image_of_arc(&part.cell(*link)) {
            let cuts = part.edge_cuts(arc.edge);
            let (Ok(i0), Ok(i1)) = (cuts.binary_search(&arc.a), cuts.binary_search(&arc.b)) else {
                return Err(MarkovError::NotMarkovOnCells(*link));
            };
            covered.extend((i0 + 1..=i1).map(|k| LinkId::new(arc.edge, k)));
        }
        a_sets.insert(*link, covered);
    }

    let mut s_sets: BTreeMap<LinkId, BTreeSet<LinkId>> = BTreeMap::new();
    for target in &links {
        let t_arc = part.cell(*target);
        let mut sources = BTreeSet::new();
        for source in &links {
            let pre = f.preimage_in_cell(&part.cell(*source), &t_arc);
            if pre.iter().any(|a| !a.is_degenerate()) {
                sources.insert(*source);
            }
        }
        s_sets.insert(*target, sources);
    }

    for target in &links {
        for source in &links {
            if s_sets[target].contains(source) != a_sets[source].contains(target) {
                return Err(MarkovError::DualityBroken(*target));
            }
        }
    }

    let matrix = links
        .iter()
        .map(|row| {
            links
                .iter()
                .map(|col| u8::from(s_sets[col].contains(row)))
                .collect()
        })
        .collect();
    Ok(MarkovData {
        partition: part.clone(),
        links,
        index_sets: a_sets,
        inverse_index_sets: s_sets,
        matrix,
    })
}

/// Partition and index sets in one step.
pub fn markov_data(f: &PLGraphMap, cap: usize) -> Result<MarkovData, MarkovError> {
    let part = compute_markov_partition(f, cap)?;
    index_sets(f, &part)
}

impl MarkovData {
    pub fn partition(&self) -> &MarkovPartition {
        &self.partition
    }

    /// Links in matrix order: edges lexicographically, then along each edge.
    pub fn links(&self) -> &[LinkId] {
        &self.links
    }

    pub fn position(&self, link: LinkId) -> Option<usize> {
        self.links.binary_search(&link).ok()
    }

    /// `A_{i,k}`: the links covered by the image of link `(i,k)`.
    pub fn index_set(&self, link: LinkId) -> &BTreeSet<LinkId> {
        &self.index_sets[&link]
    }

    /// `S_{i,k}`: the links mapped over link `(i,k)`.
    pub fn inverse_index_set(&self, link: LinkId) -> &BTreeSet<LinkId> {
        &self.inverse_index_sets[&link]
    }

    /// `M[(p,r)][(i,k)] = 1` iff `(p,r) ∈ S_{i,k}`.
    pub fn transition_matrix(&self) -> &[Vec<u8>] {
        &self.matrix
    }

    /// The Markov chain `T^f`.
    pub fn chain(&self) -> GraphChain {
        self.partition.chain()
    }

    pub fn cell(&self, link: LinkId) -> Arc {
        self.partition.cell(link)
    }

    /// Link of the Markov chain containing arc `a`, if any.
    pub fn link_containing(&self, a: &Arc) -> Option<LinkId> {
        let cuts = self.partition.edge_cuts(a.edge);
        let k = cuts.partition_point(|c| c <= &a.a);
        (k >= 1 && k < cuts.len() && a.b <= cuts[k]).then(|| LinkId::new(a.edge, k))
    }

    /// `M^n` over the integers.
    pub fn transition_matrix_power(&self, n: usize) -> Vec<Vec<BigUint>> {
        assert!(n >= 1, "power must be positive");
        let base: Vec<Vec<BigUint>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| BigUint::from(*x)).collect())
            .collect();
        let mut acc = base.clone();
        for _ in 1..n {
            acc = mat_mul(&acc, &base);
        }
        acc
    }

    /// Looks for `n <= cap` with every column sum of `M^n` at least 2.
    pub fn eventually_multivalued(&self, cap: usize) -> MultivaluedVerdict {
        // entries saturate at 2; the saturated powers are eventually periodic
        let base: Vec<Vec<u8>> = self.matrix.clone();
        let mut acc = base.clone();
        let mut seen = HashSet::new();
        for n in 1..=cap {
            let m = acc.len();
            let ok = (0..m).all(|c| acc.iter().map(|r| u32::from(r[c])).sum::<u32>() >= 2);
            if ok {
                return MultivaluedVerdict::Verified(n);
            }
            if !seen.insert(acc.clone()) {
                return MultivaluedVerdict::Failed;
            }
            acc = saturating_mul(&acc, &base);
        }
        MultivaluedVerdict::Undetermined(cap)
    }

    /// The relation `{((i,k),(p,r)) : f(c^i_k) = c^p_r}` on partition points,
    /// with cut indices counted from 0 along each edge.
    pub fn point_image_relation(&self, f: &PLGraphMap) -> BTreeSet<((EdgeId, usize), (EdgeId, usize))> {
        let mut out = BTreeSet::new();
        for (e, cuts) in self.partition.cuts() {
            for (k, t) in cuts.iter().enumerate() {
                let img = f.eval(&GraphPoint::on_edge(*e, t.clone()));
                for (p, pcuts) in self.partition.cuts() {
                    if let Some(pos) = img.position_on(*p) {
                        if let Ok(r) = pcuts.binary_search(&pos) {
                            out.insert(((*e, k), (*p, r)));
                        }
                    }
                }
            }
        }
        out
    }
}

fn mat_mul(a: &[Vec<BigUint>], b: &[Vec<BigUint>]) -> Vec<Vec<BigUint>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = BigUint::zero();
                    for (k, bk) in b.iter().enumerate() {
                        if !a[i][k].is_zero() && !bk[j].is_zero() {
                            s += &a[i][k] * &bk[j];
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn saturating_mul(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let s: u32 = (0..n).map(|k| u32::from(a[i][k]) * u32::from(b[k][j])).sum();
                    s.min(2) as u8
                })
                .collect()
        })
        .collect()
}

/// Column sums of a matrix power, used by preimage-count checks.
pub fn column_sums(m: &[Vec<BigUint>]) -> Vec<BigUint> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols)
        .map(|c| m.iter().fold(BigUint::zero(), |acc, r| acc + &r[c]))
        .collect()
}
