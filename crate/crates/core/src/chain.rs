//! Closed graph-chains, refinement patterns and uniform refinement.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::graph::{Arc, EdgeId, FiniteGraph};
use crate::rational::{floor_usize, int, Q};

/// A link named by its edge and 1-based position along that edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "(EdgeId, usize)", from = "(EdgeId, usize)")]
pub struct LinkId {
    pub edge: EdgeId,
    pub k: usize,
}

impl LinkId {
    pub fn new(edge: EdgeId, k: usize) -> Self {
        LinkId { edge, k }
    }
}

impl From<LinkId> for (EdgeId, usize) {
    fn from(l: LinkId) -> Self {
        (l.edge, l.k)
    }
}

impl From<(EdgeId, usize)> for LinkId {
    fn from((edge, k): (EdgeId, usize)) -> Self {
        LinkId { edge, k }
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.edge, self.k)
    }
}

/// One edge-chain per edge; links are closed arcs listed from `v_i` to `v_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphChain {
    links: BTreeMap<EdgeId, Vec<Arc>>,
}

impl GraphChain {
    pub fn from_links(links: BTreeMap<EdgeId, Vec<Arc>>) -> Self {
        GraphChain { links }
    }

    /// The edge index set `E'`.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.links.keys().copied()
    }

    pub fn edge_links(&self, e: EdgeId) -> &[Arc] {
        self.links.get(&e).map_or(&[], |v| v.as_slice())
    }

    pub fn link_count(&self, e: EdgeId) -> usize {
        self.edge_links(e).len()
    }

    pub fn len(&self) -> usize {
        self.links.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn link(&self, id: LinkId) -> &Arc {
        &self.links[&id.edge][id.k - 1]
    }

    /// All links with their identifiers, edges in `≪` order.
    pub fn iter(&self) -> impl Iterator<Item = (LinkId, &Arc)> {
        self.links.iter().flat_map(|(e, v)| {
            v.iter().enumerate().map(move |(i, a)| (LinkId::new(*e, i + 1), a))
        })
    }

    pub fn ids(&self) -> Vec<LinkId> {
        self.iter().map(|(id, _)| id).collect()
    }

    /// Largest link diameter.
    pub fn mesh(&self, g: &FiniteGraph) -> Q {
        self.iter()
            .map(|(_, a)| g.arc_diameter(a))
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// Pattern sending each link to the link of `parent` containing it.
    pub fn containment_pattern(&self, parent: &GraphChain) -> Option<Pattern> {
        let mut map = BTreeMap::new();
        for (id, arc) in self.iter() {
            let plinks = parent.edge_links(arc.edge);
            let k = plinks.iter().position(|p| p.contains_arc(arc))?;
            map.insert(id, LinkId::new(arc.edge, k + 1));
        }
        Some(Pattern(map))
    }
}

/// Assignment of each child link to the parent link it follows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Pattern(pub BTreeMap<LinkId, LinkId>);

impl Pattern {
    pub fn identity(chain: &GraphChain) -> Self {
        Pattern(chain.ids().into_iter().map(|l| (l, l)).collect())
    }

    pub fn get(&self, child: LinkId) -> Option<LinkId> {
        self.0.get(&child).copied()
    }

    /// `other ∘ self`: child → parent → grandparent.
    pub fn then(&self, other: &Pattern) -> Option<Pattern> {
        self.0
            .iter()
            .map(|(c, p)| other.get(*p).map(|gp| (*c, gp)))
            .collect::<Option<BTreeMap<_, _>>>()
            .map(Pattern)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One defect found by [`validate_closed_graph_chain`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainViolation {
    /// A link with `a >= b`.
    DegenerateLink(LinkId),
    /// Two links share more than boundary points.
    InteriorOverlap(LinkId, LinkId),
    /// Two links that are not neighbours in the chain meet.
    NonAdjacentMeet(LinkId, LinkId),
    /// Consecutive links of an edge-chain do not meet.
    AdjacentDisjoint(LinkId, LinkId),
    /// Part of an edge is covered by no link.
    Gap { edge: EdgeId, from: Q, to: Q },
    /// A vertex lies in a link that is neither first nor last on its edge.
    VertexMisplaced { vertex: usize, link: LinkId },
    /// An edge of the graph has no edge-chain.
    MissingEdge(EdgeId),
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChainViolation::DegenerateLink(l) => write!(f, "link {l} is degenerate"),
            ChainViolation::InteriorOverlap(a, b) => write!(f, "links {a} and {b} overlap"),
            ChainViolation::NonAdjacentMeet(a, b) => {
                write!(f, "non-adjacent links {a} and {b} meet")
            }
            ChainViolation::AdjacentDisjoint(a, b) => {
                write!(f, "consecutive links {a} and {b} are disjoint")
            }
            ChainViolation::Gap { edge, from, to } => {
                write!(f, "edge {edge} uncovered on ({from}, {to})")
            }
            ChainViolation::VertexMisplaced { vertex, link } => {
                write!(f, "vertex {vertex} lies inside link {link}")
            }
            ChainViolation::MissingEdge(e) => write!(f, "no edge-chain for edge {e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<ChainViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the closed graph-chain conditions against graph `g`: boundary-only
/// meeting of neighbours, disjointness of non-neighbours (tautness), full
/// coverage of each edge, and vertices only in end links.
pub fn validate_closed_graph_chain(g: &FiniteGraph, chain: &GraphChain) -> ValidationReport {
    let mut violations = Vec::new();
    for e in g.edges() {
        let links = chain.edge_links(e);
        if links.is_empty() {
            violations.push(ChainViolation::MissingEdge(e));
            continue;
        }
        let id = |i: usize| LinkId::new(e, i + 1);
        for (i, a) in links.iter().enumerate() {
            if a.edge != e || a.a >= a.b {
                violations.push(ChainViolation::DegenerateLink(id(i)));
            }
        }
        // sweep in order of left end; only arcs still open can meet the next
        let mut order: Vec<usize> = (0..links.len()).collect();
        order.sort_by(|&x, &y| (&links[x].a, &links[x].b).cmp(&(&links[y].a, &links[y].b)));
        let mut active: Vec<usize> = Vec::new();
        let mut reach = Q::zero();
        for &j in &order {
            let cur = &links[j];
            if cur.a > reach {
                violations.push(ChainViolation::Gap { edge: e, from: reach.clone(), to: cur.a.clone() });
            }
            active.retain(|&i| links[i].b >= cur.a);
            for &i in &active {
                let (lo, hi) = (i.min(j), i.max(j));
                let other = &links[i];
                let overlap_end = if other.b < cur.b { &other.b } else { &cur.b };
                if overlap_end > &cur.a {
                    violations.push(ChainViolation::InteriorOverlap(id(lo), id(hi)));
                } else if hi - lo >= 2 {
                    violations.push(ChainViolation::NonAdjacentMeet(id(lo), id(hi)));
                }
            }
            if cur.b > reach {
                reach = cur.b.clone();
            }
            active.push(j);
        }
        if reach < Q::one() {
            violations.push(ChainViolation::Gap { edge: e, from: reach, to: Q::one() });
        }
        for (i, w) in links.windows(2).enumerate() {
            if w[0].b < w[1].a || w[1].b < w[0].a {
                violations.push(ChainViolation::AdjacentDisjoint(id(i), id(i + 1)));
            }
        }
        let last = links.len() - 1;
        for (i, a) in links.iter().enumerate() {
            if a.a.is_zero() && i != 0 {
                violations.push(ChainViolation::VertexMisplaced { vertex: e.lo(), link: id(i) });
            }
            if a.b.is_one() && i != last {
                violations.push(ChainViolation::VertexMisplaced { vertex: e.hi(), link: id(i) });
            }
        }
    }
    for e in chain.edges() {
        if !g.has_edge(e) {
            violations.push(ChainViolation::MissingEdge(e));
        }
    }
    ValidationReport { violations }
}

/// How many equal pieces each link is cut into.
#[derive(Debug, Clone)]
pub enum RefineCounts {
    /// The same count for every link.
    Uniform(usize),
    /// A count per link; links not listed are kept whole.
    PerLink(BTreeMap<LinkId, usize>),
    /// Enough pieces that every piece is shorter than `δ`.
    Mesh(Q),
}

/// Pieces needed so each of `Q` equal parts of a link of arclength `len` is
/// shorter than `delta`: `floor(len / delta) + 1`.
pub fn mesh_count(len: &Q, delta: &Q) -> usize {
    floor_usize(&(len / delta)) + 1
}

/// Splits every link into equal-arclength closed sublinks. Returns the child
/// chain and the pattern child → parent.
pub fn refine_uniform(g: &FiniteGraph, chain: &GraphChain, counts: &RefineCounts) -> (GraphChain, Pattern) {
    let mut links = BTreeMap::new();
    let mut pattern = BTreeMap::new();
    for e in chain.edges() {
        let mut out = Vec::new();
        for (i, arc) in chain.edge_links(e).iter().enumerate() {
            let parent = LinkId::new(e, i + 1);
            let q = match counts {
                RefineCounts::Uniform(q) => *q,
                RefineCounts::PerLink(m) => m.get(&parent).copied().unwrap_or(1),
                RefineCounts::Mesh(delta) => mesh_count(&(arc.span() * g.length(e)), delta),
            }
            .max(1);
            let step = arc.span() / int(q as i64);
            for j in 0..q {
                let a = &arc.a + &step * int(j as i64);
                let b = if j + 1 == q { arc.b.clone() } else { &arc.a + &step * int(j as i64 + 1) };
                out.push(Arc::new(e, a, b));
                pattern.insert(LinkId::new(e, out.len()), parent);
            }
        }
        links.insert(e, out);
    }
    (GraphChain { links }, Pattern(pattern))
}

impl GraphChain {
    /// Parent links, for every child of `pattern`, grouped by parent.
    pub fn children_of(pattern: &Pattern) -> BTreeMap<LinkId, BTreeSet<LinkId>> {
        let mut out: BTreeMap<LinkId, BTreeSet<LinkId>> = BTreeMap::new();
        for (c, p) in &pattern.0 {
            out.entry(*p).or_default().insert(*c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::markov::markov_data;
    use crate::rational::q;

    fn chain_of(arcs: &[(i64, i64, i64, i64)]) -> GraphChain {
        let v = arcs
            .iter()
            .map(|&(a, b, c, d)| Arc::new(e12(), q(a, b), q(c, d)))
            .collect();
        GraphChain::from_links(BTreeMap::from([(e12(), v)]))
    }

    #[test]
    fn bisect_tent_chain() {
        let f = tent();
        let d = markov_data(&f, 100).unwrap();
        let (c, h) = refine_uniform(f.graph(), &d.chain(), &RefineCounts::Uniform(2));
        assert_eq!(c, chain_of(&[(0, 1, 1, 4), (1, 4, 1, 2), (1, 2, 3, 4), (3, 4, 1, 1)]));
        let parents: Vec<usize> = h.0.values().map(|p| p.k).collect();
        assert_eq!(parents, vec![1, 1, 2, 2]);
        assert!(validate_closed_graph_chain(f.graph(), &c).is_valid());
    }

    #[test]
    fn mesh_driven_count() {
        assert_eq!(mesh_count(&q(1, 2), &q(1, 3)), 2);
        let f = tent();
        let d = markov_data(&f, 100).unwrap();
        let (c, _) = refine_uniform(f.graph(), &d.chain(), &RefineCounts::Mesh(q(1, 3)));
        assert_eq!(c.len(), 4);
        assert!(c.mesh(f.graph()) < q(1, 3));
    }

    #[test]
    fn unit_counts_are_identity() {
        let f = g3();
        let d = markov_data(&f, 100).unwrap();
        let (c, h) = refine_uniform(f.graph(), &d.chain(), &RefineCounts::Uniform(1));
        assert_eq!(c, d.chain());
        assert_eq!(h, Pattern::identity(&c));
    }

    #[test]
    fn validation_examples() {
        let g = tent().graph().clone();
        assert!(validate_closed_graph_chain(&g, &chain_of(&[(0, 1, 1, 3), (1, 3, 2, 3), (2, 3, 1, 1)])).is_valid());
        let bad = validate_closed_graph_chain(&g, &chain_of(&[(0, 1, 1, 2), (1, 4, 1, 1)]));
        assert!(bad
            .violations
            .contains(&ChainViolation::InteriorOverlap(LinkId::new(e12(), 1), LinkId::new(e12(), 2))));
        let gap = validate_closed_graph_chain(&g, &chain_of(&[(0, 1, 1, 3), (1, 2, 1, 1)]));
        assert!(gap.violations.iter().any(|v| matches!(v, ChainViolation::Gap { .. })));
        assert!(gap.violations.iter().any(|v| matches!(v, ChainViolation::AdjacentDisjoint(..))));
        // out of order: the first and third links touch
        let shuffled = validate_closed_graph_chain(&g, &chain_of(&[(0, 1, 1, 3), (2, 3, 1, 1), (1, 3, 2, 3)]));
        assert!(shuffled.violations.iter().any(|v| matches!(v, ChainViolation::NonAdjacentMeet(..))));
        assert!(shuffled.violations.iter().any(|v| matches!(v, ChainViolation::VertexMisplaced { .. })));
    }

    #[test]
    fn pattern_composition() {
        let f = tent();
        let d = markov_data(&f, 100).unwrap();
        let (c1, h1) = refine_uniform(f.graph(), &d.chain(), &RefineCounts::Uniform(2));
        let (c2, h2) = refine_uniform(f.graph(), &c1, &RefineCounts::Uniform(3));
        let composite = h2.then(&h1).unwrap();
        assert_eq!(c2.containment_pattern(&d.chain()).unwrap(), composite);
        assert_eq!(c2.containment_pattern(&c1).unwrap(), h2);
    }
}
