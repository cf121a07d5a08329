//! The Markov graph-chain function `f̂`: pull a refinement of `T^f` back
//! through `f`, one piece per `(link, (p,r))` with `(p,r) ∈ S_{h(link)}`,
//! then trim overlapping pieces in a fixed order.

use std::collections::BTreeMap;

use crate::chain::{validate_closed_graph_chain, ChainViolation, GraphChain, LinkId, Pattern};
use crate::graph::{merge_arcs, Arc, EdgeId};
use crate::map::PLGraphMap;
use crate::markov::MarkovData;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FhatError {
    #[error("chain is not a closed refinement of the Markov chain: {0}")]
    NotRefinementOfMarkovChain(String),
    #[error("link {child} is not inside its assigned Markov link {parent}")]
    PatternMismatch { child: LinkId, parent: LinkId },
    #[error("piece for link {link} in cell {cell} is {what}")]
    BadPiece { link: LinkId, cell: LinkId, what: &'static str },
    #[error("output is not a closed graph-chain: {0}")]
    InvalidOutput(Box<ChainViolation>),
}

/// Where an output link came from: the link of `C` it maps onto and the
/// Markov cell `T^p_r` containing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Provenance {
    pub source: LinkId,
    pub cell: LinkId,
}

/// A trim that removed more than a boundary point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trim {
    pub piece: Provenance,
    pub by: Provenance,
    pub before: Arc,
    pub after: Arc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FhatResult {
    pub chain: GraphChain,
    pub provenance: BTreeMap<LinkId, Provenance>,
    /// Output link ↦ the Markov link `T^p_r` containing it.
    pub pattern_into_parent: Pattern,
    /// Output link ↦ the link of the input chain its image covers.
    pub pattern_into_source: Pattern,
    pub trims: Vec<Trim>,
}

impl FhatResult {
    /// Output link carrying a given provenance pair.
    pub fn link_for(&self, p: Provenance) -> Option<LinkId> {
        self.provenance.iter().find(|(_, v)| **v == p).map(|(k, _)| *k)
    }
}

pub fn fhat(f: &PLGraphMap, data: &MarkovData, chain: &GraphChain, h: &Pattern) -> Result<FhatResult, FhatError> {
    let g = f.graph();
    if let Some(v) = validate_closed_graph_chain(g, chain).violations.into_iter().next() {
        return Err(FhatError::NotRefinementOfMarkovChain(v.to_string()));
    }
    for (id, arc) in chain.iter() {
        let parent = h
            .get(id)
            .filter(|p| data.position(*p).is_some())
            .ok_or_else(|| FhatError::NotRefinementOfMarkovChain(format!("no Markov link assigned to {id}")))?;
        if !data.cell(parent).contains_arc(arc) {
            return Err(FhatError::PatternMismatch { child: id, parent });
        }
    }

    // raw pieces f⁻¹(C) ∩ T^p_r
    let mut pieces: BTreeMap<Provenance, Arc> = BTreeMap::new();
    for (id, arc) in chain.iter() {
        for cell in data.inverse_index_set(h.get(id).unwrap()) {
            let prov = Provenance { source: id, cell: *cell };
            let pre = merge_arcs(f.preimage_in_cell(&data.cell(*cell), arc));
            let solid: Vec<&Arc> = pre.iter().filter(|a| !a.is_degenerate()).collect();
            match solid.as_slice() {
                [one] => {
                    pieces.insert(prov, (*one).clone());
                }
                [] => return Err(FhatError::BadPiece { link: id, cell: *cell, what: "degenerate" }),
                _ => return Err(FhatError::BadPiece { link: id, cell: *cell, what: "disconnected" }),
            }
        }
    }

    let mut trims = Vec::new();
    let edges: Vec<EdgeId> = chain.edges().collect();
    let n = |e: EdgeId| chain.link_count(e);
    let cells: Vec<LinkId> = data.links().to_vec();

    for cell in &cells {
        let mut trim = |target: LinkId, by: &[LinkId], pieces: &mut BTreeMap<Provenance, Arc>| {
            let tp = Provenance { source: target, cell: *cell };
            let Some(mut cur) = pieces.get(&tp).cloned() else { return Ok(()) };
            for b in by {
                let bp = Provenance { source: *b, cell: *cell };
                if bp == tp {
                    continue;
                }
                let Some(other) = pieces.get(&bp) else { continue };
                let before = cur.clone();
                cur = cut(&cur, other).ok_or(FhatError::BadPiece {
                    link: target,
                    cell: *cell,
                    what: "emptied by trimming",
                })?;
                if cur != before {
                    trims.push(Trim { piece: tp, by: bp, before, after: cur.clone() });
                }
            }
            pieces.insert(tp, cur);
            Ok(())
        };

        // (1) first links in ≪ order, minus earlier first-link pieces
        let firsts: Vec<LinkId> = edges.iter().map(|e| LinkId::new(*e, 1)).collect();
        for (i, l) in firsts.iter().enumerate() {
            trim(*l, &firsts[..i], &mut pieces)?;
        }
        // (2), (3) last links in ≪ order, minus first-link pieces at the far
        // vertex and earlier last-link pieces
        let lasts: Vec<LinkId> = edges.iter().map(|e| LinkId::new(*e, n(*e))).collect();
        for (i, l) in lasts.iter().enumerate() {
            let far = l.edge.hi();
            let mut by: Vec<LinkId> = firsts.iter().filter(|x| x.edge.lo() == far).copied().collect();
            by.extend_from_slice(&lasts[..i]);
            trim(*l, &by, &mut pieces)?;
        }
        // (4) interior links, minus the previous, first and last pieces
        for e in &edges {
            for m in 2..n(*e) {
                let by = [LinkId::new(*e, m - 1), LinkId::new(*e, 1), LinkId::new(*e, n(*e))];
                trim(LinkId::new(*e, m), &by, &mut pieces)?;
            }
        }
    }

    // anything still overlapping is trimmed against pieces processed earlier
    let mut by_edge: BTreeMap<EdgeId, Vec<(Provenance, Arc)>> = BTreeMap::new();
    for (p, a) in &pieces {
        by_edge.entry(a.edge).or_default().push((*p, a.clone()));
    }
    for list in by_edge.values_mut() {
        list.sort_by(|x, y| (&x.1.a, &x.1.b).cmp(&(&y.1.a, &y.1.b)));
        for i in 1..list.len() {
            let (prev_p, prev) = list[i - 1].clone();
            let (p, cur) = list[i].clone();
            if prev.b > cur.a {
                let after = cut(&cur, &prev).ok_or(FhatError::BadPiece {
                    link: p.source,
                    cell: p.cell,
                    what: "emptied by trimming",
                })?;
                trims.push(Trim { piece: p, by: prev_p, before: cur, after: after.clone() });
                list[i].1 = after;
            }
        }
    }

    let mut links = BTreeMap::new();
    let mut provenance = BTreeMap::new();
    let mut into_parent = BTreeMap::new();
    let mut into_source = BTreeMap::new();
    for e in g.edges() {
        let list = by_edge.remove(&e).unwrap_or_default();
        let mut arcs = Vec::with_capacity(list.len());
        for (k, (p, a)) in list.into_iter().enumerate() {
            let id = LinkId::new(e, k + 1);
            provenance.insert(id, p);
            into_parent.insert(id, p.cell);
            into_source.insert(id, p.source);
            arcs.push(a);
        }
        links.insert(e, arcs);
    }
    let out = GraphChain::from_links(links);
    if let Some(v) = validate_closed_graph_chain(g, &out).violations.into_iter().next() {
        return Err(FhatError::InvalidOutput(Box::new(v)));
    }
    Ok(FhatResult {
        chain: out,
        provenance,
        pattern_into_parent: Pattern(into_parent),
        pattern_into_source: Pattern(into_source),
        trims,
    })
}

/// `piece − interior(other)` as a single closed arc, if one remains.
fn cut(piece: &Arc, other: &Arc) -> Option<Arc> {
    let rest = piece.minus_interior(other);
    let solid: Vec<Arc> = rest.into_iter().filter(|a| !a.is_degenerate()).collect();
    match solid.len() {
        1 => solid.into_iter().next(),
        _ => None,
    }
}
