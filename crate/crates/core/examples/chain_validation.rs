//! Build graph-chains by hand on the triod and report what is wrong with them.

use std::collections::BTreeMap;

use invlim::catalog;
use invlim::chain::{validate_closed_graph_chain, GraphChain};
use invlim::graph::{Arc, EdgeId};
use invlim::rational::q;

fn edge(a: usize, b: usize) -> EdgeId {
    EdgeId::new(a, b).expect("distinct vertices")
}

pub fn run_example() -> Vec<usize> {
    let f = catalog::identity_triod();
    let g = f.graph();
    let whole = |e: EdgeId| vec![Arc::new(e, q(0, 1), q(1, 2)), Arc::new(e, q(1, 2), q(1, 1))];
    let mut links: BTreeMap<EdgeId, Vec<Arc>> = [edge(1, 2), edge(1, 3), edge(1, 4)].into_iter().map(|e| (e, whole(e))).collect();
    let good = GraphChain::from_links(links.clone());

    links.insert(edge(1, 3), vec![Arc::new(edge(1, 3), q(0, 1), q(1, 3)), Arc::new(edge(1, 3), q(1, 2), q(1, 1))]);
    let gap = GraphChain::from_links(links.clone());

    links.insert(edge(1, 4), vec![Arc::new(edge(1, 4), q(0, 1), q(3, 4)), Arc::new(edge(1, 4), q(1, 2), q(1, 1))]);
    let overlap = GraphChain::from_links(links);

    let mut counts = Vec::new();
    for (name, c) in [("good", good), ("gap", gap), ("gap and overlap", overlap)] {
        let r = validate_closed_graph_chain(g, &c);
        println!("{name}: {} violations", r.violations.len());
        for v in &r.violations {
            println!("  {v:?}");
        }
        counts.push(r.violations.len());
    }
    counts
}

fn main() {
    run_example();
}
