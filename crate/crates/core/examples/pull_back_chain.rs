//! One pull-back step: refine the Markov chain of g3, then build f-hat.

use invlim::catalog;
use invlim::chain::{refine_uniform, validate_closed_graph_chain, RefineCounts};
use invlim::fhat::fhat;
use invlim::markov::{markov_data, DEFAULT_PARTITION_CAP};
use invlim::rational::fmt_q;

pub fn run_example() -> Result<usize, Box<dyn std::error::Error>> {
    let f = catalog::g3();
    let d = markov_data(&f, DEFAULT_PARTITION_CAP)?;
    let (c, h) = refine_uniform(f.graph(), &d.chain(), &RefineCounts::Uniform(2));
    let r = fhat(&f, &d, &c, &h)?;
    for (id, arc) in r.chain.iter() {
        let p = r.provenance[&id];
        println!("{id}: [{}, {}] from {} in cell {}", fmt_q(&arc.a), fmt_q(&arc.b), p.source, p.cell);
    }
    println!("{} trims", r.trims.len());
    let report = validate_closed_graph_chain(f.graph(), &r.chain);
    assert!(report.is_valid(), "{:?}", report.violations);
    Ok(r.chain.len())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(drop)
}
