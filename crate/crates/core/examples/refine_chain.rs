//! A refinement sequence whose certified mesh bounds shrink geometrically.

use invlim::catalog;
use invlim::rational::fmt_q;
use invlim::refinement::refinement_sequence;

pub fn run_example() -> Result<Vec<String>, Box<dyn std::error::Error>> {
    let f = catalog::skew_tent();
    let rounds = refinement_sequence(&f, 3)?;
    let mut bounds = Vec::new();
    for (k, r) in rounds.iter().enumerate() {
        println!(
            "round {}: {} links, delta {}, mesh bound {}",
            k + 1,
            r.chain.len(),
            fmt_q(&r.delta),
            fmt_q(&r.mesh_bound)
        );
        bounds.push(fmt_q(&r.mesh_bound));
    }
    Ok(bounds)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(drop)
}
