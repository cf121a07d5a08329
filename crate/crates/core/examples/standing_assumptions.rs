//! Check the preimage assumptions needed for the local-structure results.

use invlim::catalog;
use invlim::markov::DEFAULT_PARTITION_CAP;

pub fn run_example() -> Vec<(&'static str, bool)> {
    let mut out = Vec::new();
    for (name, f) in catalog::all() {
        let r = f.check_standing_assumptions(DEFAULT_PARTITION_CAP);
        println!(
            "{name:>10}: isolated {:5} nonexpanding {:5} multivalued {:?}",
            r.isolated_preimages, r.nonexpanding_preimages, r.eventually_multivalued_preimages
        );
        out.push((name, r.all_hold()));
    }
    out
}

fn main() {
    run_example();
}
