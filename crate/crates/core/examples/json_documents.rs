//! Emit a chain and a pattern as JSON and read them back.

use invlim::catalog;
use invlim::chain::{refine_uniform, RefineCounts};
use invlim::json::{chain_from_str, pattern_from_str, to_string, ChainJson, PatternJson};
use invlim::markov::{markov_data, DEFAULT_PARTITION_CAP};

pub fn run_example() -> Result<bool, Box<dyn std::error::Error>> {
    let f = catalog::tent();
    let d = markov_data(&f, DEFAULT_PARTITION_CAP)?;
    let (c, h) = refine_uniform(f.graph(), &d.chain(), &RefineCounts::Uniform(2));
    let chain_text = to_string(&ChainJson::new(&c));
    let pattern_text = to_string(&PatternJson::new(&h));
    print!("{chain_text}");
    let same = chain_from_str(&chain_text)? == c && pattern_from_str(&pattern_text)? == h;
    println!("round trip: {same}");
    Ok(same)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(drop)
}
