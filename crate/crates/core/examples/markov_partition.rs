//! Markov partition, index sets and transition matrix of the map g3.

use invlim::catalog;
use invlim::markov::{markov_data, DEFAULT_PARTITION_CAP};
use invlim::rational::fmt_q;

pub fn run_example() -> Result<Vec<Vec<u8>>, Box<dyn std::error::Error>> {
    let f = catalog::g3();
    let d = markov_data(&f, DEFAULT_PARTITION_CAP)?;
    for (e, cuts) in d.partition().cuts() {
        let cuts: Vec<String> = cuts.iter().map(fmt_q).collect();
        println!("edge {e}: cuts {}", cuts.join(" "));
    }
    for l in d.links() {
        let a: Vec<String> = d.index_set(*l).iter().map(ToString::to_string).collect();
        let s: Vec<String> = d.inverse_index_set(*l).iter().map(ToString::to_string).collect();
        println!("{l}: A = {{{}}}  S = {{{}}}", a.join(", "), s.join(", "));
    }
    for row in d.transition_matrix() {
        println!("{row:?}");
    }
    let m2 = d.transition_matrix_power(2);
    println!("M^2 = {m2:?}");
    Ok(d.transition_matrix().to_vec())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(drop)
}
