//! Shift, projection and distance on points of the tent inverse limit.

use invlim::catalog;
use invlim::itinerary::{distance, BackwardItinerary};
use invlim::rational::{fmt_q, q};

pub fn run_example() -> Result<String, Box<dyn std::error::Error>> {
    let f = catalog::tent();
    let g = f.graph();
    let zero = BackwardItinerary::new(&f, vec![], vec![g.parse_point("1-2@0")?])?;
    let fixed = BackwardItinerary::new(&f, vec![], vec![g.parse_point("1-2@2/3")?])?;
    let x = BackwardItinerary::new(&f, vec![g.parse_point("1-2@1/2")?, g.parse_point("1-2@1/4")?], vec![g.parse_point("1-2@0")?]);
    println!("broken itinerary rejected: {}", x.is_err());

    let shifted = fixed.shift(&f);
    println!("shift: {} ~ {}", shifted.display(g), shifted.normalized().display(g));
    println!("projections of 2/3: {}", (0..4).map(|n| fixed.project(n).display(g)).collect::<Vec<_>>().join(", "));

    let d = distance(&f, &zero, &fixed, &q(1, 1 << 20));
    println!("d = {} in [{}, {}] after {} terms", fmt_q(&d.exact), fmt_q(&d.lo), fmt_q(&d.hi), d.terms);
    Ok(fmt_q(&d.exact))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(drop)
}
