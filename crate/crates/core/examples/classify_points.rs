//! Product or exceptional: local structure at periodic points.

use invlim::catalog;
use invlim::classify::{classify_point, exceptional_diagnosis, Verdict};
use invlim::graph::GraphPoint;
use invlim::itinerary::BackwardItinerary;
use invlim::markov::{markov_data, DEFAULT_PARTITION_CAP};
use invlim::orbits::DEFAULT_ORBIT_CAP;

pub fn run_example() -> Result<Vec<String>, Box<dyn std::error::Error>> {
    let cases = [
        (catalog::tent(), "1-2@0"),
        (catalog::tent(), "1-2@2/3"),
        (catalog::g3(), "1-2@0"),
        (catalog::fixed_fold(), "1-2@1/2"),
    ];
    let mut out = Vec::new();
    for (f, start) in cases {
        let g = f.graph();
        let z: GraphPoint = g.parse_point(start)?;
        let x = BackwardItinerary::from_periodic_point(&f, &z, DEFAULT_ORBIT_CAP)?;
        let c = classify_point(&f, &x, DEFAULT_ORBIT_CAP)?;
        let mut line = format!("{}: {}", x.display(g), c.verdict);
        if c.verdict == Verdict::Exceptional {
            let d = markov_data(&f, DEFAULT_PARTITION_CAP)?;
            let r = exceptional_diagnosis(&f, &d, &x, 6, DEFAULT_ORBIT_CAP)?;
            line.push_str(&format!(" ({})", r.code));
        }
        println!("{line}");
        out.push(line);
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(drop)
}
