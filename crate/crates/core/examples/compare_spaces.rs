//! Compare inverse limits: tent against skew tent, and tent against g3.

use invlim::catalog;
use invlim::classify::compare_spaces;
use invlim::orbits::DEFAULT_ORBIT_CAP;

pub fn run_example() -> Result<Vec<&'static str>, Box<dyn std::error::Error>> {
    let tent = catalog::tent();
    let mut labels = Vec::new();
    for (name, other) in [("skew", catalog::skew_tent()), ("g3", catalog::g3())] {
        let v = compare_spaces(&tent, &other, 3, DEFAULT_ORBIT_CAP)?;
        println!("tent vs {name}: {} (omega {:?})", v.outcome.label(), v.omega);
        for n in &v.notes {
            println!("  note: {n}");
        }
        labels.push(v.outcome.label());
    }
    Ok(labels)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(drop)
}
