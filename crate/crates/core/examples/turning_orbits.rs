//! Orbits of turning points and the size of their ω-limit set.

use invlim::catalog;
use invlim::orbits::{omega_of_turning_points, orbit_record, DEFAULT_ORBIT_CAP};

pub fn run_example() -> Result<Vec<(String, usize)>, Box<dyn std::error::Error>> {
    let mut sizes = Vec::new();
    for (name, f) in [("tent", catalog::tent()), ("g3", catalog::g3()), ("swing", catalog::swing_triod())] {
        let g = f.graph();
        for t in f.turning_points() {
            let r = orbit_record(&f, &t.location, DEFAULT_ORBIT_CAP)?;
            let orbit: Vec<String> = r.orbit.iter().map(|p| p.display(g)).collect();
            println!("{name}: {} -> {} (preperiod {}, period {})", t.location.display(g), orbit.join(" -> "), r.preperiod, r.period);
        }
        let omega = omega_of_turning_points(&f, DEFAULT_ORBIT_CAP)?;
        println!("{name}: |omega| = {}", omega.len());
        sizes.push((name.to_string(), omega.len()));
    }
    Ok(sizes)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(drop)
}
