//! Parse a TOML input document and list its maps.

use invlim::input::parse_document;

const DOC: &str = r#"
format = 1

[graph]
vertices = 2
edges = ["1-2"]

[maps.tent.edges."1-2"]
breaks = ["0", "1/2", "1"]
laps = ["1-2@0..1", "1-2@1..0"]
"#;

pub fn run_example() -> Result<Vec<String>, Box<dyn std::error::Error>> {
    let doc = parse_document(DOC)?;
    println!("graph: {} vertices, diameter {}", doc.graph.vertex_count(), doc.graph.diameter());
    let mut names = Vec::new();
    for (name, f) in &doc.maps {
        println!("{name}: {} laps, {} turning points", f.all_laps().count(), f.turning_points().len());
        names.push(name.clone());
    }
    Ok(names)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example().map(drop)
}
