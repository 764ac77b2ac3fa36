// Vertices, faces and the Delzant condition for a polytope read from JSON.

use std::error::Error;

use tallone::exactla::LatticeBasis;
use tallone::polyhedra::{delzant_vertex_report, face_lattice, volume, HPolyhedron};

pub fn run() -> Result<(), Box<dyn Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/6d.json");
    let p: HPolyhedron = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let (v, faces) = face_lattice(&p)?;
    let mut counts = [0usize; 4];
    for f in &faces {
        counts[f.dim] += 1;
    }
    println!("f-vector: {:?}", &counts[..3]);
    println!("{} vertices, volume {}", v.points.len(), volume(&p)?);

    let report = delzant_vertex_report(&p, &LatticeBasis::standard(3))?;
    let smooth = report.iter().filter(|r| r.delzant).count();
    println!("{smooth} of {} vertex cones are Delzant", report.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
