// An eight-dimensional example whose skeleton is a 2-sphere. The polytope
// has non-simple vertices over the boundary of the image, so the relaxed
// construction is used.

use std::error::Error;

use tallone::exactla::LatticeBasis;
use tallone::painting::{painting_invariant, PaintingData, Topology};
use tallone::polyhedra::HPolyhedron;
use tallone::toricproj::{build_projection, build_projection_relaxed};

pub fn run() -> Result<(), Box<dyn Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/8d.json");
    let p: HPolyhedron = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let lattice = LatticeBasis::standard(4);
    println!("strict: {:?}", build_projection(&p, &lattice).err());
    let b = build_projection_relaxed(&p, &lattice)?;
    println!("{} cells, {} excluded sets", b.skeleton.cells.len(), b.skeleton.excluded.len());
    let t = Topology::of(&b.skeleton)?;
    println!("betti {:?}", t.betti);
    for d in [-2, 0, 3] {
        println!("degree {d}: {:?}", painting_invariant(&t, &PaintingData::sphere(d))?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
