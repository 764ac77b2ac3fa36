// A six-dimensional toric manifold viewed as a complexity-one space for the
// first two circles: skeleton, DH function and compatibility.

use std::error::Error;

use tallone::exactla::{rat_vec, LatticeBasis};
use tallone::polyhedra::{volume, HPolyhedron};
use tallone::pwaffine::integrate;
use tallone::skeleton::{betti, check_delta_compat, check_rho_compat};
use tallone::toricproj::build_projection;

pub fn run() -> Result<(), Box<dyn Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/6d.json");
    let p: HPolyhedron = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let b = build_projection(&p, &LatticeBasis::standard(3))?;
    println!("tall: {}, {} skeleton cells, betti {:?}", b.tall, b.skeleton.cells.len(), betti(&b.skeleton)?);
    for (x, y) in [(0, 0), (2, 0), (3, 2)] {
        println!("rho({x}, {y}) = {}", b.rho.eval(&rat_vec(&[x, y]))?);
    }
    println!("integral of rho {} = volume {}", integrate(&b.rho)?, volume(&p)?);
    let d = check_delta_compat(&b.skeleton, &b.delta)?;
    let r = check_rho_compat(&b.skeleton, &b.delta, &b.rho, &LatticeBasis::standard(2))?;
    println!(
        "delta compatible at {} checkpoints: {}; rho compatible at {}: {}",
        d.checkpoints.len(),
        d.passed,
        r.checkpoints.len(),
        r.passed
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
