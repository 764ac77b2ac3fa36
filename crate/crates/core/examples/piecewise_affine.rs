// Piecewise affine functions: evaluation, sums, integrals and germs.

use std::error::Error;

use tallone::exactla::{rat, rat_vec, LatticeBasis};
use tallone::polyhedra::HPolyhedron;
use tallone::pwaffine::{combine, integrate, is_integral_affine_near, PiecewiseAffineFn};

pub fn run() -> Result<(), Box<dyn Error>> {
    let square = HPolyhedron::cuboid(&rat_vec(&[-1, -1]), &rat_vec(&[1, 1]));
    let f = PiecewiseAffineFn::affine(square.clone(), rat_vec(&[1, 0]), rat(2));
    let g = PiecewiseAffineFn::affine(square, rat_vec(&[0, 1]), rat(0));
    let h = combine(&f, &g, &rat(1), &rat(-1))?;
    println!("h(1, 1) = {}", h.eval(&rat_vec(&[1, 1]))?);
    println!("integral of h = {}", integrate(&h)?);
    let germ = is_integral_affine_near(&h, &rat_vec(&[0, 0]), &LatticeBasis::standard(2))?;
    println!("germ at the origin: {germ:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
