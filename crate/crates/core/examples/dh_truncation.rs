// The circle acting on C² with weights 1 and -1: defining exponents,
// complementary circle, the section σ and the truncated DH function.

use std::error::Error;

use tallone::exactla::{int_vec, rat, ratio, rat_vec};
use tallone::model::{ModelLabel, TruncationSpec};

pub fn run() -> Result<(), Box<dyn Error>> {
    let m = ModelLabel::from_i64(1, &[&[1]], &[&[1], &[-1]])?.at(rat_vec(&[0]))?;
    println!("tall: {}, xi = {:?}", m.is_tall()?, m.defining_exponents()?);
    let g = m.g_lattices()?;
    let j = g.complementary_circle()?;
    println!("j = {j:?}, i_T(1) = {:?}", g.i_t(&int_vec(&[1])));

    let sigma = m.sigma_section()?;
    for b in [3, -2] {
        println!("sigma({b}) = {:?}", sigma.eval(&rat_vec(&[b]))?);
    }

    let f = m.dh_truncation(&TruncationSpec { j, kappa: rat(1) })?;
    for b in [rat(-2), rat(-1), rat(0), ratio(1, 2), rat(1)] {
        println!("DH({b}) = {}", f.eval(std::slice::from_ref(&b))?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
