// Random tall local models: their moment cones are Delzant, and changing
// the complementary circle changes the DH function by an integral affine
// function.

use std::error::Error;

use rand::SeedableRng;
use tallone::exactla::{rat, LatticeBasis};
use tallone::model::{random_tall_model, TruncationSpec};
use tallone::polyhedra::is_delzant_cone;
use tallone::pwaffine::{combine, is_integral_affine_near};

pub fn run() -> Result<(), Box<dyn Error>> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let m = random_tall_model(&mut rng, 3);
        let n = m.label().torus_rank();
        let lattice = LatticeBasis::standard(n);
        let cone = m.moment_cone()?;
        let g = m.g_lattices()?;
        let j = g.complementary_circle()?;
        let shift: Vec<_> = (0..n).map(|i| tallone::exactla::Int::from(i as i64 + 1)).collect();
        let j2: Vec<_> = j.iter().zip(g.i_t(&shift)).map(|(a, b)| a + b).collect();
        let f = m.dh_truncation(&TruncationSpec { j, kappa: rat(1) })?;
        let f2 = m.dh_truncation(&TruncationSpec { j: j2, kappa: rat(2) })?;
        let d = combine(&f, &f2, &rat(1), &rat(-1))?;
        let germ = is_integral_affine_near(&d, m.base_point(), &lattice)?;
        println!(
            "n={n} h={} weights={:?} delzant cone: {} difference slope: {:?}",
            m.label().subtorus_rank(),
            m.label().weights(),
            is_delzant_cone(&cone, m.base_point(), &lattice)?,
            germ.lattice_values
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
