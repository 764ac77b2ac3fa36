// Normal forms, kernels and complementary vectors over the integers.

use std::error::Error;

use tallone::exactla::{hnf, int_vec, kernel_basis, saturate, snf, solve_pairing_one, IntMatrix, LatticeBasis};

pub fn run() -> Result<(), Box<dyn Error>> {
    let m = IntMatrix::from_rows(2, &[vec![2, 4], vec![0, 2]]);
    let h = hnf(&m);
    println!("hnf of {m:?} is {:?}", h.h);

    let d = snf(&IntMatrix::from_rows(2, &[vec![2, 0], vec![0, 3]]));
    println!("invariant factors of diag(2, 3): {:?}", d.invariant_factors());

    // the relation between the weights 1 and -1
    let k = kernel_basis(&IntMatrix::from_rows(2, &[vec![1, -1]]));
    println!("kernel of [1 -1]: {:?}", k.generators());

    let sub = LatticeBasis::new(IntMatrix::from_cols(2, &[vec![2, 2], vec![0, 4]]))?;
    let s = saturate(&sub);
    println!("saturation index of span{{(2,2), (0,4)}}: {}", s.index);

    let j = solve_pairing_one(&int_vec(&[3, 5]), &LatticeBasis::standard(2))?;
    println!("j with <(3,5), j> = 1: {j:?}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run()
}
