//! Row spans, kernels and elementary divisors over Z/27.

use crystalcalc::padic_linalg::{cokernel_divisors, complex_cohomology, howell_form, kernel, Matrix, Zpn};

fn main() -> crystalcalc::Result<()> {
    let ring = Zpn::new(3, 3)?;
    let m = Matrix::from_i64_rows(ring, 3, &[vec![3, 6, 9], vec![1, 2, 3], vec![0, 9, 18]]);
    let (h, _) = howell_form(&m);
    println!("howell form:\n{h:?}");
    println!("kernel rows: {}", kernel(&m).rows());
    println!("cokernel: {}", cokernel_divisors(&m));

    // 0 -> Z/27 --(*3)--> Z/27 -> 0
    let d = Matrix::from_i64_rows(ring, 1, &[vec![3]]);
    for (i, h) in complex_cohomology(&[d], &[1, 1], ring)?.iter().enumerate() {
        println!("H^{i} = {h}");
    }
    Ok(())
}
