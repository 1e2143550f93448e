//! Boundary kernel, regular sequences and refilling a 2-simplex.

use crystalcalc::padic_linalg::Zpn;
use crystalcalc::power_series::PDSeries;
use crystalcalc::simplicial_site::{
    boundary_restriction, check_regular_sequence, divide_by_vertex_product, fill_boundary, verify_boundary_kernel, Site,
    Variant,
};

fn main() -> crystalcalc::Result<()> {
    let site = Site::new(Zpn::new(3, 2)?, 6)?;
    for m in 1..=2 {
        let k = verify_boundary_kernel(&site, m)?;
        println!("m={m}: kernel of the boundary map is (T0...T{m}), {:?}", k.status);
    }
    check_regular_sequence(&site, 2, &[2, 0, 1], Variant::Pi)?;
    match check_regular_sequence(&site, 2, &[0, 1, 2], Variant::PiBoundary) {
        Err(e) => println!("modulo the vertex product: {e}"),
        Ok(_) => println!("unexpectedly regular"),
    }

    let spec = site.level(2, Variant::Pi);
    let g = &(&PDSeries::t(spec, 0) * &PDSeries::t(spec, 1)) + &PDSeries::t_pow(spec, 1, 2);
    let b = boundary_restriction(&site, 2, &g);
    let f = fill_boundary(&site, 2, &b.faces, &b.base)?;
    println!("g = {g}\nf = {f}");
    println!("(f - g) / (T0 T1 T2) = {}", divide_by_vertex_product(&(&f - &g), 2)?);
    Ok(())
}
