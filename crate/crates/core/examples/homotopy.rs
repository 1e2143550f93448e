//! A homotopy between two congruent endomorphisms of G_m.

use crystalcalc::power_series::PDSeries;
use crystalcalc::smooth_lift::{catalog, lift_algebra, MappingSpace};

fn main() -> crystalcalc::Result<()> {
    let gm = lift_algebra(&catalog("gm", 3)?, 3)?;
    let s = MappingSpace::new(&gm, &gm, 6, 40)?;
    let phi1 = s.identity()?;
    let l0 = s.level(0);
    let x = PDSeries::x(l0, 0);
    let phi2 = s.lift_morphism(&[&x * &PDSeries::constant(l0, 4), PDSeries::x_pow(l0, 0, -1)])?;
    let h = s.build_homotopy(&phi1, &phi2)?;
    for (g, v) in gm.generators().iter().zip(h.0.images()) {
        println!("h({g}) = {v}");
    }
    assert_eq!(s.at_zero(&h), phi1);
    assert_eq!(s.at_pi(&h), phi2);
    println!("endpoints: T1 = 0 gives phi1, T1 = 3 gives phi2");
    Ok(())
}
