//! Lifting G_m and repairing a morphism seed by Newton iteration.

use crystalcalc::power_series::PDSeries;
use crystalcalc::smooth_lift::{catalog, lift_algebra, MappingSpace};

fn main() -> crystalcalc::Result<()> {
    let gm = lift_algebra(&catalog("gm", 3)?, 3)?;
    println!("{:?}: generators {:?}", gm.kind(), gm.generators());
    let s = MappingSpace::new(&gm, &gm, 4, 40)?;
    let l0 = s.level(0);
    let x = PDSeries::x(l0, 0);
    // x -> 4x, y -> x^-1 is not a morphism mod 27; Newton fixes y
    let seed = [&x * &PDSeries::constant(l0, 4), PDSeries::x_pow(l0, 0, -1)];
    let f = s.lift_morphism(&seed)?;
    for (g, v) in gm.generators().iter().zip(f.images()) {
        println!("{g} -> {v}");
    }
    Ok(())
}
