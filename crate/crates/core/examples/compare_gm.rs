//! de Rham against crystalline cohomology of G_m over Z/27.

use crystalcalc::crystalline::{compare_dr_cris, known_values_check, Caps};
use crystalcalc::smooth_lift::{catalog, lift_algebra};

fn main() -> crystalcalc::Result<()> {
    let gm = lift_algebra(&catalog("gm", 3)?, 3)?;
    let caps = Caps { weight: 6, window: 9, levels: 2 };
    let r = compare_dr_cris("gm", &gm, caps)?;
    for c in r.cris.cells.iter().filter(|c| c.graded >= 0) {
        println!("H^{}_{} = {}", c.degree, c.graded, c.divisors);
    }
    println!("stable in degrees {:?}", r.stable);
    known_values_check("gm", &gm, caps)?;
    println!("closed forms match");
    Ok(())
}
