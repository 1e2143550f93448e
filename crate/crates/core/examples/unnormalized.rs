//! Totalizing all of each column instead of the normalized part.

use crystalcalc::crystalline::{cris, Caps, Totalization};
use crystalcalc::smooth_lift::{catalog, lift_algebra};

fn main() -> crystalcalc::Result<()> {
    let gm = lift_algebra(&catalog("gm", 3)?, 2)?;
    for levels in 1..=2 {
        let caps = Caps { weight: 4, window: 1, levels };
        for mode in [Totalization::Normalized, Totalization::Unnormalized] {
            let r = cris("gm", &gm, caps, mode)?;
            println!("M={levels} {mode:?}: H^0_0 = {}", r.get(0, 0).unwrap());
        }
    }
    Ok(())
}
