//! de Rham cohomology of A and of AΔ^π_m agree graded piece by graded piece.

use crystalcalc::pd_derham::{base_change_check, poincare_check, PdObject};
use crystalcalc::smooth_lift::{catalog, lift_algebra};

fn main() -> crystalcalc::Result<()> {
    let gm = lift_algebra(&catalog("gm", 3)?, 3)?;
    let obj = PdObject::from_presentation(&gm, 0, 8, 9)?;
    for g in [0, 1, 3, 9] {
        let h = obj.complex(g, false)?.cohomology()?;
        println!("g={g}: H^0 = {}, H^1 = {}", h[&0], h[&1]);
    }
    for m in 1..=2 {
        let r = poincare_check(&gm, m, 8, 9)?;
        println!("level {m}: {} cells agree with level 0", r.cells.len());
        base_change_check(&gm, m, 8, 9)?;
    }
    Ok(())
}
