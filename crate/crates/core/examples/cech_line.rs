//! Čech descent for the cover of the line by D(x) and D(x - 1).

use crystalcalc::pd_derham::{cech_descent_check, Localizer};
use crystalcalc::smooth_lift::{catalog, lift_algebra};

fn main() -> crystalcalc::Result<()> {
    let a1 = lift_algebra(&catalog("a1", 2)?, 2)?;
    let r = cech_descent_check(&a1, &[Localizer::Linear(0), Localizer::Linear(1)], 6)?;
    for c in &r.cells {
        println!("H^{} graded {}: {}", c.degree, c.graded, c.divisors);
    }
    println!("{} pole summands are acyclic", r.pole_pieces);
    Ok(())
}
