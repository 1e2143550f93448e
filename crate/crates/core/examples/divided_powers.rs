//! Divided powers and PD substitution in Z/9<T1>.

use crystalcalc::padic_linalg::Zpn;
use crystalcalc::power_series::{divided_power, pd_substitute, PDSeries, Substitution, TKind, VarSpec};

fn main() -> crystalcalc::Result<()> {
    let ring = Zpn::new(3, 2)?;
    let spec = VarSpec::t_only(ring, 1, 1, TKind::Divided, 6)?;
    let t = PDSeries::t(&spec, 0);
    println!("T1^3 = {}", t.pow(3));
    println!("(3 + T1)^[2] = {}", divided_power(&(&PDSeries::constant(&spec, 3) + &t), 2)?);

    // T1 -> T1 + 3 is allowed because 3 lies in the PD ideal (p)
    let shift = Substitution::new(&spec, vec![], vec![&t + &PDSeries::constant(&spec, 3)])?;
    let f = PDSeries::t_pow(&spec, 0, 3);
    println!("T1^[3](T1 + 3) = {}", pd_substitute(&f, &shift)?);
    Ok(())
}
