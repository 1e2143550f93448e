//! Faces, degeneracies and the simplicial identities of RΔ and RΔ^π.

use crystalcalc::padic_linalg::Zpn;
use crystalcalc::simplicial_site::{verify_simplicial_identities, MapTable, Site, Variant};

fn main() -> crystalcalc::Result<()> {
    let site = Site::new(Zpn::new(3, 2)?, 5)?;
    let t1 = site.vertex(1, 1, Variant::Pi);
    for i in 0..=1 {
        println!("d{i}(T1) = {}", site.apply_face(1, i, Variant::Pi, &t1));
    }
    println!("vertex product at level 2: {}", site.vertex_product(2, Variant::Pi));
    for variant in [Variant::Full, Variant::Pi] {
        let r = verify_simplicial_identities(&MapTable::build(&site, variant, 5), 3)?;
        println!("{variant}: {} identities hold", r.identities_checked);
    }
    Ok(())
}
