//! Smooth algebras over `F_p`, their lifts to `Z/p^N`, and the simplicial
//! mapping spaces `Hom(A, B ⊗ RΔ^π_•)`: lifting morphisms, homotopies
//! between lifts, and fillers of boundaries.

mod mapping;
mod presentation;

pub use mapping::{Homotopy, MappingSpace, Morphism};
pub use presentation::{catalog, lift_algebra, AlgebraKind, IntRelation, Model, Presentation};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power_series::PDSeries;
    use crate::Error;

    fn gm(n: u32) -> Presentation {
        lift_algebra(&catalog("gm", 3).unwrap(), n).unwrap()
    }

    #[test]
    fn catalog_kinds() {
        assert_eq!(catalog("a1", 2).unwrap().kind(), AlgebraKind::Free);
        assert_eq!(catalog("gm", 3).unwrap().kind(), AlgebraKind::Laurent);
        assert_eq!(catalog("ell-3-1-2", 3).unwrap().kind(), AlgebraKind::Hypersurface);
        assert_eq!(catalog("point", 5).unwrap().n_gens(), 0);
        assert!(catalog("ell-3-1-2", 2).is_err());
    }

    #[test]
    fn lift_keeps_integer_relations() {
        let e = lift_algebra(&catalog("ell-3-1-2", 3).unwrap(), 3).unwrap();
        // -2 over Z/27
        let c = e.relations()[0].constant_term();
        assert_eq!(c, 25);
    }

    #[test]
    fn singular_hypersurface_is_rejected() {
        let r = crate::padic_linalg::Zpn::new(3, 1).unwrap();
        let names = vec!["x".to_string(), "y".to_string()];
        // y^2 = x^3 has a cusp at the origin
        let err = Presentation::new(r, names, vec![vec![(vec![0, 2], 1), (vec![3, 0], -1)]], vec![1]).unwrap_err();
        assert!(matches!(err, Error::WitnessNotInvertible(_)));
    }

    #[test]
    fn gm_seed_is_repaired() {
        let a = gm(4);
        let space = MappingSpace::new(&a, &a, 4, 16).unwrap();
        let l0 = space.level(0);
        let x = PDSeries::x(l0, 0);
        let seed = vec![&x * &PDSeries::constant(l0, 4), PDSeries::x_pow(l0, 0, -1)];
        let f = space.lift_morphism(&seed).unwrap();
        // y -> x^-1 (1+3)^-1 mod 81
        let inv4 = space.ring().inv(4).unwrap();
        assert_eq!(f.images()[1], &PDSeries::x_pow(l0, 0, -1) * &PDSeries::constant(l0, inv4));
    }

    #[test]
    fn ell_identity_lifts() {
        let e = lift_algebra(&catalog("ell-3-1-2", 3).unwrap(), 3).unwrap();
        let space = MappingSpace::new(&e, &e, 3, 12).unwrap();
        let id = space.identity().unwrap();
        let lifted = space.lift_morphism(id.images()).unwrap();
        assert_eq!(lifted, id);
    }

    #[test]
    fn constant_homotopy_is_degenerate() {
        let a = gm(3);
        let space = MappingSpace::new(&a, &a, 6, 16).unwrap();
        let id = space.identity().unwrap();
        let h = space.build_homotopy(&id, &id).unwrap();
        assert_eq!(h.0, space.degeneracy(&id, 0));
    }

    #[test]
    fn homotopy_on_gm() {
        let a = gm(3);
        let space = MappingSpace::new(&a, &a, 6, 24).unwrap();
        let id = space.identity().unwrap();
        let l0 = space.level(0);
        let x = PDSeries::x(l0, 0);
        let phi2 = space.lift_morphism(&[&x * &PDSeries::constant(l0, 4), PDSeries::x_pow(l0, 0, -1)]).unwrap();
        let h = space.build_homotopy(&id, &phi2).unwrap();
        assert_eq!(space.at_zero(&h), id);
        assert_eq!(space.at_pi(&h), phi2);
        // x -> x(1 + T)
        let l1 = space.level(1);
        let x1 = PDSeries::x(l1, 0);
        assert_eq!(h.0.images()[0], &x1 + &(&x1 * &PDSeries::t(l1, 0)));
    }

    #[test]
    fn incongruent_pair_is_rejected() {
        let a = gm(2);
        let space = MappingSpace::new(&a, &a, 3, 8).unwrap();
        let id = space.identity().unwrap();
        let l0 = space.level(0);
        let x = PDSeries::x(l0, 0);
        let y = PDSeries::x_pow(l0, 0, -1);
        let phi2 = space.lift_morphism(&[&x * &PDSeries::constant(l0, 2), &y * &PDSeries::constant(l0, 2)]).unwrap();
        assert!(matches!(space.build_homotopy(&id, &phi2), Err(Error::NotCongruent { .. })));
    }
}
