//! Lifting, homotopies and fillers in mapping spaces of catalog algebras.

mod common;

use common::{a1_simplex, gm_simplex, perturb, space};
use crystalcalc::padic_linalg::Zpn;
use crystalcalc::power_series::PDSeries;
use crystalcalc::simplicial_site::divide_by_vertex_product;
use crystalcalc::smooth_lift::Morphism;
use crystalcalc::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn free_seed_is_already_a_lift() {
    let s = space("a1", 3, 3, 4);
    let l0 = s.level(0);
    let x = PDSeries::x(l0, 0);
    let seed = &x + &(&PDSeries::x_pow(l0, 0, 2) * &PDSeries::constant(l0, 3));
    let f = s.lift_morphism(&[seed.clone()]).unwrap();
    assert_eq!(f.images()[0], seed);
}

#[test]
fn gm_repair_matches_modular_inverse() {
    for (p, n) in [(3u64, 3u32), (2, 5), (5, 2)] {
        let s = space("gm", p, n, 2);
        let l0 = s.level(0);
        let x = PDSeries::x(l0, 0);
        let seed = [&x * &PDSeries::constant(l0, 1 + p), PDSeries::x_pow(l0, 0, -1)];
        let f = s.lift_morphism(&seed).unwrap();
        let q = Zpn::new(p, n).unwrap().modulus();
        let inv = (1..q).find(|c| c * (1 + p) % q == 1).unwrap();
        assert_eq!(f.images()[1], &PDSeries::x_pow(l0, 0, -1) * &PDSeries::constant(l0, inv));
        assert_eq!(s.reduction(&f)[1].geometric_terms(), seed[1].reduce_mod_p().geometric_terms());
    }
}

#[test]
fn linear_homotopy_on_the_line() {
    let s = space("a1", 3, 3, 6);
    let l0 = s.level(0);
    let x = PDSeries::x(l0, 0);
    let phi1 = s.simplex(0, vec![x.clone()]).unwrap();
    let phi2 = s.simplex(0, vec![&x + &PDSeries::constant(l0, 3)]).unwrap();
    let h = s.build_homotopy(&phi1, &phi2).unwrap();
    let l1 = s.level(1);
    assert_eq!(h.0.images()[0], &PDSeries::x(l1, 0) + &PDSeries::t(l1, 0));
    assert_eq!(s.at_zero(&h), phi1);
    assert_eq!(s.at_pi(&h), phi2);
}

#[test]
fn homotopy_endpoints_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (name, laurent) in [("gm", true), ("a1", false)] {
        let s = space(name, 3, 3, 6);
        for _ in 0..20 {
            let phi1 = if laurent { gm_simplex(&mut rng, &s, 0) } else { a1_simplex(&mut rng, &s, 0) };
            let phi2 = perturb(&mut rng, &s, &phi1, laurent);
            let h = s.build_homotopy(&phi1, &phi2).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.at_zero(&h), phi1);
            assert_eq!(s.at_pi(&h), phi2);
            s.simplex(1, h.0.images().to_vec()).unwrap();
        }
    }
}

#[test]
fn degenerate_simplices_have_equal_faces() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let s = space("gm", 3, 2, 4);
    let f = gm_simplex(&mut rng, &s, 0);
    let d = s.degeneracy(&f, 0);
    assert_eq!(s.face(&d, 0), f);
    assert_eq!(s.face(&d, 1), f);
}

#[test]
fn mapping_filler_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let s = space("gm", 3, 3, 6);
    for _ in 0..20 {
        let h = gm_simplex(&mut rng, &s, 2);
        let faces: Vec<Morphism> = (0..=2).map(|i| s.face(&h, i)).collect();
        let base = s.face(&faces[0], 0);
        let f = s.fill_boundary(2, &faces, &base).unwrap();
        for (i, face) in faces.iter().enumerate() {
            assert_eq!(&s.face(&f, i), face);
        }
        for (a, b) in f.images().iter().zip(h.images()) {
            divide_by_vertex_product(&(a - b), 2).unwrap();
        }
    }
}

#[test]
fn mapping_filler_at_level_one_is_a_homotopy() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let s = space("gm", 3, 3, 6);
    let phi1 = gm_simplex(&mut rng, &s, 0);
    let phi2 = perturb(&mut rng, &s, &phi1, true);
    let f = s.fill_boundary(1, &[phi2.clone(), phi1.clone()], &phi1).unwrap();
    assert_eq!(f, s.build_homotopy(&phi1, &phi2).unwrap().0);
}

#[test]
fn perturbed_face_is_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let s = space("gm", 3, 3, 6);
    let h = gm_simplex(&mut rng, &s, 2);
    let mut faces: Vec<Morphism> = (0..=2).map(|i| s.face(&h, i)).collect();
    let base = s.face(&faces[0], 0);
    let l1 = s.level(1);
    let bump = &PDSeries::one(l1) + &(&PDSeries::t(l1, 0) * &PDSeries::constant(l1, 3));
    let images = vec![&faces[1].images()[0] * &bump, &faces[1].images()[1] * &bump.inverse().unwrap()];
    faces[1] = s.simplex(1, images).unwrap();
    assert!(matches!(s.fill_boundary(2, &faces, &base), Err(Error::IncompatibleFaces(_))));
}
