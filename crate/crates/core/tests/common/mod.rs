#![allow(dead_code)]

use crystalcalc::power_series::{Monomial, PDSeries, SpecRef};
use crystalcalc::smooth_lift::{catalog, lift_algebra, MappingSpace, Morphism};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn space(name: &str, p: u64, n: u32, d: u32) -> MappingSpace {
    let a = lift_algebra(&catalog(name, p).unwrap(), n).unwrap();
    MappingSpace::new(&a, &a, d, 40).unwrap()
}

/// `1 + p * (small random Laurent or polynomial part)` plus random `T`-terms
/// divisible by `T` when the carrier has any.
pub fn unit_factor(rng: &mut ChaCha8Rng, spec: &SpecRef, laurent: bool) -> PDSeries {
    let ring = spec.ring();
    let mut f = PDSeries::one(spec);
    for _ in 0..3 {
        let e = if laurent { rng.gen_range(-2..=2) } else { rng.gen_range(0..=2) };
        let c = ring.mul(ring.p(), rng.gen_range(0..ring.modulus()));
        f.add_term(Monomial { x: vec![e], t: vec![0; spec.n_t()] }, c);
    }
    for _ in 0..3 {
        if spec.n_t() == 0 {
            break;
        }
        let mut t = vec![0; spec.n_t()];
        t[rng.gen_range(0..spec.n_t())] = rng.gen_range(1..=2);
        let e = if laurent { rng.gen_range(-1..=1) } else { rng.gen_range(0..=1) };
        f.add_term(Monomial { x: vec![e], t }, rng.gen_range(0..ring.modulus()));
    }
    f
}

/// A random simplex of `Hom(gm, gm)` at level `m`: `x -> x u`, `y -> x^-1 u^-1`.
pub fn gm_simplex(rng: &mut ChaCha8Rng, s: &MappingSpace, m: usize) -> Morphism {
    let spec = s.level(m);
    let u = unit_factor(rng, spec, true);
    let x = PDSeries::x(spec, 0);
    let y = &PDSeries::x_pow(spec, 0, -1) * &u.inverse().unwrap();
    s.simplex(m, vec![&x * &u, y]).unwrap()
}

pub fn a1_simplex(rng: &mut ChaCha8Rng, s: &MappingSpace, m: usize) -> Morphism {
    let spec = s.level(m);
    let x = PDSeries::x(spec, 0);
    s.simplex(m, vec![&(&x * &unit_factor(rng, spec, false)) + &unit_factor(rng, spec, false)]).unwrap()
}

pub fn perturb(rng: &mut ChaCha8Rng, s: &MappingSpace, f: &Morphism, laurent: bool) -> Morphism {
    let spec = s.level(0);
    let u = unit_factor(rng, spec, laurent);
    if laurent {
        let x = &f.images()[0] * &u;
        let y = &f.images()[1] * &u.inverse().unwrap();
        s.simplex(0, vec![x, y]).unwrap()
    } else {
        let shift = &unit_factor(rng, spec, false) - &PDSeries::one(spec);
        s.simplex(0, vec![&(&f.images()[0] * &u) + &shift]).unwrap()
    }
}
