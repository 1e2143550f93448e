//! Properties of the de Rham and total complexes: Leibniz, canonical
//! divisors, and stability of certified cells under larger caps.

use crystalcalc::crystalline::{build_simplicial_dr, compare_dr_cris, Caps, Totalization};
use crystalcalc::padic_linalg::{Matrix, Zpn};
use crystalcalc::pd_derham::{ChainComplex, Form, FormVec, PdObject};
use crystalcalc::smooth_lift::{catalog, lift_algebra};
use proptest::prelude::*;

fn gm_level(m: usize) -> PdObject {
    let a = lift_algebra(&catalog("gm", 3).unwrap(), 3).unwrap();
    PdObject::from_presentation(&a, m, 6, 6).unwrap()
}

fn form() -> impl Strategy<Value = Form> {
    (-3i64..=3, 0u32..2, 0u32..=3, 0u32..=3, 0u32..4).prop_map(|(x, dx, t1, t2, dt)| Form { x: vec![x], dx, t: vec![t1, t2], dt })
}

fn form_vec() -> impl Strategy<Value = FormVec> {
    prop::collection::vec((form(), 1u64..27), 1..4).prop_map(|v| v.into_iter().collect())
}

fn sum(ring: Zpn, a: FormVec, b: FormVec) -> FormVec {
    let mut out = a;
    for (f, c) in b {
        let e = out.entry(f.clone()).or_insert(0);
        *e = ring.add(*e, c);
        if *e == 0 {
            out.remove(&f);
        }
    }
    out
}

fn permuted(c: &ChainComplex, perms: &[Vec<usize>]) -> ChainComplex {
    let (first, last) = (c.first_degree(), c.last_degree());
    let labels = (first..=last)
        .zip(perms)
        .map(|(q, p)| p.iter().map(|&i| c.labels(q)[i].clone()).collect())
        .collect();
    let diffs = (first..last)
        .zip(perms.windows(2))
        .map(|(q, w)| {
            let d = c.differential(q);
            let mut m = Matrix::zero(c.ring(), d.rows(), d.cols());
            for (r, &pr) in w[0].iter().enumerate() {
                for (s, &ps) in w[1].iter().enumerate() {
                    m.set(r, s, d.get(pr, ps));
                }
            }
            m
        })
        .collect();
    ChainComplex::new(c.ring(), first, labels, diffs).unwrap()
}

fn shuffle(n: usize, seed: u64) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    let mut s = seed;
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        v.swap(i, (s >> 33) as usize % (i + 1));
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn graded_leibniz(f in form_vec(), g in form_vec()) {
        let o = gm_level(2);
        let ring = o.ring();
        // only homogeneous f carries a single sign
        let deg = f.keys().next().unwrap().degree();
        let f: FormVec = f.into_iter().filter(|(h, _)| h.degree() == deg).collect();
        let lhs = o.d_vec(&o.wedge_vec(&f, &g));
        let mut second = o.wedge_vec(&f, &o.d_vec(&g));
        if deg % 2 == 1 {
            second = second.into_iter().map(|(h, c)| (h, ring.neg(c))).collect();
        }
        let rhs = sum(ring, o.wedge_vec(&o.d_vec(&f), &g), second);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squares_to_zero(f in form_vec()) {
        let o = gm_level(2);
        prop_assert!(o.d_vec(&o.d_vec(&f)).is_empty());
    }

    #[test]
    fn divisors_ignore_basis_order(g in -2i64..=2, levels in 1usize..=2, seed in any::<u64>()) {
        let a = lift_algebra(&catalog("gm", 3).unwrap(), 2).unwrap();
        let base = PdObject::from_presentation(&a, 0, 4, 2).unwrap();
        let tot = build_simplicial_dr(&base, g, levels, Totalization::Normalized).unwrap().totalize().unwrap();
        let perms: Vec<Vec<usize>> = (tot.first_degree()..=tot.last_degree())
            .enumerate()
            .map(|(k, q)| shuffle(tot.dim(q), seed.wrapping_add(k as u64)))
            .collect();
        prop_assert_eq!(tot.cohomology().unwrap(), permuted(&tot, &perms).cohomology().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn larger_caps_keep_certified_cells(levels in 1usize..=2, extra_d in 0u32..=2, name in prop::sample::select(vec!["a1", "gm"])) {
        let a = lift_algebra(&catalog(name, 2).unwrap(), 2).unwrap();
        let small = Caps { weight: levels as u32 + extra_d, window: 2, levels };
        let big = Caps { weight: small.weight + 1, window: 3, levels };
        let r1 = compare_dr_cris(name, &a, small).unwrap();
        let r2 = compare_dr_cris(name, &a, big).unwrap();
        for c in &r1.cris.cells {
            let d = r2.cris.cells.iter().find(|d| d.degree == c.degree && d.graded == c.graded).unwrap();
            prop_assert_eq!(&c.divisors, &d.divisors);
        }
    }
}
