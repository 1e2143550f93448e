//! Ring and divided-power axioms, and substitution as a homomorphism, on
//! random elements of small truncated carriers.

use crystalcalc::padic_linalg::Zpn;
use crystalcalc::power_series::{
    divided_power, gamma_pi, pd_substitute, GeomVar, Monomial, PDSeries, SpecRef, Substitution, TKind, VarSpec,
};
use proptest::prelude::*;

fn spec() -> SpecRef {
    VarSpec::new(
        Zpn::new(3, 3).unwrap(),
        vec![GeomVar::polynomial("x"), GeomVar::laurent("y")],
        6,
        vec!["T1".into(), "T2".into()],
        TKind::Divided,
        6,
    )
    .unwrap()
}

/// Elements with small support so products stay inside the windows.
fn element(s: SpecRef) -> impl Strategy<Value = PDSeries> {
    prop::collection::vec((0i64..=2, -2i64..=2, 0u32..=2, 0u32..=2, 0u64..27), 0..5).prop_map(move |terms| {
        PDSeries::from_terms(&s, terms.into_iter().map(|(a, b, t1, t2, c)| (Monomial { x: vec![a, b], t: vec![t1, t2] }, c)))
    })
}

/// Elements of the ideal `(p, T1, T2)`.
fn ideal_element(s: SpecRef) -> impl Strategy<Value = PDSeries> {
    element(s.clone()).prop_map(move |f| {
        let mut out = PDSeries::zero(&s);
        for (m, c) in f.terms() {
            let c = if m.weight() == 0 { c * 3 } else { c };
            out.add_term(m.clone(), c);
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in element(spec()), b in element(spec()), c in element(spec())) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn divided_power_axioms(j in 0usize..2, a in 0u32..=3, b in 0u32..=3) {
        let s = spec();
        let ta = PDSeries::t_pow(&s, j, a);
        let tb = PDSeries::t_pow(&s, j, b);
        let expected = PDSeries::t_pow(&s, j, a + b).scale(crystalcalc::padic_linalg::binomial((a + b) as u64, a as u64) as u64);
        prop_assert_eq!(&ta * &tb, expected);
        // k! T^[k] = T^k
        let k = a + b;
        let fact: u64 = (1..=k as u64).product();
        prop_assert_eq!(PDSeries::t(&s, j).pow(k as u64), PDSeries::t_pow(&s, j, k).scale(fact));
    }

    #[test]
    fn gamma_on_ideal_elements(u in ideal_element(spec()), n in 1u32..=3) {
        // n! gamma_n(u) = u^n
        let g = divided_power(&u, n).unwrap();
        let fact: u64 = (1..=n as u64).product();
        prop_assert_eq!(g.scale(fact), u.pow(n as u64));
    }

    #[test]
    fn substitution_is_a_homomorphism(
        f in element(spec()),
        g in element(spec()),
        t1 in ideal_element(spec()),
        t2 in ideal_element(spec()),
    ) {
        let s = spec();
        let sub = Substitution::fixing_geometry(&s, &s, vec![t1, t2]).unwrap();
        let sf = pd_substitute(&f, &sub).unwrap();
        let sg = pd_substitute(&g, &sub).unwrap();
        prop_assert_eq!(pd_substitute(&(&f * &g), &sub).unwrap(), &sf * &sg);
        prop_assert_eq!(pd_substitute(&(&f + &g), &sub).unwrap(), &sf + &sg);
    }
}

#[test]
fn gamma_pi_matches_rational_value() {
    // p^k / k! as a rational, reduced mod p^N by clearing the unit denominator
    for (p, n) in [(2u64, 4u32), (3, 3), (5, 2)] {
        let r = Zpn::new(p, n).unwrap();
        for k in 0..=8u64 {
            let num = (p as u128).pow(k as u32);
            let den: u128 = (1..=k as u128).product();
            let d = gcd(num, den);
            let (num, den) = (num / d, den / d);
            let expected = (0..r.modulus()).find(|&x| (x as u128 * den) % r.modulus() as u128 == num % r.modulus() as u128);
            assert_eq!(Some(gamma_pi(r, k)), expected, "p={p} N={n} k={k}");
        }
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
