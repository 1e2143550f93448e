use std::collections::HashMap;

use super::{Monomial, PDSeries, SpecRef, TKind, VarSpec};
use crate::error::{Error, Result};
use crate::padic_linalg::{binomial, factorial_valuation, Zpn};

/// `gamma_k(p) = p^k / k!` in `Z/p^N`.
pub fn gamma_pi(ring: Zpn, k: u64) -> u64 {
    let p = ring.p();
    let v = factorial_valuation(p, k);
    let e = k - v;
    if e >= ring.precision() as u64 {
        return 0;
    }
    let mut unit = 1u64;
    for i in 2..=k {
        let mut j = i;
        while j % p == 0 {
            j /= p;
        }
        unit = ring.mul(unit, ring.reduce(j));
    }
    ring.mul(ring.p_pow(e as u32), ring.inv(unit).expect("unit part of k!"))
}

/// `(nb)! / (n! (b!)^n)`, the constant in `gamma_n(T^[b]) = c * T^[nb]`.
fn gamma_of_divided_power(ring: Zpn, n: u64, b: u64) -> u64 {
    let mut acc = 1u64;
    for j in 1..=n {
        let c = binomial(j * b - 1, b - 1) % ring.modulus() as u128;
        acc = ring.mul(acc, c as u64);
    }
    acc
}

/// `gamma_k` of a single term `c * x^e * T^[beta]`.
fn gamma_term(spec: &SpecRef, precision: u32, m: &Monomial, c: u64, k: u32) -> Result<PDSeries> {
    let ring = spec.ring().with_precision(precision);
    let one = PDSeries::one(spec).at_precision(precision);
    if k == 0 {
        return Ok(one);
    }
    let xpart = PDSeries::monomial(spec, Monomial { x: m.x.clone(), t: vec![0; m.t.len()] }, 1).at_precision(precision);
    if m.weight() == 0 {
        let (v, _) = ring.split(c);
        if v == 0 {
            return Err(Error::SubstitutionOutsideIdeal { var: spec.format_monomial(m) });
        }
        // c = p * c', gamma_k(p c' x^e) = c'^k x^(ke) gamma_k(p)
        let cp = ring.div_p_pow(c, 1).expect("divisible by p");
        let coeff = ring.mul(ring.pow(ring.reduce(cp), k as u64), gamma_pi(ring, k as u64));
        return Ok(xpart.pow(k as u64).scale(coeff));
    }
    let i = m.t.iter().position(|&b| b > 0).expect("positive weight");
    let b = m.t[i];
    let mut rest = m.t.clone();
    rest[i] = 0;
    let mut top = vec![0; m.t.len()];
    top[i] = k * b;
    let rest_s = PDSeries::monomial(spec, Monomial { x: vec![0; m.x.len()], t: rest }, 1).at_precision(precision);
    let top_s = PDSeries::monomial(spec, Monomial { x: vec![0; m.x.len()], t: top }, 1).at_precision(precision);
    let cst = ring.mul(ring.pow(c, k as u64), gamma_of_divided_power(ring, k as u64, b as u64));
    let mut out = &(&xpart * &rest_s).pow(k as u64) * &top_s;
    out = out.scale(cst);
    Ok(out)
}

/// `gamma_n(u)` in a divided-power carrier, via the addition law over the
/// terms of `u`. In an ordinary carrier `u^n / n!` is returned when `n!` is a
/// unit and an error otherwise.
pub fn divided_power(u: &PDSeries, n: u32) -> Result<PDSeries> {
    let spec = u.spec().clone();
    let prec = u.precision();
    let ring = u.coeff_ring();
    if ring.is_unit(u.constant_term()) {
        return Err(Error::SubstitutionOutsideIdeal { var: format!("{u}") });
    }
    if spec.t_kind() == TKind::Ordinary {
        let fact = (1..=n as u64).fold(1u64, |a, i| ring.mul(a, ring.reduce(i)));
        let inv = ring
            .inv(fact)
            .ok_or_else(|| Error::Unsupported(format!("gamma_{n} needs divided powers in an ordinary carrier")))?;
        return Ok(u.pow(n as u64).scale(inv));
    }
    let one = PDSeries::one(&spec).at_precision(prec);
    let mut g: Vec<PDSeries> = vec![one];
    g.extend((0..n).map(|_| PDSeries::zero(&spec).at_precision(prec)));
    for (m, c) in u.terms() {
        let gt: Vec<PDSeries> = (0..=n).map(|k| gamma_term(&spec, prec, m, c, k)).collect::<Result<_>>()?;
        let mut next = Vec::with_capacity(n as usize + 1);
        for k in 0..=n as usize {
            let mut acc = PDSeries::zero(&spec).at_precision(prec);
            for i in 0..=k {
                if g[i].is_zero() || gt[k - i].is_zero() {
                    continue;
                }
                acc = &acc + &(&g[i] * &gt[k - i]);
            }
            next.push(acc);
        }
        g = next;
    }
    Ok(g.pop().expect("n+1 entries"))
}

/// Images of the variables of a source spec inside a target spec.
#[derive(Clone, Debug)]
pub struct Substitution {
    pub target: SpecRef,
    pub geom: Vec<PDSeries>,
    pub t: Vec<PDSeries>,
}

impl Substitution {
    pub fn new(target: &SpecRef, geom: Vec<PDSeries>, t: Vec<PDSeries>) -> Result<Self> {
        for s in geom.iter().chain(&t) {
            if !VarSpec::compatible(s.spec(), target) {
                return Err(Error::VarSpecMismatch);
            }
        }
        Ok(Substitution { target: target.clone(), geom, t })
    }

    /// Geometric variables map to themselves (the target must carry the same
    /// geometric block); `T`-variables map to `t`.
    pub fn fixing_geometry(source: &SpecRef, target: &SpecRef, t: Vec<PDSeries>) -> Result<Self> {
        if source.geom() != target.geom() {
            return Err(Error::VarSpecMismatch);
        }
        let geom = (0..source.n_geom()).map(|i| PDSeries::x(target, i)).collect();
        Self::new(target, geom, t)
    }
}

/// Substitutes the images into `f`. Divided powers of `T`-images go through
/// [`divided_power`], so every such image must lie in `(p, T)`.
pub fn pd_substitute(f: &PDSeries, sub: &Substitution) -> Result<PDSeries> {
    let spec = f.spec();
    if sub.geom.len() != spec.n_geom() || sub.t.len() != spec.n_t() {
        return Err(Error::VarSpecMismatch);
    }
    let prec = sub.geom.iter().chain(&sub.t).map(|s| s.precision()).fold(f.precision(), u32::min);
    let mut xcache: HashMap<(usize, i64), PDSeries> = HashMap::new();
    let mut tcache: HashMap<(usize, u32), PDSeries> = HashMap::new();
    let mut out = PDSeries::zero(&sub.target).at_precision(prec);
    for (m, c) in f.terms() {
        let mut term = PDSeries::constant(&sub.target, c).at_precision(prec);
        for (i, &e) in m.x.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !xcache.contains_key(&(i, e)) {
                let v = sub.geom[i].at_precision(prec).pow_i64(e)?;
                xcache.insert((i, e), v);
            }
            term = &term * &xcache[&(i, e)];
        }
        for (j, &k) in m.t.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if !tcache.contains_key(&(j, k)) {
                let img = sub.t[j].at_precision(prec);
                let v = match spec.t_kind() {
                    TKind::Ordinary => img.pow(k as u64),
                    TKind::Divided => divided_power(&img, k).map_err(|e| match e {
                        Error::SubstitutionOutsideIdeal { .. } => {
                            Error::SubstitutionOutsideIdeal { var: spec.t_names()[j].clone() }
                        }
                        other => other,
                    })?,
                };
                tcache.insert((j, k), v);
            }
            term = &term * &tcache[&(j, k)];
        }
        out = &out + &term;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power_series::GeomVar;

    #[test]
    fn gamma_pi_values() {
        let r = Zpn::new(3, 3).unwrap();
        assert_eq!(gamma_pi(r, 0), 1);
        assert_eq!(gamma_pi(r, 1), 3);
        assert_eq!(gamma_pi(r, 2), 18);
        assert_eq!(r.mul(2, 18), 9);
        let r2 = Zpn::new(2, 4).unwrap();
        assert_eq!(gamma_pi(r2, 2), 2);
    }

    #[test]
    fn gamma_of_sum() {
        let r = Zpn::new(3, 3).unwrap();
        let s = VarSpec::t_only(r, 1, 2, TKind::Divided, 4).unwrap();
        let u = &PDSeries::t(&s, 0) + &PDSeries::t(&s, 1);
        let g = divided_power(&u, 2).unwrap();
        let expected = &(&PDSeries::t_pow(&s, 0, 2) + &(&PDSeries::t(&s, 0) * &PDSeries::t(&s, 1))) + &PDSeries::t_pow(&s, 1, 2);
        assert_eq!(g, expected);
    }

    #[test]
    fn substitute_pi_into_second_divided_power() {
        let r = Zpn::new(3, 3).unwrap();
        let src = VarSpec::t_only(r, 1, 1, TKind::Divided, 4).unwrap();
        let tgt = VarSpec::new(r, vec![], 1, vec![], TKind::Divided, 1).unwrap();
        let sub = Substitution::new(&tgt, vec![], vec![PDSeries::constant(&tgt, 3)]).unwrap();
        let f = PDSeries::t_pow(&src, 0, 2);
        let g = pd_substitute(&f, &sub).unwrap();
        assert_eq!(g, PDSeries::constant(&tgt, 18));
        assert_eq!(g.constant_term(), gamma_pi(r, 2));
    }

    #[test]
    fn substitute_zero_keeps_weight_zero_part() {
        let r = Zpn::new(3, 3).unwrap();
        let s = VarSpec::new(r, vec![GeomVar::polynomial("x")], 3, vec!["T".into()], TKind::Divided, 4).unwrap();
        let f = &(&PDSeries::x(&s, 0) + &PDSeries::t_pow(&s, 0, 2)) + &PDSeries::constant(&s, 5);
        let sub = Substitution::fixing_geometry(&s, &s, vec![PDSeries::zero(&s)]).unwrap();
        assert_eq!(pd_substitute(&f, &sub).unwrap(), &PDSeries::x(&s, 0) + &PDSeries::constant(&s, 5));
    }

    #[test]
    fn unit_image_is_rejected() {
        let r = Zpn::new(3, 3).unwrap();
        let s = VarSpec::t_only(r, 1, 1, TKind::Divided, 4).unwrap();
        let sub = Substitution::new(&s, vec![], vec![&PDSeries::one(&s) + &PDSeries::t(&s, 0)]).unwrap();
        let f = PDSeries::t_pow(&s, 0, 2);
        assert_eq!(pd_substitute(&f, &sub), Err(Error::SubstitutionOutsideIdeal { var: "T1".into() }));
    }

    #[test]
    fn divided_power_of_divided_power() {
        // gamma_2(T^[2]) = (4!/(2! 2! 2!)) T^[4] = 3 T^[4]
        let r = Zpn::new(5, 2).unwrap();
        let s = VarSpec::t_only(r, 1, 1, TKind::Divided, 6).unwrap();
        let g = divided_power(&PDSeries::t_pow(&s, 0, 2), 2).unwrap();
        assert_eq!(g, PDSeries::t_pow(&s, 0, 4).scale(3));
    }
}
