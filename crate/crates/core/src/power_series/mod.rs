//! Truncated series over `Z/p^N` in geometric variables (polynomial or
//! Laurent, exponent window `E`) and `T`-variables that are either ordinary
//! power-series variables or divided-power variables `T^[k]`, with total
//! `T`-weight capped at `D`.
//!
//! Truncation: products drop monomials that leave the exponent window or
//! exceed the weight cap. Everything else is exact modulo `p^N`.

mod substitute;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::padic_linalg::{binomial, Zpn};

pub use substitute::{divided_power, gamma_pi, pd_substitute, Substitution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Polynomial,
    Laurent,
}

/// How the `T`-variables multiply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TKind {
    /// `T^a * T^b = T^(a+b)`
    Ordinary,
    /// `T^[a] * T^[b] = binom(a+b, a) T^[a+b]`
    Divided,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeomVar {
    pub name: String,
    pub kind: VarKind,
}

impl GeomVar {
    pub fn polynomial(name: &str) -> Self {
        GeomVar { name: name.into(), kind: VarKind::Polynomial }
    }
    pub fn laurent(name: &str) -> Self {
        GeomVar { name: name.into(), kind: VarKind::Laurent }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSpec {
    ring: Zpn,
    geom: Vec<GeomVar>,
    window: i64,
    t_names: Vec<String>,
    t_kind: TKind,
    weight_cap: u32,
    filtration: Option<u32>,
}

pub type SpecRef = Arc<VarSpec>;

impl VarSpec {
    pub fn new(
        ring: Zpn,
        geom: Vec<GeomVar>,
        window: i64,
        t_names: Vec<String>,
        t_kind: TKind,
        weight_cap: u32,
    ) -> Result<SpecRef> {
        if window < 1 {
            return Err(Error::Config("exponent window E must be at least 1".into()));
        }
        if weight_cap < 1 {
            return Err(Error::Config("weight cap D must be at least 1".into()));
        }
        let mut names: Vec<&str> = geom.iter().map(|g| g.name.as_str()).chain(t_names.iter().map(|s| s.as_str())).collect();
        let total = names.len();
        names.sort_unstable();
        names.dedup();
        if names.len() != total {
            return Err(Error::Config("variable names must be unique".into()));
        }
        Ok(Arc::new(VarSpec { ring, geom, window, t_names, t_kind, weight_cap, filtration: None }))
    }

    /// `T_1..T_m` (or `T_0..T_m` when `first = 0`) with no geometric variables.
    pub fn t_only(ring: Zpn, first: usize, m: usize, t_kind: TKind, weight_cap: u32) -> Result<SpecRef> {
        let names = (first..=m).map(|i| format!("T{i}")).collect();
        Self::new(ring, vec![], 1, names, t_kind, weight_cap)
    }

    pub fn ring(&self) -> Zpn {
        self.ring
    }
    pub fn geom(&self) -> &[GeomVar] {
        &self.geom
    }
    pub fn n_geom(&self) -> usize {
        self.geom.len()
    }
    pub fn n_t(&self) -> usize {
        self.t_names.len()
    }
    pub fn t_names(&self) -> &[String] {
        &self.t_names
    }
    pub fn t_kind(&self) -> TKind {
        self.t_kind
    }
    pub fn window(&self) -> i64 {
        self.window
    }
    pub fn weight_cap(&self) -> u32 {
        self.weight_cap
    }

    /// Same geometric variables, different `T` block.
    pub fn with_t(&self, t_names: Vec<String>, t_kind: TKind, weight_cap: u32) -> Result<SpecRef> {
        Self::new(self.ring, self.geom.clone(), self.window, t_names, t_kind, weight_cap)
    }

    /// The quotient by `(p, T)^k` instead of the degree window: monomials of
    /// weight `>= k` vanish and a weight-`w` coefficient lives mod `p^(k-w)`.
    /// Unlike the degree window this is an ideal, stable under products and
    /// under substitutions sending `T` into `(p, T)`.
    pub fn filtered(&self, k: u32) -> Result<SpecRef> {
        if k < 1 {
            return Err(Error::Config("filtration level must be at least 1".into()));
        }
        Ok(Arc::new(VarSpec { weight_cap: k - 1, filtration: Some(k), ..self.clone() }))
    }

    pub fn filtration(&self) -> Option<u32> {
        self.filtration
    }

    /// Precision available for the coefficient of `m` in an element of
    /// overall precision `prec`.
    pub fn coeff_precision(&self, m: &Monomial, prec: u32) -> u32 {
        match self.filtration {
            Some(k) => prec.min(k.saturating_sub(m.weight())),
            None => prec,
        }
    }

    pub fn with_ring(&self, ring: Zpn) -> SpecRef {
        Arc::new(VarSpec { ring, ..self.clone() })
    }

    pub fn geom_index(&self, name: &str) -> Option<usize> {
        self.geom.iter().position(|g| g.name == name)
    }

    pub fn t_index(&self, name: &str) -> Option<usize> {
        self.t_names.iter().position(|g| g == name)
    }

    fn exponent_ok(&self, i: usize, e: i64) -> bool {
        match self.geom[i].kind {
            VarKind::Polynomial => (0..=self.window).contains(&e),
            VarKind::Laurent => (-self.window..=self.window).contains(&e),
        }
    }

    pub fn admits(&self, m: &Monomial) -> bool {
        m.x.len() == self.geom.len()
            && m.t.len() == self.t_names.len()
            && m.weight() <= self.weight_cap
            && m.x.iter().enumerate().all(|(i, &e)| self.exponent_ok(i, e))
    }

    pub fn compatible(a: &SpecRef, b: &SpecRef) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (g, &e) in self.geom.iter().zip(&m.x) {
            match e {
                0 => {}
                1 => parts.push(g.name.clone()),
                _ => parts.push(format!("{}^{}", g.name, e)),
            }
        }
        for (name, &k) in self.t_names.iter().zip(&m.t) {
            match (k, self.t_kind) {
                (0, _) => {}
                (1, _) => parts.push(name.clone()),
                (_, TKind::Ordinary) => parts.push(format!("{name}^{k}")),
                (_, TKind::Divided) => parts.push(format!("{name}^[{k}]")),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Exponent vector: geometric exponents `x` and `T`-exponents `t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub x: Vec<i64>,
    pub t: Vec<u32>,
}

impl Monomial {
    pub fn one(nx: usize, nt: usize) -> Self {
        Monomial { x: vec![0; nx], t: vec![0; nt] }
    }

    pub fn weight(&self) -> u32 {
        self.t.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.x.iter().all(|&e| e == 0) && self.t.iter().all(|&k| k == 0)
    }
}

/// Element of a truncated series ring. Never stores zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PDSeries {
    spec: SpecRef,
    precision: u32,
    terms: BTreeMap<Monomial, u64>,
}

impl PDSeries {
    pub fn zero(spec: &SpecRef) -> Self {
        PDSeries { spec: spec.clone(), precision: spec.ring.precision(), terms: BTreeMap::new() }
    }

    pub fn constant(spec: &SpecRef, c: u64) -> Self {
        Self::monomial(spec, Monomial::one(spec.n_geom(), spec.n_t()), c)
    }

    pub fn constant_i64(spec: &SpecRef, c: i64) -> Self {
        Self::constant(spec, spec.ring.from_i64(c))
    }

    pub fn one(spec: &SpecRef) -> Self {
        Self::constant(spec, 1)
    }

    pub fn monomial(spec: &SpecRef, m: Monomial, c: u64) -> Self {
        let mut s = Self::zero(spec);
        s.add_term(m, c);
        s
    }

    /// The geometric variable `x_i`.
    pub fn x(spec: &SpecRef, i: usize) -> Self {
        let mut m = Monomial::one(spec.n_geom(), spec.n_t());
        m.x[i] = 1;
        Self::monomial(spec, m, 1)
    }

    /// `x_i^e`, with negative `e` allowed for Laurent variables.
    pub fn x_pow(spec: &SpecRef, i: usize, e: i64) -> Self {
        let mut m = Monomial::one(spec.n_geom(), spec.n_t());
        m.x[i] = e;
        Self::monomial(spec, m, 1)
    }

    /// The `T`-variable of index `j` (first power / first divided power).
    pub fn t(spec: &SpecRef, j: usize) -> Self {
        Self::t_pow(spec, j, 1)
    }

    /// `T_j^k` or `T_j^[k]` depending on the spec.
    pub fn t_pow(spec: &SpecRef, j: usize, k: u32) -> Self {
        let mut m = Monomial::one(spec.n_geom(), spec.n_t());
        m.t[j] = k;
        Self::monomial(spec, m, 1)
    }

    pub fn from_terms(spec: &SpecRef, terms: impl IntoIterator<Item = (Monomial, u64)>) -> Self {
        let mut s = Self::zero(spec);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn spec(&self) -> &SpecRef {
        &self.spec
    }

    /// Effective `p`-adic precision of the coefficients.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Coefficient ring at this element's precision.
    pub fn coeff_ring(&self) -> Zpn {
        self.spec.ring.with_precision(self.precision)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u64 {
        self.coeff(&Monomial::one(self.spec.n_geom(), self.spec.n_t()))
    }

    /// Stores `c` as the coefficient of `m` after reduction.
    fn put(&mut self, m: Monomial, c: u64) {
        let k = self.spec.coeff_precision(&m, self.precision);
        if k == 0 {
            return;
        }
        let c = c % self.spec.ring.with_precision(k).modulus();
        if c != 0 {
            self.terms.insert(m, c);
        }
    }

    /// Adds `c * m`, discarding monomials outside the spec's windows.
    pub fn add_term(&mut self, m: Monomial, c: u64) {
        if !self.spec.admits(&m) {
            return;
        }
        let k = self.spec.coeff_precision(&m, self.precision);
        if k == 0 {
            return;
        }
        let r = self.spec.ring.with_precision(k);
        let c = r.reduce(c);
        if c == 0 {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = r.add(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if VarSpec::compatible(&self.spec, &other.spec) {
            Ok(())
        } else {
            Err(Error::VarSpecMismatch)
        }
    }

    /// Same element at precision `k <= current`, reducing coefficients.
    pub fn at_precision(&self, k: u32) -> Self {
        let k = k.min(self.precision).max(1);
        let r = self.spec.ring.with_precision(k);
        let mut out = PDSeries { spec: self.spec.clone(), precision: k, terms: BTreeMap::new() };
        for (m, &c) in &self.terms {
            out.put(m.clone(), r.reduce(c));
        }
        out
    }

    /// Reinterprets the coefficients at full precision `N` using the
    /// canonical representatives. Any lift is valid; this one is deterministic.
    pub fn lift_to_full(&self) -> Self {
        PDSeries { spec: self.spec.clone(), precision: self.spec.ring.precision(), terms: self.terms.clone() }
    }

    /// Moves the element into another spec with the same variables
    /// (e.g. a different coefficient precision). Out-of-window terms drop.
    pub fn respec(&self, spec: &SpecRef) -> Self {
        let mut out = Self::zero(spec);
        out.precision = self.precision.min(spec.ring.precision());
        for (m, &c) in &self.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let prec = self.precision.min(other.precision);
        let mut out = self.at_precision(prec);
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> Self {
        let r = self.coeff_ring();
        let mut out = PDSeries { spec: self.spec.clone(), precision: self.precision, terms: BTreeMap::new() };
        for (m, &c) in &self.terms {
            out.put(m.clone(), r.neg(c));
        }
        out
    }

    pub fn scale(&self, c: u64) -> Self {
        let r = self.coeff_ring();
        let mut out = PDSeries { spec: self.spec.clone(), precision: self.precision, terms: BTreeMap::new() };
        for (m, &a) in &self.terms {
            out.put(m.clone(), r.mul(a, r.reduce(c)));
        }
        out
    }

    /// Coefficient attached to the product of two `T`-monomials.
    fn t_product_factor(&self, a: &[u32], b: &[u32]) -> u64 {
        match self.spec.t_kind {
            TKind::Ordinary => 1,
            TKind::Divided => {
                let r = self.coeff_ring();
                a.iter()
                    .zip(b)
                    .filter(|(&x, &y)| x > 0 && y > 0)
                    .fold(1, |acc, (&x, &y)| {
                        let c = binomial((x + y) as u64, x as u64) % r.modulus() as u128;
                        r.mul(acc, c as u64)
                    })
            }
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let prec = self.precision.min(other.precision);
        let r = self.spec.ring.with_precision(prec);
        let cap = self.spec.weight_cap;
        let mut out = PDSeries { spec: self.spec.clone(), precision: prec, terms: BTreeMap::new() };
        for (ma, &ca) in &self.terms {
            let wa = ma.weight();
            for (mb, &cb) in &other.terms {
                if wa + mb.weight() > cap {
                    continue;
                }
                let x: Vec<i64> = ma.x.iter().zip(&mb.x).map(|(a, b)| a + b).collect();
                let t: Vec<u32> = ma.t.iter().zip(&mb.t).map(|(a, b)| a + b).collect();
                let f = self.t_product_factor(&ma.t, &mb.t);
                let c = r.mul(r.mul(ca, cb), f);
                if c != 0 {
                    out.add_term(Monomial { x, t }, c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = PDSeries::one(&self.spec).at_precision(self.precision);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Signed power; negative exponents use [`PDSeries::inverse`].
    pub fn pow_i64(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs()))
        }
    }

    /// Exact division by a scalar `c`: every coefficient must have valuation
    /// at least `v(c)`; the result carries precision `N - v(c)`.
    pub fn divide_exact(&self, c: u64) -> Result<Self> {
        let r = self.coeff_ring();
        let c = r.reduce(c);
        if c == 0 {
            return Err(Error::NotDivisible { monomial: "division by zero".into() });
        }
        let (v, u) = r.split(c);
        if v >= self.precision {
            return Err(Error::PrecisionExhausted(format!("dividing by p^{v} at precision {}", self.precision)));
        }
        let new_prec = self.precision - v;
        let nr = self.spec.ring.with_precision(new_prec);
        let uinv = nr.inv(u).expect("unit");
        let mut out = PDSeries { spec: self.spec.clone(), precision: new_prec, terms: BTreeMap::new() };
        for (m, &a) in &self.terms {
            let q = r.div_p_pow(a, v).ok_or_else(|| Error::NotDivisible { monomial: self.spec.format_monomial(m) })?;
            out.put(m.clone(), nr.mul(nr.reduce(q), uinv));
        }
        Ok(out)
    }

    /// Reduction of the coefficients mod `p`.
    pub fn reduce_mod_p(&self) -> Self {
        self.at_precision(1)
    }

    /// Terms of `T`-weight zero.
    pub fn t_free_part(&self) -> Self {
        let mut out = PDSeries { spec: self.spec.clone(), precision: self.precision, terms: BTreeMap::new() };
        for (m, &c) in &self.terms {
            if m.weight() == 0 {
                out.terms.insert(m.clone(), c);
            }
        }
        out
    }

    /// Weight-zero terms keyed by their geometric exponents, for comparing
    /// `T`-free parts across carriers with different `T`-blocks.
    pub fn geometric_terms(&self) -> BTreeMap<Vec<i64>, u64> {
        self.terms.iter().filter(|(m, _)| m.weight() == 0).map(|(m, &c)| (m.x.clone(), c)).collect()
    }

    /// Smallest `T`-weight among the terms (`None` for zero).
    pub fn t_order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.weight()).min()
    }

    /// Largest total `T`-degree among the terms.
    pub fn t_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.weight()).max().unwrap_or(0)
    }

    /// Derivative in the geometric variable `i`.
    pub fn d_geom(&self, i: usize) -> Self {
        let r = self.coeff_ring();
        let mut out = PDSeries { spec: self.spec.clone(), precision: self.precision, terms: BTreeMap::new() };
        for (m, &c) in &self.terms {
            let e = m.x[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.x[i] -= 1;
            out.add_term(m2, r.mul(c, r.from_i64(e)));
        }
        out
    }

    /// Derivative in the `T`-variable `j`: `T^[k] -> T^[k-1]` for divided
    /// powers, `T^k -> k T^(k-1)` for ordinary ones.
    pub fn d_t(&self, j: usize) -> Self {
        let r = self.coeff_ring();
        let mut out = PDSeries { spec: self.spec.clone(), precision: self.precision, terms: BTreeMap::new() };
        for (m, &c) in &self.terms {
            let k = m.t[j];
            if k == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.t[j] -= 1;
            let f = match self.spec.t_kind {
                TKind::Divided => 1,
                TKind::Ordinary => k as u64,
            };
            out.add_term(m2, r.mul(c, f));
        }
        out
    }

    /// Multiplicative inverse. The element must reduce modulo `(p, T)` to a
    /// single unit monomial (a constant, or a power of a Laurent variable).
    pub fn inverse(&self) -> Result<Self> {
        let r = self.coeff_ring();
        let leading: Vec<(&Monomial, u64)> =
            self.terms.iter().filter(|(m, &c)| m.weight() == 0 && r.is_unit(c)).map(|(m, &c)| (m, c)).collect();
        if leading.len() != 1 {
            return Err(Error::Unsupported(format!("{self} is not a unit of the truncated carrier")));
        }
        let (lm, lc) = leading[0];
        for (i, &e) in lm.x.iter().enumerate() {
            if e != 0 && self.spec.geom[i].kind == VarKind::Polynomial {
                return Err(Error::Unsupported(format!("{self} is not a unit of the truncated carrier")));
            }
        }
        let mut inv_m = lm.clone();
        for e in inv_m.x.iter_mut() {
            *e = -*e;
        }
        let mut w = PDSeries::monomial(&self.spec, inv_m, r.inv(lc).expect("unit")).at_precision(self.precision);
        let one = PDSeries::one(&self.spec).at_precision(self.precision);
        for _ in 0..64 {
            let uw = self * &w;
            if uw == one {
                return Ok(w);
            }
            let err = &one - &uw;
            w = &w + &(&w * &err);
        }
        Err(Error::PrecisionExhausted(format!("inverse of {self} does not close within the exponent window")))
    }
}

impl fmt::Display for PDSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let r = self.coeff_ring();
        let mut first = true;
        for (m, &c) in &self.terms {
            let c = r.to_signed(c);
            let sign = if c < 0 { "-" } else { "+" };
            let mag = c.unsigned_abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", self.spec.format_monomial(m))?;
            } else {
                write!(f, "{mag}*{}", self.spec.format_monomial(m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PDSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PDSeries[{} prec {}]({})", self.spec.ring, self.precision, self)
    }
}

impl Add for &PDSeries {
    type Output = PDSeries;
    fn add(self, rhs: &PDSeries) -> PDSeries {
        self.try_add(rhs).expect("variable spec mismatch")
    }
}

impl Sub for &PDSeries {
    type Output = PDSeries;
    fn sub(self, rhs: &PDSeries) -> PDSeries {
        self.try_sub(rhs).expect("variable spec mismatch")
    }
}

impl Mul for &PDSeries {
    type Output = PDSeries;
    fn mul(self, rhs: &PDSeries) -> PDSeries {
        self.try_mul(rhs).expect("variable spec mismatch")
    }
}

impl Neg for &PDSeries {
    type Output = PDSeries;
    fn neg(self) -> PDSeries {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pd_spec(p: u64, n: u32, d: u32) -> SpecRef {
        VarSpec::new(Zpn::new(p, n).unwrap(), vec![GeomVar::polynomial("x")], 4, vec!["T".into()], TKind::Divided, d)
            .unwrap()
    }

    #[test]
    fn divided_power_product() {
        let s = pd_spec(3, 3, 4);
        let t = PDSeries::t(&s, 0);
        assert_eq!(&t * &t, PDSeries::t_pow(&s, 0, 2).scale(2));
    }

    #[test]
    fn difference_of_squares() {
        let s = pd_spec(3, 3, 4);
        let one = PDSeries::one(&s);
        let x = PDSeries::x(&s, 0);
        let prod = &(&one + &x) * &(&one - &x);
        assert_eq!(prod, &one - &x.pow(2));
    }

    #[test]
    fn weight_cap_discards() {
        let s = pd_spec(3, 3, 2);
        let t1 = PDSeries::t(&s, 0);
        let t2 = PDSeries::t_pow(&s, 0, 2);
        assert!((&t1 * &t2).is_zero());
    }

    #[test]
    fn exact_division_lowers_precision() {
        let s = pd_spec(3, 3, 4);
        let px = PDSeries::x(&s, 0).scale(3);
        let q = px.divide_exact(3).unwrap();
        assert_eq!(q.precision(), 2);
        assert_eq!(q, PDSeries::x(&s, 0).at_precision(2));

        let f = &PDSeries::constant(&s, 9) + &PDSeries::t(&s, 0).scale(3);
        let g = f.divide_exact(3).unwrap();
        assert_eq!(g, (&PDSeries::constant(&s, 3) + &PDSeries::t(&s, 0)).at_precision(2));

        let bad = &PDSeries::one(&s) + &PDSeries::x(&s, 0).scale(3);
        match bad.divide_exact(3) {
            Err(Error::NotDivisible { monomial }) => assert_eq!(monomial, "1"),
            other => panic!("expected NotDivisible, got {other:?}"),
        }
    }

    #[test]
    fn mismatched_specs_are_rejected() {
        let a = PDSeries::one(&pd_spec(3, 3, 4));
        let b = PDSeries::one(&pd_spec(3, 3, 5));
        assert_eq!(a.try_mul(&b), Err(Error::VarSpecMismatch));
    }

    #[test]
    fn laurent_inverse() {
        let r = Zpn::new(3, 3).unwrap();
        let s = VarSpec::new(r, vec![GeomVar::laurent("x")], 6, vec![], TKind::Ordinary, 1).unwrap();
        let u = PDSeries::x(&s, 0).scale(4); // x(1+p)
        let w = u.inverse().unwrap();
        assert_eq!(&u * &w, PDSeries::one(&s));
        // (1+3)^-1 mod 27 = 7 since 4*7 = 28
        assert_eq!(w, PDSeries::x_pow(&s, 0, -1).scale(7));
        assert!(PDSeries::x(&s, 0).scale(3).inverse().is_err());
    }
}
