use std::fmt;

use crate::error::{Error, Result};

/// The coefficient ring `Z/p^N`, standing in for `Z_p` truncated at
/// `p`-adic precision `N` (with `pi = p`).
///
/// Elements are plain `u64` residues in `[0, p^N)`; all arithmetic goes
/// through this context. `p^N` is kept below `2^32` so products fit in `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Zpn {
    p: u64,
    n: u32,
    modulus: u64,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Zpn {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Config(format!("p = {p} is not prime")));
        }
        if n == 0 {
            return Err(Error::Config("precision N must be at least 1".into()));
        }
        let mut modulus: u64 = 1;
        for _ in 0..n {
            modulus = modulus
                .checked_mul(p)
                .filter(|&m| m < (1 << 32))
                .ok_or_else(|| Error::Config(format!("p^N = {p}^{n} exceeds 2^32")))?;
        }
        Ok(Zpn { p, n, modulus })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The precision `N`.
    #[inline]
    pub fn precision(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Same prime, lower precision. `k` is clamped to `1..=N`.
    pub fn with_precision(&self, k: u32) -> Zpn {
        let k = k.clamp(1, self.n);
        Zpn { p: self.p, n: k, modulus: self.p.pow(k) }
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.modulus
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    pub fn from_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    /// Symmetric representative in `(-p^N/2, p^N/2]`, for display.
    pub fn to_signed(&self, x: u64) -> i64 {
        let x = x % self.modulus;
        if x > self.modulus / 2 {
            x as i64 - self.modulus as i64
        } else {
            x as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.modulus
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.modulus;
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `p^k` in the ring; zero once `k >= N`.
    pub fn p_pow(&self, k: u32) -> u64 {
        if k >= self.n {
            0
        } else {
            self.p.pow(k)
        }
    }

    /// `p`-adic valuation, with `v(0) = N`.
    pub fn valuation(&self, a: u64) -> u32 {
        let mut a = a % self.modulus;
        if a == 0 {
            return self.n;
        }
        let mut v = 0;
        while a % self.p == 0 {
            a /= self.p;
            v += 1;
        }
        v
    }

    /// Splits `a = p^v * u` with `u` a unit. For `a = 0` returns `(N, 1)`.
    pub fn split(&self, a: u64) -> (u32, u64) {
        let v = self.valuation(a);
        if v == self.n {
            return (v, 1);
        }
        // u is only determined mod p^(N-v); any lift is a unit.
        let u = (a % self.modulus) / self.p.pow(v);
        (v, u)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    /// Inverse of a unit, `None` otherwise.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.modulus;
        if !self.is_unit(a) {
            return None;
        }
        // extended Euclid over i128
        let (mut r0, mut r1) = (self.modulus as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.from_i128(s0))
    }

    /// Exact quotient `a / p^k` when `v(a) >= k`, as a residue modulo
    /// `p^(N-k)` (returned as the canonical representative).
    pub fn div_p_pow(&self, a: u64, k: u32) -> Option<u64> {
        if k == 0 {
            return Some(a % self.modulus);
        }
        if self.valuation(a) < k {
            return None;
        }
        Some((a % self.modulus) / self.p.pow(k))
    }
}

impl fmt::Display for Zpn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}^{}", self.p, self.n)
    }
}

/// `v_p(k!)` by Legendre's formula.
pub fn factorial_valuation(p: u64, k: u64) -> u64 {
    let mut v = 0;
    let mut q = p;
    while q <= k {
        v += k / q;
        match q.checked_mul(p) {
            Some(next) => q = next,
            None => break,
        }
    }
    v
}

/// Exact binomial coefficient. Panics on overflow of `u128`, which does not
/// happen for the weights used here (`n <= 120`).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial overflow")
            / (i + 1) as u128;
    }
    acc
}
