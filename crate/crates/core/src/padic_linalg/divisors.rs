use std::fmt;

use super::howell::{kernel_with, HowellBasis, LinalgConfig};
use super::{Matrix, Zpn};
use crate::error::{Error, Result};

/// Structure of a finite `Z/p^N`-module as `(+)_i Z/p^(e_i)`.
///
/// Exponents are kept sorted descending and all lie in `1..=N`; summands with
/// `e = N` are the free part.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementaryDivisors {
    p: u64,
    precision: u32,
    exponents: Vec<u32>,
}

impl ElementaryDivisors {
    pub fn new(ring: Zpn, mut exponents: Vec<u32>) -> Self {
        exponents.retain(|&e| e > 0);
        for e in exponents.iter_mut() {
            *e = (*e).min(ring.precision());
        }
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        ElementaryDivisors { p: ring.p(), precision: ring.precision(), exponents }
    }

    pub fn zero(ring: Zpn) -> Self {
        Self::new(ring, Vec::new())
    }

    pub fn free(ring: Zpn, rank: usize) -> Self {
        Self::new(ring, vec![ring.precision(); rank])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn free_rank(&self) -> usize {
        self.exponents.iter().filter(|&&e| e == self.precision).count()
    }

    /// Exponents of the non-free summands.
    pub fn torsion(&self) -> Vec<u32> {
        self.exponents.iter().copied().filter(|&e| e < self.precision).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `log_p` of the module order.
    pub fn log_order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// Compact text form, e.g. `3,3,1` (empty module prints as `0`).
    pub fn code(&self) -> String {
        if self.exponents.is_empty() {
            "0".into()
        } else {
            self.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for ElementaryDivisors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .exponents
            .iter()
            .map(|&e| if e == 1 { format!("Z/{}", self.p) } else { format!("Z/{}^{}", self.p, e) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Valuations of the diagonal of a Smith form of `m` over `Z/p^N`
/// (zero diagonal entries omitted).
pub fn smith_valuations(m: &Matrix) -> Vec<u32> {
    let ring = m.ring();
    let n = ring.precision();
    let mut a: Vec<Vec<u64>> = m.row_vecs();
    let rows = m.rows();
    let cols = m.cols();
    let mut out = Vec::new();
    let mut r0 = 0;
    let mut c0 = 0;
    while r0 < rows && c0 < cols {
        let mut best: Option<(usize, usize, u32)> = None;
        'search: for (i, row) in a.iter().enumerate().skip(r0) {
            for (j, &e) in row.iter().enumerate().skip(c0) {
                if e == 0 {
                    continue;
                }
                let v = ring.valuation(e);
                if best.map_or(true, |(_, _, bv)| v < bv) {
                    best = Some((i, j, v));
                    if v == 0 {
                        break 'search;
                    }
                }
            }
        }
        let Some((bi, bj, v)) = best else { break };
        a.swap(r0, bi);
        for row in a.iter_mut() {
            row.swap(c0, bj);
        }
        let (_, u) = ring.split(a[r0][c0]);
        let uinv = ring.inv(u).expect("unit part");
        for x in a[r0].iter_mut() {
            *x = ring.mul(*x, uinv);
        }
        let pv = ring.p_pow(v);
        let pivot_row = a[r0].clone();
        for row in a.iter_mut().skip(r0 + 1) {
            let e = row[c0];
            if e != 0 {
                let q = ring.neg(e / pv);
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = ring.add(*x, ring.mul(q, y));
                }
            }
        }
        // column operations: the pivot row now only needs clearing to the right,
        // which does not touch any other row below (their pivot column is zero)
        for j in c0 + 1..cols {
            a[r0][j] = 0;
        }
        debug_assert!(v < n);
        out.push(v);
        r0 += 1;
        c0 += 1;
    }
    out
}

/// Elementary divisors of the module `Z^k / rowspan(rel)` reduced mod `p^N`,
/// where `rel` has `k` columns.
pub fn cokernel_divisors(rel: &Matrix) -> ElementaryDivisors {
    let ring = rel.ring();
    let n = ring.precision();
    let vals = smith_valuations(rel);
    let free = rel.cols() - vals.len();
    let mut exps: Vec<u32> = vals.into_iter().filter(|&v| v > 0).collect();
    exps.extend(std::iter::repeat(n).take(free));
    ElementaryDivisors::new(ring, exps)
}

/// Structure of `span(ker_basis) / span(im_basis)`.
pub fn subquotient(ker_basis: &Matrix, im_basis: &Matrix) -> Result<ElementaryDivisors> {
    subquotient_with(ker_basis, im_basis, LinalgConfig::default())
}

pub fn subquotient_with(
    ker_basis: &Matrix,
    im_basis: &Matrix,
    cfg: LinalgConfig,
) -> Result<ElementaryDivisors> {
    let ring = ker_basis.ring();
    assert_eq!(ker_basis.cols(), im_basis.cols(), "ambient dimension mismatch");
    let hk = HowellBasis::of_with(ker_basis, cfg);
    if let Some(i) = hk.first_outside(im_basis) {
        return Err(Error::ContainmentViolation { row: i });
    }
    let k = hk.matrix();
    let kdim = k.rows();
    if kdim == 0 {
        return Ok(ElementaryDivisors::zero(ring));
    }
    // relations among the generators of ker, modulo im
    let stacked = k.vstack(im_basis);
    let rel = kernel_with(&stacked, cfg).select_columns(0..kdim);
    Ok(cokernel_divisors(&rel))
}

/// Cohomology of a cochain complex given by its differentials `d_q : C^q -> C^(q+1)`
/// (row convention). Returns one entry per position `0..=len`.
pub fn complex_cohomology(diffs: &[Matrix], dims: &[usize], ring: Zpn) -> Result<Vec<ElementaryDivisors>> {
    assert_eq!(dims.len(), diffs.len() + 1);
    let mut out = Vec::with_capacity(dims.len());
    for q in 0..dims.len() {
        let ker = if q < diffs.len() {
            super::howell::kernel(&diffs[q])
        } else {
            Matrix::identity(ring, dims[q])
        };
        let im = if q > 0 { diffs[q - 1].clone() } else { Matrix::zero(ring, 0, dims[q]) };
        out.push(subquotient(&ker, &im)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_quotient() {
        let r = Zpn::new(3, 2).unwrap();
        let ker = Matrix::identity(r, 1);
        let im = Matrix::zero(r, 0, 1);
        let d = subquotient(&ker, &im).unwrap();
        assert_eq!(d.exponents(), &[2]);
        assert_eq!(d.free_rank(), 1);
    }

    #[test]
    fn multiplication_by_p_complex() {
        // 0 -> Z/9 --3--> Z/9 -> 0
        let r = Zpn::new(3, 2).unwrap();
        let d = Matrix::from_rows(r, 1, vec![vec![3]]);
        let h = complex_cohomology(&[d], &[1, 1], r).unwrap();
        assert_eq!(h[0].exponents(), &[1]);
        assert_eq!(h[1].exponents(), &[1]);
    }

    #[test]
    fn equal_spans_give_zero() {
        let r = Zpn::new(2, 3).unwrap();
        let m = Matrix::from_i64_rows(r, 2, &[vec![2, 1], vec![0, 4]]);
        assert!(subquotient(&m, &m).unwrap().is_zero());
    }

    #[test]
    fn containment_violation_is_reported() {
        let r = Zpn::new(2, 2).unwrap();
        let ker = Matrix::from_rows(r, 2, vec![vec![1, 0]]);
        let im = Matrix::from_rows(r, 2, vec![vec![0, 1]]);
        assert!(matches!(subquotient(&ker, &im), Err(Error::ContainmentViolation { .. })));
    }

    #[test]
    fn smith_of_diagonal() {
        let r = Zpn::new(2, 3).unwrap();
        let m = Matrix::from_i64_rows(r, 3, &[vec![4, 0, 0], vec![0, 2, 0], vec![0, 0, 0]]);
        let d = cokernel_divisors(&m);
        assert_eq!(d.exponents(), &[3, 2, 1]);
    }
}
