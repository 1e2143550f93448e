use crate::error::{Error, Result};
use crate::padic_linalg::{complex_cohomology, kernel, ElementaryDivisors, HowellBasis, Matrix, Zpn};
use std::collections::BTreeMap;

/// A bounded cochain complex of free `Z/p^N`-modules with labelled bases.
///
/// `diffs[k]` is the matrix of `d` from degree `first + k` to `first + k + 1`
/// acting on row vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainComplex {
    ring: Zpn,
    first: i64,
    labels: Vec<Vec<String>>,
    diffs: Vec<Matrix>,
    orders: Vec<Vec<u32>>,
}

impl ChainComplex {
    /// Builds the complex and asserts `d ∘ d = 0`.
    pub fn new(ring: Zpn, first: i64, labels: Vec<Vec<String>>, diffs: Vec<Matrix>) -> Result<Self> {
        assert_eq!(labels.len(), diffs.len() + 1, "one differential between consecutive degrees");
        for (k, d) in diffs.iter().enumerate() {
            assert_eq!((d.rows(), d.cols()), (labels[k].len(), labels[k + 1].len()), "differential shape");
        }
        for k in 1..diffs.len() {
            if !diffs[k - 1].mul(&diffs[k]).is_zero() {
                return Err(Error::SignConventionViolation(first + k as i64 - 1));
            }
        }
        let orders = labels.iter().map(|l| vec![ring.precision(); l.len()]).collect();
        Ok(ChainComplex { ring, first, labels, diffs, orders })
    }

    pub fn ring(&self) -> Zpn {
        self.ring
    }

    pub fn first_degree(&self) -> i64 {
        self.first
    }

    pub fn last_degree(&self) -> i64 {
        self.first + self.labels.len() as i64 - 1
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.index(degree).map_or(0, |k| self.labels[k].len())
    }

    pub fn labels(&self, degree: i64) -> &[String] {
        self.index(degree).map_or(&[], |k| &self.labels[k])
    }

    /// Matrix of `d` out of `degree` (empty outside the range).
    pub fn differential(&self, degree: i64) -> Matrix {
        match self.index(degree) {
            Some(k) if k < self.diffs.len() => self.diffs[k].clone(),
            _ => Matrix::zero(self.ring, self.dim(degree), self.dim(degree + 1)),
        }
    }

    fn index(&self, degree: i64) -> Option<usize> {
        let k = degree - self.first;
        (k >= 0 && (k as usize) < self.labels.len()).then_some(k as usize)
    }

    /// Cohomology in every degree of the range.
    pub fn cohomology(&self) -> Result<BTreeMap<i64, ElementaryDivisors>> {
        let dims: Vec<usize> = self.labels.iter().map(|l| l.len()).collect();
        let h = complex_cohomology(&self.diffs, &dims, self.ring)?;
        Ok(h.into_iter().enumerate().map(|(k, e)| (self.first + k as i64, e)).collect())
    }

    pub fn cohomology_at(&self, degree: i64) -> Result<ElementaryDivisors> {
        let ker = kernel(&self.differential(degree));
        let im = self.differential(degree - 1);
        crate::padic_linalg::subquotient(&ker, &im)
    }

    /// Replaces the basis module at `(degree, index)` by `Z/p^order`, as if
    /// that generator had been quotiented out partially.
    pub fn quotient_basis_element(&mut self, degree: i64, index: usize, order: u32) {
        let k = self.index(degree).expect("degree in range");
        self.orders[k][index] = order.min(self.ring.precision());
    }

    /// Windowed `π`-torsion-freeness: in each degree, every element killed by
    /// `π` is `p^(N-1)` times something.
    pub fn torsion_check(&self) -> Result<()> {
        let ring = self.ring;
        let n = ring.precision();
        for (k, orders) in self.orders.iter().enumerate() {
            let dim = orders.len();
            if dim == 0 {
                continue;
            }
            let mut rel = Matrix::zero(ring, dim, dim);
            for (j, &o) in orders.iter().enumerate() {
                rel.set(j, j, ring.p_pow(o));
            }
            let stacked = Matrix::identity(ring, dim).scale(ring.p()).vstack(&rel);
            let pre = kernel(&stacked).select_columns(0..dim);
            let allowed = HowellBasis::of(&Matrix::identity(ring, dim).scale(ring.p_pow(n - 1)).vstack(&rel));
            if let Some(i) = allowed.first_outside(&pre) {
                let row = pre.row(i);
                let j = row.iter().position(|&c| c % ring.p_pow(n - 1) != 0).unwrap_or(0);
                return Err(Error::TorsionWitness {
                    degree: (self.first + k as i64).max(0) as usize,
                    witness: format!("{} * {} is killed by p", row[j], self.labels[k][j]),
                });
            }
        }
        Ok(())
    }
}
