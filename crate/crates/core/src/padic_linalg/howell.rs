//! Howell normal form over `Z/p^N`.
//!
//! Over a local principal ideal ring the Howell form of a row span is the
//! echelon basis whose pivots are powers of `p`, whose entries above each
//! pivot are reduced below that pivot, and which is closed under the
//! annihilator condition: `p^(N-v) * row` is always reducible by the rows
//! underneath. The closure makes both the form unique and greedy membership
//! testing correct.

use std::collections::BTreeMap;

use super::{Matrix, Zpn};

/// Elimination row abstraction; dense and sparse storage run the same
/// algorithm and therefore give identical results.
pub(crate) trait Row: Clone {
    fn from_slice(xs: &[u64]) -> Self;
    fn get(&self, j: usize) -> u64;
    /// `self += a * other`
    fn axpy(&mut self, a: u64, other: &Self, ring: Zpn);
    fn scale(&mut self, a: u64, ring: Zpn);
    fn is_zero_below(&self, end: usize) -> bool;
    fn to_vec(&self, len: usize) -> Vec<u64>;
}

#[derive(Clone, Debug)]
pub(crate) struct DenseRow(Vec<u64>);

impl Row for DenseRow {
    fn from_slice(xs: &[u64]) -> Self {
        DenseRow(xs.to_vec())
    }
    fn get(&self, j: usize) -> u64 {
        self.0[j]
    }
    fn axpy(&mut self, a: u64, other: &Self, ring: Zpn) {
        if a == 0 {
            return;
        }
        for (x, &y) in self.0.iter_mut().zip(&other.0) {
            if y != 0 {
                *x = ring.add(*x, ring.mul(a, y));
            }
        }
    }
    fn scale(&mut self, a: u64, ring: Zpn) {
        for x in self.0.iter_mut() {
            *x = ring.mul(*x, a);
        }
    }
    fn is_zero_below(&self, end: usize) -> bool {
        self.0[..end].iter().all(|&x| x == 0)
    }
    fn to_vec(&self, _len: usize) -> Vec<u64> {
        self.0.clone()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct SparseRow(BTreeMap<usize, u64>);

impl Row for SparseRow {
    fn from_slice(xs: &[u64]) -> Self {
        SparseRow(xs.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, &x)| (j, x)).collect())
    }
    fn get(&self, j: usize) -> u64 {
        self.0.get(&j).copied().unwrap_or(0)
    }
    fn axpy(&mut self, a: u64, other: &Self, ring: Zpn) {
        if a == 0 {
            return;
        }
        for (&j, &y) in &other.0 {
            let v = ring.add(self.get(j), ring.mul(a, y));
            if v == 0 {
                self.0.remove(&j);
            } else {
                self.0.insert(j, v);
            }
        }
    }
    fn scale(&mut self, a: u64, ring: Zpn) {
        self.0 = self
            .0
            .iter()
            .map(|(&j, &x)| (j, ring.mul(x, a)))
            .filter(|&(_, x)| x != 0)
            .collect();
    }
    fn is_zero_below(&self, end: usize) -> bool {
        self.0.range(..end).next().is_none()
    }
    fn to_vec(&self, len: usize) -> Vec<u64> {
        let mut v = vec![0; len];
        for (&j, &x) in &self.0 {
            v[j] = x;
        }
        v
    }
}

/// Storage policy for elimination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinalgConfig {
    /// Matrices with density below this threshold are eliminated with
    /// sparse rows, the rest with dense rows.
    pub density_threshold: f64,
}

impl Default for LinalgConfig {
    fn default() -> Self {
        LinalgConfig { density_threshold: 0.25 }
    }
}

impl LinalgConfig {
    pub fn dense_only() -> Self {
        LinalgConfig { density_threshold: 0.0 }
    }
    pub fn sparse_only() -> Self {
        LinalgConfig { density_threshold: f64::INFINITY }
    }
}

/// Result of eliminating `[M | I]` on the columns of `M`.
pub(crate) struct Elimination {
    /// `(pivot column, pivot valuation, full augmented row)`
    pub pivots: Vec<(usize, u32, Vec<u64>)>,
    /// Augmented rows whose `M` part vanished; their identity part spans the
    /// left kernel of `M`.
    pub null_rows: Vec<Vec<u64>>,
}

pub(crate) fn eliminate(m: &Matrix, with_transform: bool, cfg: LinalgConfig) -> Elimination {
    if m.density() < cfg.density_threshold {
        eliminate_rows::<SparseRow>(m, with_transform)
    } else {
        eliminate_rows::<DenseRow>(m, with_transform)
    }
}

fn eliminate_rows<R: Row>(m: &Matrix, with_transform: bool) -> Elimination {
    let ring = m.ring();
    let cols = m.cols();
    let width = if with_transform { cols + m.rows() } else { cols };
    let mut pool: Vec<R> = (0..m.rows())
        .map(|i| {
            let mut v = m.row(i).to_vec();
            if with_transform {
                v.resize(width, 0);
                v[cols + i] = 1;
            }
            R::from_slice(&v)
        })
        .collect();

    let mut pivots: Vec<(usize, u32, R)> = Vec::new();
    for j in 0..cols {
        let mut best: Option<(usize, u32)> = None;
        for (i, r) in pool.iter().enumerate() {
            let e = r.get(j);
            if e == 0 {
                continue;
            }
            let v = ring.valuation(e);
            if best.map_or(true, |(_, bv)| v < bv) {
                best = Some((i, v));
                if v == 0 {
                    break;
                }
            }
        }
        let Some((bi, v)) = best else { continue };
        let mut piv = pool.remove(bi);
        let (_, u) = ring.split(piv.get(j));
        piv.scale(ring.inv(u).expect("unit part"), ring);
        debug_assert_eq!(piv.get(j), ring.p_pow(v));
        let pv = ring.p_pow(v);
        for r in pool.iter_mut() {
            let e = r.get(j);
            if e != 0 {
                let q = e / pv;
                r.axpy(ring.neg(q), &piv, ring);
                debug_assert_eq!(r.get(j), 0);
            }
        }
        if v > 0 {
            let mut ann = piv.clone();
            ann.scale(ring.p_pow(ring.precision() - v), ring);
            if !ann.is_zero_below(width) {
                pool.push(ann);
            }
        }
        pivots.push((j, v, piv));
    }

    // reduce entries above each pivot into [0, p^v)
    for k in 0..pivots.len() {
        let (col, v, _) = pivots[k];
        let pv = ring.p_pow(v);
        let (head, tail) = pivots.split_at_mut(k);
        let prow = &tail[0].2;
        for (_, _, r) in head.iter_mut() {
            let e = r.get(col);
            if e >= pv {
                r.axpy(ring.neg(e / pv), prow, ring);
            }
        }
    }

    Elimination {
        pivots: pivots.into_iter().map(|(c, v, r)| (c, v, r.to_vec(width))).collect(),
        null_rows: pool
            .into_iter()
            .filter(|r| !r.is_zero_below(width))
            .map(|r| r.to_vec(width))
            .collect(),
    }
}

/// A matrix in Howell form together with its pivot data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HowellBasis {
    rows: Matrix,
    pivots: Vec<(usize, u32)>,
}

impl HowellBasis {
    pub fn of(m: &Matrix) -> Self {
        Self::of_with(m, LinalgConfig::default())
    }

    pub fn of_with(m: &Matrix, cfg: LinalgConfig) -> Self {
        let e = eliminate(m, false, cfg);
        let pivots = e.pivots.iter().map(|&(c, v, _)| (c, v)).collect();
        let rows = Matrix::from_rows(m.ring(), m.cols(), e.pivots.into_iter().map(|(_, _, r)| r).collect());
        HowellBasis { rows, pivots }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.rows
    }

    pub fn into_matrix(self) -> Matrix {
        self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.rows() == 0
    }

    /// Reduces `x` against the basis; returns the remainder, which is zero
    /// exactly when `x` lies in the row span.
    pub fn reduce(&self, x: &[u64]) -> Vec<u64> {
        let ring = self.rows.ring();
        let mut x = x.to_vec();
        for (k, &(col, v)) in self.pivots.iter().enumerate() {
            let e = x[col];
            if e == 0 {
                continue;
            }
            let pv = ring.p_pow(v);
            if e % pv != 0 {
                continue;
            }
            let q = ring.neg(e / pv);
            for (xi, &b) in x.iter_mut().zip(self.rows.row(k)) {
                if b != 0 {
                    *xi = ring.add(*xi, ring.mul(q, b));
                }
            }
        }
        x
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        self.reduce(x).iter().all(|&e| e == 0)
    }

    /// Whether the row span of `m` is contained in this span.
    pub fn contains_all(&self, m: &Matrix) -> bool {
        (0..m.rows()).all(|i| self.contains(m.row(i)))
    }

    /// Index of the first row of `m` outside this span.
    pub fn first_outside(&self, m: &Matrix) -> Option<usize> {
        (0..m.rows()).find(|&i| !self.contains(m.row(i)))
    }

    /// `log_p` of the number of elements of the row span.
    pub fn log_order(&self) -> u32 {
        let n = self.rows.ring().precision();
        self.pivots.iter().map(|&(_, v)| n - v).sum()
    }
}

/// Howell form `H` of `m` together with a transform `U` with `U * m = H`.
pub fn howell_form(m: &Matrix) -> (Matrix, Matrix) {
    howell_form_with(m, LinalgConfig::default())
}

pub fn howell_form_with(m: &Matrix, cfg: LinalgConfig) -> (Matrix, Matrix) {
    let ring = m.ring();
    let e = eliminate(m, true, cfg);
    let cols = m.cols();
    let mut h = Vec::with_capacity(e.pivots.len());
    let mut u = Vec::with_capacity(e.pivots.len());
    for (_, _, r) in e.pivots {
        h.push(r[..cols].to_vec());
        u.push(r[cols..].to_vec());
    }
    (Matrix::from_rows(ring, cols, h), Matrix::from_rows(ring, m.rows(), u))
}

/// Some `x` with `x * a = b`, or `None` when `b` is outside the row span.
pub fn solve_left(a: &Matrix, b: &[u64]) -> Option<Vec<u64>> {
    let ring = a.ring();
    let (h, u) = howell_form(a);
    let mut rem: Vec<u64> = b.iter().map(|&e| ring.reduce(e)).collect();
    let mut x = vec![0u64; a.rows()];
    for k in 0..h.rows() {
        let row = h.row(k);
        let Some(col) = row.iter().position(|&e| e != 0) else { continue };
        let e = rem[col];
        if e == 0 {
            continue;
        }
        let (v, unit) = ring.split(row[col]);
        let Some(q) = ring.div_p_pow(e, v) else { continue };
        let q = ring.mul(q, ring.inv(unit).expect("unit part"));
        for (ri, &hb) in rem.iter_mut().zip(row) {
            *ri = ring.sub(*ri, ring.mul(q, hb));
        }
        for (xi, &ub) in x.iter_mut().zip(u.row(k)) {
            *xi = ring.add(*xi, ring.mul(q, ub));
        }
    }
    rem.iter().all(|&e| e == 0).then_some(x)
}

/// Howell basis of the left kernel `{x : x * m = 0}`.
pub fn kernel(m: &Matrix) -> Matrix {
    kernel_with(m, LinalgConfig::default())
}

pub fn kernel_with(m: &Matrix, cfg: LinalgConfig) -> Matrix {
    let ring = m.ring();
    let cols = m.cols();
    let e = eliminate(m, true, cfg);
    let gens: Vec<Vec<u64>> = e.null_rows.into_iter().map(|r| r[cols..].to_vec()).collect();
    let gens = Matrix::from_rows(ring, m.rows(), gens);
    HowellBasis::of_with(&gens, cfg).into_matrix()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_left_finds_preimages() {
        let r = Zpn::new(3, 3).unwrap();
        let a = Matrix::from_i64_rows(r, 3, &[vec![3, 1, 0], vec![0, 9, 2], vec![6, 2, 0]]);
        let b = a.apply(&[4, 5, 7]);
        let x = solve_left(&a, &b).unwrap();
        assert_eq!(a.apply(&x), b);
        assert!(solve_left(&a, &[1, 0, 0]).is_none());
    }

    #[test]
    fn identity_is_its_own_howell_form() {
        let r = Zpn::new(3, 2).unwrap();
        let id = Matrix::identity(r, 3);
        let (h, u) = howell_form(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn single_p_entry() {
        let r = Zpn::new(3, 2).unwrap();
        let m = Matrix::from_rows(r, 1, vec![vec![3]]);
        let (h, u) = howell_form(&m);
        assert_eq!(h, m);
        assert_eq!(u.mul(&m), h);
        // the submodule {0,3,6} of Z/9 is generated by 3 and nothing smaller
        let k = kernel(&m);
        assert_eq!(k, Matrix::from_rows(r, 1, vec![vec![3]]));
    }

    #[test]
    fn closure_row_is_added() {
        // span of (2, 1) over Z/4 contains 2*(2,1) = (0, 2)
        let r = Zpn::new(2, 2).unwrap();
        let m = Matrix::from_rows(r, 2, vec![vec![2, 1]]);
        let h = HowellBasis::of(&m);
        assert_eq!(h.len(), 2);
        assert!(h.contains(&[0, 2]));
        assert!(!h.contains(&[0, 1]));
        assert_eq!(h.log_order(), 2);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let r = Zpn::new(2, 3).unwrap();
        let m = Matrix::zero(r, 3, 2);
        assert_eq!(kernel(&m), Matrix::identity(r, 3));
    }

    #[test]
    fn unit_determinant_has_trivial_kernel() {
        let r = Zpn::new(3, 3).unwrap();
        let m = Matrix::from_i64_rows(r, 2, &[vec![1, 3], vec![5, 1]]);
        assert_eq!(kernel(&m).rows(), 0);
    }
}
