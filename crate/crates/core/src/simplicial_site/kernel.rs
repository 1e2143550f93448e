use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{Site, Variant};
use crate::error::{Error, Result};
use crate::padic_linalg::{kernel, smith_valuations, HowellBasis, Matrix, Zpn};
use crate::power_series::{Monomial, PDSeries, SpecRef};

/// Monomials of a `T`-only carrier with total degree `<= d`, in a fixed order.
#[derive(Clone, Debug)]
pub struct WindowBasis {
    spec: SpecRef,
    monomials: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
}

impl WindowBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn element(&self, k: usize) -> PDSeries {
        PDSeries::monomial(&self.spec, self.monomials[k].clone(), 1)
    }

    /// Coordinates of `f`; panics if `f` leaves the window.
    pub fn coords(&self, f: &PDSeries) -> Vec<u64> {
        let mut v = vec![0; self.len()];
        for (m, c) in f.terms() {
            let k = *self.index.get(m).unwrap_or_else(|| panic!("{m:?} outside the window"));
            v[k] = c;
        }
        v
    }

    pub fn series(&self, coords: &[u64]) -> PDSeries {
        PDSeries::from_terms(&self.spec, self.monomials.iter().cloned().zip(coords.iter().copied()))
    }
}

/// Basis of the degree-`<= d` window of a carrier without geometric variables.
pub fn window_basis(spec: &SpecRef, d: u32) -> WindowBasis {
    assert_eq!(spec.n_geom(), 0, "window bases are for T-only carriers");
    let n = spec.n_t();
    let mut monomials = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(j: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if j == cur.len() {
            out.push(Monomial { x: vec![], t: cur.clone() });
            return;
        }
        for k in 0..=left {
            cur[j] = k;
            rec(j + 1, left - k, cur, out);
        }
        cur[j] = 0;
    }
    rec(0, d, &mut cur, &mut monomials);
    monomials.sort_by(|a, b| a.weight().cmp(&b.weight()).then(a.cmp(b)));
    let index = monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    WindowBasis { spec: spec.clone(), monomials, index }
}

/// The faces of a level-`m` element and its reduction mod `(π, T)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryData {
    pub faces: Vec<PDSeries>,
    pub base: PDSeries,
}

/// `f -> (∂_0 f, ..., ∂_m f; f mod (π, T))` for `f ∈ RΔ^π_m`.
pub fn boundary_restriction(site: &Site, m: usize, f: &PDSeries) -> BoundaryData {
    assert!(m >= 1);
    let faces = (0..=m).map(|i| site.apply_face(m, i, Variant::Pi, f)).collect();
    BoundaryData { faces, base: site.augmentation(f, Variant::Pi) }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelStatus {
    Verified,
    /// The window is too small to contain `T_0 ⋯ T_m`.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelReport {
    pub m: usize,
    pub window_dim: usize,
    /// `log_p` of the order of the kernel inside the window.
    pub kernel_log_order: u32,
    pub status: KernelStatus,
}

/// Largest precision `L` with `p^L < 2^32`.
fn max_precision(p: u64) -> u32 {
    let mut l = 1;
    while (p as u128).pow(l + 1) < 1u128 << 32 {
        l += 1;
    }
    l
}

/// Checks on the degree-`<= D` window that the kernel of the boundary
/// restriction is exactly the ideal `(T_0 ⋯ T_m)`.
///
/// The kernel is the one of the map over `Z_p`, reduced mod `p^N`. Face
/// tuples reduced mod `p^N` have extra `π`-torsion (at `N = 2`, `p = 3` the
/// element `3 T_1` has faces `(9, 0) = 0`), so the face matrix is evaluated at
/// precision `N + A`, where `p^A` is its largest elementary divisor; at that
/// precision the spurious kernel vectors all vanish mod `p^N`.
pub fn verify_boundary_kernel(site: &Site, m: usize) -> Result<KernelReport> {
    let ring = site.ring();
    let n = ring.precision();
    let d = site.cap();
    let spec = site.level(m, Variant::Pi);
    let src = window_basis(spec, d);
    let face_basis = window_basis(site.level(m - 1, Variant::Pi), d);
    let width = (m + 1) * face_basis.len();

    let lmax = max_precision(ring.p());
    let wide = Zpn::new(ring.p(), lmax)?;
    let wide_site = Site::new(wide, d)?;
    let wide_spec = wide_site.level(m, Variant::Pi);
    let wide_face = window_basis(wide_site.level(m - 1, Variant::Pi), d);
    let rows: Vec<Vec<u64>> = src
        .monomials()
        .par_iter()
        .map(|mono| {
            let f = PDSeries::monomial(wide_spec, mono.clone(), 1);
            let mut row = Vec::with_capacity(width);
            for i in 0..=m {
                row.extend(wide_face.coords(&wide_site.apply_face(m, i, Variant::Pi, &f)));
            }
            row
        })
        .collect();
    let faces_wide = Matrix::from_rows(wide, width, rows.clone());
    let a = smith_valuations(&faces_wide).into_iter().max().unwrap_or(0);
    if a + n > lmax {
        return Err(Error::Config(format!("face matrix has divisor p^{a}; precision {n} + {a} exceeds the word size")));
    }
    let lifted = Zpn::new(ring.p(), n + a)?;
    let ker_lifted = kernel(&Matrix::from_rows(lifted, width, rows));
    let ker = Matrix::from_rows(ring, src.len(), ker_lifted.row_vecs());
    let ker_basis = HowellBasis::of(&ker);
    if d < m as u32 + 1 {
        return Ok(KernelReport {
            m,
            window_dim: src.len(),
            kernel_log_order: ker_basis.log_order(),
            status: KernelStatus::Inconclusive,
        });
    }
    let prod = site.vertex_product(m, Variant::Pi);
    let cof = window_basis(spec, d - m as u32 - 1);
    let ideal_rows: Vec<Vec<u64>> = (0..cof.len()).map(|k| src.coords(&(&prod * &cof.element(k)))).collect();
    let ideal = Matrix::from_rows(ring, src.len(), ideal_rows);
    if let Some(i) = ker_basis.first_outside(&ideal) {
        return Err(Error::KernelMismatch { m, witness: format!("{} lies in the ideal but not in the kernel", src.series(ideal.row(i))) });
    }
    let ideal_basis = HowellBasis::of(&ideal);
    if let Some(i) = ideal_basis.first_outside(&ker) {
        return Err(Error::KernelMismatch { m, witness: format!("{} lies in the kernel but not in the ideal", src.series(ker.row(i))) });
    }
    Ok(KernelReport { m, window_dim: src.len(), kernel_log_order: ker_basis.log_order(), status: KernelStatus::Verified })
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|r| if r >= first { r + 1 } else { r }));
            out.push(p);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityReport {
    pub m: usize,
    pub order: Vec<usize>,
    pub variant: Variant,
    pub steps: usize,
}

/// Windowed regularity of `(T_{σ(0)}, ..., T_{σ(m)})` in `RΔ^π_m`, or in
/// `R∂Δ^π_m` when `variant` is `PiBoundary`.
///
/// Step `k` checks that multiplication by the next element, from the
/// degree-`<= D-1` window of the quotient to the degree-`<= D` window, has
/// kernel inside `p^(N-1)` times the quotient. The relaxation is forced at the
/// last step, where the element acts as `π` on `Z/p^N`.
pub fn check_regular_sequence(site: &Site, m: usize, order: &[usize], variant: Variant) -> Result<RegularityReport> {
    let ring = site.ring();
    let d = site.cap();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..=m).collect::<Vec<_>>() {
        return Err(Error::Config(format!("{order:?} is not a permutation of 0..={m}")));
    }
    if d < 1 {
        return Err(Error::Config("regularity needs D >= 1".into()));
    }
    let spec = site.level(m, variant);
    let hi = window_basis(spec, d);
    let lo = window_basis(spec, d - 1);
    let elems: Vec<PDSeries> = (0..=m).map(|i| site.vertex(m, i, variant)).collect();
    let prod = site.vertex_product(m, variant);
    let top = ring.p_pow(ring.precision() - 1);

    // rows spanning I_k ∩ window(e), truncated generators times window(e-1)
    let ideal_rows = |k: usize, e: u32, basis: &WindowBasis| -> Vec<Vec<u64>> {
        let mut rows = Vec::new();
        if e >= 1 {
            let cof = window_basis(spec, e - 1);
            for &g in &order[..k] {
                for j in 0..cof.len() {
                    rows.push(basis.coords(&(&elems[g] * &cof.element(j))));
                }
            }
        }
        if variant == Variant::PiBoundary && e > m as u32 {
            let cof = window_basis(spec, e - m as u32 - 1);
            for j in 0..cof.len() {
                rows.push(basis.coords(&(&prod * &cof.element(j))));
            }
        }
        rows
    };

    for k in 0..=m {
        let a = &elems[order[k]];
        let mult: Vec<Vec<u64>> = (0..lo.len()).map(|j| hi.coords(&(a * &lo.element(j)))).collect();
        let hi_ideal = ideal_rows(k, d, &hi);
        let mut stacked = mult.clone();
        stacked.extend(hi_ideal);
        let stacked = Matrix::from_rows(ring, hi.len(), stacked);
        let ker = kernel(&stacked).select_columns(0..lo.len());
        let mut allowed = ideal_rows(k, d - 1, &lo);
        for j in 0..lo.len() {
            let mut row = vec![0; lo.len()];
            row[j] = top;
            allowed.push(row);
        }
        let allowed = HowellBasis::of(&Matrix::from_rows(ring, lo.len(), allowed));
        if let Some(i) = allowed.first_outside(&ker) {
            let w = lo.series(ker.row(i));
            return Err(Error::RegularityFailure {
                element: format!("T{}", order[k]),
                witness: format!("T{} * ({}) vanishes modulo the previous elements", order[k], w),
            });
        }
    }
    Ok(RegularityReport { m, order: order.to_vec(), variant, steps: m + 1 })
}
