//! The simplicial object `m ↦ dR(AΔ^π_m)`, its total complex, and the
//! comparison of the resulting cohomology with `dR(A)`.

use crate::error::{Error, Result};
use crate::padic_linalg::{kernel, ElementaryDivisors, HowellBasis, Matrix, Zpn};
use crate::pd_derham::{Cell, ChainComplex, Form, PdObject};
use crate::smooth_lift::Presentation;
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Which simplicial chain complex is totalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Totalization {
    /// Column `m` is `∩_(i≥1) ker ∂_i` (forms involving every `T_i`), with
    /// horizontal map `∂_0`.
    Normalized,
    /// Column `m` is all of `dR(AΔ^π_m)`, with horizontal map `Σ (-1)^i ∂_i`.
    Unnormalized,
}

/// Truncation caps shared by every run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// PD-weight cap `D`.
    pub weight: u32,
    /// Graded window `E`: degrees `|g| <= E`.
    pub window: i64,
    /// Simplicial truncation `M`.
    pub levels: usize,
}

/// Columns `0..=M` of one graded piece.
#[derive(Debug)]
pub struct DoubleComplex {
    pub graded: i64,
    pub mode: Totalization,
    /// `bases[m][q]`
    pub bases: Vec<Vec<Vec<Form>>>,
    pub labels: Vec<Vec<Vec<String>>>,
    /// `vertical[m][q]`: `Ω^q → Ω^(q+1)` in column `m`.
    pub vertical: Vec<Vec<Matrix>>,
    /// `horizontal[m][q]`: column `m` to column `m-1` in form degree `q`
    /// (`horizontal[0]` is empty).
    pub horizontal: Vec<Vec<Matrix>>,
    ring: Zpn,
}

/// Builds the graded piece `g` of the double complex for levels `0..=M` and
/// checks the Moore property and that the squares commute.
pub fn build_simplicial_dr(base: &PdObject, g: i64, levels: usize, mode: Totalization) -> Result<DoubleComplex> {
    if levels > 3 {
        return Err(Error::Config("at most 3 simplicial levels are supported".into()));
    }
    if mode == Totalization::Normalized && (base.cap() as usize) < levels {
        return Err(Error::CapsTooSmall(format!("normalized level {levels} needs PD-weight cap at least {levels}")));
    }
    let ring = base.ring();
    let objs: Vec<PdObject> = (0..=levels).map(|m| base.at_level(m)).collect::<Result<_>>()?;
    let normalized = mode == Totalization::Normalized;
    let bases: Vec<Vec<Vec<Form>>> =
        objs.iter().map(|o| (0..=o.max_degree()).map(|q| o.basis(q, g, normalized)).collect()).collect();
    let mut vertical = Vec::new();
    let mut horizontal = Vec::new();
    for (m, o) in objs.iter().enumerate() {
        let b = &bases[m];
        vertical.push((0..o.max_degree()).map(|q| o.d_matrix(&b[q], &b[q + 1])).collect::<Result<Vec<_>>>()?);
        if m == 0 {
            horizontal.push(Vec::new());
            continue;
        }
        let lower = &bases[m - 1];
        let mats = (0..=o.max_degree())
            .map(|q| {
                let cols: &[Form] = lower.get(q).map_or(&[], |v| v.as_slice());
                if normalized {
                    return o.face_matrix(0, &b[q], cols);
                }
                let mut acc = Matrix::zero(ring, b[q].len(), cols.len());
                for i in 0..=m {
                    let f = o.face_matrix(i, &b[q], cols)?;
                    acc = acc.add(&if i % 2 == 1 { f.neg() } else { f });
                }
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()?;
        horizontal.push(mats);
    }
    let labels = objs.iter().zip(&bases).map(|(o, b)| b.iter().map(|v| o.labels(v)).collect()).collect();
    let dc = DoubleComplex { graded: g, mode, bases, labels, vertical, horizontal, ring };
    dc.check()?;
    Ok(dc)
}

impl DoubleComplex {
    pub fn levels(&self) -> usize {
        self.bases.len() - 1
    }

    fn check(&self) -> Result<()> {
        for m in 2..=self.levels() {
            for q in 0..self.horizontal[m].len() {
                if q < self.horizontal[m - 1].len() && !self.horizontal[m][q].mul(&self.horizontal[m - 1][q]).is_zero() {
                    return Err(Error::IdentityViolation(format!(
                        "horizontal maps compose to a nonzero map from level {m}, form degree {q}"
                    )));
                }
            }
        }
        for m in 1..=self.levels() {
            for q in 0..self.vertical[m].len() {
                if q >= self.vertical[m - 1].len() {
                    continue;
                }
                let a = self.vertical[m][q].mul(&self.horizontal[m][q + 1]);
                let b = self.horizontal[m][q].mul(&self.vertical[m - 1][q]);
                if a != b {
                    return Err(Error::IdentityViolation(format!(
                        "d and the face maps do not commute at level {m}, form degree {q}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn block(&self, m: usize, q: i64) -> usize {
        if q < 0 {
            return 0;
        }
        self.bases[m].get(q as usize).map_or(0, |b| b.len())
    }

    /// `Tot^i = ⊕_m Ω^(i+m)(column m)` with `D = d_v + (-1)^q d_h`.
    pub fn totalize(&self) -> Result<ChainComplex> {
        let top = self.bases[0].len() as i64 - 1;
        let first = -(self.levels() as i64);
        let degrees: Vec<i64> = (first..=top).collect();
        let offsets = |i: i64| -> Vec<usize> {
            let mut off = Vec::new();
            let mut acc = 0;
            for m in 0..=self.levels() {
                off.push(acc);
                acc += self.block(m, i + m as i64);
            }
            off.push(acc);
            off
        };
        let mut labels = Vec::new();
        for &i in &degrees {
            let mut l = Vec::new();
            for m in 0..=self.levels() {
                let q = i + m as i64;
                if q >= 0 {
                    if let Some(v) = self.labels[m].get(q as usize) {
                        l.extend(v.iter().map(|s| format!("[{m}] {s}")));
                    }
                }
            }
            labels.push(l);
        }
        let mut diffs = Vec::new();
        for &i in &degrees[..degrees.len() - 1] {
            let (src, dst) = (offsets(i), offsets(i + 1));
            let mut mat = Matrix::zero(self.ring, src[self.levels() + 1], dst[self.levels() + 1]);
            for m in 0..=self.levels() {
                let q = i + m as i64;
                if q < 0 || self.block(m, q) == 0 {
                    continue;
                }
                let q = q as usize;
                if let Some(v) = self.vertical[m].get(q) {
                    place(&mut mat, v, src[m], dst[m], false, self.ring);
                }
                if m >= 1 {
                    if let Some(h) = self.horizontal[m].get(q) {
                        place(&mut mat, h, src[m], dst[m - 1], q % 2 == 1, self.ring);
                    }
                }
            }
            diffs.push(mat);
        }
        ChainComplex::new(self.ring, first, labels, diffs)
    }
}

fn place(target: &mut Matrix, block: &Matrix, r0: usize, c0: usize, negate: bool, ring: Zpn) {
    for r in 0..block.rows() {
        for c in 0..block.cols() {
            let v = block.get(r, c);
            if v != 0 {
                target.set(r0 + r, c0 + c, if negate { ring.neg(v) } else { v });
            }
        }
    }
}

/// Per graded degree, per total degree divisors, with the run's metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub algebra: String,
    pub p: u64,
    pub precision: u32,
    pub caps: Caps,
    pub mode: Totalization,
    pub cells: Vec<Cell>,
}

impl CohomologyReport {
    pub fn get(&self, degree: i64, graded: i64) -> Option<&ElementaryDivisors> {
        self.cells.iter().find(|c| c.degree == degree && c.graded == graded).map(|c| &c.divisors)
    }
}

/// Cohomology of the totalization in total degrees `0..=dim A`.
pub fn cris(name: &str, a: &Presentation, caps: Caps, mode: Totalization) -> Result<CohomologyReport> {
    let base = PdObject::from_presentation(a, 0, caps.weight, caps.window)?;
    let per_g: Vec<Vec<Cell>> = base
        .graded_degrees()
        .into_par_iter()
        .map(|g| {
            let tot = build_simplicial_dr(&base, g, caps.levels, mode)?.totalize()?;
            Ok(tot
                .cohomology()?
                .into_iter()
                .filter(|(i, _)| *i >= 0)
                .map(|(degree, divisors)| Cell { degree, graded: g, divisors })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut cells: Vec<Cell> = per_g.into_iter().flatten().collect();
    cells.sort_by_key(|c| (c.degree, c.graded));
    Ok(CohomologyReport { algebra: name.into(), p: a.ring().p(), precision: a.ring().precision(), caps, mode, cells })
}

/// Cohomology of `dR(A)` itself, per graded degree.
pub fn direct_dr(name: &str, a: &Presentation, caps: Caps) -> Result<CohomologyReport> {
    let base = PdObject::from_presentation(a, 0, caps.weight, caps.window)?;
    let mut cells = Vec::new();
    for g in base.graded_degrees() {
        for (degree, divisors) in base.complex(g, false)?.cohomology()? {
            cells.push(Cell { degree, graded: g, divisors });
        }
    }
    cells.sort_by_key(|c| (c.degree, c.graded));
    Ok(CohomologyReport {
        algebra: name.into(),
        p: a.ring().p(),
        precision: a.ring().precision(),
        caps,
        mode: Totalization::Normalized,
        cells,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub dr: CohomologyReport,
    pub cris: CohomologyReport,
    /// Total degrees in which the comparison is certified.
    pub certified: Vec<i64>,
    /// Degrees in which levels `M-1` and `M` agree.
    pub stable: Vec<i64>,
}

/// The augmentation `dR(A) → Tot` (inclusion of column 0) is a chain map
/// inducing isomorphisms in total degrees `0..=M-1` on every graded piece,
/// and degree 0 is already stable between `M-1` and `M`.
pub fn compare_dr_cris(name: &str, a: &Presentation, caps: Caps) -> Result<ComparisonReport> {
    if caps.levels < 1 {
        return Err(Error::Config("comparison needs M >= 1".into()));
    }
    let base = PdObject::from_presentation(a, 0, caps.weight, caps.window)?;
    let ring = base.ring();
    let certified: Vec<i64> = (0..caps.levels as i64).collect();
    let lower = Caps { levels: caps.levels - 1, ..caps };
    let results: Vec<(Vec<Cell>, Vec<Cell>, Vec<i64>)> = base
        .graded_degrees()
        .into_par_iter()
        .map(|g| {
            let dr = base.complex(g, false)?;
            let tot = build_simplicial_dr(&base, g, caps.levels, Totalization::Normalized)?.totalize()?;
            let tot_lower = build_simplicial_dr(&base, g, lower.levels, Totalization::Normalized)?.totalize()?;
            let h_dr = dr.cohomology()?;
            let mut dr_cells = Vec::new();
            let mut cris_cells = Vec::new();
            let mut stable = Vec::new();
            for &i in &certified {
                check_augmentation(&dr, &tot, i)?;
                let left = h_dr.get(&i).cloned().unwrap_or_else(|| ElementaryDivisors::zero(ring));
                let right = tot.cohomology_at(i)?;
                if left != right {
                    return Err(Error::ComparisonFailure {
                        degree: i,
                        graded: g,
                        left: format!("dR {left}"),
                        right: format!("Tot {right}"),
                    });
                }
                surjective(&dr, &tot, i, g)?;
                let below = tot_lower.cohomology_at(i)?;
                if below == right {
                    stable.push(i);
                } else if i == 0 {
                    return Err(Error::ComparisonFailure {
                        degree: 0,
                        graded: g,
                        left: format!("M={} {right}", caps.levels),
                        right: format!("M={} {below}", lower.levels),
                    });
                }
                dr_cells.push(Cell { degree: i, graded: g, divisors: left });
                cris_cells.push(Cell { degree: i, graded: g, divisors: right });
            }
            Ok((dr_cells, cris_cells, stable))
        })
        .collect::<Result<_>>()?;
    let mut dr_cells = Vec::new();
    let mut cris_cells = Vec::new();
    let mut stable_all: BTreeMap<i64, bool> = certified.iter().map(|&i| (i, true)).collect();
    for (d, c, s) in results {
        dr_cells.extend(d);
        cris_cells.extend(c);
        for (i, ok) in stable_all.iter_mut() {
            *ok &= s.contains(i);
        }
    }
    dr_cells.sort_by_key(|c| (c.degree, c.graded));
    cris_cells.sort_by_key(|c| (c.degree, c.graded));
    let meta = |cells| CohomologyReport {
        algebra: name.into(),
        p: ring.p(),
        precision: ring.precision(),
        caps,
        mode: Totalization::Normalized,
        cells,
    };
    Ok(ComparisonReport {
        dr: meta(dr_cells),
        cris: meta(cris_cells),
        certified,
        stable: stable_all.into_iter().filter(|&(_, ok)| ok).map(|(i, _)| i).collect(),
    })
}

/// `ι` embeds `dR(A)^i` as the leading column-0 block of `Tot^i`.
fn inclusion(dr: &ChainComplex, tot: &ChainComplex, i: i64) -> Matrix {
    let ring = dr.ring();
    let mut m = Matrix::zero(ring, dr.dim(i), tot.dim(i));
    for r in 0..dr.dim(i) {
        debug_assert_eq!(format!("[0] {}", dr.labels(i)[r]), tot.labels(i)[r]);
        m.set(r, r, 1);
    }
    m
}

fn check_augmentation(dr: &ChainComplex, tot: &ChainComplex, i: i64) -> Result<()> {
    let lhs = inclusion(dr, tot, i).mul(&tot.differential(i));
    let rhs = dr.differential(i).mul(&inclusion(dr, tot, i + 1));
    if lhs != rhs {
        return Err(Error::IdentityViolation(format!("augmentation is not a chain map in degree {i}")));
    }
    Ok(())
}

/// Every cocycle of `Tot^i` is a coboundary plus the image of a cocycle of
/// `dR(A)`.
fn surjective(dr: &ChainComplex, tot: &ChainComplex, i: i64, g: i64) -> Result<()> {
    let zdr = kernel(&dr.differential(i));
    let image = zdr.mul(&inclusion(dr, tot, i)).vstack(&tot.differential(i - 1));
    let span = HowellBasis::of(&image);
    let ztot = kernel(&tot.differential(i));
    if let Some(r) = span.first_outside(&ztot) {
        let row = ztot.row(r);
        let j = row.iter().position(|&c| c != 0).unwrap_or(0);
        return Err(Error::ComparisonFailure {
            degree: i,
            graded: g,
            left: format!("cocycle through {}", tot.labels(i).get(j).cloned().unwrap_or_default()),
            right: "not in the image of dR".into(),
        });
    }
    Ok(())
}

/// The closed forms the catalog stores: for `k ≠ 0`, kernel and cokernel of
/// multiplication by `k` on `Z/p^N` are `Z/p^min(v_p(k), N)`.
pub fn catalog_value(name: &str, p: u64, n: u32, degree: i64, g: i64) -> Option<Vec<u32>> {
    let torsion = |k: i64| -> Vec<u32> {
        let mut v = 0;
        let mut k = k.unsigned_abs();
        while k % p == 0 && v < n {
            k /= p;
            v += 1;
        }
        if v == 0 {
            vec![]
        } else {
            vec![v]
        }
    };
    match (name, degree) {
        ("point", 0) => Some(if g == 0 { vec![n] } else { vec![] }),
        ("point", _) => Some(vec![]),
        ("a1", 0) => Some(match g {
            0 => vec![n],
            g if g > 0 => torsion(g),
            _ => vec![],
        }),
        ("a1", 1) => Some(if g >= 1 { torsion(g) } else { vec![] }),
        ("gm", 0 | 1) => Some(if g == 0 { vec![n] } else { torsion(g) }),
        ("a1" | "gm", _) => Some(vec![]),
        _ => None,
    }
}

/// `cris` against the catalog's closed forms, in total degrees `0..=1`.
pub fn known_values_check(name: &str, a: &Presentation, caps: Caps) -> Result<CohomologyReport> {
    let ring = a.ring();
    if catalog_value(name, ring.p(), ring.precision(), 0, 0).is_none() {
        return Err(Error::Unsupported(format!("no known values for {name}")));
    }
    let report = cris(name, a, caps, Totalization::Normalized)?;
    for c in &report.cells {
        if c.degree > 1 {
            continue;
        }
        let want = catalog_value(name, ring.p(), ring.precision(), c.degree, c.graded).unwrap_or_default();
        if c.divisors.exponents() != want.as_slice() {
            return Err(Error::CatalogMismatch {
                algebra: name.into(),
                degree: c.degree,
                graded: c.graded,
                expected: ElementaryDivisors::new(ring, want).to_string(),
                got: c.divisors.to_string(),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth_lift::{catalog, lift_algebra};

    fn pres(name: &str, p: u64, n: u32) -> Presentation {
        lift_algebra(&catalog(name, p).unwrap(), n).unwrap()
    }

    #[test]
    fn single_column_is_the_column() {
        let a = pres("gm", 3, 2);
        let base = PdObject::from_presentation(&a, 0, 3, 3).unwrap();
        let tot = build_simplicial_dr(&base, 2, 0, Totalization::Unnormalized).unwrap().totalize().unwrap();
        assert_eq!(tot.cohomology().unwrap(), base.complex(2, false).unwrap().cohomology().unwrap());
    }

    #[test]
    fn point_interval() {
        let a = pres("point", 3, 2);
        let base = PdObject::from_presentation(&a, 0, 4, 0).unwrap();
        for mode in [Totalization::Normalized, Totalization::Unnormalized] {
            let h = build_simplicial_dr(&base, 0, 2, mode).unwrap().totalize().unwrap().cohomology().unwrap();
            assert_eq!(h[&0].exponents(), [2]);
            assert!(h.iter().filter(|(&i, _)| i != 0).all(|(_, e)| e.is_zero()), "{mode:?}: {h:?}");
        }
    }

    #[test]
    fn moore_property_on_gm() {
        let a = pres("gm", 3, 2);
        let base = PdObject::from_presentation(&a, 0, 4, 2).unwrap();
        for g in -2..=2 {
            build_simplicial_dr(&base, g, 2, Totalization::Unnormalized).unwrap().totalize().unwrap();
        }
    }

    #[test]
    fn unnormalized_odd_truncation_picks_up_top_column() {
        let a = pres("gm", 3, 2);
        let base = PdObject::from_presentation(&a, 0, 3, 1).unwrap();
        let h = build_simplicial_dr(&base, 0, 1, Totalization::Unnormalized).unwrap().totalize().unwrap();
        assert_eq!(h.cohomology_at(0).unwrap().exponents(), [2, 2]);
        let h = build_simplicial_dr(&base, 0, 1, Totalization::Normalized).unwrap().totalize().unwrap();
        assert_eq!(h.cohomology_at(0).unwrap().exponents(), [2]);
    }

    #[test]
    fn small_comparison() {
        let a = pres("gm", 3, 2);
        let caps = Caps { weight: 4, window: 3, levels: 2 };
        let r = compare_dr_cris("gm", &a, caps).unwrap();
        assert_eq!(r.stable, [0, 1]);
        known_values_check("gm", &a, caps).unwrap();
    }
}
