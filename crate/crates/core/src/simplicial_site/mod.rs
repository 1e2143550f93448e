//! The simplicial rings `RΔ_m = R[[T_0..T_m]]` and
//! `RΔ^π_m = RΔ_m / (T_0 + ... + T_m - π)`, their structure maps, boundary
//! kernels, regular sequences and constructive boundary fillers.
//!
//! In the `π`-variants `T_0` is eliminated as `π - (T_1 + ... + T_m)`, so a
//! level-`m` element is a polynomial in `T_1..T_m`. Carriers keep all
//! monomials of total degree `<= D`; every structure map is a linear change of
//! variables, so it maps this window into itself without loss.

mod fill;
mod kernel;

use std::fmt;

use crate::error::{Error, Result};
use crate::padic_linalg::Zpn;
use crate::power_series::{pd_substitute, GeomVar, PDSeries, SpecRef, Substitution, TKind, VarSpec};

pub use fill::{divide_by_vertex_product, fill_boundary, fill_horn};
pub use kernel::{
    boundary_restriction, check_regular_sequence, permutations, verify_boundary_kernel, window_basis, BoundaryData,
    KernelReport, KernelStatus, RegularityReport, WindowBasis,
};

/// Highest simplicial level a [`Site`] prepares carriers for.
pub const MAX_LEVEL: usize = 6;

/// A weakly monotone map `[n] -> [m]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexMap {
    values: Vec<usize>,
    target: usize,
}

impl SimplexMap {
    pub fn new(values: Vec<usize>, target: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Config("a simplex map needs a non-empty domain".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) || values.iter().any(|&v| v > target) {
            return Err(Error::Config(format!("{values:?} is not a monotone map into [{target}]")));
        }
        Ok(SimplexMap { values, target })
    }

    pub fn identity(m: usize) -> Self {
        SimplexMap { values: (0..=m).collect(), target: m }
    }

    /// `δ^i : [m-1] -> [m]`, the injection missing `i`.
    pub fn coface(m: usize, i: usize) -> Self {
        assert!(m >= 1 && i <= m);
        SimplexMap { values: (0..m).map(|j| if j < i { j } else { j + 1 }).collect(), target: m }
    }

    /// `σ^i : [m+1] -> [m]`, the surjection hitting `i` twice.
    pub fn codegeneracy(m: usize, i: usize) -> Self {
        assert!(i <= m);
        SimplexMap { values: (0..=m + 1).map(|j| if j <= i { j } else { j - 1 }).collect(), target: m }
    }

    pub fn source(&self) -> usize {
        self.values.len() - 1
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SimplexMap) -> Result<SimplexMap> {
        if other.target != self.source() {
            return Err(Error::Config("simplex maps are not composable".into()));
        }
        Ok(SimplexMap { values: other.values.iter().map(|&j| self.values[j]).collect(), target: self.target })
    }

    pub fn preimage(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.values.iter().enumerate().filter(move |(_, &v)| v == i).map(|(j, _)| j)
    }
}

impl fmt::Display for SimplexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}->[{}]", self.values, self.target)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    /// `RΔ`, variables `T_0..T_m`.
    Full,
    /// `RΔ^π`, variables `T_1..T_m`.
    Pi,
    /// `R∂Δ^π`, the `π`-carrier read modulo `T_0 ⋯ T_m`.
    PiBoundary,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Full => "RDelta",
            Variant::Pi => "RDelta^pi",
            Variant::PiBoundary => "RdDelta^pi",
        })
    }
}

/// Carriers of all levels `0..=MAX_LEVEL` over a fixed geometric block
/// (empty for the bare site over `R`, the variables of `B` for `B ⊗ RΔ^π`).
#[derive(Clone, Debug)]
pub struct Site {
    ring: Zpn,
    cap: u32,
    full: Vec<SpecRef>,
    pi: Vec<SpecRef>,
}

impl Site {
    pub fn new(ring: Zpn, cap: u32) -> Result<Self> {
        Self::over(ring, vec![], 1, cap)
    }

    pub fn over(ring: Zpn, geom: Vec<GeomVar>, window: i64, cap: u32) -> Result<Self> {
        let mut full = Vec::new();
        let mut pi = Vec::new();
        for m in 0..=MAX_LEVEL {
            let names_full = (0..=m).map(|i| format!("T{i}")).collect();
            let names_pi = (1..=m).map(|i| format!("T{i}")).collect();
            full.push(VarSpec::new(ring, geom.clone(), window, names_full, TKind::Ordinary, cap)?);
            pi.push(VarSpec::new(ring, geom.clone(), window, names_pi, TKind::Ordinary, cap)?);
        }
        Ok(Site { ring, cap, full, pi })
    }

    /// Carriers over `geom` modulo `(p, T)^k`, the truncation used for
    /// mapping spaces: it is an ideal, so products and Newton steps stay exact.
    pub fn filtered(ring: Zpn, geom: Vec<GeomVar>, window: i64, k: u32) -> Result<Self> {
        let mut site = Self::over(ring, geom, window, k.max(2) - 1)?;
        for spec in site.full.iter_mut().chain(site.pi.iter_mut()) {
            *spec = spec.filtered(k)?;
        }
        site.cap = k - 1;
        Ok(site)
    }

    pub fn ring(&self) -> Zpn {
        self.ring
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn level(&self, m: usize, variant: Variant) -> &SpecRef {
        match variant {
            Variant::Full => &self.full[m],
            Variant::Pi | Variant::PiBoundary => &self.pi[m],
        }
    }

    /// `T_i` at level `m`; in the `π`-variants `T_0 = π - (T_1 + ... + T_m)`.
    pub fn vertex(&self, m: usize, i: usize, variant: Variant) -> PDSeries {
        let spec = self.level(m, variant);
        match variant {
            Variant::Full => PDSeries::t(spec, i),
            _ if i > 0 => PDSeries::t(spec, i - 1),
            _ => {
                let mut t0 = PDSeries::constant(spec, self.ring.p());
                for j in 0..m {
                    t0 = &t0 - &PDSeries::t(spec, j);
                }
                t0
            }
        }
    }

    /// `T_0 ⋯ T_m` at level `m`.
    pub fn vertex_product(&self, m: usize, variant: Variant) -> PDSeries {
        (0..=m).fold(PDSeries::one(self.level(m, variant)), |acc, i| &acc * &self.vertex(m, i, variant))
    }

    /// The ring map `RΔ_m -> RΔ_n` induced by `σ : [n] -> [m]`:
    /// `T_i -> Σ_{σ(j) = i} T_j`.
    pub fn structure_map(&self, sigma: &SimplexMap, variant: Variant) -> Substitution {
        let (m, n) = (sigma.target(), sigma.source());
        let src = self.level(m, variant);
        let tgt = self.level(n, variant);
        let image = |i: usize| {
            sigma.preimage(i).fold(PDSeries::zero(tgt), |acc, j| &acc + &self.vertex(n, j, variant))
        };
        let t = match variant {
            Variant::Full => (0..=m).map(image).collect(),
            _ => (1..=m).map(image).collect(),
        };
        Substitution::fixing_geometry(src, tgt, t).expect("levels share the geometric block")
    }

    pub fn face(&self, m: usize, i: usize, variant: Variant) -> Substitution {
        self.structure_map(&SimplexMap::coface(m, i), variant)
    }

    pub fn degeneracy(&self, m: usize, i: usize, variant: Variant) -> Substitution {
        self.structure_map(&SimplexMap::codegeneracy(m, i), variant)
    }

    pub fn apply(&self, sigma: &SimplexMap, variant: Variant, f: &PDSeries) -> PDSeries {
        pd_substitute(f, &self.structure_map(sigma, variant)).expect("structure maps are defined on the carrier")
    }

    /// `∂_i f` for `f` at level `m`.
    pub fn apply_face(&self, m: usize, i: usize, variant: Variant, f: &PDSeries) -> PDSeries {
        self.apply(&SimplexMap::coface(m, i), variant, f)
    }

    /// `s_i f` for `f` at level `m`.
    pub fn apply_degeneracy(&self, m: usize, i: usize, variant: Variant, f: &PDSeries) -> PDSeries {
        self.apply(&SimplexMap::codegeneracy(m, i), variant, f)
    }

    /// Augmentation: all `T_i -> 0`, landing in the geometric coefficients
    /// (`R` itself for the bare site). The `π`-variants augment to `R/π`, so
    /// the result is reduced mod `p` there.
    pub fn augmentation(&self, f: &PDSeries, variant: Variant) -> PDSeries {
        let c = f.t_free_part();
        match variant {
            Variant::Full => c,
            _ => c.reduce_mod_p(),
        }
    }
}

/// Composite of two substitutions: first `a`, then `b`.
pub fn compose(a: &Substitution, b: &Substitution) -> Result<Substitution> {
    let geom = a.geom.iter().map(|g| pd_substitute(g, b)).collect::<Result<_>>()?;
    let t = a.t.iter().map(|g| pd_substitute(g, b)).collect::<Result<_>>()?;
    Substitution::new(&b.target, geom, t)
}

/// Face and degeneracy maps of one variant, stored explicitly so that the
/// identity checker can be pointed at a tampered table.
#[derive(Clone, Debug)]
pub struct MapTable {
    pub variant: Variant,
    pub levels: Vec<SpecRef>,
    /// `faces[m][i] = ∂_i : level m -> level m-1` (empty at `m = 0`).
    pub faces: Vec<Vec<Substitution>>,
    /// `degeneracies[m][i] = s_i : level m -> level m+1`.
    pub degeneracies: Vec<Vec<Substitution>>,
}

impl MapTable {
    pub fn build(site: &Site, variant: Variant, top: usize) -> Self {
        assert!(top <= MAX_LEVEL);
        let levels = (0..=top).map(|m| site.level(m, variant).clone()).collect();
        let faces = (0..=top).map(|m| if m == 0 { vec![] } else { (0..=m).map(|i| site.face(m, i, variant)).collect() }).collect();
        let degeneracies = (0..top).map(|m| (0..=m).map(|i| site.degeneracy(m, i, variant)).collect()).collect();
        MapTable { variant, levels, faces, degeneracies }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub variant: Variant,
    pub m_max: usize,
    pub identities_checked: usize,
}

enum Step {
    D(usize),
    S(usize),
}

fn run_steps(table: &MapTable, start: usize, steps: &[Step], f: &PDSeries) -> Result<PDSeries> {
    let mut level = start;
    let mut cur = f.clone();
    for s in steps {
        cur = match *s {
            Step::D(i) => {
                let out = pd_substitute(&cur, &table.faces[level][i])?;
                level -= 1;
                out
            }
            Step::S(i) => {
                let out = pd_substitute(&cur, &table.degeneracies[level][i])?;
                level += 1;
                out
            }
        };
    }
    Ok(cur)
}

fn label(steps: &[Step]) -> String {
    if steps.is_empty() {
        return "id".into();
    }
    // written as composition: last applied on the left
    steps
        .iter()
        .rev()
        .map(|s| match s {
            Step::D(i) => format!("d{i}"),
            Step::S(i) => format!("s{i}"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Checks every simplicial identity whose source level is `<= m_max` on all
/// generators of the source carrier.
pub fn verify_simplicial_identities(table: &MapTable, m_max: usize) -> Result<IdentityReport> {
    if m_max > 4 {
        return Err(Error::Config("m_max is limited to 4".into()));
    }
    if table.levels.len() < m_max + 3 {
        return Err(Error::Config("map table does not reach level m_max + 2".into()));
    }
    use Step::{D, S};
    let mut checked = 0;
    for m in 0..=m_max {
        let spec = &table.levels[m];
        let gens: Vec<PDSeries> = (0..spec.n_t()).map(|j| PDSeries::t(spec, j)).collect();
        let mut pairs: Vec<(Vec<Step>, Vec<Step>)> = Vec::new();
        // steps are listed in application order
        for j in 0..=m {
            for i in 0..j {
                if m >= 2 {
                    pairs.push((vec![D(j), D(i)], vec![D(i), D(j - 1)]));
                }
            }
        }
        for j in 0..=m {
            for i in 0..=m + 1 {
                let lhs = vec![S(j), D(i)];
                let rhs = if i < j {
                    vec![D(i), S(j - 1)]
                } else if i == j || i == j + 1 {
                    vec![]
                } else {
                    vec![D(i - 1), S(j)]
                };
                pairs.push((lhs, rhs));
            }
            for i in 0..=j {
                pairs.push((vec![S(j), S(i)], vec![S(i), S(j + 1)]));
            }
        }
        for (lhs, rhs) in &pairs {
            for g in &gens {
                let a = run_steps(table, m, lhs, g)?;
                let b = run_steps(table, m, rhs, g)?;
                if a != b {
                    return Err(Error::IdentityViolation(format!(
                        "{}: {} = {} but {} = {} on {} at level {m}",
                        table.variant,
                        label(lhs),
                        a,
                        label(rhs),
                        b,
                        g
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(IdentityReport { variant: table.variant, m_max, identities_checked: checked })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn site() -> Site {
        Site::new(Zpn::new(3, 2).unwrap(), 5).unwrap()
    }

    #[test]
    fn faces_at_level_one() {
        let s = site();
        let t1 = PDSeries::t(s.level(1, Variant::Pi), 0);
        let l0 = s.level(0, Variant::Pi);
        // ∂_0 drops vertex 0: T_1 becomes the single vertex of level 0, which is π
        assert_eq!(s.apply_face(1, 0, Variant::Pi, &t1), PDSeries::constant(l0, 3));
        assert_eq!(s.apply_face(1, 1, Variant::Pi, &t1), PDSeries::zero(l0));
        let t0 = s.vertex(1, 0, Variant::Pi);
        assert_eq!(s.apply_face(1, 0, Variant::Pi, &t0), PDSeries::zero(l0));
        assert_eq!(s.apply_face(1, 1, Variant::Pi, &t0), PDSeries::constant(l0, 3));
    }

    #[test]
    fn degeneracy_sums_vertices() {
        let s = site();
        let t0 = PDSeries::t(s.level(0, Variant::Full), 0);
        let l1 = s.level(1, Variant::Full);
        assert_eq!(s.apply_degeneracy(0, 0, Variant::Full, &t0), &PDSeries::t(l1, 0) + &PDSeries::t(l1, 1));
    }

    #[test]
    fn identity_map_is_identity() {
        let s = site();
        let spec = s.level(2, Variant::Pi);
        let f = &PDSeries::t(spec, 0).pow(2) + &PDSeries::t(spec, 1).scale(4);
        assert_eq!(s.apply(&SimplexMap::identity(2), Variant::Pi, &f), f);
    }

    #[test]
    fn identities_hold() {
        let s = site();
        for v in [Variant::Full, Variant::Pi] {
            let table = MapTable::build(&s, v, 4);
            let rep = verify_simplicial_identities(&table, 2).unwrap();
            assert!(rep.identities_checked > 0);
        }
    }

    #[test]
    fn corrupted_table_is_caught() {
        let s = site();
        let mut table = MapTable::build(&s, Variant::Pi, 4);
        table.faces[2][0] = table.faces[2][1].clone();
        assert!(matches!(verify_simplicial_identities(&table, 2), Err(Error::IdentityViolation(_))));
    }

    #[test]
    fn vertex_sum_is_pi() {
        let s = site();
        for m in 0..=3 {
            let sum = (0..=m).fold(PDSeries::zero(s.level(m, Variant::Pi)), |a, i| &a + &s.vertex(m, i, Variant::Pi));
            assert_eq!(sum, PDSeries::constant(s.level(m, Variant::Pi), 3));
        }
    }
}
