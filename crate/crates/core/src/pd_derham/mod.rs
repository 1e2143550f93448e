//! PD de Rham complexes of `A⟨T_1..T_m⟩` relative to `(π, T)`, split by
//! graded degree, with the checks that make them usable at finite
//! precision: the Poincaré lemma, base change and Čech descent.

mod cech;
mod complex;

pub use cech::{cech_descent_check, CechReport, Localizer};
pub use complex::ChainComplex;

use crate::error::{Error, Result};
use crate::padic_linalg::{binomial, ElementaryDivisors, Matrix, Zpn};
use crate::power_series::{pd_substitute, GeomVar, Monomial, PDSeries, SpecRef, Substitution, TKind, VarKind, VarSpec};
use crate::smooth_lift::{AlgebraKind, Presentation};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

/// `x^a T^[α] dx_J ∧ dT_K`, with `J` and `K` as bit masks and all `dx`
/// before all `dT`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Form {
    pub x: Vec<i64>,
    pub dx: u32,
    pub t: Vec<u32>,
    pub dt: u32,
}

/// A linear combination of forms.
pub type FormVec = BTreeMap<Form, u64>;

fn below(mask: u32, i: usize) -> u32 {
    (mask & ((1u32 << i) - 1)).count_ones()
}

/// Sign and mask of `dy_a ∧ dy_b` for masks `a`, `b` over the same variables.
fn merge(a: u32, b: u32) -> Option<(bool, u32)> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0;
    let mut bits = b;
    while bits != 0 {
        let i = bits.trailing_zeros();
        swaps += (a >> (i + 1)).count_ones();
        bits &= bits - 1;
    }
    Some((swaps % 2 == 1, a | b))
}

impl Form {
    pub fn degree(&self) -> usize {
        (self.dx.count_ones() + self.dt.count_ones()) as usize
    }

    pub fn t_weight(&self) -> u32 {
        self.t.iter().sum::<u32>() + self.dt.count_ones()
    }

    pub fn graded(&self, weights: &[i64]) -> i64 {
        let xs: i64 = self.x.iter().zip(weights).map(|(a, w)| a * w).sum();
        xs + (0..weights.len()).filter(|&i| self.dx >> i & 1 == 1).map(|i| weights[i]).sum::<i64>()
    }

    /// Every `T_i` occurs, in the coefficient or as `dT_i`.
    pub fn is_normalized(&self) -> bool {
        (0..self.t.len()).all(|i| self.t[i] > 0 || self.dt >> i & 1 == 1)
    }

    pub fn is_t_free(&self) -> bool {
        self.t.iter().all(|&k| k == 0) && self.dt == 0
    }

    pub fn label(&self, names: &[String]) -> String {
        let mut parts = Vec::new();
        for (i, &a) in self.x.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{a}", names[i])),
            }
        }
        for (j, &k) in self.t.iter().enumerate() {
            match k {
                0 => {}
                1 => parts.push(format!("T{}", j + 1)),
                _ => parts.push(format!("T{}^[{k}]", j + 1)),
            }
        }
        let mut diffs = Vec::new();
        for i in 0..self.x.len() {
            if self.dx >> i & 1 == 1 {
                diffs.push(format!("d{}", names[i]));
            }
        }
        for j in 0..self.t.len() {
            if self.dt >> j & 1 == 1 {
                diffs.push(format!("dT{}", j + 1));
            }
        }
        match (parts.is_empty(), diffs.is_empty()) {
            (true, true) => "1".into(),
            (false, true) => parts.join("*"),
            (true, false) => diffs.join("^"),
            (false, false) => format!("{} {}", parts.join("*"), diffs.join("^")),
        }
    }
}

fn add_to(v: &mut FormVec, f: Form, c: u64, ring: Zpn) {
    let c = ring.reduce(c);
    if c == 0 {
        return;
    }
    let e = v.entry(f).or_insert(0);
    *e = ring.add(*e, c);
    if *e == 0 {
        v.retain(|_, c| *c != 0);
    }
}

/// `(B, I)` with `B = A⟨T_1..T_m⟩` and `I = (π, T_1..T_m)` for a free or
/// Laurent algebra `A`, truncated to `T`-weight `|α| + |K| <= D`.
///
/// The differential and all face maps preserve that truncation, so every
/// truncated complex is a direct summand (for `d`) or a subcomplex (for faces)
/// of the untruncated one.
#[derive(Debug)]
pub struct PdObject {
    ring: Zpn,
    names: Vec<String>,
    geom: Vec<GeomVar>,
    weights: Vec<i64>,
    m: usize,
    cap: u32,
    window: i64,
    box_bound: i64,
    tspec: SpecRef,
    face_cache: Mutex<HashMap<(usize, Vec<u32>, u32), Vec<(Vec<u32>, u32, u64)>>>,
}

impl PdObject {
    /// `window` bounds the graded degrees that are computed; exponents range
    /// over a box large enough that `d` never leaves it on those degrees.
    pub fn new(ring: Zpn, geom: Vec<GeomVar>, weights: Vec<i64>, m: usize, cap: u32, window: i64) -> Result<Self> {
        if geom.len() != weights.len() {
            return Err(Error::Config("one weight per geometric variable".into()));
        }
        if geom.len() > 8 || m > 6 {
            return Err(Error::Config("at most 8 geometric variables and 6 PD variables".into()));
        }
        let tspec = VarSpec::t_only(ring, 1, m, TKind::Divided, cap.max(1))?;
        let box_bound = window + weights.iter().map(|w| w.abs()).sum::<i64>() + 1;
        let names = geom.iter().map(|g| g.name.clone()).collect();
        Ok(PdObject {
            ring,
            names,
            geom,
            weights,
            m,
            cap,
            window,
            box_bound,
            tspec,
            face_cache: Mutex::new(HashMap::new()),
        })
    }

    /// The object over a presentation's normal-form model. Weights default to
    /// 1 when the presentation has none.
    pub fn from_presentation(a: &Presentation, m: usize, cap: u32, window: i64) -> Result<Self> {
        match a.kind() {
            AlgebraKind::Free | AlgebraKind::Laurent => {}
            AlgebraKind::Hypersurface => {
                return Err(Error::Unsupported(
                    "de Rham complexes need a monomial basis; hypersurfaces are lifted but not integrated".into(),
                ))
            }
        }
        let model = a.model();
        let weights = if a.weights().is_some() { model.weights.clone() } else { vec![1; model.geom.len()] };
        Self::new(a.ring(), model.geom.clone(), weights, m, cap, window)
    }

    pub fn ring(&self) -> Zpn {
        self.ring
    }

    pub fn level(&self) -> usize {
        self.m
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn window(&self) -> i64 {
        self.window
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// The same object one simplicial level lower.
    pub fn lower(&self) -> Result<Self> {
        Self::new(self.ring, self.geom.clone(), self.weights.clone(), self.m - 1, self.cap, self.window)
    }

    /// The same object at level `m`.
    pub fn at_level(&self, m: usize) -> Result<Self> {
        Self::new(self.ring, self.geom.clone(), self.weights.clone(), m, self.cap, self.window)
    }

    /// The same combinatorics over another coefficient ring.
    pub fn over(&self, ring: Zpn) -> Result<Self> {
        Self::new(ring, self.geom.clone(), self.weights.clone(), self.m, self.cap, self.window)
    }

    /// Graded degrees in the window, in increasing order.
    pub fn graded_degrees(&self) -> Vec<i64> {
        if self.geom.is_empty() {
            return vec![0];
        }
        (-self.window..=self.window).collect()
    }

    fn x_box(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for g in &self.geom {
            let range: Vec<i64> = match g.kind {
                VarKind::Polynomial => (0..=self.box_bound).collect(),
                VarKind::Laurent => (-self.box_bound..=self.box_bound).collect(),
            };
            out = out.into_iter().flat_map(|v| range.iter().map(move |&a| [v.clone(), vec![a]].concat())).collect();
        }
        out
    }

    fn t_exponents(&self, max_weight: u32) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..self.m {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u32>| {
                    let used: u32 = v.iter().sum();
                    (0..=max_weight - used).map(move |k| [v.clone(), vec![k]].concat())
                })
                .collect();
        }
        out
    }

    /// Basis of `Ω^q` in graded degree `g`, restricted to normalized forms
    /// when asked.
    pub fn basis(&self, q: usize, g: i64, normalized: bool) -> Vec<Form> {
        let n = self.geom.len();
        let mut out = Vec::new();
        let xs = self.x_box();
        for dx in 0u32..(1 << n) {
            let qx = dx.count_ones() as usize;
            if qx > q || q - qx > self.m {
                continue;
            }
            for dt in 0u32..(1 << self.m) {
                if dt.count_ones() as usize != q - qx || dt.count_ones() > self.cap {
                    continue;
                }
                let ts = self.t_exponents(self.cap - dt.count_ones());
                for x in &xs {
                    let probe = Form { x: x.clone(), dx, t: vec![0; self.m], dt };
                    if probe.graded(&self.weights) != g {
                        continue;
                    }
                    for t in &ts {
                        let f = Form { x: x.clone(), dx, t: t.clone(), dt };
                        if !normalized || f.is_normalized() {
                            out.push(f);
                        }
                    }
                }
            }
        }
        out.sort();
        out
    }

    pub fn max_degree(&self) -> usize {
        self.geom.len() + self.m
    }

    /// `d` of a single form: Leibniz with `d x^a = a x^(a-1) dx` and
    /// `d T^[k] = T^[k-1] dT`.
    pub fn d(&self, f: &Form) -> FormVec {
        let ring = self.ring;
        let mut out = FormVec::new();
        for i in 0..f.x.len() {
            let a = f.x[i];
            if a == 0 || f.dx >> i & 1 == 1 {
                continue;
            }
            let mut x = f.x.clone();
            x[i] -= 1;
            let mut c = ring.from_i64(a);
            if below(f.dx, i) % 2 == 1 {
                c = ring.neg(c);
            }
            add_to(&mut out, Form { x, dx: f.dx | 1 << i, t: f.t.clone(), dt: f.dt }, c, ring);
        }
        for j in 0..f.t.len() {
            if f.t[j] == 0 || f.dt >> j & 1 == 1 {
                continue;
            }
            let mut t = f.t.clone();
            t[j] -= 1;
            let neg = (f.dx.count_ones() + below(f.dt, j)) % 2 == 1;
            let c = if neg { ring.neg(1) } else { 1 };
            add_to(&mut out, Form { x: f.x.clone(), dx: f.dx, t, dt: f.dt | 1 << j }, c, ring);
        }
        out
    }

    pub fn d_vec(&self, v: &FormVec) -> FormVec {
        let mut out = FormVec::new();
        for (f, &c) in v {
            for (g, e) in self.d(f) {
                add_to(&mut out, g, self.ring.mul(c, e), self.ring);
            }
        }
        out
    }

    /// `ω ∧ η` with the divided-power product on the `T`-part.
    pub fn wedge(&self, a: &Form, b: &Form) -> Option<(Form, u64)> {
        let ring = self.ring;
        let (sx, dx) = merge(a.dx, b.dx)?;
        let (st, dt) = merge(a.dt, b.dt)?;
        let cross = a.dt.count_ones() * b.dx.count_ones();
        let mut c = 1u64;
        for (&i, &j) in a.t.iter().zip(&b.t) {
            c = ring.mul(c, (binomial((i + j) as u64, i as u64) % ring.modulus() as u128) as u64);
        }
        if sx ^ st ^ (cross % 2 == 1) {
            c = ring.neg(c);
        }
        let f = Form {
            x: a.x.iter().zip(&b.x).map(|(p, q)| p + q).collect(),
            dx,
            t: a.t.iter().zip(&b.t).map(|(p, q)| p + q).collect(),
            dt,
        };
        (f.t_weight() <= self.cap).then_some((f, c))
    }

    pub fn wedge_vec(&self, a: &FormVec, b: &FormVec) -> FormVec {
        let mut out = FormVec::new();
        for (f, &c) in a {
            for (g, &e) in b {
                if let Some((h, s)) = self.wedge(f, g) {
                    add_to(&mut out, h, self.ring.mul(self.ring.mul(c, e), s), self.ring);
                }
            }
        }
        out
    }

    /// Image of `T_j` (`j = 1..m`) under the face `∂_i`, as a constant and a
    /// coefficient vector on `T'_1..T'_(m-1)`.
    fn face_linear(&self, i: usize, j: usize) -> (u64, Vec<u64>) {
        let ring = self.ring;
        let mut coeffs = vec![0u64; self.m - 1];
        if j == i {
            return (0, coeffs);
        }
        let k = if j < i { j } else { j - 1 };
        if k == 0 {
            for c in coeffs.iter_mut() {
                *c = ring.neg(1);
            }
            return (ring.p(), coeffs);
        }
        coeffs[k - 1] = 1;
        (0, coeffs)
    }

    fn face_t_part(&self, i: usize, t: &[u32], dt: u32) -> Result<Vec<(Vec<u32>, u32, u64)>> {
        let key = (i, t.to_vec(), dt);
        if let Some(v) = self.face_cache.lock().expect("cache").get(&key) {
            return Ok(v.clone());
        }
        let ring = self.ring;
        let lower = VarSpec::t_only(ring, 1, self.m - 1, TKind::Divided, self.cap.max(1))?;
        let images: Vec<PDSeries> = (1..=self.m)
            .map(|j| {
                let (c0, cs) = self.face_linear(i, j);
                let mut s = PDSeries::constant(&lower, c0);
                for (l, &c) in cs.iter().enumerate() {
                    s.add_term(Monomial { x: vec![], t: (0..self.m - 1).map(|r| u32::from(r == l)).collect() }, c);
                }
                s
            })
            .collect();
        let sub = Substitution::new(&lower, vec![], images)?;
        let coeff = pd_substitute(&PDSeries::monomial(&self.tspec, Monomial { x: vec![], t: t.to_vec() }, 1), &sub)?;
        // dT_K goes to the wedge of the linear parts of the images
        let mut forms: BTreeMap<u32, u64> = BTreeMap::from([(0u32, 1u64)]);
        for j in 0..self.m {
            if dt >> j & 1 == 0 {
                continue;
            }
            let (_, cs) = self.face_linear(i, j + 1);
            let mut next = BTreeMap::new();
            for (&mask, &c) in &forms {
                for (l, &e) in cs.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if let Some((neg, m2)) = merge(mask, 1 << l) {
                        let v = ring.mul(c, e);
                        let v = if neg { ring.neg(v) } else { v };
                        let s = next.entry(m2).or_insert(0u64);
                        *s = ring.add(*s, v);
                    }
                }
            }
            forms = next.into_iter().filter(|&(_, c)| c != 0).collect();
        }
        let mut out = Vec::new();
        for (mono, c) in coeff.terms() {
            for (&mask, &e) in &forms {
                let v = ring.mul(c, e);
                if v != 0 && mono.t.iter().sum::<u32>() + mask.count_ones() <= self.cap {
                    out.push((mono.t.clone(), mask, v));
                }
            }
        }
        self.face_cache.lock().expect("cache").insert(key, out.clone());
        Ok(out)
    }

    /// `∂_i` of a form, landing one level lower.
    pub fn face(&self, i: usize, f: &Form) -> Result<FormVec> {
        let mut out = FormVec::new();
        for (t, dt, c) in self.face_t_part(i, &f.t, f.dt)? {
            add_to(&mut out, Form { x: f.x.clone(), dx: f.dx, t, dt }, c, self.ring);
        }
        Ok(out)
    }

    fn matrix(&self, rows: &[Form], cols: &[Form], image: impl Fn(&Form) -> Result<FormVec> + Sync) -> Result<Matrix> {
        let index: HashMap<&Form, usize> = cols.iter().enumerate().map(|(k, f)| (f, k)).collect();
        let built: Vec<Vec<u64>> = rows
            .par_iter()
            .map(|f| {
                let mut row = vec![0u64; cols.len()];
                for (g, c) in image(f)? {
                    let k = *index.get(&g).ok_or_else(|| {
                        Error::CapsTooSmall(format!("image {} of {} leaves the basis", g.label(&self.names), f.label(&self.names)))
                    })?;
                    row[k] = c;
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        Ok(Matrix::from_rows(self.ring, cols.len(), built))
    }

    /// Matrix of `d: Ω^q → Ω^(q+1)` between the given bases.
    pub fn d_matrix(&self, rows: &[Form], cols: &[Form]) -> Result<Matrix> {
        self.matrix(rows, cols, |f| Ok(self.d(f)))
    }

    /// Matrix of `∂_i` from `rows` (this level) to `cols` (one level down).
    pub fn face_matrix(&self, i: usize, rows: &[Form], cols: &[Form]) -> Result<Matrix> {
        self.matrix(rows, cols, |f| self.face(i, f))
    }

    pub fn labels(&self, basis: &[Form]) -> Vec<String> {
        basis.iter().map(|f| f.label(&self.names)).collect()
    }

    /// The graded piece `g` of the complex, normalized or not.
    pub fn complex(&self, g: i64, normalized: bool) -> Result<ChainComplex> {
        let bases: Vec<Vec<Form>> = (0..=self.max_degree()).map(|q| self.basis(q, g, normalized)).collect();
        let diffs =
            (0..self.max_degree()).map(|q| self.d_matrix(&bases[q], &bases[q + 1])).collect::<Result<Vec<_>>>()?;
        ChainComplex::new(self.ring, 0, bases.iter().map(|b| self.labels(b)).collect(), diffs)
    }

    /// The contracting homotopy `κ = κ_1 + e_1 κ_2 + e_1 e_2 κ_3 + ...` where
    /// `κ_i(T_i^[k] dT_i ∧ β) = T_i^[k+1] β` and `e_i` sets `T_i = 0`.
    pub fn kappa(&self, f: &Form) -> FormVec {
        let ring = self.ring;
        let mut out = FormVec::new();
        for i in 0..self.m {
            // e_1 .. e_(i-1) kill anything involving an earlier variable
            if (0..i).any(|j| f.t[j] > 0 || f.dt >> j & 1 == 1) {
                break;
            }
            if f.dt >> i & 1 == 0 {
                continue;
            }
            let mut t = f.t.clone();
            t[i] += 1;
            let neg = (f.dx.count_ones() + below(f.dt, i)) % 2 == 1;
            let c = if neg { ring.neg(1) } else { 1 };
            add_to(&mut out, Form { x: f.x.clone(), dx: f.dx, t, dt: f.dt & !(1 << i) }, c, ring);
        }
        out
    }

    /// Checks `dκ + κd = id − P` on the graded piece `g`, where `P` keeps the
    /// `T`-free forms.
    pub fn check_homotopy(&self, g: i64) -> Result<()> {
        let top = self.max_degree();
        let bases: Vec<Vec<Form>> = (0..=top).map(|q| self.basis(q, g, false)).collect();
        for q in 0..=top {
            for f in &bases[q] {
                let mut lhs = self.d_vec(&self.kappa(f));
                for (h, c) in self.d(f) {
                    for (k, e) in self.kappa(&h) {
                        add_to(&mut lhs, k, self.ring.mul(c, e), self.ring);
                    }
                }
                let mut rhs = FormVec::new();
                if !f.is_t_free() {
                    rhs.insert(f.clone(), 1);
                }
                if lhs != rhs {
                    return Err(Error::MismatchWitness {
                        degree: q as i64,
                        graded: g.to_string(),
                        left: format!("(dκ + κd)({})", f.label(&self.names)),
                        right: "id − P".into(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// `dR(A)` as graded pieces over the window: the complex of `A` itself.
pub fn build_dr(obj: &PdObject) -> Result<BTreeMap<i64, ChainComplex>> {
    obj.graded_degrees().into_iter().map(|g| Ok((g, obj.complex(g, false)?))).collect()
}

/// One cohomology cell: total degree, graded degree, divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub degree: i64,
    pub graded: i64,
    pub divisors: ElementaryDivisors,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareReport {
    pub level: usize,
    pub cells: Vec<Cell>,
    pub homotopy_checked: bool,
}

/// `dR(A) → dR(AΔ^π_m)` is a quasi-isomorphism on every graded piece of the
/// window: equal divisors in every degree, and the explicit homotopy
/// contracts the `T`-part.
pub fn poincare_check(a: &Presentation, m: usize, cap: u32, window: i64) -> Result<PoincareReport> {
    let base = PdObject::from_presentation(a, 0, cap, window)?;
    let obj = base.at_level(m)?;
    let mut cells = Vec::new();
    for g in base.graded_degrees() {
        let h0 = base.complex(g, false)?.cohomology()?;
        let hm = obj.complex(g, false)?.cohomology()?;
        obj.check_homotopy(g)?;
        for (&q, left) in &hm {
            let right = h0.get(&q).cloned().unwrap_or_else(|| ElementaryDivisors::zero(base.ring()));
            if *left != right {
                return Err(Error::MismatchWitness {
                    degree: q,
                    graded: g.to_string(),
                    left: format!("level {m}: {left}"),
                    right: format!("level 0: {right}"),
                });
            }
            cells.push(Cell { degree: q, graded: g, divisors: left.clone() });
        }
    }
    Ok(PoincareReport { level: m, cells, homotopy_checked: true })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseChangeReport {
    pub level: usize,
    pub pieces_checked: usize,
}

/// Windowed `π`-torsion-freeness of every basis module, and the reduction
/// mod `π` agreeing basis-for-basis with the complex built over `F_p`.
pub fn base_change_check(a: &Presentation, m: usize, cap: u32, window: i64) -> Result<BaseChangeReport> {
    let obj = PdObject::from_presentation(a, m, cap, window)?;
    if obj.ring().precision() < 2 {
        return Err(Error::Config("base change needs N >= 2".into()));
    }
    let red = obj.over(Zpn::new(obj.ring().p(), 1)?)?;
    let mut pieces = 0;
    for g in obj.graded_degrees() {
        let c = obj.complex(g, false)?;
        c.torsion_check()?;
        compare_reduction(&c, &red.complex(g, false)?, g)?;
        pieces += 1;
    }
    Ok(BaseChangeReport { level: m, pieces_checked: pieces })
}

/// The reduction of `c` mod `p` against `r`, built directly over `F_p`.
pub fn compare_reduction(c: &ChainComplex, r: &ChainComplex, g: i64) -> Result<()> {
    for q in c.first_degree()..=c.last_degree() {
        if c.labels(q) != r.labels(q) {
            return Err(Error::BaseChangeMismatch(format!("graded {g}, degree {q}: bases differ")));
        }
        let a = c.differential(q).reduce_mod_p();
        let b = r.differential(q);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if a.get(i, j) != b.get(i, j) {
                    return Err(Error::BaseChangeMismatch(format!(
                        "graded {g}, degree {q}: entry ({}, {}) is {} mod p but {} over F_p",
                        c.labels(q)[i],
                        c.labels(q + 1)[j],
                        a.get(i, j),
                        b.get(i, j)
                    )));
                }
            }
        }
    }
    Ok(())
}
