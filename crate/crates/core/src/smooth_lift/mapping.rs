use super::presentation::Presentation;
use crate::error::{Error, Result};
use crate::padic_linalg::Zpn;
use crate::power_series::{pd_substitute, Monomial, PDSeries, SpecRef, Substitution};
use crate::simplicial_site::{divide_by_vertex_product, fill_boundary, Site, Variant};
use std::sync::Arc;

const MAX_NEWTON_STEPS: usize = 64;

/// `Hom(A, B ⊗ RΔ^π_•)`: simplices are tuples of images of the generators of
/// `A` in the level-`m` carrier over the normal-form model of `B`.
///
/// Carriers are truncated modulo `(p, T)^(N+D)`, so coefficients of
/// `T`-weight at most `D` are exact mod `p^N`.
#[derive(Clone, Debug)]
pub struct MappingSpace {
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    site: Site,
    weight_cap: u32,
}

/// An `m`-simplex of a mapping space; at level 0 a morphism `A -> B`.
#[derive(Clone, Debug, PartialEq)]
pub struct Morphism {
    level: usize,
    images: Vec<PDSeries>,
}

/// A 1-simplex, read as a homotopy from its value at `T = 0` to its value at
/// `T = π`.
#[derive(Clone, Debug, PartialEq)]
pub struct Homotopy(pub Morphism);

impl Morphism {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn images(&self) -> &[PDSeries] {
        &self.images
    }

    pub fn precision(&self) -> u32 {
        self.images.iter().map(|f| f.precision()).min().unwrap_or(u32::MAX)
    }
}

impl Homotopy {
    pub fn morphism(&self) -> &Morphism {
        &self.0
    }
}

impl MappingSpace {
    pub fn new(source: &Presentation, target: &Presentation, weight_cap: u32, window: i64) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::Config(format!(
                "source over {} but target over {}",
                source.ring(),
                target.ring()
            )));
        }
        let ring = target.ring();
        let site = Site::filtered(ring, target.model().geom.clone(), window, ring.precision() + weight_cap)?;
        Ok(MappingSpace { source: Arc::new(source.clone()), target: Arc::new(target.clone()), site, weight_cap })
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn site(&self) -> &Site {
        &self.site
    }

    pub fn ring(&self) -> Zpn {
        self.site.ring()
    }

    pub fn weight_cap(&self) -> u32 {
        self.weight_cap
    }

    pub fn level(&self, m: usize) -> &SpecRef {
        self.site.level(m, Variant::Pi)
    }

    /// Validates a tuple of images as an `m`-simplex.
    pub fn simplex(&self, m: usize, images: Vec<PDSeries>) -> Result<Morphism> {
        if images.len() != self.source.n_gens() {
            return Err(Error::Config(format!(
                "{} images for {} generators",
                images.len(),
                self.source.n_gens()
            )));
        }
        let spec = self.level(m);
        let images: Vec<PDSeries> = images
            .into_iter()
            .map(|f| if f.spec() == spec { Ok(f) } else { self.embed(&f, m) })
            .collect::<Result<_>>()?;
        let images: Vec<PDSeries> = images.iter().map(|f| self.target.model().normal_form(f)).collect();
        let res = self.residuals(&images)?;
        if let Some((k, r)) = res.iter().enumerate().find(|(_, r)| !r.is_zero()) {
            return Err(Error::IdentityViolation(format!("relation {k} maps to {r}")));
        }
        Ok(Morphism { level: m, images })
    }

    /// Re-reads `f` (any ring precision, same geometric block) in the
    /// level-`m` carrier; coefficients are lifted verbatim.
    fn embed(&self, f: &PDSeries, m: usize) -> Result<PDSeries> {
        let spec = self.level(m);
        if f.spec().geom() != spec.geom() || f.spec().n_t() != spec.n_t() {
            return Err(Error::VarSpecMismatch);
        }
        let mut out = PDSeries::zero(spec);
        for (mono, c) in f.terms() {
            out.add_term(mono.clone(), c);
        }
        Ok(out)
    }

    /// The identity of `A`, when source and target agree.
    pub fn identity(&self) -> Result<Morphism> {
        if self.source.generators() != self.target.generators() || self.source.relations() != self.target.relations() {
            return Err(Error::Config("identity needs source equal to target".into()));
        }
        let spec = self.level(0);
        let images = (0..self.source.n_gens()).map(|i| self.target.model().generator(spec, i)).collect();
        self.simplex(0, images)
    }

    /// Images of the source relations, in normal form.
    pub fn residuals(&self, images: &[PDSeries]) -> Result<Vec<PDSeries>> {
        let spec = images.first().map(|f| f.spec().clone()).unwrap_or_else(|| self.level(0).clone());
        let sub = Substitution::new(&spec, images.to_vec(), vec![])?;
        self.source
            .relations()
            .iter()
            .map(|f| Ok(self.target.model().normal_form(&pd_substitute(f, &sub)?)))
            .collect()
    }

    fn jacobian_at(&self, images: &[PDSeries]) -> Result<Vec<Vec<PDSeries>>> {
        let spec = images[0].spec().clone();
        let sub = Substitution::new(&spec, images.to_vec(), vec![])?;
        self.source
            .jacobian()
            .iter()
            .map(|row| row.iter().map(|d| Ok(self.target.model().normal_form(&pd_substitute(d, &sub)?))).collect())
            .collect()
    }

    /// `-J^(-1) e`, indexed by the witness.
    fn newton_correction(&self, images: &[PDSeries], e: &[PDSeries]) -> Result<Vec<PDSeries>> {
        let jinv = invert(self.jacobian_at(images)?)?;
        Ok(jinv
            .iter()
            .map(|row| {
                let mut s = PDSeries::zero(e[0].spec());
                for (a, b) in row.iter().zip(e) {
                    s = &s - &(a * b);
                }
                self.target.model().normal_form(&s)
            })
            .collect())
    }

    pub fn face(&self, f: &Morphism, i: usize) -> Morphism {
        let images = f.images.iter().map(|g| self.site.apply_face(f.level, i, Variant::Pi, g)).collect();
        Morphism { level: f.level - 1, images }
    }

    pub fn degeneracy(&self, f: &Morphism, i: usize) -> Morphism {
        let images = f.images.iter().map(|g| self.site.apply_degeneracy(f.level, i, Variant::Pi, g)).collect();
        Morphism { level: f.level + 1, images }
    }

    /// The underlying morphism mod `p`, as images at level 0.
    pub fn reduction(&self, f: &Morphism) -> Vec<PDSeries> {
        f.images.iter().map(|g| self.site.augmentation(g, Variant::Pi)).collect()
    }

    /// A morphism over `Z/p^N` reducing to `seed` mod `p`. The seed is lifted
    /// verbatim and repaired by Newton iteration on the witness coordinates.
    pub fn lift_morphism(&self, seed: &[PDSeries]) -> Result<Morphism> {
        if seed.len() != self.source.n_gens() {
            return Err(Error::Config("one seed image per generator is required".into()));
        }
        let model = self.target.model();
        let mut h: Vec<PDSeries> =
            seed.iter().map(|f| Ok(model.normal_form(&self.embed(f, 0)?))).collect::<Result<_>>()?;
        for _ in 0..MAX_NEWTON_STEPS {
            let res = self.residuals(&h)?;
            if res.iter().all(|r| r.is_zero()) {
                let out = Morphism { level: 0, images: h };
                for (i, (a, b)) in self.reduction(&out).iter().zip(seed).enumerate() {
                    if a.geometric_terms() != b.reduce_mod_p().geometric_terms() {
                        return Err(Error::NewtonStall(format!(
                            "lift of generator {} left the residue class of its seed",
                            self.source.generators()[i]
                        )));
                    }
                }
                return Ok(out);
            }
            if res.iter().any(|r| !r.reduce_mod_p().is_zero()) {
                return Err(Error::NewtonStall(format!("seed does not satisfy the relations mod p: {}", res[0])));
            }
            let u = self.newton_correction(&h, &res)?;
            for (&w, du) in self.source.witness().iter().zip(&u) {
                h[w] = model.normal_form(&(&h[w] + du));
            }
        }
        Err(Error::NewtonStall(format!("no convergence in {MAX_NEWTON_STEPS} steps")))
    }

    /// Newton iteration through the `(T_0 ⋯ T_m)`-adic layers of an
    /// `m`-simplex candidate whose residuals are divisible by the vertex
    /// product. The faces of the candidate are unchanged.
    fn newton_layers(&self, m: usize, mut h: Vec<PDSeries>) -> Result<Vec<PDSeries>> {
        let model = self.target.model();
        let prod = self.site.vertex_product(m, Variant::Pi);
        for _ in 0..MAX_NEWTON_STEPS {
            let res = self.residuals(&h)?;
            if res.iter().all(|r| r.is_zero()) {
                return Ok(h);
            }
            let e: Vec<PDSeries> = res
                .iter()
                .map(|r| {
                    divide_by_vertex_product(r, m).map_err(|err| {
                        Error::PrecisionExhausted(format!("residual {r} is not in the vertex ideal: {err}"))
                    })
                })
                .collect::<Result<_>>()?;
            let u = self.newton_correction(&h, &e)?;
            for (&w, du) in self.source.witness().iter().zip(&u) {
                h[w] = model.normal_form(&(&h[w] + &(&prod * du)));
            }
        }
        Err(Error::NewtonStall(format!("no convergence in {MAX_NEWTON_STEPS} layer steps")))
    }

    fn check_level(&self, f: &Morphism, m: usize) -> Result<()> {
        if f.level != m || f.images.len() != self.source.n_gens() {
            return Err(Error::IncompatibleFaces(format!("expected a {m}-simplex, got level {}", f.level)));
        }
        Ok(())
    }

    /// A homotopy `h` with `h|_(T=0) = φ1` and `h|_(T=π) = φ2`.
    ///
    /// Starts from `φ1 + T (φ2 - φ1)/π`, which has the right endpoints. Dividing by `π` fixes that candidate
    /// only mod `p^(N-1)`, and the residual is then divisible by `T(π - T)`
    /// only after a correction `p^(N-1) δ T` of the witness coordinates, with
    /// `J(φ1) δ ≡ -G/p^(N-1)` where `G` is the residual divided by `T` and
    /// evaluated at `π`. Newton then runs in the `T(π - T)`-adic layers.
    pub fn build_homotopy(&self, phi1: &Morphism, phi2: &Morphism) -> Result<Homotopy> {
        self.check_level(phi1, 0)?;
        self.check_level(phi2, 0)?;
        for (i, (a, b)) in phi1.images.iter().zip(&phi2.images).enumerate() {
            if !(a - b).reduce_mod_p().is_zero() {
                return Err(Error::NotCongruent { generator: self.source.generators()[i].clone() });
            }
        }
        let model = self.target.model();
        let ring = self.ring();
        let n = ring.precision();
        let t = PDSeries::t(self.level(1), 0);
        let mut h = Vec::with_capacity(phi1.images.len());
        for (a, b) in phi1.images.iter().zip(&phi2.images) {
            let q = (b - a).divide_exact(ring.p())?.lift_to_full();
            let up = |f: &PDSeries| self.site.apply_degeneracy(0, 0, Variant::Pi, f);
            h.push(model.normal_form(&(&up(a) + &(&up(&q) * &t))));
        }
        let res = self.residuals(&h)?;
        if res.iter().any(|r| !r.is_zero()) {
            let l0 = self.level(0);
            let scale = ring.p_pow(n - 1);
            let mut g = Vec::with_capacity(res.len());
            for r in &res {
                let mut gi = PDSeries::zero(l0);
                for (mono, c) in r.terms() {
                    let k = mono.weight();
                    if k == 0 {
                        return Err(Error::PrecisionExhausted(format!("endpoint residual {r} is nonzero")));
                    }
                    gi.add_term(Monomial { x: mono.x.clone(), t: vec![] }, ring.mul(c, ring.p_pow(k - 1)));
                }
                let gi = gi.divide_exact(scale).map_err(|_| {
                    Error::PrecisionExhausted(format!("residual {r} does not vanish at T = π"))
                })?;
                g.push(gi.lift_to_full());
            }
            let delta = self.newton_correction(&phi1.images, &g)?;
            for (&w, d) in self.source.witness().iter().zip(&delta) {
                let d1 = self.site.apply_degeneracy(0, 0, Variant::Pi, d);
                let bump = &(&d1 * &t) * &PDSeries::constant(self.level(1), scale);
                h[w] = model.normal_form(&(&h[w] + &bump));
            }
        }
        let h = Morphism { level: 1, images: self.newton_layers(1, h)? };
        if self.face(&h, 1) != *phi1 || self.face(&h, 0) != *phi2 {
            return Err(Error::PrecisionExhausted("homotopy endpoints drifted".into()));
        }
        Ok(Homotopy(h))
    }

    /// Value of a homotopy at `T = 0`.
    pub fn at_zero(&self, h: &Homotopy) -> Morphism {
        self.face(&h.0, 1)
    }

    /// Value of a homotopy at `T = π`.
    pub fn at_pi(&self, h: &Homotopy) -> Morphism {
        self.face(&h.0, 0)
    }

    /// An `m`-simplex with the given faces over `base`: each image is filled
    /// as in the simplicial ring, then Newton-corrected in the vertex-product
    /// layers.
    pub fn fill_boundary(&self, m: usize, faces: &[Morphism], base: &Morphism) -> Result<Morphism> {
        if m == 0 || faces.len() != m + 1 {
            return Err(Error::IncompatibleFaces(format!("a {m}-simplex needs {} faces", m + 1)));
        }
        self.check_level(base, 0)?;
        for f in faces {
            self.check_level(f, m - 1)?;
        }
        if m == 1 {
            for (j, f) in faces.iter().enumerate() {
                if self.reduction(f) != self.reduction(base) {
                    return Err(Error::IncompatibleFaces(format!("face {j} does not reduce to the base")));
                }
            }
            return Ok(self.build_homotopy(&faces[1], &faces[0])?.0);
        }
        let mut h = Vec::with_capacity(self.source.n_gens());
        for i in 0..self.source.n_gens() {
            let fi: Vec<PDSeries> = faces.iter().map(|f| f.images[i].clone()).collect();
            h.push(fill_boundary(&self.site, m, &fi, &base.images[i].reduce_mod_p())?);
        }
        let out = Morphism { level: m, images: self.newton_layers(m, h)? };
        for (i, f) in faces.iter().enumerate() {
            if self.face(&out, i) != *f {
                return Err(Error::PrecisionExhausted(format!("face {i} of the filler drifted")));
            }
        }
        Ok(out)
    }
}

/// Gauss-Jordan inverse over a carrier, pivoting on units.
fn invert(mut a: Vec<Vec<PDSeries>>) -> Result<Vec<Vec<PDSeries>>> {
    let n = a.len();
    if n == 0 {
        return Ok(vec![]);
    }
    let spec = a[0][0].spec().clone();
    let mut inv: Vec<Vec<PDSeries>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { PDSeries::one(&spec) } else { PDSeries::zero(&spec) }).collect())
        .collect();
    for col in 0..n {
        let (piv, pinv) = (col..n)
            .find_map(|r| a[r][col].inverse().ok().map(|v| (r, v)))
            .ok_or_else(|| Error::WitnessNotInvertible(format!("column {col}: no unit among {}", a[col][col])))?;
        a.swap(col, piv);
        inv.swap(col, piv);
        for j in 0..n {
            a[col][j] = &a[col][j] * &pinv;
            inv[col][j] = &inv[col][j] * &pinv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let c = a[r][col].clone();
            for j in 0..n {
                a[r][j] = &a[r][j] - &(&c * &a[col][j]);
                inv[r][j] = &inv[r][j] - &(&c * &inv[col][j]);
            }
        }
    }
    Ok(inv)
}
