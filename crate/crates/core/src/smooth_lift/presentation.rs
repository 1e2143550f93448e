use crate::error::{Error, Result};
use crate::padic_linalg::Zpn;
use crate::power_series::{GeomVar, Monomial, PDSeries, SpecRef, TKind, VarSpec};

/// A relation as integer coefficients on generator exponents.
pub type IntRelation = Vec<(Vec<u32>, i64)>;

/// How a presentation is realized by a normal-form carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraKind {
    /// No relations.
    Free,
    /// Every relation is `a x_j u + b` with `a, b` units and `u` a witness:
    /// `u` becomes `-b/a x_j^(-1)` and `x_j` a Laurent variable.
    Laurent,
    /// One relation, monic up to a unit in its witness variable; normal forms
    /// have witness degree below that of the relation.
    Hypersurface,
}

/// A standard-smooth algebra `R[x]/(f)[g^-1]` with a jacobian witness.
///
/// Relations are kept as integer data so that lifting to a finer precision
/// reuses the same integers.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    ring: Zpn,
    generators: Vec<String>,
    weights: Option<Vec<i64>>,
    int_relations: Vec<IntRelation>,
    witness: Vec<usize>,
    spec: SpecRef,
    relations: Vec<PDSeries>,
    kind: AlgebraKind,
    model: Model,
}

/// The normal-form carrier: geometric variables and the image of each
/// generator in them.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub geom: Vec<GeomVar>,
    pub weights: Vec<i64>,
    /// `embed[i]` lists `(exponents, coefficient)` for generator `i`.
    pub embed: Vec<Vec<(Vec<i64>, u64)>>,
    /// Hypersurface data: model index of the witness variable, its degree in
    /// the relation, and the relation in model exponents.
    pub hypersurface: Option<(usize, i64, Vec<(Vec<i64>, u64)>)>,
}

impl Presentation {
    pub fn new(ring: Zpn, generators: Vec<String>, relations: Vec<IntRelation>, witness: Vec<usize>) -> Result<Self> {
        let n = generators.len();
        if witness.len() != relations.len() {
            return Err(Error::WitnessNotInvertible(format!(
                "{} relations but a witness of size {}",
                relations.len(),
                witness.len()
            )));
        }
        let mut seen = vec![false; n];
        for &w in &witness {
            if w >= n || seen[w] {
                return Err(Error::WitnessNotInvertible(format!("witness index {w} is out of range or repeated")));
            }
            seen[w] = true;
        }
        let mut window = 1i64;
        for rel in &relations {
            for (e, _) in rel {
                if e.len() != n {
                    return Err(Error::Config(format!("relation exponent {e:?} does not match {n} generators")));
                }
                window = window.max(e.iter().map(|&k| k as i64).max().unwrap_or(0));
            }
        }
        let geom = generators.iter().map(|g| GeomVar::polynomial(g)).collect();
        let spec = VarSpec::new(ring, geom, window, vec![], TKind::Ordinary, 1)?;
        let relations_s: Vec<PDSeries> = relations
            .iter()
            .map(|rel| {
                let mut f = PDSeries::zero(&spec);
                for (e, c) in rel {
                    f.add_term(Monomial { x: e.iter().map(|&k| k as i64).collect(), t: vec![] }, ring.from_i64(*c));
                }
                f
            })
            .collect();
        let (kind, model) = build_model(ring, &generators, &relations_s, &witness)?;
        let pres = Presentation {
            ring,
            generators,
            weights: None,
            int_relations: relations,
            witness,
            spec,
            relations: relations_s,
            kind,
            model,
        };
        pres.check_witness()?;
        Ok(pres)
    }

    /// Attaches integer weights; every relation must be homogeneous.
    pub fn with_weights(mut self, weights: Vec<i64>) -> Result<Self> {
        if weights.len() != self.generators.len() {
            return Err(Error::Config("one weight per generator is required".into()));
        }
        for (k, rel) in self.int_relations.iter().enumerate() {
            let degs: Vec<i64> =
                rel.iter().map(|(e, _)| e.iter().zip(&weights).map(|(&a, &w)| a as i64 * w).sum()).collect();
            if degs.windows(2).any(|d| d[0] != d[1]) {
                return Err(Error::Config(format!("relation {k} is not homogeneous for the weights {weights:?}")));
            }
        }
        self.model.weights = model_weights(&self.model, &weights);
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn ring(&self) -> Zpn {
        self.ring
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn n_gens(&self) -> usize {
        self.generators.len()
    }

    pub fn weights(&self) -> Option<&[i64]> {
        self.weights.as_deref()
    }

    pub fn int_relations(&self) -> &[IntRelation] {
        &self.int_relations
    }

    pub fn relations(&self) -> &[PDSeries] {
        &self.relations
    }

    pub fn witness(&self) -> &[usize] {
        &self.witness
    }

    /// Carrier of the relations: the polynomial ring on the generators.
    pub fn spec(&self) -> &SpecRef {
        &self.spec
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    /// The same integer data over `Z/p^n`.
    pub fn at_precision(&self, n: u32) -> Result<Self> {
        let ring = Zpn::new(self.ring.p(), n)?;
        let pres = Presentation::new(ring, self.generators.clone(), self.int_relations.clone(), self.witness.clone())?;
        match &self.weights {
            Some(w) => pres.with_weights(w.clone()),
            None => Ok(pres),
        }
    }

    /// Jacobian rows `∂f_i/∂x_w` for `w` in the witness.
    pub fn jacobian(&self) -> Vec<Vec<PDSeries>> {
        self.relations.iter().map(|f| self.witness.iter().map(|&w| f.d_geom(w)).collect()).collect()
    }

    /// The witness determinant must be a unit mod `p` on the algebra. For
    /// Laurent and free algebras this is checked on the normal form; for a
    /// hypersurface the derivative may vanish at points where another partial
    /// does not, so the check is that `f` has no singular `F_p`-point and that
    /// the witness partial is not identically zero.
    fn check_witness(&self) -> Result<()> {
        let p = self.ring.p();
        match self.kind {
            AlgebraKind::Free => Ok(()),
            AlgebraKind::Laurent => Ok(()),
            AlgebraKind::Hypersurface => {
                let f = &self.relations[0];
                let df = f.d_geom(self.witness[0]).reduce_mod_p();
                if df.is_zero() {
                    return Err(Error::WitnessNotInvertible(format!(
                        "d/d{} of {f} vanishes mod {p}",
                        self.generators[self.witness[0]]
                    )));
                }
                let n = self.generators.len() as u32;
                if (p as u128).pow(n) > 1 << 20 {
                    return Ok(());
                }
                let grads: Vec<PDSeries> = (0..n as usize).map(|i| f.d_geom(i)).collect();
                let mut point = vec![0u64; n as usize];
                loop {
                    let at = |g: &PDSeries| eval_mod_p(g, &point, p);
                    if at(f) == 0 && grads.iter().all(|g| at(g) == 0) {
                        return Err(Error::WitnessNotInvertible(format!("singular point {point:?} mod {p}")));
                    }
                    let mut i = 0;
                    while i < point.len() {
                        point[i] += 1;
                        if point[i] < p {
                            break;
                        }
                        point[i] = 0;
                        i += 1;
                    }
                    if i == point.len() {
                        return Ok(());
                    }
                }
            }
        }
    }
}

fn eval_mod_p(f: &PDSeries, point: &[u64], p: u64) -> u64 {
    let mut s = 0u64;
    for (m, c) in f.terms() {
        let mut v = c % p;
        for (&e, &a) in m.x.iter().zip(point) {
            for _ in 0..e {
                v = v * a % p;
            }
        }
        s = (s + v) % p;
    }
    s
}

fn model_weights(model: &Model, weights: &[i64]) -> Vec<i64> {
    // a model variable is a generator or the inverse of one; read its weight
    // off the single-monomial embedding
    let mut out = vec![0; model.geom.len()];
    for (g, emb) in model.embed.iter().enumerate() {
        if let [(e, _)] = emb.as_slice() {
            let nz: Vec<usize> = (0..e.len()).filter(|&k| e[k] != 0).collect();
            if let [k] = nz.as_slice() {
                if e[*k] == 1 {
                    out[*k] = weights[g];
                }
            }
        }
    }
    out
}

/// `a x_j u + b`: returns `(j, a, b)` when `rel` has this shape in `u`.
fn laurent_shape(ring: Zpn, rel: &PDSeries, u: usize) -> Option<(usize, u64, u64)> {
    let terms: Vec<(&Monomial, u64)> = rel.terms().collect();
    if terms.len() != 2 {
        return None;
    }
    let (mut lin, mut cst) = (None, None);
    for (m, c) in terms {
        if m.x.iter().all(|&e| e == 0) {
            cst = Some(c);
        } else {
            let nz: Vec<usize> = (0..m.x.len()).filter(|&k| m.x[k] != 0).collect();
            if nz.len() == 2 && nz.contains(&u) && m.x[nz[0]] == 1 && m.x[nz[1]] == 1 {
                let j = if nz[0] == u { nz[1] } else { nz[0] };
                lin = Some((j, c));
            }
        }
    }
    let ((j, a), b) = (lin?, cst?);
    (ring.is_unit(a) && ring.is_unit(b)).then_some((j, a, b))
}

fn build_model(ring: Zpn, gens: &[String], rels: &[PDSeries], witness: &[usize]) -> Result<(AlgebraKind, Model)> {
    let n = gens.len();
    let identity = |n: usize| -> Vec<Vec<(Vec<i64>, u64)>> {
        (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 1;
                vec![(e, 1)]
            })
            .collect()
    };
    if rels.is_empty() {
        let geom = gens.iter().map(|g| GeomVar::polynomial(g)).collect();
        return Ok((AlgebraKind::Free, Model { geom, weights: vec![0; n], embed: identity(n), hypersurface: None }));
    }
    let shapes: Vec<Option<(usize, u64, u64)>> =
        rels.iter().zip(witness).map(|(f, &u)| laurent_shape(ring, f, u)).collect();
    if shapes.iter().all(|s| s.is_some()) {
        let shapes: Vec<(usize, u64, u64)> = shapes.into_iter().flatten().collect();
        let inverted: Vec<usize> = shapes.iter().map(|s| s.0).collect();
        let ok = inverted.iter().all(|j| !witness.contains(j))
            && (0..inverted.len()).all(|a| !inverted[a + 1..].contains(&inverted[a]));
        if ok {
            let kept: Vec<usize> = (0..n).filter(|i| !witness.contains(i)).collect();
            let geom = kept
                .iter()
                .map(|&i| if inverted.contains(&i) { GeomVar::laurent(&gens[i]) } else { GeomVar::polynomial(&gens[i]) })
                .collect();
            let pos = |i: usize| kept.iter().position(|&k| k == i).expect("kept generator");
            let mut embed = vec![Vec::new(); n];
            for &i in &kept {
                let mut e = vec![0; kept.len()];
                e[pos(i)] = 1;
                embed[i] = vec![(e, 1)];
            }
            for (&u, &(j, a, b)) in witness.iter().zip(&shapes) {
                let mut e = vec![0; kept.len()];
                e[pos(j)] = -1;
                let c = ring.neg(ring.mul(b, ring.inv(a).expect("unit")));
                embed[u] = vec![(e, c)];
            }
            let weights = vec![0; kept.len()];
            return Ok((AlgebraKind::Laurent, Model { geom, weights, embed, hypersurface: None }));
        }
    }
    if rels.len() == 1 {
        let f = &rels[0];
        let w = witness[0];
        let d = f.terms().map(|(m, _)| m.x[w]).max().unwrap_or(0);
        let lead: Vec<(&Monomial, u64)> = f.terms().filter(|(m, _)| m.x[w] == d).collect();
        let monic = d > 0
            && lead.len() == 1
            && lead[0].0.x.iter().enumerate().all(|(k, &e)| k == w || e == 0)
            && ring.is_unit(lead[0].1);
        if monic {
            let geom = gens.iter().map(|g| GeomVar::polynomial(g)).collect();
            let rel = f.terms().map(|(m, c)| (m.x.clone(), c)).collect();
            let model = Model { geom, weights: vec![0; n], embed: identity(n), hypersurface: Some((w, d, rel)) };
            return Ok((AlgebraKind::Hypersurface, model));
        }
    }
    Err(Error::Unsupported(
        "only free algebras, Laurent localizations and hypersurfaces monic in the witness have normal forms".into(),
    ))
}

impl Model {
    /// Image of generator `i` in a carrier over this model.
    pub fn generator(&self, spec: &SpecRef, i: usize) -> PDSeries {
        let mut out = PDSeries::zero(spec);
        for (e, c) in &self.embed[i] {
            out.add_term(Monomial { x: e.clone(), t: vec![0; spec.n_t()] }, *c);
        }
        out
    }

    /// Reduces `f` to its normal form (a no-op unless the model is a
    /// hypersurface).
    pub fn normal_form(&self, f: &PDSeries) -> PDSeries {
        let Some((w, d, rel)) = &self.hypersurface else { return f.clone() };
        let spec = f.spec();
        let ring = f.coeff_ring();
        let lead = rel.iter().find(|(e, _)| e[*w] == *d).map(|(_, c)| *c).expect("leading term");
        let lead_inv = ring.inv(lead).expect("unit leading coefficient");
        let mut f = f.clone();
        loop {
            let top = f.terms().filter(|(m, _)| m.x[*w] >= *d).max_by_key(|(m, _)| m.x[*w]).map(|(m, c)| (m.clone(), c));
            let Some((m, c)) = top else { return f };
            let q = ring.mul(c, lead_inv);
            let mut sub = PDSeries::zero(spec).at_precision(f.precision());
            for (e, rc) in rel {
                let mut x = m.x.clone();
                for (k, a) in x.iter_mut().enumerate() {
                    *a += e[k];
                }
                x[*w] -= d;
                sub.add_term(Monomial { x, t: m.t.clone() }, ring.mul(q, *rc));
            }
            f = &f - &sub;
        }
    }
}

/// The algebras with built-in presentations, over `F_p`.
pub fn catalog(name: &str, p: u64) -> Result<Presentation> {
    let ring = Zpn::new(p, 1)?;
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match name {
        "point" => Presentation::new(ring, vec![], vec![], vec![]),
        "a1" => Presentation::new(ring, names(&["x"]), vec![], vec![])?.with_weights(vec![1]),
        "gm" => Presentation::new(ring, names(&["x", "y"]), vec![vec![(vec![1, 1], 1), (vec![0, 0], -1)]], vec![1])?
            .with_weights(vec![1, -1]),
        "ell-3-1-2" => {
            if p != 3 {
                return Err(Error::Config("ell-3-1-2 is defined over F_3".into()));
            }
            Presentation::new(
                ring,
                names(&["x", "y"]),
                vec![vec![(vec![0, 2], 1), (vec![3, 0], -1), (vec![1, 0], -1), (vec![0, 0], -2)]],
                vec![1],
            )
        }
        other => Err(Error::Config(format!("unknown catalog algebra {other:?} (point, a1, gm, ell-3-1-2)"))),
    }
}

/// The verbatim lift of `a` to `Z/p^n`, with the witness re-checked.
pub fn lift_algebra(a: &Presentation, n: u32) -> Result<Presentation> {
    a.at_precision(n)
}
