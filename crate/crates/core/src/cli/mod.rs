//! The `crystalcalc` command line: job configuration, verbs and reports.

mod input;
mod report;

pub use input::{evaluate, parse_expression, parse_morphism, parse_presentation, Term};
pub use report::Report;

use crate::crystalline::{self, Caps, Totalization};
use crate::error::{Error, Result};
use crate::padic_linalg::{is_prime, Zpn};
use crate::pd_derham::{self, cech_descent_check, Localizer};
use crate::power_series::{Monomial, PDSeries, VarKind};
use crate::simplicial_site::{
    check_regular_sequence, permutations, verify_boundary_kernel, verify_simplicial_identities, KernelStatus, MapTable,
    Site, Variant,
};
use crate::smooth_lift::{catalog, lift_algebra, MappingSpace, Morphism, Presentation};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const SCHEMA: &str = "crystalcalc/1";

/// Environment variable bounding the worker pool.
pub const THREADS_VAR: &str = "CRYSTALCALC_THREADS";

#[derive(Parser, Debug)]
#[command(name = "crystalcalc", version, about = "Crystalline cohomology of smooth algebras mod p^N")]
pub struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Simplicial identities, boundary kernels and regular sequences.
    VerifySimplicial {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long = "m-max", default_value_t = 3)]
        m_max: usize,
    },
    /// Lift a morphism (the identity by default) to Z/p^N.
    Lift {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long)]
        morphism: Option<PathBuf>,
    },
    /// Homotopies between congruent lifts, from files or seeded samples.
    Homotopy {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, requires = "phi2")]
        phi1: Option<PathBuf>,
        #[arg(long, requires = "phi1")]
        phi2: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// de Rham cohomology, the Poincaré lemma, base change and Čech descent.
    Dr {
        #[command(flatten)]
        job: JobArgs,
        /// Comma separated localizers, e.g. `x,x-1`.
        #[arg(long)]
        cover: Option<String>,
    },
    /// Cohomology of the truncated total complex.
    Cris {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long)]
        unnormalized: bool,
    },
    /// Compare de Rham and crystalline cohomology.
    Compare {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Check the catalog's closed-form values.
    Known {
        #[command(flatten)]
        job: JobArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct JobArgs {
    #[arg(long)]
    p: u64,
    #[arg(long = "N", default_value_t = 2)]
    n: u32,
    #[arg(long = "D", default_value_t = 6)]
    d: u32,
    #[arg(long = "E", default_value_t = 6)]
    e: i64,
    #[arg(long = "M", default_value_t = 2)]
    m: usize,
    /// Catalog algebra: point, a1, gm, ell-3-1-2.
    #[arg(long, default_value = "a1")]
    algebra: String,
    /// Presentation file (overrides --algebra).
    #[arg(long)]
    presentation: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraSource {
    Catalog(String),
    File(PathBuf),
}

/// Validated job parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobConfig {
    pub p: u64,
    pub n: u32,
    pub d: u32,
    pub e: i64,
    pub m: usize,
    pub source: AlgebraSource,
    pub seed: u64,
}

impl JobConfig {
    fn from_args(a: &JobArgs) -> Result<Self> {
        if !is_prime(a.p) {
            return Err(Error::Config(format!("--p {} is not prime", a.p)));
        }
        if a.n == 0 || a.d == 0 || a.e < 1 || a.m == 0 {
            return Err(Error::Config("N, D, E and M must be at least 1".into()));
        }
        let source = match &a.presentation {
            Some(path) => AlgebraSource::File(path.clone()),
            None => AlgebraSource::Catalog(a.algebra.clone()),
        };
        Ok(JobConfig { p: a.p, n: a.n, d: a.d, e: a.e, m: a.m, source, seed: a.seed })
    }

    pub fn caps(&self) -> Caps {
        Caps { weight: self.d, window: self.e, levels: self.m }
    }

    pub fn algebra_name(&self) -> String {
        match &self.source {
            AlgebraSource::Catalog(n) => n.clone(),
            AlgebraSource::File(p) => p.display().to_string(),
        }
    }

    /// The presentation over `F_p`.
    pub fn algebra(&self) -> Result<Presentation> {
        match &self.source {
            AlgebraSource::Catalog(n) => catalog(n, self.p),
            AlgebraSource::File(path) => parse_presentation(&read(path)?, Some(self.p)),
        }
    }

    fn header(&self, r: &mut Report) {
        r.push("algebra", self.algebra_name());
        r.push("p", self.p);
        r.push("N", self.n);
        r.push("D", self.d);
        r.push("E", self.e);
        r.push("M", self.m);
        r.push("seed", self.seed);
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

/// Exit status of a finished run.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Parse { .. } | Error::Unsupported(_) | Error::CapsTooSmall(_) => 2,
        _ => 1,
    }
}

/// Result of [`run`]: the exit code, the report, and where it goes.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
    pub out: Option<PathBuf>,
}

/// Parses `argv` (program name first) and runs the verb. Usage errors give
/// code 2 with the usage text as report.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome { code, report: e.to_string(), out: None };
        }
    };
    let (verb, job) = cli.verb.parts();
    let mut report = Report::new(verb);
    let code = match with_pool(|| dispatch(&cli.verb, &mut report)) {
        Ok(()) => {
            report.push("status", "pass");
            0
        }
        Err(e) => {
            report.push("status", "fail");
            report.push("witness", &e);
            exit_code(&e)
        }
    };
    Outcome { code, report: report.to_string(), out: job.out.clone() }
}

fn with_pool<T: Send>(f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return f();
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Config(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(f)
}

impl Verb {
    fn parts(&self) -> (&'static str, &JobArgs) {
        match self {
            Verb::VerifySimplicial { job, .. } => ("verify-simplicial", job),
            Verb::Lift { job, .. } => ("lift", job),
            Verb::Homotopy { job, .. } => ("homotopy", job),
            Verb::Dr { job, .. } => ("dr", job),
            Verb::Cris { job, .. } => ("cris", job),
            Verb::Compare { job } => ("compare", job),
            Verb::Known { job } => ("known", job),
        }
    }
}

fn dispatch(verb: &Verb, r: &mut Report) -> Result<()> {
    let cfg = JobConfig::from_args(verb.parts().1)?;
    cfg.header(r);
    match verb {
        Verb::VerifySimplicial { m_max, .. } => verify_simplicial(&cfg, *m_max, r),
        Verb::Lift { morphism, .. } => lift(&cfg, morphism.as_deref(), r),
        Verb::Homotopy { phi1, phi2, samples, .. } => match (phi1, phi2) {
            (Some(a), Some(b)) => homotopy_files(&cfg, a, b, r),
            _ => homotopy_samples(&cfg, *samples, r),
        },
        Verb::Dr { cover, .. } => dr(&cfg, cover.as_deref(), r),
        Verb::Cris { unnormalized, .. } => {
            let mode = if *unnormalized { Totalization::Unnormalized } else { Totalization::Normalized };
            cris(&cfg, mode, r)
        }
        Verb::Compare { .. } => compare(&cfg, r),
        Verb::Known { .. } => known(&cfg, r),
    }
}

fn verify_simplicial(cfg: &JobConfig, m_max: usize, r: &mut Report) -> Result<()> {
    let site = Site::new(Zpn::new(cfg.p, cfg.n)?, cfg.d)?;
    r.push("m-max", m_max);
    for variant in [Variant::Full, Variant::Pi] {
        let table = MapTable::build(&site, variant, (m_max + 2).min(crate::simplicial_site::MAX_LEVEL));
        let rep = verify_simplicial_identities(&table, m_max)?;
        r.push("identities", format!("{variant} checked={}", rep.identities_checked));
    }
    for m in 1..=m_max.min(2) {
        let k = verify_boundary_kernel(&site, m)?;
        let status = match k.status {
            KernelStatus::Verified => "verified",
            KernelStatus::Inconclusive => "inconclusive",
        };
        r.push("boundary-kernel", format!("m={m} window={} kernel=p^{} {status}", k.window_dim, k.kernel_log_order));
        for order in permutations(m + 1) {
            check_regular_sequence(&site, m, &order, Variant::Pi)?;
        }
        r.push("regular", format!("m={m} permutations={}", permutations(m + 1).len()));
        let order: Vec<usize> = (0..=m).collect();
        match check_regular_sequence(&site, m, &order, Variant::PiBoundary) {
            Err(e @ Error::RegularityFailure { .. }) => r.push("boundary-control", format!("m={m} {e}")),
            Err(e) => return Err(e),
            Ok(_) => {
                return Err(Error::RegularityFailure {
                    element: format!("T0..T{m} in {}", Variant::PiBoundary),
                    witness: "sequence unexpectedly regular modulo the vertex product".into(),
                })
            }
        }
    }
    Ok(())
}

fn space(cfg: &JobConfig) -> Result<MappingSpace> {
    let a = lift_algebra(&cfg.algebra()?, cfg.n)?;
    MappingSpace::new(&a, &a, cfg.d, cfg.e.max(40))
}

fn read_morphism(s: &MappingSpace, path: &Path) -> Result<Vec<PDSeries>> {
    let spec = s.level(0);
    let target = s.target();
    let vars: BTreeMap<String, PDSeries> = target
        .generators()
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), target.model().generator(spec, i)))
        .collect();
    let lines = parse_morphism(&read(path)?)?;
    let src = s.source().generators();
    let mut images: Vec<Option<PDSeries>> = vec![None; src.len()];
    for (line, gen, terms) in lines {
        let i = src
            .iter()
            .position(|g| *g == gen)
            .ok_or_else(|| Error::Parse { line, msg: format!("unknown source generator {gen:?}") })?;
        images[i] = Some(evaluate(&terms, &vars, &PDSeries::zero(spec), line)?);
    }
    images
        .into_iter()
        .zip(src)
        .map(|(v, g)| v.ok_or_else(|| Error::Parse { line: 0, msg: format!("no image for {g}") }))
        .collect()
}

fn push_images(r: &mut Report, key: &str, s: &MappingSpace, f: &Morphism) {
    for (g, v) in s.source().generators().iter().zip(f.images()) {
        r.push(key, format!("{g} -> {v}"));
    }
}

fn lift(cfg: &JobConfig, morphism: Option<&Path>, r: &mut Report) -> Result<()> {
    let s = space(cfg)?;
    let seed = match morphism {
        Some(path) => read_morphism(&s, path)?,
        None => s.identity()?.images().to_vec(),
    };
    let f = s.lift_morphism(&seed)?;
    push_images(r, "image", &s, &f);
    Ok(())
}

fn homotopy_files(cfg: &JobConfig, a: &Path, b: &Path, r: &mut Report) -> Result<()> {
    let s = space(cfg)?;
    let phi1 = s.simplex(0, read_morphism(&s, a)?)?;
    let phi2 = s.simplex(0, read_morphism(&s, b)?)?;
    let h = s.build_homotopy(&phi1, &phi2)?;
    check_endpoints(&s, &h, &phi1, &phi2)?;
    push_images(r, "homotopy", &s, &h.0);
    Ok(())
}

fn check_endpoints(s: &MappingSpace, h: &crate::smooth_lift::Homotopy, phi1: &Morphism, phi2: &Morphism) -> Result<()> {
    if &s.at_zero(h) != phi1 || &s.at_pi(h) != phi2 {
        return Err(Error::IdentityViolation("homotopy endpoints differ from the given lifts".into()));
    }
    Ok(())
}

/// `p` times a few random monomials in the model variables, exponents in
/// `-2..=2` for Laurent variables and `0..=2` otherwise.
fn random_p_multiple(rng: &mut ChaCha8Rng, s: &MappingSpace) -> PDSeries {
    let spec = s.level(0);
    let ring = s.ring();
    let mut f = PDSeries::zero(spec);
    if spec.n_geom() == 0 {
        return PDSeries::constant(spec, ring.mul(ring.p(), rng.gen_range(0..ring.modulus())));
    }
    for _ in 0..3 {
        let x = spec
            .geom()
            .iter()
            .map(|g| match g.kind {
                VarKind::Laurent => rng.gen_range(-2..=2),
                VarKind::Polynomial => rng.gen_range(0..=2),
            })
            .collect();
        f.add_term(Monomial { x, t: vec![] }, ring.mul(ring.p(), rng.gen_range(0..ring.modulus())));
    }
    f
}

fn homotopy_samples(cfg: &JobConfig, samples: usize, r: &mut Report) -> Result<()> {
    let s = space(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let id = s.identity()?;
    r.push("samples", samples);
    for k in 0..samples {
        let mut perturb = |base: &Morphism| -> Result<Morphism> {
            let seed: Vec<PDSeries> =
                base.images().iter().map(|v| v.try_add(&random_p_multiple(&mut rng, &s))).collect::<Result<_>>()?;
            s.lift_morphism(&seed)
        };
        let phi1 = perturb(&id)?;
        let phi2 = perturb(&phi1)?;
        let h = s.build_homotopy(&phi1, &phi2)?;
        check_endpoints(&s, &h, &phi1, &phi2)?;
        for (g, v) in s.source().generators().iter().zip(h.0.images()) {
            r.push("sample", format!("{k} {g} -> {v}"));
        }
    }
    Ok(())
}

fn parse_cover(s: &str) -> Result<Vec<Localizer>> {
    s.split(',')
        .map(|t| {
            let t: String = t.chars().filter(|c| !c.is_whitespace()).collect();
            match t.as_str() {
                "1" => Ok(Localizer::Unit),
                "x" => Ok(Localizer::Linear(0)),
                _ => {
                    let bad = || Error::Config(format!("cover elements are 1, x, x-c or x+c; got {t:?}"));
                    let rest = t.strip_prefix('x').ok_or_else(bad)?;
                    let c: i64 = rest.parse().map_err(|_| bad())?;
                    Ok(Localizer::Linear(-c))
                }
            }
        })
        .collect()
}

fn push_cells(r: &mut Report, cells: &[pd_derham::Cell]) {
    for c in cells {
        r.push("cell", format!("degree={} graded={} {}", c.degree, c.graded, c.divisors));
    }
}

fn dr(cfg: &JobConfig, cover: Option<&str>, r: &mut Report) -> Result<()> {
    let a = lift_algebra(&cfg.algebra()?, cfg.n)?;
    let direct = crystalline::direct_dr(&cfg.algebra_name(), &a, cfg.caps())?;
    push_cells(r, &direct.cells);
    for m in 1..=cfg.m {
        let rep = pd_derham::poincare_check(&a, m, cfg.d, cfg.e)?;
        r.push("poincare", format!("level={m} cells={} homotopy=checked", rep.cells.len()));
    }
    if cfg.n >= 2 {
        for m in 0..=cfg.m {
            let rep = pd_derham::base_change_check(&a, m, cfg.d, cfg.e)?;
            r.push("base-change", format!("level={m} pieces={}", rep.pieces_checked));
        }
    } else {
        r.push("base-change", "skipped (needs N >= 2)");
    }
    if let Some(c) = cover {
        let cover = parse_cover(c)?;
        let rep = cech_descent_check(&a, &cover, cfg.e)?;
        let names: Vec<String> = cover.iter().map(|l| l.to_string()).collect();
        r.push("cover", names.join(","));
        for c in &rep.cells {
            r.push("cech", format!("degree={} graded={} {}", c.degree, c.graded, c.divisors));
        }
        r.push("pole-pieces", format!("{} acyclic", rep.pole_pieces));
    }
    Ok(())
}

fn cris(cfg: &JobConfig, mode: Totalization, r: &mut Report) -> Result<()> {
    let a = lift_algebra(&cfg.algebra()?, cfg.n)?;
    r.push("completion", "implicit mod p^N");
    r.push("columns", if mode == Totalization::Normalized { "normalized" } else { "unnormalized" });
    let rep = crystalline::cris(&cfg.algebra_name(), &a, cfg.caps(), mode)?;
    push_cells(r, &rep.cells);
    Ok(())
}

fn compare(cfg: &JobConfig, r: &mut Report) -> Result<()> {
    let a = lift_algebra(&cfg.algebra()?, cfg.n)?;
    r.push("completion", "implicit mod p^N");
    let rep = crystalline::compare_dr_cris(&cfg.algebra_name(), &a, cfg.caps())?;
    for (d, c) in rep.dr.cells.iter().zip(&rep.cris.cells) {
        r.push("cell", format!("degree={} graded={} dr={} cris={}", d.degree, d.graded, d.divisors, c.divisors));
    }
    let list = |v: &[i64]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ");
    r.push("certified", list(&rep.certified));
    r.push("stable", list(&rep.stable));
    Ok(())
}

fn known(cfg: &JobConfig, r: &mut Report) -> Result<()> {
    let AlgebraSource::Catalog(name) = &cfg.source else {
        return Err(Error::Unsupported("known values exist only for catalog algebras".into()));
    };
    let a = lift_algebra(&cfg.algebra()?, cfg.n)?;
    r.push("completion", "implicit mod p^N");
    let rep = crystalline::known_values_check(name, &a, cfg.caps())?;
    push_cells(r, &rep.cells);
    r.push("catalog", "matched");
    Ok(())
}
