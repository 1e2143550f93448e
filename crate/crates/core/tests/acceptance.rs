//! Acceptance gate: one line per criterion, nonzero exit if any fails.

mod common;

use common::{a1_simplex, gm_simplex, perturb, space};
use crystalcalc::cli::{run, THREADS_VAR};
use crystalcalc::crystalline::{compare_dr_cris, Caps, ComparisonReport};
use crystalcalc::padic_linalg::Zpn;
use crystalcalc::pd_derham::{base_change_check, cech_descent_check, poincare_check, Localizer};
use crystalcalc::power_series::{Monomial, PDSeries};
use crystalcalc::simplicial_site::{
    boundary_restriction, check_regular_sequence, divide_by_vertex_product, fill_boundary, permutations,
    verify_boundary_kernel, verify_simplicial_identities, KernelStatus, MapTable, Site, Variant,
};
use crystalcalc::smooth_lift::{catalog, lift_algebra, Morphism};
use crystalcalc::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

fn criterion(n: usize, what: &str, limit_secs: f64, f: impl FnOnce()) -> bool {
    let start = Instant::now();
    let r = panic::catch_unwind(AssertUnwindSafe(f));
    let secs = start.elapsed().as_secs_f64();
    let ok = r.is_ok() && secs <= limit_secs;
    let note = match (&r, secs <= limit_secs) {
        (Err(e), _) => e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default(),
        (Ok(()), false) => format!("over the {limit_secs}s budget"),
        _ => String::new(),
    };
    println!("criterion {n:>2}: {} {what} ({secs:.2}s){}", if ok { "pass" } else { "FAIL" }, if note.is_empty() { String::new() } else { format!(" {note}") });
    ok
}

fn random_pi_element(rng: &mut ChaCha8Rng, site: &Site, m: usize, deg: u32) -> PDSeries {
    let spec = site.level(m, Variant::Pi);
    let mut f = PDSeries::zero(spec);
    for _ in 0..6 {
        let mut t = vec![0u32; spec.n_t()];
        let mut left = rng.gen_range(0..=deg);
        for slot in t.iter_mut() {
            *slot = rng.gen_range(0..=left);
            left -= *slot;
        }
        f.add_term(Monomial { x: vec![], t }, rng.gen_range(0..site.ring().modulus()));
    }
    f
}

/// `log_p` of the kernel and cokernel of multiplication by `k` on `Z/p^n`,
/// by enumerating the group.
fn mult_by(k: i64, p: u64, n: u32) -> (u32, u32) {
    let q = p.pow(n);
    let c = k.rem_euclid(q as i64) as u64;
    let ker = (0..q).filter(|a| a * c % q == 0).count() as u64;
    let mut image: Vec<u64> = (0..q).map(|a| a * c % q).collect();
    image.sort_unstable();
    image.dedup();
    let log = |mut v: u64| {
        let mut e = 0;
        while v > 1 {
            v /= p;
            e += 1;
        }
        e
    };
    (log(ker), log(q / image.len() as u64))
}

/// Expected `H^degree` in graded degree `g`: `x^g` in degree 0 and
/// `x^(g-1) dx` in degree 1, connected by multiplication by `g`.
fn oracle(laurent: bool, p: u64, n: u32, degree: i64, g: i64) -> Vec<u32> {
    let (ker, coker) = mult_by(g, p, n);
    let present = match degree {
        0 => laurent || g >= 0,
        1 => laurent || g >= 1,
        _ => false,
    };
    let e = if !present {
        0
    } else if degree == 0 {
        ker
    } else {
        coker
    };
    if e == 0 {
        vec![]
    } else {
        vec![e]
    }
}

fn check_comparison(r: &ComparisonReport, laurent: bool, p: u64, n: u32, window: i64) {
    assert_eq!(r.certified, [0, 1]);
    assert!(r.stable.contains(&0), "degree 0 not stable between M=1 and M=2");
    let gs: Vec<i64> = if laurent { (-window..=window).collect() } else { (0..=window).collect() };
    for degree in 0..=1 {
        for &g in &gs {
            let want = oracle(laurent, p, n, degree, g);
            for (name, cells) in [("dR", &r.dr.cells), ("cris", &r.cris.cells)] {
                let got = cells.iter().find(|c| c.degree == degree && c.graded == g).map(|c| c.divisors.exponents().to_vec());
                assert_eq!(got.unwrap_or_default(), want, "{name} H^{degree} graded {g}");
            }
        }
    }
}

fn cli(args: &str) -> (i32, String) {
    let o = run(std::iter::once("crystalcalc").chain(args.split_whitespace()));
    (o.code, o.report)
}

fn main() {
    let mut ok = true;

    ok &= criterion(1, "simplicial identities of RDelta and RDelta^pi, m <= 3, p in {2,3}", 10.0, || {
        for p in [2, 3] {
            let site = Site::new(Zpn::new(p, 2).unwrap(), 5).unwrap();
            for variant in [Variant::Full, Variant::Pi] {
                verify_simplicial_identities(&MapTable::build(&site, variant, 5), 3).unwrap();
            }
            let (code, report) = cli(&format!("verify-simplicial --p {p} --N 2 --D 5 --m-max 3"));
            assert_eq!(code, 0, "{report}");
        }
    });

    ok &= criterion(2, "boundary kernel is (T0...Tm), m = 1, 2", 60.0, || {
        let site = Site::new(Zpn::new(3, 2).unwrap(), 6).unwrap();
        for m in 1..=2 {
            assert_eq!(verify_boundary_kernel(&site, m).unwrap().status, KernelStatus::Verified);
        }
    });

    ok &= criterion(3, "regular sequences, and the boundary negative control", 60.0, || {
        let site = Site::new(Zpn::new(3, 2).unwrap(), 6).unwrap();
        for m in 1..=2 {
            for order in permutations(m + 1) {
                check_regular_sequence(&site, m, &order, Variant::Pi).unwrap();
            }
            let order: Vec<usize> = (0..=m).collect();
            match check_regular_sequence(&site, m, &order, Variant::PiBoundary) {
                Err(Error::RegularityFailure { witness, .. }) => assert!(witness.contains("T0 *"), "{witness}"),
                other => panic!("expected a regularity failure, got {other:?}"),
            }
        }
    });

    ok &= criterion(4, "fillers at m = 2 in RDelta^pi and Hom(gm, gm), 20 each", 300.0, || {
        let site = Site::new(Zpn::new(3, 3).unwrap(), 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let g = random_pi_element(&mut rng, &site, 2, 6);
            let bd = boundary_restriction(&site, 2, &g);
            let f = fill_boundary(&site, 2, &bd.faces, &bd.base).unwrap();
            assert_eq!(boundary_restriction(&site, 2, &f), bd);
            divide_by_vertex_product(&(&f - &g), 2).unwrap();
        }
        let s = space("gm", 3, 3, 6);
        for _ in 0..20 {
            let h = gm_simplex(&mut rng, &s, 2);
            let faces: Vec<Morphism> = (0..=2).map(|i| s.face(&h, i)).collect();
            let base = s.face(&faces[0], 0);
            let f = s.fill_boundary(2, &faces, &base).unwrap();
            for (i, face) in faces.iter().enumerate() {
                assert_eq!(&s.face(&f, i), face);
            }
            for (a, b) in f.images().iter().zip(h.images()) {
                divide_by_vertex_product(&(a - b), 2).unwrap();
            }
        }
    });

    ok &= criterion(5, "homotopy endpoints on 20 congruent pairs, gm and a1", 300.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (name, laurent) in [("gm", true), ("a1", false)] {
            let s = space(name, 3, 3, 6);
            for _ in 0..20 {
                let phi1 = if laurent { gm_simplex(&mut rng, &s, 0) } else { a1_simplex(&mut rng, &s, 0) };
                let phi2 = perturb(&mut rng, &s, &phi1, laurent);
                let h = s.build_homotopy(&phi1, &phi2).unwrap();
                assert_eq!(s.at_zero(&h), phi1);
                assert_eq!(s.at_pi(&h), phi2);
            }
        }
    });

    ok &= criterion(6, "Poincare lemma for point, a1, gm, m <= 2", 300.0, || {
        for name in ["point", "a1", "gm"] {
            let a = lift_algebra(&catalog(name, 3).unwrap(), 3).unwrap();
            for m in 1..=2 {
                poincare_check(&a, m, 8, 9).unwrap_or_else(|e| panic!("{name} m={m}: {e}"));
            }
        }
    });

    ok &= criterion(7, "base change for point, a1, gm, m <= 2", 300.0, || {
        for name in ["point", "a1", "gm"] {
            let a = lift_algebra(&catalog(name, 3).unwrap(), 3).unwrap();
            for m in 0..=2 {
                base_change_check(&a, m, 8, 9).unwrap_or_else(|e| panic!("{name} m={m}: {e}"));
            }
        }
    });

    ok &= criterion(8, "Cech descent for a1 covered by x, x-1", 60.0, || {
        let a = lift_algebra(&catalog("a1", 2).unwrap(), 2).unwrap();
        let r = cech_descent_check(&a, &[Localizer::Linear(0), Localizer::Linear(1)], 9).unwrap();
        for c in &r.cells {
            assert_eq!(c.divisors.exponents(), oracle(false, 2, 2, c.degree, c.graded), "H^{} graded {}", c.degree, c.graded);
        }
        assert_eq!(r.cells.len(), 20);
    });

    ok &= criterion(9, "dR and cris of gm agree, p=3 N=3 D=6 E=9 M=2", 600.0, || {
        let a = lift_algebra(&catalog("gm", 3).unwrap(), 3).unwrap();
        let r = compare_dr_cris("gm", &a, Caps { weight: 6, window: 9, levels: 2 }).unwrap();
        check_comparison(&r, true, 3, 3, 9);
        let spot = |g: i64| r.cris.cells.iter().find(|c| c.degree == 1 && c.graded == g).unwrap().divisors.to_string();
        assert_eq!((spot(3), spot(9), spot(1)), ("Z/3".into(), "Z/3^2".into(), "0".into()));
        let (code, report) = cli("compare --algebra gm --p 3 --N 3 --D 6 --E 9 --M 2");
        assert_eq!(code, 0, "{report}");
    });

    ok &= criterion(10, "dR and cris of a1 agree, p=2 N=3 M=2", 600.0, || {
        let a = lift_algebra(&catalog("a1", 2).unwrap(), 3).unwrap();
        let r = compare_dr_cris("a1", &a, Caps { weight: 6, window: 9, levels: 2 }).unwrap();
        check_comparison(&r, false, 2, 3, 9);
    });

    ok &= criterion(11, "reports are byte-identical across reruns and thread counts", 300.0, || {
        for args in [
            "compare --algebra gm --p 3 --N 3 --D 6 --E 9 --M 2",
            "homotopy --algebra gm --p 3 --N 3 --D 6 --samples 5 --seed 17",
            "dr --algebra a1 --p 2 --N 2 --cover x,x-1",
        ] {
            let first = cli(args);
            assert_eq!(first, cli(args), "{args}");
            std::env::set_var(THREADS_VAR, "1");
            let single = cli(args);
            std::env::remove_var(THREADS_VAR);
            assert_eq!(first, single, "{args} with one thread");
            assert!(first.1.contains("seed: "));
        }
    });

    if !ok {
        std::process::exit(1);
    }
}
