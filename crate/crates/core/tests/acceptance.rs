//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion 1 fails in two known places where the printed lemma does not
//! hold in U(g); the run accepts exactly that failure set and nothing else.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use hua_core::liedata::AlgebraKind;
use hua_core::pbw::OrderedBasis;
use hua_core::reduce::{
    gl_lemma_check, hua_sp_system, upq_scalar_recursion, upq_shilov_identity, upq_theorem, Report, UpqTheoremOptions,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

struct Outcome {
    pass: bool,
    detail: String,
    /// A failure that is the expected honest result.
    known: bool,
}

impl Outcome {
    fn ok(detail: impl Into<String>) -> Self {
        Outcome { pass: true, detail: detail.into(), known: false }
    }

    fn fail(detail: impl Into<String>) -> Self {
        Outcome { pass: false, detail: detail.into(), known: false }
    }
}

fn failing(r: &Report) -> Vec<String> {
    r.checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.label, c.residue)).collect()
}

/// Runs `f` per case, failing the criterion on a miss or on a slow case.
fn cases<T: std::fmt::Debug>(
    items: impl IntoIterator<Item = T>,
    limit: Duration,
    mut f: impl FnMut(&T) -> Result<(), String>,
) -> Outcome {
    let mut n = 0;
    for it in items {
        let start = Instant::now();
        if let Err(e) = f(&it) {
            return Outcome::fail(format!("{it:?}: {e}"));
        }
        let dt = start.elapsed();
        if dt > limit {
            return Outcome::fail(format!("{it:?}: {dt:?} over {limit:?}"));
        }
        n += 1;
    }
    Outcome::ok(format!("{n} cases"))
}

fn report_ok(r: hua_core::Result<Report>) -> Result<(), String> {
    let r = r.map_err(|e| e.to_string())?;
    let bad = failing(&r);
    if bad.is_empty() {
        Ok(())
    } else {
        Err(bad.join("; "))
    }
}

fn gl_lemma() -> Outcome {
    let mut unexpected = vec![];
    let mut known = BTreeSet::new();
    for n in [2, 3] {
        let start = Instant::now();
        let r = match gl_lemma_check(n, 4) {
            Ok(r) => r,
            Err(e) => return Outcome::fail(e.to_string()),
        };
        if start.elapsed() > Duration::from_secs(60) {
            return Outcome::fail(format!("n={n}: {:?}", start.elapsed()));
        }
        for c in r.checks.iter().filter(|c| !c.pass) {
            let m: u32 = c.label.rsplit('=').next().unwrap().parse().unwrap();
            let expected = m >= 2 && (c.label.starts_with("gln1 m=") || c.label.starts_with("gln4 m="));
            if expected {
                known.insert(c.label.split(' ').next().unwrap().to_string());
            } else {
                unexpected.push(format!("n={n} {}", c.label));
            }
        }
    }
    if !unexpected.is_empty() {
        return Outcome::fail(format!("unexpected failures: {}", unexpected.join(", ")));
    }
    if known.is_empty() {
        return Outcome::ok("all identities hold");
    }
    Outcome {
        pass: false,
        known: true,
        detail: "the exact form of gln1 and gln4 fails for m ≥ 2 (n = 2, 3); gln1 modulo U(g)𝔨, gln2 and gln3 hold"
            .into(),
    }
}

fn theorem_cases() -> Vec<(usize, usize, Vec<usize>)> {
    vec![(1, 1, vec![1]), (2, 1, vec![1]), (2, 2, vec![1, 2]), (2, 2, vec![2]), (3, 2, vec![1, 2])]
}

fn upq_theorem_all() -> Outcome {
    let out = cases(theorem_cases(), Duration::from_secs(300), |(p, q, b)| {
        report_ok(upq_theorem(*p, *q, b, UpqTheoremOptions::default()))?;
        let control = upq_theorem(*p, *q, b, UpqTheoremOptions { perturb: true, ..Default::default() })
            .map_err(|e| e.to_string())?;
        if control.pass {
            return Err("perturbed control passed".into());
        }
        Ok(())
    });
    if out.pass {
        Outcome::ok(format!("{}, perturbed controls fail", out.detail))
    } else {
        out
    }
}

/// Strictly increasing block ends n_1 < … < n_L = q.
fn block_sequences(q: usize, max_l: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    for mask in 0u32..(1 << (q - 1)) {
        let mut b: Vec<usize> = (1..q).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        b.push(q);
        if b.len() <= max_l {
            out.push(b);
        }
    }
    out
}

fn recursion() -> Outcome {
    let mut all = vec![];
    for q in 1..=4 {
        for p in q..=q + 2 {
            for b in block_sequences(q, 3) {
                all.push((p, q, b));
            }
        }
    }
    let symbolic = cases(all, Duration::from_secs(60), |(p, q, b)| {
        let r = upq_scalar_recursion(*p, *q, b, false).map_err(|e| e.to_string())?;
        if r.pass {
            Ok(())
        } else {
            let bad: Vec<String> =
                r.vanishing.iter().chain(&r.pm_consistency).filter(|c| !c.pass).map(|c| c.label.clone()).collect();
            Err(bad.join(", "))
        }
    });
    if !symbolic.pass {
        return symbolic;
    }
    let dual = cases(theorem_cases(), Duration::from_secs(300), |(p, q, b)| {
        let r = upq_scalar_recursion(*p, *q, b, true).map_err(|e| e.to_string())?;
        match r.dual_oracle.iter().find(|c| !c.pass) {
            None if !r.dual_oracle.is_empty() => Ok(()),
            None => Err("no dual-oracle lines".into()),
            Some(c) => Err(format!("{}: {}", c.label, c.residue)),
        }
    });
    if !dual.pass {
        return dual;
    }
    Outcome::ok(format!("vanishing on {}, dual oracle on {}", symbolic.detail, dual.detail))
}

fn degree_table() -> Outcome {
    let start = Instant::now();
    match degree_checks() {
        Ok(n) if start.elapsed() < Duration::from_secs(10) => Outcome::ok(format!("{n} nodes")),
        Ok(_) => Outcome::fail(format!("{:?}", start.elapsed())),
        Err(e) => Outcome::fail(e),
    }
}

fn centrality_covariance() -> Outcome {
    let start = Instant::now();
    let algebras = [
        (AlgebraKind::Gl, 1),
        (AlgebraKind::Gl, 2),
        (AlgebraKind::Gl, 3),
        (AlgebraKind::Sp, 1),
        (AlgebraKind::Sp, 2),
        (AlgebraKind::OEven, 2),
        (AlgebraKind::OOdd, 2),
    ];
    for (kind, n) in algebras {
        if let Err(e) = central(kind, n, &[1, 2, 3]) {
            return Outcome::fail(e);
        }
    }
    let polys: [&[(i64, i64)]; 4] = [&[(1, 1)], &[(-1, 2), (3, 1)], &[(0, 1), (2, 3), (-5, 2)], &[(1, 1), (1, 1), (-2, 1)]];
    let mut count = 0;
    for (kind, ns) in [
        (AlgebraKind::Gl, &[2, 3][..]),
        (AlgebraKind::Sp, &[1, 2, 3][..]),
        (AlgebraKind::OEven, &[2, 3][..]),
        (AlgebraKind::OOdd, &[1, 2, 3][..]),
    ] {
        for &n in ns {
            for rs in polys {
                if let Err(e) = covariance(kind, n, rs) {
                    return Outcome::fail(e);
                }
                count += 1;
            }
        }
    }
    if start.elapsed() > Duration::from_secs(300) {
        return Outcome::fail(format!("{:?}", start.elapsed()));
    }
    Outcome::ok(format!("{} algebras central, {count} covariance cases", algebras.len()))
}

fn cfunctions() -> Outcome {
    let start = Instant::now();
    let (mut zeros, mut points) = (0, 0);
    for form in catalog() {
        let r = c_normalized(form)
            .and_then(|_| zero_certificates(form))
            .and_then(|z| dominant_finite(form).map(|d| (z, d)));
        match r {
            Ok((z, d)) => {
                zeros += z;
                points += d;
            }
            Err(e) => return Outcome::fail(e),
        }
    }
    if start.elapsed() > Duration::from_secs(10) {
        return Outcome::fail(format!("{:?}", start.elapsed()));
    }
    Outcome::ok(format!("{} forms, {zeros} zero certificates, {points} dominant points", catalog().len()))
}

fn kernel() -> Outcome {
    let start = Instant::now();
    let runner = || {
        let config = Config { failure_persistence: None, ..Config::with_cases(48) };
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
    };
    let gl3 = OrderedBasis::gl(3);
    let triple = (words(9, 2, 3), words(9, 2, 3), words(9, 2, 3));
    let results = [
        runner().run(&triple, |(a, b, c)| {
            let (x, y, z) = (element(&gl3, &a), element(&gl3, &b), element(&gl3, &c));
            prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            Ok(())
        })
        .map_err(|e| e.to_string()),
        runner().run(&(words(9, 1, 3), words(9, 1, 3), words(9, 1, 3)), |(a, b, c)| {
            let (x, y, z) = (element(&gl3, &a), element(&gl3, &b), element(&gl3, &c));
            let j = x
                .commutator(&y.commutator(&z))
                .add(&y.commutator(&z.commutator(&x)))
                .add(&z.commutator(&x.commutator(&y)));
            prop_assert!(j.is_zero());
            Ok(())
        })
        .map_err(|e| e.to_string()),
        runner().run(&(words(9, 2, 3), words(9, 2, 3)), |(a, b)| {
            let (x, y) = (element(&gl3, &a), element(&gl3, &b));
            if let (Some(ox), Some(oy)) = (x.order(), y.order()) {
                prop_assert!(x.mul(&y).order().unwrap_or(0) <= ox + oy);
            }
            Ok(())
        })
        .map_err(|e| e.to_string()),
        runner().run(&prop::collection::vec(0usize..9, 0..=4), |w| {
            let got = hua_core::pbw::normal_order(&w, &gl3, &ring()).unwrap();
            prop_assert_eq!(as_map(&got), naive_map(&gl3, &w));
            Ok(())
        })
        .map_err(|e| e.to_string()),
    ];
    for (name, r) in ["associativity", "Jacobi", "filtration", "naive rewriter"].iter().zip(results) {
        if let Err(e) = r {
            return Outcome::fail(format!("{name}: {e}"));
        }
    }
    if start.elapsed() > Duration::from_secs(120) {
        return Outcome::fail(format!("{:?}", start.elapsed()));
    }
    Outcome::ok("associativity, Jacobi, filtration, naive rewriter: 48 cases each")
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("GL(n,R) lemma", gl_lemma),
        ("Sp(n,R) Hua system", || cases(1..=3, Duration::from_secs(120), |n| report_ok(hua_sp_system(*n)))),
        ("U(p,q) Shilov example", || {
            cases([(1, 1), (2, 1), (2, 2), (3, 2)], Duration::from_secs(120), |(p, q)| {
                report_ok(upq_shilov_identity(*p, *q))
            })
        }),
        ("U(p,q) theorem", upq_theorem_all),
        ("scalar recursion", recursion),
        ("degree table", degree_table),
        ("centrality and covariance", centrality_covariance),
        ("c-functions", cfunctions),
        ("kernel properties", kernel),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {name} ({:.2?}) {}", i + 1, start.elapsed(), out.detail);
        if !out.pass && !out.known {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
