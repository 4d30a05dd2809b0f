//! Acceptance criteria, one report line each:
//!
//! `ACCEPT <k> PASS|FAIL <title> elapsed=<s> limit=<s> <detail>`
//!
//! Everything is exact, so the only tolerances are the wall-clock limits
//! pinned below. Criteria run one after another so timings do not compete.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use latclif_core::dirac::{DiracFamily, HermitianConvention};
use latclif_core::endo::{apply, spanning_set};
use latclif_core::forms::Form;
use latclif_core::polynomials::{
    constraint_matrix, factorial_power, hermitian_monogenic_basis, homogeneous_space, independent_subset,
    monogenic_constraints, BladeFilter, Domain,
};
use latclif_core::suites::{random_poly_form, random_torus_form, run_suite, Check, Suite, SuiteConfig};
use latclif_core::universal::Torus;
use latclif_core::{Mesh, MultiIndex, Scalar, Sign};
use latclif_driver::formfile::{self, AnyForm};
use num_rational::BigRational;
use rand::SeedableRng;

const LIMIT_UNIVERSAL: Duration = Duration::from_secs(30);
const LIMIT_REDUCTION: Duration = Duration::from_secs(30);
const LIMIT_FORMS: Duration = Duration::from_secs(60);
const LIMIT_ENDO: Duration = Duration::from_secs(60);
const LIMIT_DIRAC: Duration = Duration::from_secs(60);
const LIMIT_INTERTWINING: Duration = Duration::from_secs(60);
const LIMIT_POLYNOMIALS: Duration = Duration::from_secs(30);
const LIMIT_MONOGENIC: Duration = Duration::from_secs(120);
const LIMIT_CLI: Duration = Duration::from_secs(300);

struct Line {
    id: u32,
    title: &'static str,
    pass: bool,
    elapsed: Duration,
    limit: Duration,
    detail: String,
}

impl std::fmt::Display for Line {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ACCEPT {} {} {} elapsed={:.2}s limit={}s {}",
            self.id,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs(),
            self.detail
        )
    }
}

fn criterion(id: u32, title: &'static str, limit: Duration, body: impl FnOnce() -> Result<String, String>) -> Line {
    let t = Instant::now();
    let r = body();
    let elapsed = t.elapsed();
    let (mut pass, mut detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if elapsed > limit {
        pass = false;
        detail = format!("over time limit; {detail}");
    }
    let line = Line { id, title, pass, elapsed, limit, detail };
    println!("{line}");
    line
}

/// Every selected check must pass, and there must be exactly `expect` of them.
fn require(checks: &[Check], expect: usize, select: impl Fn(&Check) -> bool) -> Result<String, String> {
    let chosen: Vec<&Check> = checks.iter().filter(|c| select(c)).collect();
    if chosen.len() != expect {
        return Err(format!("expected {expect} checks, found {}", chosen.len()));
    }
    let failed: Vec<&&Check> = chosen.iter().filter(|c| !c.pass).collect();
    match failed.first() {
        None => Ok(format!("{} checks", chosen.len())),
        Some(c) => Err(format!(
            "{}/{} checks fail; first {}.{}: {}",
            failed.len(),
            chosen.len(),
            c.module,
            c.name,
            c.witness.clone().unwrap_or_default()
        )),
    }
}

fn suite(s: Suite, cfg: &SuiteConfig) -> Vec<Check> {
    run_suite(s, cfg).expect("default configuration is valid")
}

fn named(c: &Check, parts: &[&str]) -> bool {
    parts.iter().any(|p| c.name.contains(p))
}

// ---------------------------------------------------------------- oracle

/// Gauss-Jordan rank with field division (the library uses fraction-free
/// elimination).
fn dense_rank(rows: &mut [Vec<Scalar>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().unwrap();
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] = &rows[i][j] - &t;
                }
            }
        }
        r += 1;
    }
    r
}

fn factorial_product(sign: Sign, alpha: &MultiIndex, h: &BigRational, xs: &[BigRational]) -> Scalar {
    let mut acc = BigRational::from_integer(1.into());
    for (j, &a) in alpha.0.iter().enumerate() {
        for k in 0..a {
            acc *= &xs[j] + h * BigRational::from_integer((sign.as_i64() * k as i64).into());
        }
    }
    Scalar::real(acc)
}

// ---------------------------------------------------------------- criteria

fn universal_calculus() -> Result<String, String> {
    let checks = suite(Suite::Universal, &SuiteConfig::default());
    let wanted = ["nilpotent", "graded_leibniz", "partition_of_unity_closed", "inner_derivative"];
    require(&checks, 8, |c| {
        wanted.iter().any(|w| c.name.ends_with(&format!("universal.{w}")))
            && (c.name.starts_with("n1.N5.") || c.name.starts_with("n2.N4."))
    })
}

fn symmetric_reduction() -> Result<String, String> {
    let cfg = SuiteConfig { n: Some(2), modulus: Some(4), ..Default::default() };
    let checks = suite(Suite::Universal, &cfg);
    require(&checks, 3, |c| {
        named(c, &["reduced.adjacency_square_zero", "reduced.theta_anticommute", "reduced.derivative_from_adjacency"])
    })
}

fn forms() -> Result<String, String> {
    let checks = suite(Suite::Forms, &SuiteConfig::default());
    let n3_pairs = checks.iter().filter(|c| c.name.starts_with("n3.anticommute[")).count();
    if n3_pairs != 36 {
        return Err(format!("{n3_pairs} generator pairs at n = 3"));
    }
    require(&checks, 56 + 3 + 3 + 24 + 3, |c| {
        named(c, &["anticommute[", "d_squared", "d_plus_minus_anticommute", "sign_table.", "bridge_"])
    })
}

fn endomorphisms() -> Result<String, String> {
    let checks = suite(Suite::Endo, &SuiteConfig::default());
    let families = [
        "gamma_gamma_same", "gamma_gamma_mixed", "vartheta_vartheta_same", "vartheta_vartheta_mixed",
        "gamma_vartheta_same", "gamma_vartheta_mixed", "xi_isotropy", "xi_duality", "upsilon_square",
        "upsilon_distinct", "upsilon_mixed", "diff_gamma",
    ];
    let expected = 28 + 14 + 28 + 14 + 28 + 28 + 28 + 14 + 12 + 16 + 14 + 56;
    require(&checks, expected, |c| families.iter().any(|f| c.name.contains(&format!(".{f}["))))
}

fn dirac() -> Result<String, String> {
    let checks = suite(Suite::Dirac, &SuiteConfig::default());
    let structure = [
        "isotropy_dz", "isotropy_dzdag", "isotropy_z", "isotropy_zdag", "orthogonality_dX", "orthogonality_X",
        "laplacian_dX", "laplacian_dXbar", "laplacian_hermitian", "square_X", "square_Xbar", "square_hermitian",
        "dirac_kahler_split",
    ];
    let conv = HermitianConvention::DEFAULT;
    require(&checks, 2 * structure.len(), |c| {
        structure.iter().any(|s| c.name == format!("n1.{conv}.{s}") || c.name == format!("n2.{conv}.{s}"))
    })
}

fn intertwining() -> Result<String, String> {
    let checks = suite(Suite::Dirac, &SuiteConfig::default());
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [1, 2] {
        let mut passing = BTreeSet::new();
        for conv in HermitianConvention::ALL {
            let rel: Vec<&Check> = checks
                .iter()
                .filter(|c| c.convention == Some(conv) && c.name.starts_with(&format!("n{n}.")))
                .collect();
            if rel.len() != 6 {
                return Err(format!("n={n} {conv}: {} relations", rel.len()));
            }
            let failed: Vec<&str> = rel.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
            if failed.is_empty() {
                passing.insert(conv.to_string());
            } else if rel.iter().any(|c| !c.pass && c.witness.is_none()) {
                ok = false;
                detail.push(format!("n={n} {conv} fails without a witness"));
            }
            detail.push(format!("n={n} {conv} fails {}/6", failed.len()));
        }
        if passing.len() != 1 {
            ok = false;
        }
        detail.push(format!("n={n} passing conventions {passing:?}"));
    }
    let d = detail.join("; ");
    if ok { Ok(d) } else { Err(d) }
}

fn polynomials() -> Result<String, String> {
    let cfg = SuiteConfig::default();
    let checks = suite(Suite::Polynomials, &cfg);
    let kinds = ["basicness", "degree", "raising", "lowering", "euler", "weyl_heisenberg"];
    let principle = require(&checks, 18 + 12 + 12 + 28, |c| {
        !c.name.contains("monogenic") && kinds.iter().any(|k| c.name.contains(&format!(".{k}")))
    })?;
    // Rodrigues construction against the closed product at rational points
    let mesh = Mesh::new(BigRational::new(2.into(), 3.into())).unwrap();
    let h = mesh.value().clone();
    let mut evaluated = 0;
    for n in 1..=3usize {
        let pts: Vec<Vec<BigRational>> = (0..6)
            .map(|k| (0..n).map(|j| BigRational::new((k as i64 * 3 - 7 + j as i64).into(), (1 + j as i64).into())).collect())
            .collect();
        for sign in Sign::BOTH {
            for alpha in MultiIndex::up_to_degree(n, 4) {
                let fp = factorial_power(&mesh, sign, &alpha);
                for x in &pts {
                    if fp.poly.eval_at(x) != factorial_product(sign, &alpha, &h, x) {
                        return Err(format!("Rodrigues mismatch {sign} {alpha:?} at {x:?}"));
                    }
                    evaluated += 1;
                }
            }
        }
    }
    Ok(format!("{principle}; {evaluated} Rodrigues evaluations"))
}

fn monogenic() -> Result<String, String> {
    let mesh = Mesh::unit();
    let mut problems = Vec::new();
    let mut dims = Vec::new();
    for n in 1..=2 {
        let fam = DiracFamily::new(n, HermitianConvention::DEFAULT);
        for (p, q) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let b = hermitian_monogenic_basis(&fam, &mesh, p, q, BladeFilter::All, Domain::FactorialPowers)
                .map_err(|e| e.to_string())?;
            let cands = independent_subset(&homogeneous_space(n, &mesh, p, q, BladeFilter::All, Domain::FactorialPowers));
            let m = constraint_matrix(&monogenic_constraints(&fam, p, q), &cands).map_err(|e| e.to_string())?;
            let mut rows: Vec<Vec<Scalar>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
            let oracle = cands.len() - dense_rank(&mut rows);
            dims.push(format!("n{n}({p},{q})={}", b.dimension()));
            if b.dimension() != oracle {
                problems.push(format!("n={n} ({p},{q}) dimension {} vs oracle {oracle}", b.dimension()));
            }
            if !b.constraints_hold() {
                problems.push(format!("n={n} ({p},{q}) constraint residual"));
            }
            if let Some(w) = b.gamma_witness() {
                problems.push(format!("n={n} ({p},{q}) Gamma eigenvalue: {w}"));
            }
            if n == 1 && (p, q) == (0, 0) && b.dimension() != 4 {
                problems.push(format!("n=1 (0,0) dimension {}", b.dimension()));
            }
        }
    }
    let d = dims.join(" ");
    if problems.is_empty() {
        Ok(d)
    } else {
        Err(format!("{} problems; first {}; {d}", problems.len(), problems[0]))
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_latclif"))
}

fn run(args: &[&str], threads: Option<&str>) -> (i32, String) {
    let mut c = bin();
    c.args(args);
    if let Some(t) = threads {
        c.env("LATCLIF_THREADS", t);
    }
    let out = c.output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

/// Forms of every kind the suites produce.
fn artifacts() -> Vec<AnyForm> {
    let mut out = Vec::new();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    let h = Mesh::new(BigRational::new(1.into(), 3.into())).unwrap();
    for n in 1..=3 {
        for _ in 0..10 {
            out.push(AnyForm::Poly(random_poly_form(n, &h, 3, &mut rng)));
        }
        let fam = DiracFamily::new(n, HermitianConvention::DEFAULT);
        for w in spanning_set(n, &Mesh::unit()).into_iter().step_by(7) {
            out.push(AnyForm::Poly(apply(&fam.dz, &w).unwrap()));
            out.push(AnyForm::Poly(apply(&fam.gamma_z, &w).unwrap()));
        }
        for sign in Sign::BOTH {
            for a in MultiIndex::up_to_degree(n, 3) {
                out.push(AnyForm::Poly(Form::function(factorial_power(&h, sign, &a).poly)));
            }
        }
    }
    for (n, m) in [(1, 5), (2, 4)] {
        let torus = Torus::new(n, m).unwrap();
        for _ in 0..5 {
            let f = random_torus_form(n, &h, m, None, &mut rng);
            let back = Form::from_universal(&f.to_universal(&torus).unwrap(), h.clone()).unwrap();
            out.push(AnyForm::Box(back));
            out.push(AnyForm::Box(f.d().unwrap()));
            out.push(AnyForm::Box(f));
        }
    }
    // a sampled, shrunk box form
    let p = random_poly_form(2, &h, 2, &mut rng);
    let sampled = p.sample(&latclif_core::IntBox::cube(2, -2, 3));
    out.push(AnyForm::Box(sampled.d().unwrap()));
    for n in 1..=2 {
        let fam = DiracFamily::new(n, HermitianConvention::DEFAULT);
        for (p, q) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let b = hermitian_monogenic_basis(&fam, &Mesh::unit(), p, q, BladeFilter::All, Domain::FactorialPowers).unwrap();
            out.extend(b.elements.into_iter().map(AnyForm::Poly));
        }
    }
    out
}

fn cli() -> Result<String, String> {
    let mut notes = Vec::new();
    // round trips
    let arts = artifacts();
    for (i, a) in arts.iter().enumerate() {
        let text = formfile::print(a);
        let parsed = formfile::parse(&text).map_err(|e| format!("artifact {i}: {e}"))?;
        if formfile::print(&parsed) != text {
            return Err(format!("artifact {i} is not byte-stable"));
        }
        let same = match (a, &parsed) {
            (AnyForm::Poly(x), AnyForm::Poly(y)) => x == y,
            (AnyForm::Box(x), AnyForm::Box(y)) => {
                x == y && x.terms().iter().zip(y.terms()).all(|((_, c), (_, d))| c.validity() == d.validity())
            }
            _ => false,
        };
        if !same {
            return Err(format!("artifact {i} changes value"));
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (i, a) in arts.iter().enumerate().step_by(11) {
        let path = dir.path().join(format!("a{i}.form"));
        std::fs::write(&path, formfile::print(a)).unwrap();
        let (code, out) = run(&["roundtrip", path.to_str().unwrap()], None);
        if code != 0 || out != "ROUNDTRIP PASS\n" {
            return Err(format!("roundtrip subcommand on artifact {i}: exit {code}"));
        }
    }
    notes.push(format!("{} artifacts round-trip", arts.len()));

    // exit code is 0 exactly when no check fails
    let runs: [&[&str]; 4] = [
        &["verify", "--suite", "core"],
        &["verify", "--suite", "forms", "--n", "1"],
        &["verify", "--suite", "dirac", "--n", "1"],
        &["oracle", "--n", "2", "--N", "4"],
    ];
    for args in runs {
        let (code, out) = run(args, None);
        let any_fail = out.lines().any(|l| l.starts_with("CHECK ") && l.contains(" FAIL"));
        let want = if any_fail { 1 } else { 0 };
        if code != want {
            return Err(format!("{args:?}: exit {code} with any_fail={any_fail}"));
        }
        notes.push(format!("`{}` exit {code}", args.join(" ")));
    }
    let (code, _) = run(&["verify", "--suite", "universal", "--n", "1", "--N", "2"], None);
    if code != 2 {
        return Err(format!("N = 2 accepted (exit {code})"));
    }

    // parallelism does not change the report
    for args in [&["verify", "--suite", "endo", "--n", "2"][..], &["verify", "--suite", "dirac", "--n", "2"][..]] {
        let reports: Vec<(i32, String)> = ["1", "2", "8"].iter().map(|t| run(args, Some(t))).collect();
        if reports.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("{args:?}: report depends on LATCLIF_THREADS"));
        }
    }
    notes.push("reports identical for 1, 2, 8 threads".into());
    Ok(notes.join("; "))
}

#[test]
fn acceptance_criteria() {
    let lines = vec![
        criterion(1, "universal-calculus", LIMIT_UNIVERSAL, universal_calculus),
        criterion(2, "symmetric-reduction", LIMIT_REDUCTION, symmetric_reduction),
        criterion(3, "forms", LIMIT_FORMS, forms),
        criterion(4, "endomorphisms", LIMIT_ENDO, endomorphisms),
        criterion(5, "dirac-structure", LIMIT_DIRAC, dirac),
        criterion(6, "intertwining-convention", LIMIT_INTERTWINING, intertwining),
        criterion(7, "polynomials", LIMIT_POLYNOMIALS, polynomials),
        criterion(8, "monogenic-solver", LIMIT_MONOGENIC, monogenic),
        criterion(9, "cli", LIMIT_CLI, cli),
    ];
    let failed: Vec<u32> = lines.iter().filter(|l| !l.pass).map(|l| l.id).collect();
    assert!(failed.is_empty(), "failing acceptance criteria: {failed:?}");
}

#[test]
fn oracle_sanity() {
    let mut rows = vec![
        vec![Scalar::from_int(1), Scalar::from_int(2)],
        vec![Scalar::from_int(2), Scalar::from_int(4)],
    ];
    assert_eq!(dense_rank(&mut rows), 1);
}
