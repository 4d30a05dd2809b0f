//! Subcommand bodies. Each returns an [`Outcome`] so the binary and the
//! tests share one code path.

use std::fmt::Write as _;

use latclif_core::coeff::CoeffError;
use latclif_core::dirac::{DiracFamily, HermitianConvention};
use latclif_core::endo::apply;
use latclif_core::forms::FormError;
use latclif_core::polynomials::{hermitian_monogenic_basis, BladeFilter, Domain};
use latclif_core::scalar::parse_rational;
use latclif_core::suites::{run_suite, Check, Suite, SuiteConfig};
use latclif_core::{IntBox, Mesh};

use crate::expr::Parser;
use crate::formfile::{self, AnyForm};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MARGIN: i32 = 3;

const MARGIN_MARK: &str = "validity box exhausted";

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stderr: format!("error: {msg}\n"),
            ..Default::default()
        }
    }
}

pub fn parse_mesh(h: &str) -> Result<Mesh, String> {
    let r = parse_rational(h).map_err(|e| e.to_string())?;
    Mesh::new(r).ok_or_else(|| format!("mesh width `{h}` must be positive"))
}

/// `all` or a comma separated list of suite names.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>, String> {
    if s == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    let mut v = s.split(',').map(|x| x.trim().parse()).collect::<Result<Vec<Suite>, _>>()?;
    v.sort();
    v.dedup();
    Ok(v)
}

fn relation_line(c: &Check, conv: HermitianConvention) -> String {
    let name = c.name.replacen(&format!(".{conv}."), ".", 1);
    format!(
        "RELATION {name} CONVENTION {conv} {}",
        if c.pass { "PASS" } else { "FAIL" }
    )
}

/// Render a report and derive its exit code; used by `verify` and `oracle`.
pub fn report(checks: &[Check]) -> Outcome {
    let mut out = Outcome::default();
    for c in checks {
        writeln!(out.stdout, "{c}").unwrap();
    }
    for c in checks {
        if let Some(conv) = c.convention {
            writeln!(out.stdout, "{}", relation_line(c, conv)).unwrap();
        }
    }
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.pass).collect();
    let margin = failed
        .iter()
        .find(|c| c.witness.as_deref().is_some_and(|w| w.contains(MARGIN_MARK)));
    let passed = checks.len() - failed.len();
    writeln!(out.stdout, "SUMMARY {passed} PASS {} FAIL", failed.len()).unwrap();
    out.code = if let Some(c) = margin {
        writeln!(out.stderr, "error: test box too small in {}.{}", c.module, c.name).unwrap();
        EXIT_MARGIN
    } else if failed.is_empty() {
        EXIT_OK
    } else {
        EXIT_FAIL
    };
    out
}

pub fn verify(suites: &[Suite], cfg: &SuiteConfig) -> Outcome {
    // validate everything before running anything
    for &s in suites {
        if let Err(e) = cfg.validate(s) {
            return Outcome::usage(e);
        }
    }
    let mut checks = Vec::new();
    for &s in suites {
        checks.extend(run_suite(s, cfg).expect("validated"));
    }
    report(&checks)
}

pub fn oracle(n: usize, modulus: usize, seed: u64) -> Outcome {
    let cfg = SuiteConfig {
        n: Some(n),
        modulus: Some(modulus),
        seed,
        ..Default::default()
    };
    verify(&[Suite::Universal], &cfg)
}

fn is_margin(e: &FormError) -> bool {
    matches!(e, FormError::Coeff(CoeffError::EmptyValidity { .. }))
}

fn print_box(b: &IntBox) -> String {
    (0..b.dim())
        .map(|a| format!("{}:{}", b.lo[a], b.hi[a]))
        .collect::<Vec<_>>()
        .join(" ")
}

fn common_validity(f: &latclif_core::forms::Form<latclif_core::BoxFunction>) -> Option<IntBox> {
    f.terms()
        .values()
        .map(|c| c.validity().clone())
        .reduce(|a, b| a.intersect(&b))
}

/// Apply an operator expression to a form file. The result goes to stdout
/// as a form file; box inputs also get a `SHRINK` line on stderr.
pub fn apply_expr(expr: &str, form_text: &str, convention: HermitianConvention) -> Outcome {
    let form = match formfile::parse(form_text) {
        Ok(f) => f,
        Err(e) => return Outcome::usage(format!("form file: {e}")),
    };
    let fam = DiracFamily::new(form.dim(), convention);
    let op = match (Parser { family: &fam }).parse(expr) {
        Ok(op) => op,
        Err(e) => return Outcome::usage(format!("expression: {e}")),
    };
    let result = match &form {
        AnyForm::Poly(p) => apply(&op, p).map(AnyForm::Poly),
        AnyForm::Box(b) => apply(&op, b).map(AnyForm::Box),
    };
    match result {
        Ok(r) => {
            let mut out = Outcome {
                stdout: formfile::print(&r),
                ..Default::default()
            };
            if let (AnyForm::Box(a), AnyForm::Box(b)) = (&form, &r) {
                let show = |v: Option<IntBox>| v.map(|v| print_box(&v)).unwrap_or_else(|| "none".into());
                writeln!(out.stderr, "SHRINK {} -> {}", show(common_validity(a)), show(common_validity(b))).unwrap();
            }
            out
        }
        Err(e) if is_margin(&e) => Outcome {
            code: EXIT_MARGIN,
            stderr: format!("error: {e}\n"),
            ..Default::default()
        },
        Err(e) => Outcome {
            code: EXIT_FAIL,
            stderr: format!("error: {e}\n"),
            ..Default::default()
        },
    }
}

#[derive(Clone, Debug)]
pub struct MonogenicArgs {
    pub n: usize,
    pub mesh: Mesh,
    pub p: u32,
    pub q: u32,
    pub convention: HermitianConvention,
    pub spinor: bool,
    pub ambient: bool,
}

/// `DIM p q d`, then each element as a form file, then certificate lines.
/// Exits 1 if any certificate line fails.
pub fn monogenic(a: &MonogenicArgs) -> Outcome {
    if a.n == 0 || a.n > 3 {
        return Outcome::usage(format!("n = {} outside 1..=3", a.n));
    }
    let fam = DiracFamily::new(a.n, a.convention);
    let filter = if a.spinor { BladeFilter::Spinor } else { BladeFilter::All };
    let domain = if a.ambient { Domain::Ambient } else { Domain::FactorialPowers };
    let basis = match hermitian_monogenic_basis(&fam, &a.mesh, a.p, a.q, filter, domain) {
        Ok(b) => b,
        Err(e) if is_margin(&e) => return Outcome { code: EXIT_MARGIN, stderr: format!("error: {e}\n"), ..Default::default() },
        Err(e) => return Outcome { code: EXIT_FAIL, stderr: format!("error: {e}\n"), ..Default::default() },
    };
    let mut out = Outcome::default();
    writeln!(out.stdout, "DIM {} {} {}", a.p, a.q, basis.dimension()).unwrap();
    writeln!(out.stdout, "# {basis}").unwrap();
    for (i, r) in basis.elements.iter().enumerate() {
        writeln!(out.stdout, "# element {i}").unwrap();
        out.stdout.push_str(&formfile::print_poly(r));
    }
    let mut ok = basis.independent;
    for (i, c) in basis.certificates.iter().enumerate() {
        for r in &c.checks {
            ok &= r.pass;
            write!(out.stdout, "CERT {i} {} {}", r.name, if r.pass { "PASS" } else { "FAIL" }).unwrap();
            if let Some(w) = &r.witness {
                write!(out.stdout, " {}", w.replace('\n', " ")).unwrap();
            }
            out.stdout.push('\n');
        }
    }
    writeln!(
        out.stdout,
        "CERT independent {}",
        if basis.independent { "PASS" } else { "FAIL" }
    )
    .unwrap();
    out.code = if ok { EXIT_OK } else { EXIT_FAIL };
    out
}

pub fn roundtrip(text: &str) -> Outcome {
    match formfile::round_trip_exact(text) {
        Ok(true) => Outcome {
            stdout: "ROUNDTRIP PASS\n".into(),
            ..Default::default()
        },
        Ok(false) => Outcome {
            code: EXIT_FAIL,
            stdout: "ROUNDTRIP FAIL input is not in canonical form\n".into(),
            ..Default::default()
        },
        Err(e) => Outcome::usage(format!("form file: {e}")),
    }
}
