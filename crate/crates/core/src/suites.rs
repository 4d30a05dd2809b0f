//! Verification suites: every identity the library claims, run exactly on
//! seeded random data and on spanning sets, reported one line per check.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coeff::{diff, shift, skew_diff, star_laplacian, sym_diff, BoxFunction, Coefficient, ExactPolynomial};
use crate::dirac::{DiracFamily, HermitianConvention};
use crate::endo::{
    self, clifford_relations, difference_gamma_relations, fermionic_relations, spanning_set,
    verify_relation, weyl_heisenberg_relations, witt_relations, OperatorReport, Relation,
};
use crate::forms::{Blade, Form, PolyForm};
use crate::lattice::{IntBox, LatticeStep, Mesh, MultiIndex, Sign};
use crate::polynomials::{
    check_monomial_principle, hermitian_monogenic_basis, joint_euler_eigenbasis, non_homogeneity_witness,
    vector_variable_product, BladeFilter, Domain,
};
use crate::scalar::Scalar;
use crate::universal::{no_intermediate_edges, random_scalar, Reduction, Torus, UForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Core,
    Universal,
    Forms,
    Endo,
    Dirac,
    Polynomials,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Core,
        Suite::Universal,
        Suite::Forms,
        Suite::Endo,
        Suite::Dirac,
        Suite::Polynomials,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Universal => "universal",
            Suite::Forms => "forms",
            Suite::Endo => "endo",
            Suite::Dirac => "dirac",
            Suite::Polynomials => "polynomials",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// One reported identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub module: &'static str,
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
    /// Set for intertwining relations, which are also reported per
    /// convention.
    pub convention: Option<HermitianConvention>,
}

impl Check {
    fn from_report(module: &'static str, prefix: &str, r: OperatorReport) -> Self {
        Check {
            module,
            name: format!("{prefix}{}", r.name),
            pass: r.pass,
            witness: r.witness,
            convention: None,
        }
    }

    fn new(module: &'static str, name: String, failure: Option<String>) -> Self {
        Check {
            module,
            name,
            pass: failure.is_none(),
            witness: failure,
            convention: None,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CHECK {}.{} {}",
            self.module,
            self.name,
            if self.pass { "PASS" } else { "FAIL" }
        )?;
        if let Some(w) = &self.witness {
            // keep the protocol one line per check
            write!(f, " {}", w.replace('\n', " "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("n must be at least 1")]
    ZeroDimension,
    #[error("n = {0} is too large for suite {1}")]
    TooLarge(usize, &'static str),
    #[error("torus modulus N = {0} is too small (need N >= 3)")]
    SmallModulus(usize),
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Restrict to one dimension; each suite has its own default range.
    pub n: Option<usize>,
    pub mesh: Mesh,
    /// Torus modulus for the universal and bridge checks.
    pub modulus: Option<usize>,
    pub convention: HermitianConvention,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: None,
            mesh: Mesh::unit(),
            modulus: None,
            convention: HermitianConvention::DEFAULT,
            seed: 0x5eed,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self, suite: Suite) -> Result<(), ConfigError> {
        if self.n == Some(0) {
            return Err(ConfigError::ZeroDimension);
        }
        let cap = match suite {
            Suite::Universal => 3,
            Suite::Forms | Suite::Endo | Suite::Core | Suite::Polynomials => 4,
            Suite::Dirac => 3,
        };
        if let Some(n) = self.n.filter(|&n| n > cap) {
            return Err(ConfigError::TooLarge(n, suite.name()));
        }
        if matches!(suite, Suite::Universal | Suite::Forms) {
            if let Some(m) = self.modulus.filter(|&m| m < 3) {
                return Err(ConfigError::SmallModulus(m));
            }
        }
        Ok(())
    }

    fn dims(&self, default: &[usize]) -> Vec<usize> {
        match self.n {
            Some(n) => vec![n],
            None => default.to_vec(),
        }
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn tori(&self) -> Vec<(usize, usize)> {
        let default_n = |n: usize| if n == 1 { 5 } else { 4 };
        self.dims(&[1, 2])
            .into_iter()
            .map(|n| (n, self.modulus.unwrap_or_else(|| default_n(n))))
            .collect()
    }
}

/// Run one suite; checks come back sorted by name.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<Vec<Check>, ConfigError> {
    cfg.validate(suite)?;
    let mut checks = match suite {
        Suite::Core => core_suite(cfg),
        Suite::Universal => universal_suite(cfg),
        Suite::Forms => forms_suite(cfg),
        Suite::Endo => endo_suite(cfg),
        Suite::Dirac => dirac_suite(cfg),
        Suite::Polynomials => polynomials_suite(cfg),
    };
    checks.sort_by(|a, b| (a.module, &a.name).cmp(&(b.module, &b.name)));
    Ok(checks)
}

// ---------------------------------------------------------------- random data

/// A random polynomial with up to four terms of degree at most `max_deg`.
pub fn random_polynomial<R: Rng>(n: usize, mesh: &Mesh, max_deg: u32, rng: &mut R) -> ExactPolynomial {
    let alphas = MultiIndex::up_to_degree(n, max_deg);
    let mut p = ExactPolynomial::zero(n, mesh.clone());
    for _ in 0..rng.gen_range(1..=4) {
        let a = alphas[rng.gen_range(0..alphas.len())].clone();
        let m = ExactPolynomial::monomial(n, mesh.clone(), a, random_scalar(rng));
        p = p.add(&m).expect("same carrier");
    }
    p
}

fn random_blade<R: Rng>(n: usize, rng: &mut R) -> Blade {
    Blade::from_bits(n, rng.gen_range(0..(1u32 << (2 * n))))
}

fn homogeneous_blade<R: Rng>(n: usize, degree: usize, rng: &mut R) -> Blade {
    loop {
        let b = random_blade(n, rng);
        if b.degree() == degree {
            return b;
        }
    }
}

/// A random form with up to three terms and polynomial coefficients.
pub fn random_poly_form<R: Rng>(n: usize, mesh: &Mesh, max_deg: u32, rng: &mut R) -> PolyForm {
    let mut f = Form::zero(n, mesh.clone());
    for _ in 0..rng.gen_range(1..=3) {
        let t = Form::term(random_blade(n, rng), random_polynomial(n, mesh, max_deg, rng));
        f = f.add(&t).expect("same shape");
    }
    f
}

/// A random form on `ℤ_N^n` with periodic coefficients; `degree` fixes the
/// blade degree when given.
pub fn random_torus_form<R: Rng>(n: usize, mesh: &Mesh, modulus: usize, degree: Option<usize>, rng: &mut R) -> Form<BoxFunction> {
    let mut f = Form::zero(n, mesh.clone());
    for _ in 0..rng.gen_range(1..=2) {
        let b = match degree {
            Some(d) => homogeneous_blade(n, d, rng),
            None => random_blade(n, rng),
        };
        let vals: Vec<Scalar> = (0..modulus.pow(n as u32)).map(|_| random_scalar(rng)).collect();
        let torus = Torus::new(n, modulus).expect("valid torus");
        let c = BoxFunction::periodic(n, mesh.clone(), modulus as i64, |p| vals[torus.node(p) as usize].clone());
        f = f.add(&Form::term(b, c)).expect("same shape");
    }
    f
}

// -------------------------------------------------------------- comparisons

fn first_failure<T: Send>(items: Vec<T>, f: impl Fn(usize, T) -> Option<String> + Sync + Send) -> Option<String> {
    items
        .into_par_iter()
        .enumerate()
        .map(|(i, t)| f(i, t))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .next()
}

fn coeff_diff<C: Coefficient>(a: Result<C, crate::CoeffError>, b: Result<C, crate::CoeffError>) -> Option<String> {
    match (a, b) {
        (Ok(a), Ok(b)) => a.first_difference(&b),
        (Err(e), _) | (_, Err(e)) => Some(format!("error {e}")),
    }
}

fn form_diff<C: Coefficient, E: fmt::Display>(a: Result<Form<C>, E>, b: Result<Form<C>, E>) -> Option<String> {
    match (a, b) {
        (Ok(a), Ok(b)) => a.first_difference(&b),
        (Err(e), _) | (_, Err(e)) => Some(format!("error {e}")),
    }
}

fn uform_nonzero(u: &UForm) -> Option<String> {
    u.terms()
        .iter()
        .next()
        .map(|(p, c)| format!("path {p:?} has coefficient {c}"))
}

fn uform_diff<E: fmt::Display>(a: Result<UForm, E>, b: Result<UForm, E>) -> Option<String> {
    match (a, b) {
        (Ok(a), Ok(b)) => match a.sub(&b) {
            Ok(r) => uform_nonzero(&r),
            Err(e) => Some(format!("error {e}")),
        },
        (Err(e), _) | (_, Err(e)) => Some(format!("error {e}")),
    }
}

fn uform_zero<E: fmt::Display>(a: Result<UForm, E>) -> Option<String> {
    match a {
        Ok(u) => uform_nonzero(&u),
        Err(e) => Some(format!("error {e}")),
    }
}

fn tag(i: usize, w: Option<String>) -> Option<String> {
    w.map(|w| format!("sample {i}: {w}"))
}

// ------------------------------------------------------------------- suites

fn core_suite(cfg: &SuiteConfig) -> Vec<Check> {
    const M: &str = "core";
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2, 3]) {
        let mut rng = cfg.rng(n as u64);
        let mesh = &cfg.mesh;
        let pairs: Vec<(ExactPolynomial, ExactPolynomial)> = (0..20)
            .map(|_| (random_polynomial(n, mesh, 3, &mut rng), random_polynomial(n, mesh, 3, &mut rng)))
            .collect();
        let pre = format!("n{n}.");
        let check = |name: &str, fail: Option<String>| Check::new(M, format!("{pre}{name}"), fail);

        out.push(check(
            "ring_commutative",
            first_failure(pairs.clone(), |i, (f, g)| tag(i, coeff_diff(f.mul(&g), g.mul(&f)))),
        ));
        for axis in 0..n {
            let (p, m) = (LatticeStep::plus(axis), LatticeStep::minus(axis));
            let a = axis + 1;
            out.push(check(
                &format!("shift_inverse[{a}]"),
                first_failure(pairs.clone(), |i, (f, _)| {
                    tag(i, coeff_diff(shift(&f, p).and_then(|g| shift(&g, m)), Ok(f)))
                }),
            ));
            out.push(check(
                &format!("forward_is_shifted_backward[{a}]"),
                first_failure(pairs.clone(), |i, (f, _)| {
                    tag(i, coeff_diff(diff(&f, p), diff(&f, m).and_then(|g| shift(&g, p))))
                }),
            ));
            out.push(check(
                &format!("product_rule[{a}]"),
                first_failure(pairs.clone(), |i, (f, g)| {
                    let lhs = f.mul(&g).and_then(|fg| diff(&fg, p));
                    let rhs = (|| {
                        let t1 = diff(&f, p)?.mul(&g)?;
                        let t2 = shift(&f, p)?.mul(&diff(&g, p)?)?;
                        t1.add(&t2)
                    })();
                    tag(i, coeff_diff(lhs, rhs))
                }),
            ));
            out.push(check(
                &format!("hermitian_splitting[{a}]"),
                first_failure(pairs.clone(), |i, (f, _)| {
                    let ii = Scalar::i();
                    let w = (|| {
                        let nab = sym_diff(&f, axis)?;
                        let til = skew_diff(&f, axis)?.scale(&ii);
                        let plus = coeff_diff(diff(&f, p), nab.sub(&til));
                        let minus = coeff_diff(diff(&f, m), nab.add(&til));
                        Ok::<_, crate::CoeffError>(plus.or(minus))
                    })();
                    tag(i, w.unwrap_or_else(|e| Some(format!("error {e}"))))
                }),
            ));
        }
        out.push(check(
            "laplacian_symmetric_factorization",
            first_failure(pairs.clone(), |i, (f, _)| {
                let rhs = (0..n).try_fold(f.zero_like(), |acc, a| {
                    acc.add(&diff(&diff(&f, LatticeStep::minus(a))?, LatticeStep::plus(a))?)
                });
                tag(i, coeff_diff(star_laplacian(&f), rhs))
            }),
        ));
        // polynomial and sampled representations agree after each operator
        let support = IntBox::cube(n, -3, 3);
        out.push(check(
            "cross_representation",
            first_failure(pairs.clone(), |i, (f, g)| {
                let s = |p: &ExactPolynomial| p.sample(&support);
                let mut w = coeff_diff(star_laplacian(&f).map(|p| s(&p)), star_laplacian(&s(&f)));
                for axis in 0..n {
                    let st = LatticeStep::plus(axis);
                    w = w.or_else(|| coeff_diff(diff(&f, st).map(|p| s(&p)), diff(&s(&f), st)));
                    w = w.or_else(|| {
                        coeff_diff(f.mul_coordinate(axis).map(|p| s(&p)), s(&f).mul_coordinate(axis))
                    });
                }
                w = w.or_else(|| coeff_diff(f.mul(&g).map(|p| s(&p)), s(&f).mul(&s(&g))));
                tag(i, w)
            }),
        ));
    }
    out
}

fn universal_suite(cfg: &SuiteConfig) -> Vec<Check> {
    const M: &str = "universal";
    let mut out = Vec::new();
    for (n, big_n) in cfg.tori() {
        let torus = Torus::new(n, big_n).expect("validated");
        let red = Reduction::symmetric(&torus).expect("validated");
        let mut rng = cfg.rng(100 + n as u64);
        let pre = format!("n{n}.N{big_n}.");
        let check = |name: &str, fail: Option<String>| Check::new(M, format!("{pre}{name}"), fail);

        for (label, r) in [("universal", None), ("reduced", Some(&red))] {
            let forms: Vec<UForm> = (0..50)
                .map(|k| UForm::random(&torus, r, k % 4, 4, &mut rng))
                .collect();
            out.push(check(
                &format!("{label}.nilpotent"),
                first_failure(forms.clone(), |i, w| tag(i, uform_nonzero(&w.deriv().deriv()))),
            ));
            let pairs: Vec<(UForm, UForm)> = (0..20)
                .map(|k| {
                    (
                        UForm::random(&torus, r, k % 3, 3, &mut rng),
                        UForm::random(&torus, r, (k / 3) % 3, 3, &mut rng),
                    )
                })
                .collect();
            out.push(check(
                &format!("{label}.graded_leibniz"),
                first_failure(pairs, |i, (a, b)| {
                    let deg = a.degree().unwrap_or(0);
                    let lhs = a.mul(&b).map(|ab| ab.deriv());
                    let rhs = (|| {
                        let t1 = a.deriv().mul(&b)?;
                        let t2 = a.mul(&b.deriv())?;
                        if deg % 2 == 0 { t1.add(&t2) } else { t1.sub(&t2) }
                    })();
                    tag(i, uform_diff(lhs, rhs))
                }),
            ));
            let unit = UForm::unit(&torus, r);
            out.push(check(&format!("{label}.partition_of_unity_closed"), uform_nonzero(&unit.deriv())));
            out.push(check(
                &format!("{label}.unit_is_identity"),
                first_failure(forms.clone(), |i, w| {
                    tag(i, uform_diff(unit.mul(&w), Ok(w.clone())).or_else(|| uform_diff(w.mul(&unit), Ok(w))))
                }),
            ));
            let g = UForm::adjacency(&torus, r);
            let fs: Vec<UForm> = (0..20)
                .map(|_| {
                    let v: Vec<Scalar> = (0..torus.node_count()).map(|_| random_scalar(&mut rng)).collect();
                    UForm::function(&torus, r, &v)
                })
                .collect();
            out.push(check(
                &format!("{label}.inner_derivative"),
                first_failure(fs.clone(), |i, f| tag(i, uform_diff(g.commutator(&f), Ok(f.deriv())))),
            ));
            let dirs: Vec<LatticeStep> = LatticeStep::all(n);
            out.push(check(
                &format!("{label}.theta_left_invariant"),
                first_failure(dirs.clone(), |_, s| {
                    let t = UForm::theta_step(&torus, r, s);
                    torus.nodes().find_map(|p| {
                        uform_diff::<String>(Ok(t.translate(&torus.coords(p))), Ok(t.clone()))
                            .map(|w| format!("Θ^{s} moved by node {p}: {w}"))
                    })
                }),
            ));
            out.push(check(
                &format!("{label}.theta_translates_functions"),
                first_failure(fs, |i, f| {
                    dirs.iter().find_map(|&s| {
                        let t = UForm::theta_step(&torus, r, s);
                        let d = torus.unit_disp(s);
                        tag(i, uform_diff(t.mul(&f), f.translate(&d.iter().map(|x| -x).collect::<Vec<_>>()).mul(&t)))
                    })
                }),
            ));
        }

        let g2 = UForm::g_power(&torus, Some(&red), 2);
        out.push(check("reduced.adjacency_square_zero", uform_nonzero(&g2)));
        let steps = LatticeStep::all(n);
        let mut pairs = Vec::new();
        for &a in &steps {
            for &b in &steps {
                pairs.push((a, b));
            }
        }
        out.push(check(
            "reduced.theta_anticommute",
            first_failure(pairs, |_, (a, b)| {
                let ta = UForm::theta_step(&torus, Some(&red), a);
                let tb = UForm::theta_step(&torus, Some(&red), b);
                uform_zero(ta.anticommutator(&tb)).map(|w| format!("{{Θ^{a}, Θ^{b}}}: {w}"))
            }),
        ));
        let mut basis = Vec::new();
        for r in 0..=2 {
            basis.extend(UForm::basis(&torus, Some(&red), r));
        }
        out.push(check(
            "reduced.derivative_from_adjacency",
            first_failure(basis, |_, w| {
                let path = w.terms().keys().next().cloned().unwrap_or_default();
                uform_zero(w.theorem32_residual()).map(|e| format!("basis path {path:?}: {e}"))
            }),
        ));
        out.push(check(
            "reduced.no_intermediate_edges",
            (!no_intermediate_edges(&torus, &red))
                .then(|| format!("a 2-path joins the endpoints of an edge on Z_{big_n}^{n}")),
        ));
    }
    out
}

fn degree_part(w: &PolyForm, d: usize) -> PolyForm {
    let mut out = Form::zero(w.dim(), w.mesh().clone());
    for (p, q) in w.bidegrees() {
        if p + q == d {
            out = out.add(&w.part(p, q)).expect("same shape");
        }
    }
    out
}

fn sign_table(n: usize, mesh: &Mesh) -> Vec<(String, Option<String>)> {
    let mut out = Vec::new();
    for j in 0..n {
        let plus = PolyForm::unit_blade(mesh.clone(), Blade::generator(n, LatticeStep::plus(j)));
        let minus = PolyForm::unit_blade(mesh.clone(), Blade::generator(n, LatticeStep::minus(j)));
        let dx = plus.sub(&minus).unwrap();
        let dtau = plus.add(&minus).unwrap();
        let a = j + 1;
        out.push((format!("sign_table.involution_dx[{a}]"), dx.involution().first_difference(&dx.neg())));
        out.push((format!("sign_table.involution_dtau[{a}]"), dtau.involution().first_difference(&dtau)));
        out.push((format!("sign_table.reversion_dx[{a}]"), form_diff(dx.reversion(), Ok(dx.clone()))));
        out.push((format!("sign_table.reversion_dtau[{a}]"), form_diff(dtau.reversion(), Ok(dtau.neg()))));
    }
    out
}

fn forms_suite(cfg: &SuiteConfig) -> Vec<Check> {
    const M: &str = "forms";
    let mut out = Vec::new();
    let mesh = &cfg.mesh;
    for n in cfg.dims(&[1, 2, 3]) {
        let pre = format!("n{n}.");
        let check = |name: &str, fail: Option<String>| Check::new(M, format!("{pre}{name}"), fail);
        let mut rng = cfg.rng(200 + n as u64);

        for &a in &LatticeStep::all(n) {
            for &b in &LatticeStep::all(n) {
                let fa = PolyForm::unit_blade(mesh.clone(), Blade::generator(n, a));
                let fb = PolyForm::unit_blade(mesh.clone(), Blade::generator(n, b));
                let w = (|| {
                    let s = fa.mul(&fb)?.add(&fb.mul(&fa)?)?;
                    Ok::<_, crate::forms::FormError>((!s.is_zero()).then(|| format!("{s:?}")))
                })()
                .unwrap_or_else(|e| Some(format!("error {e}")));
                out.push(check(&format!("anticommute[{a},{b}]"), w));
            }
        }

        let forms: Vec<PolyForm> = (0..20).map(|_| random_poly_form(n, mesh, 3, &mut rng)).collect();
        let zero = Form::zero(n, mesh.clone());
        let closed = |w: Result<PolyForm, crate::forms::FormError>| form_diff(w, Ok(zero.clone()));
        out.push(check(
            "d_squared",
            first_failure(forms.clone(), |i, w| tag(i, closed(w.d().and_then(|x| x.d())))),
        ));
        out.push(check(
            "d_plus_squared",
            first_failure(forms.clone(), |i, w| tag(i, closed(w.d_plus().and_then(|x| x.d_plus())))),
        ));
        out.push(check(
            "d_minus_squared",
            first_failure(forms.clone(), |i, w| tag(i, closed(w.d_minus().and_then(|x| x.d_minus())))),
        ));
        out.push(check(
            "d_plus_minus_anticommute",
            first_failure(forms.clone(), |i, w| {
                tag(
                    i,
                    closed((|| w.d_plus()?.d_minus()?.add(&w.d_minus()?.d_plus()?))()),
                )
            }),
        ));
        out.push(check(
            "bigrading",
            first_failure(forms.clone(), |i, w| {
                for (p, q) in w.bidegrees() {
                    let part = w.part(p, q);
                    let up = part.d_plus().map(|x| x.bidegrees());
                    let dn = part.d_minus().map(|x| x.bidegrees());
                    let ok_up = up.as_ref().map(|v| v.iter().all(|&b| b == (p, q + 1))).unwrap_or(false);
                    let ok_dn = dn.as_ref().map(|v| v.iter().all(|&b| b == (p + 1, q))).unwrap_or(false);
                    if !ok_up || !ok_dn {
                        return Some(format!("sample {i}: part ({p},{q}) maps to {up:?} / {dn:?}"));
                    }
                }
                None
            }),
        ));
        let triples: Vec<(PolyForm, PolyForm, PolyForm)> = (0..10)
            .map(|_| {
                (
                    random_poly_form(n, mesh, 2, &mut rng),
                    random_poly_form(n, mesh, 2, &mut rng),
                    random_poly_form(n, mesh, 2, &mut rng),
                )
            })
            .collect();
        out.push(check(
            "associative",
            first_failure(triples.clone(), |i, (a, b, c)| {
                tag(i, form_diff(a.mul(&b).and_then(|ab| ab.mul(&c)), b.mul(&c).and_then(|bc| a.mul(&bc))))
            }),
        ));
        out.push(check(
            "leibniz",
            first_failure(triples.clone(), |i, (a, b, _)| {
                let a = degree_part(&a, a.terms().keys().next().map(|k| k.degree()).unwrap_or(0));
                let deg = a.degree().unwrap_or(0);
                let lhs = a.mul(&b).and_then(|ab| ab.d());
                let rhs = (|| {
                    let t1 = a.d()?.mul(&b)?;
                    let t2 = a.mul(&b.d()?)?;
                    if deg % 2 == 0 { t1.add(&t2) } else { t1.sub(&t2) }
                })();
                tag(i, form_diff(lhs, rhs))
            }),
        ));
        out.push(check(
            "involution_involutive",
            first_failure(forms.clone(), |i, w| tag(i, w.involution().involution().first_difference(&w))),
        ));
        out.push(check(
            "reversion_involutive",
            first_failure(forms.clone(), |i, w| tag(i, form_diff(w.reversion().and_then(|x| x.reversion()), Ok(w)))),
        ));
        out.push(check(
            "dagger_involutive",
            first_failure(forms.clone(), |i, w| tag(i, form_diff(w.dagger().and_then(|x| x.dagger()), Ok(w)))),
        ));
        // constant coefficients: shifts inside the product are invisible
        let consts: Vec<(PolyForm, PolyForm)> = (0..10)
            .map(|_| (random_poly_form(n, mesh, 0, &mut rng), random_poly_form(n, mesh, 0, &mut rng)))
            .collect();
        out.push(check(
            "involution_homomorphism_constant",
            first_failure(consts, |i, (a, b)| {
                tag(i, form_diff(a.mul(&b).map(|x| x.involution()), a.involution().mul(&b.involution())))
            }),
        ));
        out.push(check(
            "reversion_antihomomorphism",
            first_failure(triples.clone(), |i, (a, b, _)| {
                tag(i, form_diff(a.mul(&b).and_then(|x| x.reversion()), (|| b.reversion()?.mul(&a.reversion()?))()))
            }),
        ));
        out.push(check(
            "dagger_antihomomorphism",
            first_failure(triples, |i, (a, b, _)| {
                tag(i, form_diff(a.mul(&b).and_then(|x| x.dagger()), (|| b.dagger()?.mul(&a.dagger()?))()))
            }),
        ));
        for (name, w) in sign_table(n, mesh) {
            out.push(check(&name, w));
        }
    }

    // bridge to the reduced universal calculus
    let bridge_dims = cfg.dims(&[2]).into_iter().filter(|&n| n <= 3);
    for n in bridge_dims {
        let big_n = cfg.modulus.unwrap_or(4);
        let torus = Torus::new(n, big_n).expect("validated");
        let pre = format!("n{n}.N{big_n}.");
        let check = |name: &str, fail: Option<String>| Check::new(M, format!("{pre}{name}"), fail);
        let mut rng = cfg.rng(300 + n as u64);
        let pairs: Vec<_> = (0..10)
            .map(|k| {
                (
                    random_torus_form(n, mesh, big_n, Some(k % 3), &mut rng),
                    random_torus_form(n, mesh, big_n, Some((k / 3) % 3), &mut rng),
                )
            })
            .collect();
        out.push(check(
            "bridge_product",
            first_failure(pairs.clone(), |i, (a, b)| {
                let lhs = a.mul(&b).and_then(|ab| ab.to_universal(&torus));
                let rhs = (|| Ok::<_, crate::forms::FormError>(a.to_universal(&torus)?.mul(&b.to_universal(&torus)?)?))();
                tag(i, uform_diff(lhs, rhs))
            }),
        ));
        out.push(check(
            "bridge_derivative",
            first_failure(pairs.clone(), |i, (a, _)| {
                let lhs = a.d().and_then(|x| x.to_universal(&torus));
                let rhs = a.to_universal(&torus).map(|u| u.deriv());
                tag(i, uform_diff(lhs, rhs))
            }),
        ));
        out.push(check(
            "bridge_round_trip",
            first_failure(pairs, |i, (a, _)| {
                let back = a.to_universal(&torus).and_then(|u| Form::from_universal(&u, mesh.clone()));
                tag(i, form_diff(back, Ok(a)))
            }),
        ));
    }
    out
}

fn endo_suite(cfg: &SuiteConfig) -> Vec<Check> {
    const M: &str = "endo";
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2, 3]) {
        let inputs = spanning_set(n, &cfg.mesh);
        let mut rels: Vec<Relation> = fermionic_relations(n);
        rels.extend(witt_relations(n));
        rels.extend(clifford_relations(n));
        rels.extend(difference_gamma_relations(n));
        rels.extend(weyl_heisenberg_relations(n));
        let pre = format!("n{n}.");
        out.extend(
            rels.par_iter()
                .map(|r| Check::from_report(M, &pre, verify_relation(r, &inputs)))
                .collect::<Vec<_>>(),
        );
        let w = first_failure(inputs.clone(), |_, w| {
            LatticeStep::all(n).into_iter().find_map(|s| {
                let closed = endo::apply(&crate::endo::Operator::vartheta(s), &w);
                form_diff(closed, endo::vartheta_recursive(s, &w)).map(|d| format!("ϑ^{s} on {w:?}: {d}"))
            })
        });
        out.push(Check::new(M, format!("{pre}vartheta_closed_form"), w));
    }
    out
}

fn dirac_suite(cfg: &SuiteConfig) -> Vec<Check> {
    const M: &str = "dirac";
    let mut out = Vec::new();
    for n in cfg.dims(&[1, 2]) {
        let inputs = spanning_set(n, &cfg.mesh);
        let fam = DiracFamily::new(n, cfg.convention);
        let pre = format!("n{n}.{}.", cfg.convention);
        let mut rels = fam.structure_relations();
        rels.extend(fam.euler_relations());
        out.extend(
            rels.par_iter()
                .map(|r| Check::from_report(M, &pre, verify_relation(r, &inputs)))
                .collect::<Vec<_>>(),
        );
        for p in 0..=1 {
            for q in 0..=1 {
                let c = match vector_variable_product(&fam, &cfg.mesh, p, q) {
                    Ok((_, r)) => Check::from_report(M, &pre, r),
                    Err(e) => Check::new(M, format!("{pre}vector_variable_product[{p},{q}]"), Some(format!("error {e}"))),
                };
                out.push(c);
            }
        }

        let mut passing = Vec::new();
        for conv in HermitianConvention::ALL {
            let fam = DiracFamily::new(n, conv);
            let pre = format!("n{n}.{conv}.");
            let reports: Vec<OperatorReport> = fam
                .intertwining_relations()
                .par_iter()
                .map(|r| verify_relation(r, &inputs))
                .collect();
            if reports.iter().all(|r| r.pass) {
                passing.push(conv);
            }
            for r in reports {
                let mut c = Check::from_report(M, &pre, r);
                c.convention = Some(conv);
                out.push(c);
            }
        }
        out.push(Check::new(
            M,
            format!("n{n}.intertwining_unique_convention"),
            (passing.len() != 1).then(|| {
                format!(
                    "{} conventions satisfy every intertwining relation{}",
                    passing.len(),
                    if passing.is_empty() { String::new() } else { format!(": {passing:?}") }
                )
            }),
        ));
    }
    out
}

fn polynomials_suite(cfg: &SuiteConfig) -> Vec<Check> {
    const M: &str = "polynomials";
    let mut out = Vec::new();
    let mesh = &cfg.mesh;
    for n in cfg.dims(&[1, 2, 3]) {
        let pre = format!("n{n}.");
        for sign in Sign::BOTH {
            // one line per identity kind, aggregated over all |α| ≤ 4
            let mut kinds: std::collections::BTreeMap<String, Option<String>> = Default::default();
            for a in MultiIndex::up_to_degree(n, 4) {
                for r in check_monomial_principle(mesh, sign, &a) {
                    let kind = r.name.split('[').next().unwrap_or("").to_string();
                    let slot = kinds.entry(format!("{kind}[{}]", sign.symbol())).or_insert(None);
                    if !r.pass && slot.is_none() {
                        *slot = Some(format!("{}: {}", r.name, r.witness.unwrap_or_default()));
                    }
                }
            }
            for (k, w) in kinds {
                out.push(Check::new(M, format!("{pre}{k}"), w));
            }
        }
        let inputs = spanning_set(n, mesh);
        for r in weyl_heisenberg_relations(n) {
            out.push(Check::from_report(M, &pre, verify_relation(&r, &inputs)));
        }
    }

    for n in cfg.dims(&[1, 2]).into_iter().filter(|&n| n <= 2) {
        let fam = DiracFamily::new(n, cfg.convention);
        let pre = format!("n{n}.{}.", cfg.convention);
        for (p, q) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let name = |what: &str| format!("{pre}monogenic[{p},{q}].{what}");
            match hermitian_monogenic_basis(&fam, mesh, p, q, BladeFilter::All, Domain::FactorialPowers) {
                Ok(b) => {
                    let first_bad = |names: &[&str]| {
                        b.certificates.iter().enumerate().find_map(|(i, c)| {
                            c.checks
                                .iter()
                                .find(|r| names.contains(&r.name.as_str()) && !r.pass)
                                .map(|r| format!("element {i}: {}: {}", r.name, r.witness.clone().unwrap_or_default()))
                        })
                    };
                    out.push(Check::new(M, name("constraints"), first_bad(&crate::polynomials::CONSTRAINTS)));
                    out.push(Check::new(M, name("gamma_eigen"), first_bad(&crate::polynomials::GAMMA_CHECKS)));
                    out.push(Check::new(
                        M,
                        name("independent"),
                        (!b.independent).then(|| "elements are linearly dependent".to_string()),
                    ));
                }
                Err(e) => out.push(Check::new(M, name("constraints"), Some(format!("error {e}")))),
            }
        }
        if n == 1 {
            let w = match joint_euler_eigenbasis(&fam, mesh, 1, 1, BladeFilter::Spinor, Domain::Ambient) {
                Ok(basis) if basis.is_empty() => Some("ambient eigenspace is empty".to_string()),
                Ok(basis) => non_homogeneity_witness(&basis, 1, 1)
                    .is_none()
                    .then(|| "every eigenvector scales homogeneously".to_string()),
                Err(e) => Some(format!("error {e}")),
            };
            out.push(Check::new(M, format!("{pre}non_homogeneity[1,1]"), w));
        }
    }
    out
}
