//! Endomorphisms of the form algebra as expression trees.
//!
//! Primitives: exterior `γ^{±j}`, interior `ϑ^{±j}`, Witt `ξ^{±j}`,
//! Clifford `Υ^{±j}`, and the coefficient-wise shifts `T^{±j}`,
//! differences `D^{±j}`, symmetric/skew differences, coordinate
//! multiplication `x_j` and shifted coordinates `M_j^± = x_j T^{±j}`.
//!
//! Two operators are compared by evaluating both on a spanning set of
//! one-term forms (every blade times `1`, `x_j`, `x_j x_k`), which decides
//! equality for every relation built here since none raises the
//! polynomial degree by more than the inputs can carry.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::coeff::{diff, skew_diff, star_laplacian, sym_diff, Coefficient, ExactPolynomial};
use crate::forms::{Blade, Form, FormError, PolyForm};
use crate::lattice::{LatticeStep, Mesh, MultiIndex, Sign};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Primitive {
    Identity,
    Gamma(LatticeStep),
    Vartheta(LatticeStep),
    Xi(LatticeStep),
    /// `Υ^{±j} = ξ^{+j} ± ξ^{−j}`; the sign selects `±`.
    Upsilon(Sign, usize),
    Shift(LatticeStep),
    Diff(LatticeStep),
    SymDiff(usize),
    SkewDiff(usize),
    /// Star Laplacian on every coefficient.
    Laplacian,
    Coord(usize),
    CoordShift(LatticeStep),
}

#[derive(Clone, Debug, PartialEq)]
enum Expr {
    Prim(Primitive),
    Compose(Operator, Operator),
    Sum(Vec<Operator>),
    Scale(Scalar, Operator),
    Named(String, Operator),
}

/// Immutable, cheaply clonable operator expression.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator(Arc<Expr>);

impl Operator {
    fn new(e: Expr) -> Self {
        Operator(Arc::new(e))
    }

    pub fn prim(p: Primitive) -> Self {
        Operator::new(Expr::Prim(p))
    }

    pub fn identity() -> Self {
        Operator::prim(Primitive::Identity)
    }

    pub fn zero() -> Self {
        Operator::new(Expr::Sum(Vec::new()))
    }

    pub fn gamma(s: LatticeStep) -> Self {
        Operator::prim(Primitive::Gamma(s))
    }

    pub fn vartheta(s: LatticeStep) -> Self {
        Operator::prim(Primitive::Vartheta(s))
    }

    pub fn xi(s: LatticeStep) -> Self {
        Operator::prim(Primitive::Xi(s))
    }

    pub fn upsilon(sign: Sign, axis: usize) -> Self {
        Operator::prim(Primitive::Upsilon(sign, axis))
    }

    pub fn shift(s: LatticeStep) -> Self {
        Operator::prim(Primitive::Shift(s))
    }

    pub fn diff(s: LatticeStep) -> Self {
        Operator::prim(Primitive::Diff(s))
    }

    pub fn sym_diff(axis: usize) -> Self {
        Operator::prim(Primitive::SymDiff(axis))
    }

    pub fn skew_diff(axis: usize) -> Self {
        Operator::prim(Primitive::SkewDiff(axis))
    }

    pub fn laplacian() -> Self {
        Operator::prim(Primitive::Laplacian)
    }

    pub fn coord(axis: usize) -> Self {
        Operator::prim(Primitive::Coord(axis))
    }

    /// `M_j^± = x_j T^{±j}`.
    pub fn coord_shift(s: LatticeStep) -> Self {
        Operator::prim(Primitive::CoordShift(s))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn then_after(&self, other: &Operator) -> Self {
        Operator::new(Expr::Compose(self.clone(), other.clone()))
    }

    pub fn plus(&self, other: &Operator) -> Self {
        Operator::sum(vec![self.clone(), other.clone()])
    }

    pub fn minus(&self, other: &Operator) -> Self {
        self.plus(&other.scaled(Scalar::from_int(-1)))
    }

    pub fn scaled(&self, s: Scalar) -> Self {
        Operator::new(Expr::Scale(s, self.clone()))
    }

    pub fn sum(ops: Vec<Operator>) -> Self {
        Operator::new(Expr::Sum(ops))
    }

    /// Attach a display name (the expression is unchanged).
    pub fn named(&self, name: &str) -> Self {
        Operator::new(Expr::Named(name.to_string(), self.clone()))
    }

    pub fn name(&self) -> Option<&str> {
        match &*self.0 {
            Expr::Named(n, _) => Some(n),
            _ => None,
        }
    }
}

pub fn compose(a: &Operator, b: &Operator) -> Operator {
    a.then_after(b)
}

pub fn commutator(a: &Operator, b: &Operator) -> Operator {
    compose(a, b).minus(&compose(b, a))
}

pub fn anticommutator(a: &Operator, b: &Operator) -> Operator {
    compose(a, b).plus(&compose(b, a))
}

fn display_step(f: &mut fmt::Formatter<'_>, name: &str, s: &LatticeStep) -> fmt::Result {
    write!(f, "{name}({},{})", s.sign, s.axis + 1)
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Primitive::Identity => write!(f, "id"),
            Primitive::Gamma(s) => display_step(f, "gamma", s),
            Primitive::Vartheta(s) => display_step(f, "vartheta", s),
            Primitive::Xi(s) => display_step(f, "xi", s),
            Primitive::Upsilon(sign, j) => write!(f, "upsilon({sign},{})", j + 1),
            Primitive::Shift(s) => display_step(f, "T", s),
            Primitive::Diff(s) => display_step(f, "D", s),
            Primitive::SymDiff(j) => write!(f, "nabla({})", j + 1),
            Primitive::SkewDiff(j) => write!(f, "nablat({})", j + 1),
            Primitive::Laplacian => write!(f, "lap"),
            Primitive::Coord(j) => write!(f, "x({})", j + 1),
            Primitive::CoordShift(s) => display_step(f, "M", s),
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Expr::Prim(p) => write!(f, "{p}"),
            Expr::Compose(a, b) => write!(f, "compose({a},{b})"),
            Expr::Sum(v) if v.is_empty() => write!(f, "zero"),
            Expr::Sum(v) => {
                let mut it = v.iter();
                let mut acc = it.next().unwrap().to_string();
                for o in it {
                    acc = format!("add({acc},{o})");
                }
                write!(f, "{acc}")
            }
            Expr::Scale(s, a) => write!(f, "scale({s},{a})"),
            Expr::Named(n, _) => write!(f, "{n}"),
        }
    }
}

/// `ϑ^{s}(F B) = (−1)^{pos} (T^{−s} F)(B ∖ dx^s)`: closed form of the
/// contraction recursion (the shifts inside the recursion cancel, only the
/// defining `T^{∓j}` survives).
fn vartheta_closed<C: Coefficient>(s: LatticeStep, w: &Form<C>) -> Result<Form<C>, FormError> {
    let mut out = Form::zero(w.dim(), w.mesh().clone());
    for (b, c) in w.terms() {
        if let Some(pos) = b.position(s) {
            out.push(b.without(s), c.shift(s.opposite())?, pos % 2 == 1)?;
        }
    }
    Ok(out)
}

/// Contraction `C^{s}` by its defining recursion on the leftmost factor:
/// `C(dx^k η) = δ_{ks} T^{s} η − dx^k C(η)`, `C(F ∅) = 0`, with the
/// coefficient first moved right through `dx^k` (`F dx^k = dx^k T^{−k}F`).
pub fn contraction_recursive<C: Coefficient>(
    s: LatticeStep,
    w: &Form<C>,
) -> Result<Form<C>, FormError> {
    fn one<C: Coefficient>(
        s: LatticeStep,
        n: usize,
        mesh: &Mesh,
        f: &C,
        factors: &[LatticeStep],
    ) -> Result<Form<C>, FormError> {
        let Some((&k, rest)) = factors.split_first() else {
            return Ok(Form::zero(n, mesh.clone()));
        };
        let eta_coeff = f.shift(k.opposite())?;
        let (odd, rest_blade) = Blade::from_factors(n, rest).expect("canonical tail");
        debug_assert!(!odd);
        let inner = one(s, n, mesh, &eta_coeff, rest)?;
        let mut out = inner.wedge_generator(k)?.neg();
        if k == s {
            let mut t = Form::zero(n, mesh.clone());
            t.push(rest_blade, eta_coeff.shift(s)?, false)?;
            out = t.add(&out)?;
        }
        Ok(out)
    }
    let mut out = Form::zero(w.dim(), w.mesh().clone());
    for (b, c) in w.terms() {
        out = out.add(&one(s, w.dim(), w.mesh(), c, &b.factors())?)?;
    }
    Ok(out)
}

/// `ϑ^{s} = C^{s} ∘ T^{−s}` by the recursion (reference path).
pub fn vartheta_recursive<C: Coefficient>(
    s: LatticeStep,
    w: &Form<C>,
) -> Result<Form<C>, FormError> {
    let shifted = w.map_coefficients(|c| c.shift(s.opposite()))?;
    contraction_recursive(s, &shifted)
}

fn apply_prim<C: Coefficient>(p: &Primitive, w: &Form<C>) -> Result<Form<C>, FormError> {
    let n = w.dim();
    let check = |axis: usize| -> Result<(), FormError> {
        if axis < n {
            Ok(())
        } else {
            Err(crate::coeff::CoeffError::AxisOutOfRange { axis, dim: n }.into())
        }
    };
    match p {
        Primitive::Identity => Ok(w.clone()),
        Primitive::Gamma(s) => {
            check(s.axis)?;
            w.wedge_generator(*s)
        }
        Primitive::Vartheta(s) => {
            check(s.axis)?;
            vartheta_closed(*s, w)
        }
        Primitive::Xi(s) => {
            check(s.axis)?;
            w.wedge_generator(*s)?.add(&vartheta_closed(s.opposite(), w)?)
        }
        Primitive::Upsilon(sign, j) => {
            check(*j)?;
            let a = apply_prim(&Primitive::Xi(LatticeStep::plus(*j)), w)?;
            let b = apply_prim(&Primitive::Xi(LatticeStep::minus(*j)), w)?;
            match sign {
                Sign::Plus => a.add(&b),
                Sign::Minus => a.sub(&b),
            }
        }
        Primitive::Shift(s) => Ok(w.map_coefficients(|c| c.shift(*s))?),
        Primitive::Diff(s) => Ok(w.map_coefficients(|c| diff(c, *s))?),
        Primitive::SymDiff(j) => Ok(w.map_coefficients(|c| sym_diff(c, *j))?),
        Primitive::SkewDiff(j) => Ok(w.map_coefficients(|c| skew_diff(c, *j))?),
        Primitive::Laplacian => Ok(w.map_coefficients(star_laplacian)?),
        Primitive::Coord(j) => Ok(w.map_coefficients(|c| c.mul_coordinate(*j))?),
        Primitive::CoordShift(s) => {
            Ok(w.map_coefficients(|c| c.shift(*s)?.mul_coordinate(s.axis))?)
        }
    }
}

/// Evaluate an operator expression on a form.
pub fn apply<C: Coefficient>(op: &Operator, w: &Form<C>) -> Result<Form<C>, FormError> {
    match &*op.0 {
        Expr::Prim(p) => apply_prim(p, w),
        Expr::Compose(a, b) => apply(a, &apply(b, w)?),
        Expr::Sum(v) => {
            let mut acc = Form::zero(w.dim(), w.mesh().clone());
            for o in v {
                acc = acc.add(&apply(o, w)?)?;
            }
            Ok(acc)
        }
        Expr::Scale(s, a) => Ok(apply(a, w)?.scale(s)),
        Expr::Named(_, a) => apply(a, w),
    }
}

/// Outcome of comparing two operators on a test set.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorReport {
    pub name: String,
    pub pass: bool,
    /// First failing input and where the residual is non-zero.
    pub witness: Option<String>,
}

impl OperatorReport {
    pub fn ok(name: &str) -> Self {
        OperatorReport {
            name: name.to_string(),
            pass: true,
            witness: None,
        }
    }

    pub fn failed(name: &str, witness: String) -> Self {
        OperatorReport {
            name: name.to_string(),
            pass: false,
            witness: Some(witness),
        }
    }
}

/// A named claim `lhs = rhs`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: String,
    pub lhs: Operator,
    pub rhs: Operator,
}

impl Relation {
    pub fn new(name: impl Into<String>, lhs: Operator, rhs: Operator) -> Self {
        Relation {
            name: name.into(),
            lhs,
            rhs,
        }
    }
}

/// Every blade times `1`, `x_j` and `x_j x_k` (`j ≤ k`), mesh `h`.
pub fn spanning_set(n: usize, mesh: &Mesh) -> Vec<PolyForm> {
    let mut coeffs = vec![MultiIndex::zero(n)];
    coeffs.extend(MultiIndex::of_degree(n, 1));
    coeffs.extend(MultiIndex::of_degree(n, 2));
    let mut out = Vec::new();
    for b in Blade::all(n) {
        for a in &coeffs {
            let c = ExactPolynomial::monomial(n, mesh.clone(), a.clone(), Scalar::one());
            out.push(Form::term(b, c));
        }
    }
    out
}

/// Compare `a` and `b` on every input; the first failure (in input order)
/// becomes the witness, so the report does not depend on thread count.
pub fn verify_identity<C: Coefficient>(
    name: &str,
    a: &Operator,
    b: &Operator,
    inputs: &[Form<C>],
) -> OperatorReport {
    let failures: Vec<Option<String>> = inputs
        .par_iter()
        .map(|w| {
            let lhs = apply(a, w);
            let rhs = apply(b, w);
            match (lhs, rhs) {
                (Ok(l), Ok(r)) => l
                    .first_difference(&r)
                    .map(|d| format!("input {w:?}: {d}")),
                (Err(e), _) | (_, Err(e)) => Some(format!("input {w:?}: error {e}")),
            }
        })
        .collect();
    match failures.into_iter().flatten().next() {
        None => OperatorReport::ok(name),
        Some(w) => OperatorReport::failed(name, w),
    }
}

pub fn verify_relation<C: Coefficient>(rel: &Relation, inputs: &[Form<C>]) -> OperatorReport {
    verify_identity(&rel.name, &rel.lhs, &rel.rhs, inputs)
}

fn kd(j: usize, k: usize) -> Operator {
    if j == k {
        Operator::identity()
    } else {
        Operator::zero()
    }
}

fn label(s: LatticeStep) -> String {
    format!("{}{}", s.sign, s.axis + 1)
}

/// The six anticommutator families between `γ` and `ϑ`.
pub fn fermionic_relations(n: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..n {
            for s in Sign::BOTH {
                let (sj, sk) = (LatticeStep::new(j, s), LatticeStep::new(k, s));
                out.push(Relation::new(
                    format!("gamma_gamma_same[{},{}]", label(sj), label(sk)),
                    anticommutator(&Operator::gamma(sj), &Operator::gamma(sk)),
                    Operator::zero(),
                ));
                out.push(Relation::new(
                    format!("vartheta_vartheta_same[{},{}]", label(sj), label(sk)),
                    anticommutator(&Operator::vartheta(sj), &Operator::vartheta(sk)),
                    Operator::zero(),
                ));
                out.push(Relation::new(
                    format!("gamma_vartheta_same[{},{}]", label(sj), label(sk)),
                    anticommutator(&Operator::gamma(sj), &Operator::vartheta(sk)),
                    kd(j, k),
                ));
            }
            let (pj, mk) = (LatticeStep::plus(j), LatticeStep::minus(k));
            out.push(Relation::new(
                format!("gamma_gamma_mixed[{},{}]", label(pj), label(mk)),
                anticommutator(&Operator::gamma(pj), &Operator::gamma(mk)),
                Operator::zero(),
            ));
            out.push(Relation::new(
                format!("vartheta_vartheta_mixed[{},{}]", label(pj), label(mk)),
                anticommutator(&Operator::vartheta(pj), &Operator::vartheta(mk)),
                Operator::zero(),
            ));
            // the listed mixed family, plus its mirror image
            for (a, b) in [(pj, mk), (mk, pj)] {
                out.push(Relation::new(
                    format!("gamma_vartheta_mixed[{},{}]", label(a), label(b)),
                    anticommutator(&Operator::gamma(a), &Operator::vartheta(b)),
                    Operator::zero(),
                ));
            }
        }
    }
    out
}

/// Witt relations for `ξ^{±j}`: isotropy and duality.
pub fn witt_relations(n: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..n {
            for s in Sign::BOTH {
                let (sj, sk) = (LatticeStep::new(j, s), LatticeStep::new(k, s));
                out.push(Relation::new(
                    format!("xi_isotropy[{},{}]", label(sj), label(sk)),
                    anticommutator(&Operator::xi(sj), &Operator::xi(sk)),
                    Operator::zero(),
                ));
            }
            let (pj, mk) = (LatticeStep::plus(j), LatticeStep::minus(k));
            out.push(Relation::new(
                format!("xi_duality[{},{}]", label(pj), label(mk)),
                anticommutator(&Operator::xi(pj), &Operator::xi(mk)),
                kd(j, k),
            ));
        }
    }
    out
}

/// Signature `(n, n)` relations for `Υ^{±j}` as normalized for `j = k`:
/// `Υ^{+j}Υ^{+j} = +id`, `Υ^{−j}Υ^{−j} = −id`, distinct axes anticommute,
/// and mixed signs always anticommute.
pub fn clifford_relations(n: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for j in 0..n {
        for s in Sign::BOTH {
            let u = Operator::upsilon(s, j);
            let target = Operator::identity().scaled(Scalar::from_int(s.as_i64()));
            out.push(Relation::new(
                format!("upsilon_square[{}{}]", s, j + 1),
                compose(&u, &u),
                target,
            ));
        }
        for k in 0..n {
            for s in Sign::BOTH {
                if j != k {
                    out.push(Relation::new(
                        format!("upsilon_distinct[{s}{},{s}{}]", j + 1, k + 1),
                        anticommutator(&Operator::upsilon(s, j), &Operator::upsilon(s, k)),
                        Operator::zero(),
                    ));
                }
            }
            out.push(Relation::new(
                format!("upsilon_mixed[+{},-{}]", j + 1, k + 1),
                anticommutator(
                    &Operator::upsilon(Sign::Plus, j),
                    &Operator::upsilon(Sign::Minus, k),
                ),
                Operator::zero(),
            ));
        }
    }
    out
}

/// `D^{±j} γ^{±k} = γ^{±k} D^{±j}` for every sign pairing.
pub fn difference_gamma_relations(n: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..n {
            for sd in Sign::BOTH {
                for sg in Sign::BOTH {
                    let d = Operator::diff(LatticeStep::new(j, sd));
                    let g = Operator::gamma(LatticeStep::new(k, sg));
                    out.push(Relation::new(
                        format!("diff_gamma[{sd}{},{sg}{}]", j + 1, k + 1),
                        commutator(&d, &g),
                        Operator::zero(),
                    ));
                }
            }
        }
    }
    out
}

/// Weyl–Heisenberg pairs `[D^{±j}, M_k^{∓}] = δ_{jk}` and commuting
/// coordinates `[M_j^±, M_k^±] = 0`.
pub fn weyl_heisenberg_relations(n: usize) -> Vec<Relation> {
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..n {
            for s in Sign::BOTH {
                let d = Operator::diff(LatticeStep::new(j, s));
                let m = Operator::coord_shift(LatticeStep::new(k, s.flip()));
                out.push(Relation::new(
                    format!("weyl_heisenberg[D{s}{},M{}{}]", j + 1, s.flip(), k + 1),
                    commutator(&d, &m),
                    kd(j, k),
                ));
                let mj = Operator::coord_shift(LatticeStep::new(j, s));
                let mk = Operator::coord_shift(LatticeStep::new(k, s));
                out.push(Relation::new(
                    format!("coords_commute[M{s}{},M{s}{}]", j + 1, k + 1),
                    commutator(&mj, &mk),
                    Operator::zero(),
                ));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::coordinate;

    fn unit(n: usize) -> ExactPolynomial {
        ExactPolynomial::constant(n, Mesh::unit(), Scalar::one())
    }

    #[test]
    fn gamma_examples() {
        let one = PolyForm::constant(1, Mesh::unit(), Scalar::one());
        let p1 = LatticeStep::plus(0);
        let r = apply(&Operator::gamma(p1), &one).unwrap();
        assert_eq!(r, Form::term(Blade::generator(1, p1), unit(1)));
        assert!(apply(&Operator::gamma(p1), &r).unwrap().is_zero());
        let x = coordinate(&unit(1), 0).unwrap();
        let r = apply(&Operator::gamma(p1), &Form::function(x.clone())).unwrap();
        assert_eq!(r, Form::term(Blade::generator(1, p1), x.shift(p1).unwrap()));
    }

    #[test]
    fn vartheta_duality() {
        let n = 2;
        let p1 = LatticeStep::plus(0);
        let p2 = LatticeStep::plus(1);
        let d1 = Form::term(Blade::generator(n, p1), unit(n));
        let d2 = Form::term(Blade::generator(n, p2), unit(n));
        assert_eq!(apply(&Operator::vartheta(p1), &d1).unwrap(), Form::function(unit(n)));
        assert!(apply(&Operator::vartheta(p1), &d2).unwrap().is_zero());
        let d12 = d1.mul(&d2).unwrap();
        assert_eq!(apply(&Operator::vartheta(p1), &d12).unwrap(), d2);
    }

    #[test]
    fn vartheta_keeps_its_defining_shift() {
        // ϑ^{+1}(f dx₁⁺) = (T^{−1} f)·∅, forced by {γ^{+1}, ϑ^{+1}} = id
        let x = coordinate(&ExactPolynomial::constant(1, Mesh::unit(), Scalar::one()), 0).unwrap();
        let p1 = LatticeStep::plus(0);
        let w = Form::term(Blade::generator(1, p1), x.clone());
        let got = apply(&Operator::vartheta(p1), &w).unwrap();
        assert_eq!(got, Form::function(x.shift(p1.opposite()).unwrap()));
    }

    #[test]
    fn closed_form_matches_recursion() {
        for n in 1..=2 {
            for w in spanning_set(n, &Mesh::unit()) {
                for s in LatticeStep::all(n) {
                    let a = vartheta_closed(s, &w).unwrap();
                    let b = vartheta_recursive(s, &w).unwrap();
                    assert_eq!(a.first_difference(&b), None, "{s:?} on {w:?}");
                }
            }
        }
    }

    #[test]
    fn coord_shift_twice() {
        let m = Operator::coord_shift(LatticeStep::plus(0));
        let one = PolyForm::constant(1, Mesh::unit(), Scalar::one());
        let x = apply(&m, &one).unwrap();
        assert_eq!(x, Form::function(coordinate(&unit(1), 0).unwrap()));
        let xx = apply(&m, &x).unwrap();
        let expect = ExactPolynomial::univariate(Mesh::unit(), &[0, 1, 1]);
        assert_eq!(xx, Form::function(expect));
    }

    #[test]
    fn fermionic_relations_hold() {
        let inputs = spanning_set(2, &Mesh::unit());
        for rel in fermionic_relations(2) {
            let r = verify_relation(&rel, &inputs);
            assert!(r.pass, "{} {:?}", r.name, r.witness);
        }
    }

    #[test]
    fn display_round_names() {
        let op = anticommutator(
            &Operator::gamma(LatticeStep::plus(0)),
            &Operator::vartheta(LatticeStep::minus(1)),
        );
        assert_eq!(
            op.to_string(),
            "add(compose(gamma(+,1),vartheta(-,2)),compose(vartheta(-,2),gamma(+,1)))"
        );
    }
}
