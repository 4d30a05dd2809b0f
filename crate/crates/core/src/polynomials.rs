//! Factorial powers and exact solvers for discrete homogeneous and hermitian
//! monogenic polynomials.
//!
//! Solutions are sought inside an explicit candidate space: products
//! `(x)_+^{(α⁺)} (x)_−^{(α⁻)}` times blades by default, or every monomial of
//! total degree at most `p + q` with [`Domain::Ambient`]. The Euler equations
//! have joint eigenvectors outside the factorial-power span (`x` itself is
//! one for `(p, q) = (1, 1)`), so results are always relative to a domain.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::coeff::{diff, Coefficient, ExactPolynomial};
use crate::dirac::{DiracFamily, HermitianConvention};
use crate::endo::{apply, compose, Operator, OperatorReport};
use crate::forms::{Blade, Form, FormError, PolyForm};
use crate::lattice::{LatticeStep, Mesh, MultiIndex, Sign};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// `(x)_±^{(α)} = (x_1 T^{±1})^{α_1} ⋯ (x_n T^{±n})^{α_n} 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorialPower {
    pub sign: Sign,
    pub alpha: MultiIndex,
    pub poly: ExactPolynomial,
}

fn raise(p: &ExactPolynomial, s: LatticeStep) -> ExactPolynomial {
    p.shift(s)
        .and_then(|q| q.mul_coordinate(s.axis))
        .expect("polynomials shift and multiply on every axis")
}

pub fn factorial_power(mesh: &Mesh, sign: Sign, alpha: &MultiIndex) -> FactorialPower {
    let n = alpha.dim();
    let mut poly = ExactPolynomial::constant(n, mesh.clone(), Scalar::one());
    for axis in (0..n).rev() {
        for _ in 0..alpha.0[axis] {
            poly = raise(&poly, LatticeStep::new(axis, sign));
        }
    }
    FactorialPower {
        sign,
        alpha: alpha.clone(),
        poly,
    }
}

/// `E^± = Σ_j x_j D^{±j}` on a single polynomial.
pub fn euler_scalar(p: &ExactPolynomial, sign: Sign) -> ExactPolynomial {
    let mut acc = p.zero_like();
    for axis in 0..p.dim() {
        let t = diff(p, LatticeStep::new(axis, sign))
            .and_then(|d| d.mul_coordinate(axis))
            .expect("axis in range");
        acc = acc.add(&t).expect("same carrier");
    }
    acc
}

/// Basicness, degree, raising, lowering and the Euler eigenvalue for one
/// factorial power.
pub fn check_monomial_principle(mesh: &Mesh, sign: Sign, alpha: &MultiIndex) -> Vec<OperatorReport> {
    let n = alpha.dim();
    let fp = factorial_power(mesh, sign, alpha);
    let tag = |what: &str| format!("{what}[{}{:?}]", sign.symbol(), alpha.0);
    let mut out = Vec::new();
    let check = |name: String, got: &ExactPolynomial, want: &ExactPolynomial| match got.first_difference(want) {
        None => OperatorReport::ok(&name),
        Some(d) => OperatorReport::failed(&name, d),
    };

    let origin = fp.poly.eval(&vec![0; n]);
    let basic = if alpha.is_zero() { origin.is_one() } else { origin.is_zero() };
    out.push(if basic {
        OperatorReport::ok(&tag("basicness"))
    } else {
        OperatorReport::failed(&tag("basicness"), format!("value {origin} at the origin"))
    });
    let deg = fp.poly.degree().unwrap_or(0);
    out.push(if deg == alpha.degree() {
        OperatorReport::ok(&tag("degree"))
    } else {
        OperatorReport::failed(&tag("degree"), format!("degree {deg}, expected {}", alpha.degree()))
    });

    for axis in 0..n {
        let up = factorial_power(mesh, sign, &alpha.raised(axis));
        out.push(check(
            tag(&format!("raising{}", axis + 1)),
            &raise(&fp.poly, LatticeStep::new(axis, sign)),
            &up.poly,
        ));
        let lowered = diff(&fp.poly, LatticeStep::new(axis, sign.flip())).expect("axis in range");
        let want = match alpha.lowered(axis) {
            Some(b) => factorial_power(mesh, sign, &b)
                .poly
                .scale(&Scalar::from_int(alpha.0[axis] as i64)),
            None => fp.poly.zero_like(),
        };
        out.push(check(tag(&format!("lowering{}", axis + 1)), &lowered, &want));
    }
    let eig = fp.poly.scale(&Scalar::from_int(alpha.degree() as i64));
    out.push(check(tag("euler"), &euler_scalar(&fp.poly, sign), &eig));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BladeFilter {
    All,
    /// Blades built from `dx^+` factors alone.
    Spinor,
}

impl BladeFilter {
    pub fn blades(self, n: usize) -> Vec<Blade> {
        Blade::all(n)
            .filter(|b| self == BladeFilter::All || b.minus_axes().is_empty())
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    FactorialPowers,
    Ambient,
}

/// The candidate set `V_{p,q}` (or the ambient monomials) times blades.
pub fn homogeneous_space(
    n: usize,
    mesh: &Mesh,
    p: u32,
    q: u32,
    filter: BladeFilter,
    domain: Domain,
) -> Vec<PolyForm> {
    let polys: Vec<ExactPolynomial> = match domain {
        Domain::FactorialPowers => {
            let mut v = Vec::new();
            for ap in MultiIndex::of_degree(n, p) {
                let fp = factorial_power(mesh, Sign::Plus, &ap).poly;
                for am in MultiIndex::of_degree(n, q) {
                    let fm = factorial_power(mesh, Sign::Minus, &am).poly;
                    v.push(fp.mul(&fm).expect("same carrier"));
                }
            }
            v
        }
        Domain::Ambient => MultiIndex::up_to_degree(n, p + q)
            .into_iter()
            .map(|a| ExactPolynomial::monomial(n, mesh.clone(), a, Scalar::one()))
            .collect(),
    };
    let blades = filter.blades(n);
    let mut out = Vec::with_capacity(polys.len() * blades.len());
    for poly in &polys {
        for &b in &blades {
            out.push(Form::term(b, poly.clone()));
        }
    }
    out
}

/// `Σ_i c_i v_i` for a coefficient vector over `candidates`.
pub fn combine(candidates: &[PolyForm], c: &[Scalar]) -> PolyForm {
    let mut acc = Form::zero(candidates[0].dim(), candidates[0].mesh().clone());
    for (v, s) in candidates.iter().zip(c) {
        if !s.is_zero() {
            acc = acc.add(&v.scale(s)).expect("candidates share a carrier");
        }
    }
    acc
}

/// Stacked matrix of `ops` restricted to the span of `candidates`: column
/// `i` holds the (blade, monomial) coordinates of every `A(v_i)`.
pub fn constraint_matrix(ops: &[Operator], candidates: &[PolyForm]) -> Result<Matrix, FormError> {
    let images: Vec<Vec<PolyForm>> = candidates
        .par_iter()
        .map(|v| ops.iter().map(|a| apply(a, v)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let mut index: BTreeMap<(usize, Blade, MultiIndex), usize> = BTreeMap::new();
    for col in &images {
        for (k, img) in col.iter().enumerate() {
            for (b, c) in img.terms() {
                for a in c.terms().keys() {
                    let next = index.len();
                    index.entry((k, *b, a.clone())).or_insert(next);
                }
            }
        }
    }
    let mut m = Matrix::zeros(index.len(), candidates.len());
    for (i, col) in images.iter().enumerate() {
        for (k, img) in col.iter().enumerate() {
            for (b, c) in img.terms() {
                for (a, s) in c.terms() {
                    m.set(index[&(k, *b, a.clone())], i, s.clone());
                }
            }
        }
    }
    Ok(m)
}

fn shifted(op: &Operator, s: i64) -> Operator {
    op.minus(&Operator::identity().scaled(Scalar::from_int(s)))
}

fn euler_constraints(fam: &DiracFamily, p: u32, q: u32) -> Vec<Operator> {
    vec![shifted(&fam.ez, p as i64), shifted(&fam.ez_dag, q as i64)]
}

fn kernel_forms(ops: &[Operator], candidates: &[PolyForm]) -> Result<Vec<PolyForm>, FormError> {
    if candidates.is_empty() {
        return Ok(Vec::new());
    }
    let m = constraint_matrix(ops, candidates)?;
    Ok(m.kernel().iter().map(|c| combine(candidates, c)).collect())
}

/// Exact basis of `{R ∈ span : E_z R = pR, E_z† R = qR}`.
pub fn joint_euler_eigenbasis(
    fam: &DiracFamily,
    mesh: &Mesh,
    p: u32,
    q: u32,
    filter: BladeFilter,
    domain: Domain,
) -> Result<Vec<PolyForm>, FormError> {
    let cands = independent_subset(&homogeneous_space(fam.n, mesh, p, q, filter, domain));
    kernel_forms(&euler_constraints(fam, p, q), &cands)
}

/// Residual checks attached to one basis element.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub checks: Vec<OperatorReport>,
}

impl Certificate {
    pub fn passes(&self, name: &str) -> bool {
        self.checks.iter().any(|c| c.name == name && c.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Names of the four defining constraints, then the two Gamma consequences.
pub const CONSTRAINTS: [&str; 4] = ["euler_z", "euler_zdag", "dirac_z", "dirac_zdag"];
pub const GAMMA_CHECKS: [&str; 2] = ["gamma_z", "gamma_zdag"];

#[derive(Clone, Debug)]
pub struct MonogenicBasis {
    pub n: usize,
    pub p: u32,
    pub q: u32,
    pub convention: HermitianConvention,
    pub filter: BladeFilter,
    pub domain: Domain,
    pub candidates: usize,
    /// Dimension of the candidate span, the actual solver domain.
    pub span: usize,
    pub elements: Vec<PolyForm>,
    pub certificates: Vec<Certificate>,
    /// Exact rank of the elements equals their number.
    pub independent: bool,
}

impl MonogenicBasis {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    pub fn constraints_hold(&self) -> bool {
        self.certificates
            .iter()
            .all(|c| CONSTRAINTS.iter().all(|n| c.passes(n)))
    }

    pub fn gamma_holds(&self) -> bool {
        self.certificates
            .iter()
            .all(|c| GAMMA_CHECKS.iter().all(|n| c.passes(n)))
    }

    /// First failing Gamma check, as `element i: name: witness`.
    pub fn gamma_witness(&self) -> Option<String> {
        self.certificates.iter().enumerate().find_map(|(i, c)| {
            c.checks
                .iter()
                .find(|r| GAMMA_CHECKS.contains(&r.name.as_str()) && !r.pass)
                .map(|r| format!("element {i}: {}: {}", r.name, r.witness.clone().unwrap_or_default()))
        })
    }
}

impl fmt::Display for MonogenicBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} (p,q)=({},{}) convention={} candidates={} span={} dimension={}",
            self.n,
            self.p,
            self.q,
            self.convention,
            self.candidates,
            self.span,
            self.dimension()
        )
    }
}

fn residual_check(name: &str, op: &Operator, r: &PolyForm, eigen: i64) -> OperatorReport {
    let want = r.scale(&Scalar::from_int(eigen));
    match apply(op, r) {
        Ok(got) => match got.first_difference(&want) {
            None => OperatorReport::ok(name),
            Some(d) => OperatorReport::failed(name, d),
        },
        Err(e) => OperatorReport::failed(name, format!("error {e}")),
    }
}

pub fn certify(fam: &DiracFamily, p: u32, q: u32, r: &PolyForm) -> Certificate {
    let (p, q) = (p as i64, q as i64);
    Certificate {
        checks: vec![
            residual_check("euler_z", &fam.ez, r, p),
            residual_check("euler_zdag", &fam.ez_dag, r, q),
            residual_check("dirac_z", &fam.dz, r, 0),
            residual_check("dirac_zdag", &fam.dz_dag, r, 0),
            residual_check("gamma_z", &fam.gamma_z, r, -p),
            residual_check("gamma_zdag", &fam.gamma_z_dag, r, -q),
        ],
    }
}

/// The first maximal independent subset of `forms`, in order.
///
/// `V_{p,q}` repeats products when `n > 1`: `(x)_+^{(v_1)} (x)_−^{(v_2)}`
/// and `(x)_+^{(v_2)} (x)_−^{(v_1)}` are both `x_1 x_2`.
pub fn independent_subset(forms: &[PolyForm]) -> Vec<PolyForm> {
    if forms.is_empty() {
        return Vec::new();
    }
    coordinates(forms)
        .pivot_columns()
        .into_iter()
        .map(|i| forms[i].clone())
        .collect()
}

fn coordinates(forms: &[PolyForm]) -> Matrix {
    let mut index = BTreeMap::new();
    for f in forms {
        for (b, c) in f.terms() {
            for a in c.terms().keys() {
                let next = index.len();
                index.entry((*b, a.clone())).or_insert(next);
            }
        }
    }
    let mut m = Matrix::zeros(index.len(), forms.len());
    for (i, f) in forms.iter().enumerate() {
        for (b, c) in f.terms() {
            for (a, s) in c.terms() {
                m.set(index[&(*b, a.clone())], i, s.clone());
            }
        }
    }
    m
}

/// Exact basis of the hermitian monogenic polynomials of bidegree `(p, q)`.
pub fn hermitian_monogenic_basis(
    fam: &DiracFamily,
    mesh: &Mesh,
    p: u32,
    q: u32,
    filter: BladeFilter,
    domain: Domain,
) -> Result<MonogenicBasis, FormError> {
    let raw = homogeneous_space(fam.n, mesh, p, q, filter, domain);
    let cands = independent_subset(&raw);
    let ops = monogenic_constraints(fam, p, q);
    let elements = kernel_forms(&ops, &cands)?;
    let certificates = elements.par_iter().map(|r| certify(fam, p, q, r)).collect();
    let independent = elements.is_empty() || coordinates(&elements).rank() == elements.len();
    Ok(MonogenicBasis {
        n: fam.n,
        p,
        q,
        convention: fam.convention,
        filter,
        domain,
        candidates: raw.len(),
        span: cands.len(),
        elements,
        certificates,
        independent,
    })
}

/// The four stacked constraints `E_z − p`, `E_z† − q`, `∂_z`, `∂_z†`.
pub fn monogenic_constraints(fam: &DiracFamily, p: u32, q: u32) -> Vec<Operator> {
    let mut ops = euler_constraints(fam, p, q);
    ops.push(fam.dz.clone());
    ops.push(fam.dz_dag.clone());
    ops
}

/// First element `R` with `R(2x) − 2^{p+q} R(x) ≠ 0`, with that residual.
pub fn non_homogeneity_witness(elements: &[PolyForm], p: u32, q: u32) -> Option<(usize, PolyForm)> {
    let two = BigRational::from_integer(BigInt::from(2));
    let factor = Scalar::from_int(1 << (p + q));
    elements.iter().enumerate().find_map(|(i, r)| {
        let dilated = r.map_coefficients(|c| Ok(c.dilate(&two))).ok()?;
        let res = dilated.sub(&r.scale(&factor)).ok()?;
        (!res.is_zero()).then_some((i, res))
    })
}

/// `(z^p 1)((z†)^q 1)` and whether it solves the Euler equations of
/// bidegree `(p, q)`. Powers above one vanish because `z² = 0`.
pub fn vector_variable_product(fam: &DiracFamily, mesh: &Mesh, p: u32, q: u32) -> Result<(PolyForm, OperatorReport), FormError> {
    let one = PolyForm::constant(fam.n, mesh.clone(), Scalar::one());
    let power = |op: &Operator, k: u32| {
        let mut acc = Operator::identity();
        for _ in 0..k {
            acc = compose(op, &acc);
        }
        apply(&acc, &one)
    };
    let r = power(&fam.z, p)?.mul(&power(&fam.z_dag, q)?)?;
    let name = format!("vector_variable_product[{p},{q}]");
    let reports = [
        residual_check("euler_z", &fam.ez, &r, p as i64),
        residual_check("euler_zdag", &fam.ez_dag, &r, q as i64),
    ];
    let report = match reports.iter().find(|c| !c.pass) {
        None => OperatorReport::ok(&name),
        Some(c) => OperatorReport::failed(&name, format!("{}: {}", c.name, c.witness.clone().unwrap_or_default())),
    };
    Ok((r, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Mesh {
        Mesh::unit()
    }

    #[test]
    fn rodrigues_examples() {
        let p3 = factorial_power(&unit(), Sign::Plus, &MultiIndex(vec![3]));
        assert_eq!(p3.poly, ExactPolynomial::univariate(unit(), &[0, 2, 3, 1]));
        assert_eq!(p3.poly.eval(&[2]), Scalar::from_int(24));
        let m2 = factorial_power(&unit(), Sign::Minus, &MultiIndex(vec![2]));
        assert_eq!(m2.poly, ExactPolynomial::univariate(unit(), &[0, -1, 1]));
        let zero = factorial_power(&unit(), Sign::Plus, &MultiIndex(vec![0, 0]));
        assert_eq!(zero.poly, ExactPolynomial::constant(2, unit(), Scalar::one()));
    }

    #[test]
    fn lowering_example() {
        let p2 = factorial_power(&unit(), Sign::Plus, &MultiIndex(vec![2])).poly;
        let got = diff(&p2, LatticeStep::minus(0)).unwrap();
        assert_eq!(got, ExactPolynomial::univariate(unit(), &[0, 2]));
    }

    #[test]
    fn monomial_principle_small() {
        let h = Mesh::new(BigRational::new(1.into(), 3.into())).unwrap();
        for sign in Sign::BOTH {
            for a in MultiIndex::up_to_degree(2, 3) {
                for r in check_monomial_principle(&h, sign, &a) {
                    assert!(r.pass, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn candidate_counts() {
        assert_eq!(homogeneous_space(1, &unit(), 0, 0, BladeFilter::All, Domain::FactorialPowers).len(), 4);
        assert_eq!(homogeneous_space(2, &unit(), 1, 0, BladeFilter::Spinor, Domain::FactorialPowers).len(), 8);
        assert_eq!(homogeneous_space(2, &unit(), 2, 1, BladeFilter::All, Domain::FactorialPowers).len(), 3 * 2 * 16);
    }

    #[test]
    fn square_is_not_an_eigenvector() {
        // E_z x² = 2x² + x
        let sq = ExactPolynomial::univariate(unit(), &[0, 0, 1]);
        assert_eq!(euler_scalar(&sq, Sign::Plus), ExactPolynomial::univariate(unit(), &[0, 1, 2]));
        let fam = DiracFamily::new(1, HermitianConvention::DEFAULT);
        let basis = joint_euler_eigenbasis(&fam, &unit(), 1, 1, BladeFilter::All, Domain::FactorialPowers).unwrap();
        assert!(basis.is_empty());
    }

    #[test]
    fn ambient_eigenvector_is_not_homogeneous() {
        let fam = DiracFamily::new(1, HermitianConvention::DEFAULT);
        let basis = joint_euler_eigenbasis(&fam, &unit(), 1, 1, BladeFilter::Spinor, Domain::Ambient).unwrap();
        assert!(!basis.is_empty());
        assert!(non_homogeneity_witness(&basis, 1, 1).is_some());
    }

    #[test]
    fn constants_are_monogenic() {
        let fam = DiracFamily::new(1, HermitianConvention::DEFAULT);
        let b = hermitian_monogenic_basis(&fam, &unit(), 0, 0, BladeFilter::All, Domain::FactorialPowers).unwrap();
        assert_eq!(b.dimension(), 4);
        assert!(b.constraints_hold());
        assert!(b.independent);
    }
}
