use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{check_axis, check_compatible, BoxFunction, CoeffError, Coefficient};
use crate::lattice::{IntBox, LatticeStep, Mesh, MultiIndex, Sign};
use crate::scalar::Scalar;

/// Sparse polynomial in the lattice coordinates `x_1, …, x_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactPolynomial {
    dim: usize,
    mesh: Mesh,
    terms: BTreeMap<MultiIndex, Scalar>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl ExactPolynomial {
    pub fn zero(dim: usize, mesh: Mesh) -> Self {
        ExactPolynomial {
            dim,
            mesh,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, mesh: Mesh, c: Scalar) -> Self {
        ExactPolynomial::monomial(dim, mesh, MultiIndex::zero(dim), c)
    }

    pub fn monomial(dim: usize, mesh: Mesh, alpha: MultiIndex, c: Scalar) -> Self {
        assert_eq!(alpha.dim(), dim, "monomial exponent dimension");
        let mut p = ExactPolynomial::zero(dim, mesh);
        if !c.is_zero() {
            p.terms.insert(alpha, c);
        }
        p
    }

    /// One-variable polynomial from integer coefficients, lowest degree first.
    pub fn univariate(mesh: Mesh, coeffs: &[i64]) -> Self {
        let mut p = ExactPolynomial::zero(1, mesh);
        for (k, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                p.terms.insert(MultiIndex(vec![k as u32]), Scalar::from_int(c));
            }
        }
        p
    }

    pub fn from_terms(
        dim: usize,
        mesh: Mesh,
        terms: impl IntoIterator<Item = (MultiIndex, Scalar)>,
    ) -> Self {
        let mut p = ExactPolynomial::zero(dim, mesh);
        for (a, c) in terms {
            p.add_term(a, &c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> Scalar {
        self.terms.get(alpha).cloned().unwrap_or_default()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    fn add_term(&mut self, alpha: MultiIndex, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(alpha.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    /// Value at the lattice point `m`, i.e. at `x = h m`.
    pub fn eval(&self, m: &[i64]) -> Scalar {
        let h = self.mesh.value();
        let xs: Vec<BigRational> = m
            .iter()
            .map(|&mi| h * BigRational::from_integer(BigInt::from(mi)))
            .collect();
        self.eval_at(&xs)
    }

    /// Value at real coordinates `x` (not necessarily on the lattice).
    pub fn eval_at(&self, xs: &[BigRational]) -> Scalar {
        let mut acc = Scalar::zero();
        for (alpha, c) in &self.terms {
            let mut mono = BigRational::one();
            for (x, &a) in xs.iter().zip(&alpha.0) {
                for _ in 0..a {
                    mono *= x;
                }
            }
            acc += &c.scale_real(&mono);
        }
        acc
    }

    /// The substitution `x ↦ r x`.
    pub fn dilate(&self, r: &BigRational) -> Self {
        let mut out = ExactPolynomial::zero(self.dim, self.mesh.clone());
        for (alpha, c) in &self.terms {
            let mut f = BigRational::one();
            for _ in 0..alpha.degree() {
                f *= r;
            }
            out.add_term(alpha.clone(), &c.scale_real(&f));
        }
        out
    }

    /// Sample on `support` (validity = support).
    pub fn sample(&self, support: &IntBox) -> BoxFunction {
        assert_eq!(support.dim(), self.dim);
        BoxFunction::from_fn(self.dim, self.mesh.clone(), support.clone(), |p| {
            self.eval(p)
        })
    }
}

impl std::fmt::Debug for ExactPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| format!("({c})x^{a}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Coefficient for ExactPolynomial {
    fn dim(&self) -> usize {
        self.dim
    }

    fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    fn constant_like(&self, s: Scalar) -> Self {
        ExactPolynomial::constant(self.dim, self.mesh.clone(), s)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, other: &Self) -> Result<Self, CoeffError> {
        check_compatible(self, other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c);
        }
        Ok(out)
    }

    fn mul(&self, other: &Self) -> Result<Self, CoeffError> {
        check_compatible(self, other)?;
        let mut acc: BTreeMap<MultiIndex, Scalar> = BTreeMap::new();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                *acc.entry(a.add(b)).or_default() += &(c * d);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(ExactPolynomial {
            dim: self.dim,
            mesh: self.mesh.clone(),
            terms: acc,
        })
    }

    fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return ExactPolynomial::zero(self.dim, self.mesh.clone());
        }
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| (a.clone(), c * s))
            .collect();
        ExactPolynomial {
            dim: self.dim,
            mesh: self.mesh.clone(),
            terms,
        }
    }

    fn conj(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| (a.clone(), c.conj()))
            .collect();
        ExactPolynomial {
            dim: self.dim,
            mesh: self.mesh.clone(),
            terms,
        }
    }

    /// `x_j ↦ x_j ± h`, expanded binomially.
    fn shift(&self, step: LatticeStep) -> Result<Self, CoeffError> {
        check_axis(step.axis, self.dim)?;
        let offset = match step.sign {
            Sign::Plus => self.mesh.value().clone(),
            Sign::Minus => -self.mesh.value().clone(),
        };
        let mut acc: BTreeMap<MultiIndex, Scalar> = BTreeMap::new();
        for (alpha, c) in &self.terms {
            let e = alpha.0[step.axis];
            let mut pow = BigRational::one();
            // term k: C(e, k) offset^k x_j^{e-k}
            for k in 0..=e {
                let mut beta = alpha.clone();
                beta.0[step.axis] = e - k;
                let w = BigRational::from_integer(binomial(e, k)) * &pow;
                *acc.entry(beta).or_default() += &c.scale_real(&w);
                pow *= &offset;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(ExactPolynomial {
            dim: self.dim,
            mesh: self.mesh.clone(),
            terms: acc,
        })
    }

    fn mul_coordinate(&self, axis: usize) -> Result<Self, CoeffError> {
        check_axis(axis, self.dim)?;
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| (a.raised(axis), c.clone()))
            .collect();
        Ok(ExactPolynomial {
            dim: self.dim,
            mesh: self.mesh.clone(),
            terms,
        })
    }

    fn first_difference(&self, other: &Self) -> Option<String> {
        if self.dim != other.dim || self.mesh != other.mesh {
            return Some("carrier mismatch".into());
        }
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        for k in keys {
            let a = self.coefficient(k);
            let b = other.coefficient(k);
            if a != b {
                return Some(format!("monomial x^{k}: {a} vs {b}"));
            }
        }
        None
    }
}
