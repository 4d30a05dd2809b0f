//! The bigraded form algebra `Λ^{p,q}A` over a coefficient algebra.
//!
//! A [`Blade`] is a canonical product of distinct generators `dx_j^±`,
//! ordered with all minus factors first (ascending axis), then all plus
//! factors. A [`Form`] maps blades to coefficients stored on the left.
//! Moving a coefficient `G` rightwards past a blade `B` costs a shift:
//! `B G = (T_{δ(B)} G) B`, where `δ(B)` counts `+e_j` for every `dx_j^+`
//! and `−e_j` for every `dx_j^−`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::coeff::{diff, shift_by, BoxFunction, CoeffError, Coefficient, ExactPolynomial};
use crate::lattice::{LatticeStep, Mesh, Sign};
use crate::scalar::Scalar;
use crate::universal::{Reduction, Torus, UForm, UniversalError};

/// Canonical exterior monomial. Bit `j` is `dx_{j+1}^−`, bit `n + j` is
/// `dx_{j+1}^+`; ascending bit order is the canonical factor order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Blade {
    n: u8,
    bits: u32,
}

impl Blade {
    pub const MAX_DIM: usize = 16;

    pub fn scalar(n: usize) -> Blade {
        assert!(n <= Blade::MAX_DIM);
        Blade { n: n as u8, bits: 0 }
    }

    pub fn dim(self) -> usize {
        self.n as usize
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn from_bits(n: usize, bits: u32) -> Blade {
        assert!(n <= Blade::MAX_DIM && (bits >> (2 * n)) == 0);
        Blade { n: n as u8, bits }
    }

    fn bit(n: usize, s: LatticeStep) -> u32 {
        match s.sign {
            Sign::Minus => 1 << s.axis,
            Sign::Plus => 1 << (n + s.axis),
        }
    }

    fn step_of_bit(n: usize, i: usize) -> LatticeStep {
        if i < n {
            LatticeStep::minus(i)
        } else {
            LatticeStep::plus(i - n)
        }
    }

    pub fn generator(n: usize, s: LatticeStep) -> Blade {
        assert!(s.axis < n);
        Blade::from_bits(n, Blade::bit(n, s))
    }

    /// All `4^n` blades in ascending bit order.
    pub fn all(n: usize) -> impl Iterator<Item = Blade> {
        (0u32..(1 << (2 * n))).map(move |b| Blade::from_bits(n, b))
    }

    /// Canonicalize an arbitrary factor sequence. `None` if a factor
    /// repeats; otherwise `(odd, blade)` where `odd` is the permutation parity.
    pub fn from_factors(n: usize, factors: &[LatticeStep]) -> Option<(bool, Blade)> {
        let mut odd = false;
        let mut bits = 0u32;
        for &f in factors {
            let b = Blade::bit(n, f);
            if bits & b != 0 {
                return None;
            }
            // factors already placed above this one must be passed over
            odd ^= (bits & !(b | (b - 1))).count_ones() % 2 == 1;
            bits |= b;
        }
        Some((odd, Blade::from_bits(n, bits)))
    }

    /// Factors in canonical order.
    pub fn factors(self) -> Vec<LatticeStep> {
        let n = self.dim();
        (0..2 * n)
            .filter(|&i| self.bits & (1 << i) != 0)
            .map(|i| Blade::step_of_bit(n, i))
            .collect()
    }

    pub fn minus_axes(self) -> Vec<usize> {
        (0..self.dim()).filter(|&j| self.bits & (1 << j) != 0).collect()
    }

    pub fn plus_axes(self) -> Vec<usize> {
        let n = self.dim();
        (0..n).filter(|&j| self.bits & (1 << (n + j)) != 0).collect()
    }

    pub fn contains(self, s: LatticeStep) -> bool {
        self.bits & Blade::bit(self.dim(), s) != 0
    }

    /// `(p, q)`: number of minus and plus factors.
    pub fn bidegree(self) -> (usize, usize) {
        let n = self.dim();
        let mask = (1u32 << n) - 1;
        (
            (self.bits & mask).count_ones() as usize,
            (self.bits >> n).count_ones() as usize,
        )
    }

    pub fn degree(self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Net displacement `δ(B)` in lattice units.
    pub fn displacement(self) -> Vec<i64> {
        let mut d = vec![0i64; self.dim()];
        for s in self.factors() {
            d[s.axis] += s.sign.as_i64();
        }
        d
    }

    /// Position (from the left) of generator `s`, if present.
    pub fn position(self, s: LatticeStep) -> Option<usize> {
        let b = Blade::bit(self.dim(), s);
        (self.bits & b != 0).then(|| (self.bits & (b - 1)).count_ones() as usize)
    }

    /// Remove generator `s` (caller checks presence).
    pub fn without(self, s: LatticeStep) -> Blade {
        Blade::from_bits(self.dim(), self.bits & !Blade::bit(self.dim(), s))
    }
}

impl fmt::Display for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors()
            .iter()
            .map(|s| format!("dx{}{}", s.axis + 1, s.sign))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for Blade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Product of canonical blades: `None` if they share a generator.
pub fn blade_mul(a: Blade, b: Blade) -> Option<(bool, Blade)> {
    assert_eq!(a.n, b.n);
    if a.bits & b.bits != 0 {
        return None;
    }
    let mut odd = false;
    let mut rest = b.bits;
    while rest != 0 {
        let i = rest.trailing_zeros();
        odd ^= (a.bits >> (i + 1)).count_ones() % 2 == 1;
        rest &= rest - 1;
    }
    Some((odd, Blade::from_bits(a.dim(), a.bits | b.bits)))
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FormError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error("coefficient of {0} is not periodic on the requested torus")]
    NotPeriodic(Blade),
    #[error("form is not homogeneous")]
    NotHomogeneous,
    #[error(transparent)]
    Universal(#[from] UniversalError),
    #[error("universal form carries no symmetric reduction")]
    Unreduced,
    #[error("forms have different dimension or mesh")]
    Mismatch,
}

/// Sparse combination `Σ F_B B` with coefficients on the left.
#[derive(Clone)]
pub struct Form<C> {
    n: usize,
    mesh: Mesh,
    terms: BTreeMap<Blade, C>,
}

pub type PolyForm = Form<ExactPolynomial>;

impl<C: Coefficient> fmt::Debug for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, c)| format!("[{c:?}] {b}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<C: Coefficient> PartialEq for Form<C> {
    fn eq(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }
}

impl<C: Coefficient> Form<C> {
    pub fn zero(n: usize, mesh: Mesh) -> Self {
        Form {
            n,
            mesh,
            terms: BTreeMap::new(),
        }
    }

    /// `c · B`.
    pub fn term(blade: Blade, c: C) -> Self {
        let mut f = Form::zero(blade.dim(), c.mesh().clone());
        f.push(blade, c, false).expect("fresh form");
        f
    }

    /// `c · ∅`.
    pub fn function(c: C) -> Self {
        Form::term(Blade::scalar(c.dim()), c)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn terms(&self) -> &BTreeMap<Blade, C> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, b: &Blade) -> Option<&C> {
        self.terms.get(b)
    }

    /// Add `±c` to the coefficient of `blade`, dropping zeros.
    pub fn push(&mut self, blade: Blade, c: C, negate: bool) -> Result<(), CoeffError> {
        assert_eq!(blade.dim(), self.n, "blade dimension");
        let c = if negate { c.neg() } else { c };
        let merged = match self.terms.remove(&blade) {
            Some(old) => old.add(&c)?,
            None => c,
        };
        if !merged.is_zero() {
            self.terms.insert(blade, merged);
        }
        Ok(())
    }

    fn same_shape(&self, other: &Self) -> Result<(), FormError> {
        if self.n != other.n || self.mesh != other.mesh {
            return Err(FormError::Mismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, FormError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.push(*b, c.clone(), false)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FormError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.push(*b, c.clone(), true)?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Form::zero(self.n, self.mesh.clone());
        for (b, c) in &self.terms {
            let v = c.scale(s);
            if !v.is_zero() {
                out.terms.insert(*b, v);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    /// Apply a coefficient map to every term, keeping blades.
    pub fn map_coefficients(
        &self,
        f: impl Fn(&C) -> Result<C, CoeffError>,
    ) -> Result<Self, CoeffError> {
        let mut out = Form::zero(self.n, self.mesh.clone());
        for (b, c) in &self.terms {
            out.push(*b, f(c)?, false)?;
        }
        Ok(out)
    }

    /// `None` if equal on every blade (on common validity), else a witness.
    pub fn first_difference(&self, other: &Self) -> Option<String> {
        if self.n != other.n || self.mesh != other.mesh {
            return Some("forms of different shape".into());
        }
        let keys: std::collections::BTreeSet<&Blade> =
            self.terms.keys().chain(other.terms.keys()).collect();
        for b in keys {
            let detail = match (self.terms.get(b), other.terms.get(b)) {
                (Some(x), Some(y)) => x.first_difference(y),
                (Some(x), None) => x.first_difference(&x.zero_like()),
                (None, Some(y)) => y.zero_like().first_difference(y),
                (None, None) => None,
            };
            if let Some(d) = detail {
                return Some(format!("blade {b}: {d}"));
            }
        }
        None
    }

    /// The non-commutative product: `(F B₁)(G B₂) = F·T_{δ(B₁)}G · B₁B₂`.
    pub fn mul(&self, other: &Self) -> Result<Self, FormError> {
        self.same_shape(other)?;
        let mut out = Form::zero(self.n, self.mesh.clone());
        for (b1, f) in &self.terms {
            let disp = b1.displacement();
            for (b2, g) in &other.terms {
                let Some((odd, b)) = blade_mul(*b1, *b2) else {
                    continue;
                };
                let coeff = f.mul(&shift_by(g, &disp)?)?;
                out.push(b, coeff, odd)?;
            }
        }
        Ok(out)
    }

    /// Left multiplication by `1·dx^s`, i.e. the exterior action.
    pub fn wedge_generator(&self, s: LatticeStep) -> Result<Self, FormError> {
        let g = Blade::generator(self.n, s);
        let mut out = Form::zero(self.n, self.mesh.clone());
        for (b, c) in &self.terms {
            if let Some((odd, nb)) = blade_mul(g, *b) {
                out.push(nb, c.shift(s)?, odd)?;
            }
        }
        Ok(out)
    }

    fn d_signed(&self, sign: Sign) -> Result<Self, FormError> {
        let mut out = Form::zero(self.n, self.mesh.clone());
        for axis in 0..self.n {
            let s = LatticeStep::new(axis, sign);
            let g = Blade::generator(self.n, s);
            for (b, c) in &self.terms {
                if let Some((odd, nb)) = blade_mul(g, *b) {
                    out.push(nb, diff(c, s)?, odd)?;
                }
            }
        }
        Ok(out)
    }

    /// `d_+ ω = Σ_j (∂^{+j} F) dx_j^+ B`.
    pub fn d_plus(&self) -> Result<Self, FormError> {
        self.d_signed(Sign::Plus)
    }

    /// `d_− ω = Σ_j (∂^{−j} F) dx_j^− B`.
    pub fn d_minus(&self) -> Result<Self, FormError> {
        self.d_signed(Sign::Minus)
    }

    /// `d = d_+ − d_−`.
    pub fn d(&self) -> Result<Self, FormError> {
        self.d_plus()?.sub(&self.d_minus()?)
    }

    /// Main involution: `dx_j^± ↦ dx_j^∓` factor-wise, coefficients kept.
    pub fn involution(&self) -> Self {
        let mut out = Form::zero(self.n, self.mesh.clone());
        for (b, c) in &self.terms {
            let fs: Vec<_> = b.factors().into_iter().map(LatticeStep::opposite).collect();
            let (odd, nb) = Blade::from_factors(self.n, &fs).expect("distinct factors");
            out.push(nb, c.clone(), odd).expect("disjoint blades");
        }
        out
    }

    /// Reversion: the factor order is reversed and `dx_j^± ↦ −dx_j^∓`.
    /// The rule places the coefficient on the right of the reversed blade;
    /// moving it back to the left gives `(F B)~ = (T_{−δ(B)} F) B̃`.
    pub fn reversion(&self) -> Result<Self, FormError> {
        self.reverse_with(|c| c.clone())
    }

    /// Reversion followed by complex conjugation of the coefficients.
    pub fn dagger(&self) -> Result<Self, FormError> {
        self.reverse_with(Coefficient::conj)
    }

    fn reverse_with(&self, g: impl Fn(&C) -> C) -> Result<Self, FormError> {
        let mut out = Form::zero(self.n, self.mesh.clone());
        for (b, c) in &self.terms {
            let fs: Vec<_> = b
                .factors()
                .into_iter()
                .rev()
                .map(LatticeStep::opposite)
                .collect();
            let (odd, nb) = Blade::from_factors(self.n, &fs).expect("distinct factors");
            let odd = odd ^ (fs.len() % 2 == 1);
            let back: Vec<i64> = b.displacement().iter().map(|d| -d).collect();
            out.push(nb, shift_by(&g(c), &back)?, odd)?;
        }
        Ok(out)
    }

    /// The `Λ^{p,q}` component.
    pub fn part(&self, p: usize, q: usize) -> Self {
        let mut out = Form::zero(self.n, self.mesh.clone());
        for (b, c) in &self.terms {
            if b.bidegree() == (p, q) {
                out.terms.insert(*b, c.clone());
            }
        }
        out
    }

    /// Bidegrees present, ascending.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.terms.keys().map(|b| b.bidegree()).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|b| b.degree());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }
}

/// Coefficients that can be read as functions on a torus.
pub trait TorusSample: Coefficient {
    fn torus_values(&self, torus: &Torus) -> Option<Vec<Scalar>>;
}

impl TorusSample for BoxFunction {
    fn torus_values(&self, torus: &Torus) -> Option<Vec<Scalar>> {
        if self.period() != Some(torus.modulus() as i64) || self.dim() != torus.dim() {
            return None;
        }
        Some(
            torus
                .nodes()
                .map(|m| self.get(&torus.coords(m)).unwrap().clone())
                .collect(),
        )
    }
}

impl TorusSample for ExactPolynomial {
    fn torus_values(&self, torus: &Torus) -> Option<Vec<Scalar>> {
        if self.degree().unwrap_or(0) > 0 || self.dim() != torus.dim() {
            return None;
        }
        let c = self.coefficient(&crate::lattice::MultiIndex::zero(self.dim()));
        Some(vec![c; torus.node_count()])
    }
}

impl<C: TorusSample> Form<C> {
    /// Expand into the reduced universal algebra on `ℤ_N^n`: each
    /// coefficient in the delta basis and `dx_j^± = h Θ^{±e_j}`.
    pub fn to_universal(&self, torus: &Torus) -> Result<UForm, FormError> {
        let red = Reduction::symmetric(torus)?;
        let mut out = UForm::zero(torus, Some(&red));
        let h = Scalar::real(self.mesh.value().clone());
        for (b, c) in &self.terms {
            let vals = c.torus_values(torus).ok_or(FormError::NotPeriodic(*b))?;
            let mut piece = UForm::function(torus, Some(&red), &vals);
            for s in b.factors() {
                piece = piece.mul(&UForm::theta_step(torus, Some(&red), s))?;
            }
            out = out.add(&piece.scale(&h.pow(b.degree() as u32)))?;
        }
        Ok(out)
    }
}

impl Form<BoxFunction> {
    /// Inverse of [`Form::to_universal`] with periodic box coefficients.
    pub fn from_universal(u: &UForm, mesh: Mesh) -> Result<Self, FormError> {
        if u.reduction().is_none() {
            return Err(FormError::Unreduced);
        }
        let torus = u.torus();
        let n = torus.dim();
        let h_inv = Scalar::real(mesh.value().recip());
        let mut tables: BTreeMap<Blade, Vec<Scalar>> = BTreeMap::new();
        for (path, c) in u.terms() {
            let steps: Vec<LatticeStep> = path
                .windows(2)
                .map(|w| torus.step_between(w[0], w[1]).expect("reduced path"))
                .collect();
            let (odd, b) = Blade::from_factors(n, &steps).expect("canonical path");
            debug_assert!(!odd);
            let vals = tables
                .entry(b)
                .or_insert_with(|| vec![Scalar::zero(); torus.node_count()]);
            vals[path[0] as usize] += &(c * &h_inv.pow(b.degree() as u32));
        }
        let mut out = Form::zero(n, mesh.clone());
        for (b, vals) in tables {
            let f = BoxFunction::periodic(n, mesh.clone(), torus.modulus() as i64, |p| {
                vals[torus.node(p) as usize].clone()
            });
            out.push(b, f, false)?;
        }
        Ok(out)
    }
}

impl PolyForm {
    /// Constant scalar form `s · ∅`.
    pub fn constant(n: usize, mesh: Mesh, s: Scalar) -> Self {
        Form::function(ExactPolynomial::constant(n, mesh, s))
    }

    /// `1 · B`.
    pub fn unit_blade(mesh: Mesh, b: Blade) -> Self {
        Form::term(b, ExactPolynomial::constant(b.dim(), mesh, Scalar::one()))
    }

    /// Sample every coefficient on a box.
    pub fn sample(&self, support: &crate::lattice::IntBox) -> Form<BoxFunction> {
        let mut out = Form::zero(self.n, self.mesh.clone());
        for (b, c) in &self.terms {
            out.push(*b, c.sample(support), false).unwrap();
        }
        out
    }
}
