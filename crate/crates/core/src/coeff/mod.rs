//! Coefficient algebras and the scalar difference, shift and coordinate
//! operators acting on them.
//!
//! Two representations share one contract:
//!
//! * [`ExactPolynomial`]: exact multivariate polynomials in the lattice
//!   coordinates `x_j = h m_j`. Shifts act by binomial expansion, so nothing
//!   is ever truncated.
//! * [`BoxFunction`]: values sampled on an integer box. Each operation that
//!   reads a neighbour shrinks the validity box by one layer on that axis, and
//!   equality is only meaningful on the intersection of validity boxes.
//!
//! Note on the hermitian splitting: expanding the symmetric and skew
//! differences gives `∂^{±j} = ∇^j ∓ i ∇̃^j` exactly. The stated
//! normalization with an extra factor `1/2` does not hold for these
//! definitions; [`sym_diff`] and [`skew_diff`] follow the definitions.

mod boxfn;
mod poly;

pub use boxfn::BoxFunction;
pub use poly::ExactPolynomial;

use std::fmt::Debug;

use thiserror::Error;

use crate::lattice::{LatticeStep, Mesh, Sign};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CoeffError {
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("validity box exhausted on axis {axis} (test box too small)")]
    EmptyValidity { axis: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("mesh mismatch: {0} vs {1}")]
    MeshMismatch(String, String),
    #[error("box functions live on different support boxes")]
    SupportMismatch,
    #[error("coordinate x_{axis} is not a function on the torus")]
    CoordinateOnTorus { axis: usize },
}

/// The contract every coefficient algebra fulfils: a commutative ring with
/// conjugation, lattice shifts, and multiplication by coordinates.
pub trait Coefficient: Clone + Debug + PartialEq + Send + Sync + Sized {
    fn dim(&self) -> usize;
    fn mesh(&self) -> &Mesh;

    /// The constant `s` living on the same carrier as `self`.
    fn constant_like(&self, s: Scalar) -> Self;

    fn zero_like(&self) -> Self {
        self.constant_like(Scalar::zero())
    }

    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Result<Self, CoeffError>;
    fn mul(&self, other: &Self) -> Result<Self, CoeffError>;
    fn scale(&self, s: &Scalar) -> Self;
    fn conj(&self) -> Self;

    /// `(T^{±j} c)(x) = c(x ± h e_j)`.
    fn shift(&self, step: LatticeStep) -> Result<Self, CoeffError>;

    /// Pointwise product with `x_axis`.
    fn mul_coordinate(&self, axis: usize) -> Result<Self, CoeffError>;

    /// `None` when both agree on their common validity region, otherwise a
    /// human-readable description of the first disagreement.
    fn first_difference(&self, other: &Self) -> Option<String>;

    fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    fn sub(&self, other: &Self) -> Result<Self, CoeffError> {
        self.add(&other.neg())
    }
}

pub(crate) fn check_axis(axis: usize, dim: usize) -> Result<(), CoeffError> {
    if axis < dim {
        Ok(())
    } else {
        Err(CoeffError::AxisOutOfRange { axis, dim })
    }
}

pub(crate) fn check_compatible<C: Coefficient>(a: &C, b: &C) -> Result<(), CoeffError> {
    if a.dim() != b.dim() {
        return Err(CoeffError::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.mesh() != b.mesh() {
        return Err(CoeffError::MeshMismatch(
            a.mesh().to_string(),
            b.mesh().to_string(),
        ));
    }
    Ok(())
}

pub fn shift<C: Coefficient>(c: &C, step: LatticeStep) -> Result<C, CoeffError> {
    c.shift(step)
}

/// Shift by a whole displacement vector (`disp[j]` unit steps along axis `j`).
pub fn shift_by<C: Coefficient>(c: &C, disp: &[i64]) -> Result<C, CoeffError> {
    let mut out = c.clone();
    for (axis, &k) in disp.iter().enumerate() {
        let step = if k >= 0 {
            LatticeStep::plus(axis)
        } else {
            LatticeStep::minus(axis)
        };
        for _ in 0..k.unsigned_abs() {
            out = out.shift(step)?;
        }
    }
    Ok(out)
}

/// `x_axis` as a coefficient on the carrier of `template`.
pub fn coordinate<C: Coefficient>(template: &C, axis: usize) -> Result<C, CoeffError> {
    template.constant_like(Scalar::one()).mul_coordinate(axis)
}

fn inv_mesh<C: Coefficient>(c: &C) -> Scalar {
    Scalar::real(c.mesh().value().recip())
}

/// Forward (`+`) or backward (`−`) difference `∂_h^{±j}`.
pub fn diff<C: Coefficient>(c: &C, step: LatticeStep) -> Result<C, CoeffError> {
    let shifted = c.shift(step)?;
    let delta = match step.sign {
        Sign::Plus => shifted.sub(c)?,
        Sign::Minus => c.sub(&shifted)?,
    };
    Ok(delta.scale(&inv_mesh(c)))
}

/// `∇_h^j = ½(∂^{−j} + ∂^{+j})`.
pub fn sym_diff<C: Coefficient>(c: &C, axis: usize) -> Result<C, CoeffError> {
    let back = diff(c, LatticeStep::minus(axis))?;
    let fwd = diff(c, LatticeStep::plus(axis))?;
    Ok(back.add(&fwd)?.scale(&Scalar::ratio(1, 2)))
}

/// `∇̃_h^j = (1/2i)(∂^{−j} − ∂^{+j})`.
pub fn skew_diff<C: Coefficient>(c: &C, axis: usize) -> Result<C, CoeffError> {
    let back = diff(c, LatticeStep::minus(axis))?;
    let fwd = diff(c, LatticeStep::plus(axis))?;
    let factor = (Scalar::from_int(2) * Scalar::i()).inv().unwrap();
    Ok(back.sub(&fwd)?.scale(&factor))
}

/// `Δ_h = Σ_j ∂^{−j} ∂^{+j}`, the `2n+1`-point stencil.
pub fn star_laplacian<C: Coefficient>(c: &C) -> Result<C, CoeffError> {
    let mut acc: Option<C> = None;
    for axis in 0..c.dim() {
        let term = diff(&diff(c, LatticeStep::plus(axis))?, LatticeStep::minus(axis))?;
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term)?,
        });
    }
    Ok(acc.unwrap_or_else(|| c.zero_like()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::IntBox;

    fn p1(coeffs: &[i64]) -> ExactPolynomial {
        ExactPolynomial::univariate(Mesh::unit(), coeffs)
    }

    #[test]
    fn shift_examples() {
        let one = p1(&[1]);
        for s in LatticeStep::all(1) {
            assert_eq!(shift(&one, s).unwrap(), one);
        }
        // x -> x + 1
        assert_eq!(shift(&p1(&[0, 1]), LatticeStep::plus(0)).unwrap(), p1(&[1, 1]));
        // x^2 -> x^2 - 2x + 1
        assert_eq!(
            shift(&p1(&[0, 0, 1]), LatticeStep::minus(0)).unwrap(),
            p1(&[1, -2, 1])
        );
    }

    #[test]
    fn shift_square_matches_pointwise_oracle() {
        // oracle: sample x^2 on a box and read neighbour values by hand
        let sq = p1(&[0, 0, 1]);
        let shifted = shift(&sq, LatticeStep::minus(0)).unwrap();
        for m in -5i64..=5 {
            let expect = Scalar::from_int((m - 1) * (m - 1));
            assert_eq!(shifted.eval(&[m]), expect);
        }
    }

    #[test]
    fn coordinate_examples() {
        let one = ExactPolynomial::constant(1, Mesh::unit(), Scalar::one());
        let x = coordinate(&one, 0).unwrap();
        assert_eq!(x.eval(&[3]), Scalar::from_int(3));

        let half = Mesh::new(num_rational::BigRational::new(1.into(), 2.into())).unwrap();
        let one2 = ExactPolynomial::constant(2, half, Scalar::one());
        let x2 = coordinate(&one2, 1).unwrap();
        assert_eq!(x2.eval(&[0, 4]), Scalar::from_int(2));
        assert_eq!(x2.conj(), x2);
        assert_eq!(
            coordinate(&one2, 2).unwrap_err(),
            CoeffError::AxisOutOfRange { axis: 2, dim: 2 }
        );
    }

    #[test]
    fn diff_examples() {
        let one = ExactPolynomial::constant(3, Mesh::unit(), Scalar::one());
        for j in 0..3 {
            for k in 0..3 {
                let xk = coordinate(&one, k).unwrap();
                for s in Sign::BOTH {
                    let d = diff(&xk, LatticeStep::new(j, s)).unwrap();
                    let expect = if j == k { one.clone() } else { one.zero_like() };
                    assert_eq!(d, expect);
                }
            }
        }
        let c = one.scale(&Scalar::ratio(7, 3));
        assert!(diff(&c, LatticeStep::minus(1)).unwrap().is_zero());
        // (x+1)^2 - x^2 = 2x + 1
        assert_eq!(
            diff(&p1(&[0, 0, 1]), LatticeStep::plus(0)).unwrap(),
            p1(&[1, 2])
        );
    }

    #[test]
    fn sym_skew_examples() {
        let x = p1(&[0, 1]);
        assert_eq!(sym_diff(&x, 0).unwrap(), p1(&[1]));
        assert!(skew_diff(&x, 0).unwrap().is_zero());
        let sq = p1(&[0, 0, 1]);
        let skew = skew_diff(&sq, 0).unwrap();
        assert_eq!(skew, ExactPolynomial::constant(1, Mesh::unit(), Scalar::i()));
    }

    #[test]
    fn difference_splitting_has_no_half() {
        let f = p1(&[2, -1, 3, 1]);
        let nabla = sym_diff(&f, 0).unwrap();
        let tilde = skew_diff(&f, 0).unwrap();
        let i_tilde = tilde.scale(&Scalar::i());
        assert_eq!(
            nabla.sub(&i_tilde).unwrap(),
            diff(&f, LatticeStep::plus(0)).unwrap()
        );
        assert_eq!(
            nabla.add(&i_tilde).unwrap(),
            diff(&f, LatticeStep::minus(0)).unwrap()
        );
    }

    #[test]
    fn laplacian_examples() {
        assert!(star_laplacian(&p1(&[4, -3])).unwrap().is_zero());
        assert_eq!(star_laplacian(&p1(&[0, 0, 1])).unwrap(), p1(&[2]));
        let one = ExactPolynomial::constant(2, Mesh::unit(), Scalar::one());
        let xy = coordinate(&one, 0)
            .unwrap()
            .mul(&coordinate(&one, 1).unwrap())
            .unwrap();
        assert!(star_laplacian(&xy).unwrap().is_zero());
    }

    #[test]
    fn box_shift_exhausts_margin() {
        let f = BoxFunction::from_fn(1, Mesh::unit(), IntBox::cube(1, 0, 1), |p| {
            Scalar::from_int(p[0])
        });
        let g = f.shift(LatticeStep::plus(0)).unwrap();
        assert_eq!(g.validity(), &IntBox::cube(1, 0, 0));
        assert_eq!(
            g.shift(LatticeStep::plus(0)).unwrap_err(),
            CoeffError::EmptyValidity { axis: 0 }
        );
    }
}
