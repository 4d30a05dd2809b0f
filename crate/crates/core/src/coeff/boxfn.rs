use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{check_axis, check_compatible, CoeffError, Coefficient};
use crate::lattice::{IntBox, LatticeStep, Mesh};
use crate::scalar::Scalar;

/// Lattice function sampled on an integer box.
///
/// A non-periodic function tracks a validity box: values outside it are
/// stale (they read neighbours that were never sampled). A periodic function
/// lives on the torus `ℤ_N^n` with support `[0, N-1]^n`; shifts wrap and the
/// validity box never shrinks, but coordinate multiplication is undefined.
#[derive(Clone)]
pub struct BoxFunction {
    dim: usize,
    mesh: Mesh,
    support: IntBox,
    validity: IntBox,
    periodic: bool,
    values: Vec<Scalar>,
}

impl BoxFunction {
    pub fn from_fn(
        dim: usize,
        mesh: Mesh,
        support: IntBox,
        f: impl Fn(&[i64]) -> Scalar,
    ) -> Self {
        assert_eq!(support.dim(), dim);
        let values = support.points().map(|p| f(&p)).collect();
        BoxFunction {
            dim,
            mesh,
            validity: support.clone(),
            support,
            periodic: false,
            values,
        }
    }

    /// Row-major values over `support`; `None` if the length is wrong.
    pub fn from_values(dim: usize, mesh: Mesh, support: IntBox, values: Vec<Scalar>) -> Option<Self> {
        (support.dim() == dim && support.len() == values.len()).then(|| BoxFunction {
            dim,
            mesh,
            validity: support.clone(),
            support,
            periodic: false,
            values,
        })
    }

    /// A function on the torus `ℤ_N^n`, given by its values on one period.
    pub fn periodic(dim: usize, mesh: Mesh, period: i64, f: impl Fn(&[i64]) -> Scalar) -> Self {
        assert!(period >= 1);
        let mut b = BoxFunction::from_fn(dim, mesh, IntBox::cube(dim, 0, period - 1), f);
        b.periodic = true;
        b
    }

    /// Periodic counterpart of [`BoxFunction::from_values`] on `[0, N-1]^n`.
    pub fn periodic_from_values(dim: usize, mesh: Mesh, period: i64, values: Vec<Scalar>) -> Option<Self> {
        if period < 1 {
            return None;
        }
        let mut b = BoxFunction::from_values(dim, mesh, IntBox::cube(dim, 0, period - 1), values)?;
        b.periodic = true;
        Some(b)
    }

    /// Narrow the validity box; `None` unless `v` lies inside the current one.
    pub fn with_validity(mut self, v: IntBox) -> Option<Self> {
        if self.periodic || v.is_empty() || !self.validity.contains_box(&v) {
            return None;
        }
        self.validity = v;
        Some(self)
    }

    pub fn support(&self) -> &IntBox {
        &self.support
    }

    pub fn validity(&self) -> &IntBox {
        &self.validity
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// Torus period, for periodic functions.
    pub fn period(&self) -> Option<i64> {
        self.periodic.then(|| self.support.extent(0) as i64)
    }

    /// Value at `p` if `p` lies in the support (periodic functions reduce `p`).
    pub fn get(&self, p: &[i64]) -> Option<&Scalar> {
        if self.periodic {
            let q: Vec<i64> = p
                .iter()
                .enumerate()
                .map(|(a, &x)| x.rem_euclid(self.support.extent(a) as i64))
                .collect();
            return Some(&self.values[self.support.offset(&q)]);
        }
        self.support
            .contains(p)
            .then(|| &self.values[self.support.offset(p)])
    }

    fn same_carrier(&self, other: &Self) -> Result<(), CoeffError> {
        check_compatible(self, other)?;
        if self.support != other.support || self.periodic != other.periodic {
            return Err(CoeffError::SupportMismatch);
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self, CoeffError> {
        self.same_carrier(other)?;
        Ok(BoxFunction {
            dim: self.dim,
            mesh: self.mesh.clone(),
            support: self.support.clone(),
            validity: self.validity.intersect(&other.validity),
            periodic: self.periodic,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        BoxFunction {
            values: self.values.iter().map(f).collect(),
            ..self.clone()
        }
    }
}

impl fmt::Debug for BoxFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BoxFunction(support {:?}..{:?}, valid {:?}..{:?}{})",
            self.support.lo,
            self.support.hi,
            self.validity.lo,
            self.validity.hi,
            if self.periodic { ", periodic" } else { "" }
        )
    }
}

/// Agreement on the common validity box (see the type-level docs).
impl PartialEq for BoxFunction {
    fn eq(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }
}

impl Coefficient for BoxFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    fn constant_like(&self, s: Scalar) -> Self {
        BoxFunction {
            dim: self.dim,
            mesh: self.mesh.clone(),
            support: self.support.clone(),
            validity: self.support.clone(),
            periodic: self.periodic,
            values: vec![s; self.support.len()],
        }
    }

    fn is_zero(&self) -> bool {
        self.validity
            .points()
            .all(|p| self.values[self.support.offset(&p)].is_zero())
    }

    fn add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.zip_with(other, |a, b| a + b)
    }

    fn mul(&self, other: &Self) -> Result<Self, CoeffError> {
        self.zip_with(other, |a, b| a * b)
    }

    fn scale(&self, s: &Scalar) -> Self {
        self.map(|v| v * s)
    }

    fn conj(&self) -> Self {
        self.map(Scalar::conj)
    }

    fn shift(&self, step: LatticeStep) -> Result<Self, CoeffError> {
        check_axis(step.axis, self.dim)?;
        let d = step.sign.as_i64();
        let validity = if self.periodic {
            self.validity.clone()
        } else {
            let v = self.validity.shrink_toward(step);
            if v.is_empty() {
                return Err(CoeffError::EmptyValidity { axis: step.axis });
            }
            v
        };
        let zero = Scalar::zero();
        let values = self
            .support
            .points()
            .map(|mut p| {
                p[step.axis] += d;
                self.get(&p).unwrap_or(&zero).clone()
            })
            .collect();
        Ok(BoxFunction {
            validity,
            values,
            ..self.clone()
        })
    }

    fn mul_coordinate(&self, axis: usize) -> Result<Self, CoeffError> {
        check_axis(axis, self.dim)?;
        if self.periodic {
            return Err(CoeffError::CoordinateOnTorus { axis });
        }
        let h = self.mesh.value();
        let values = self
            .support
            .points()
            .zip(&self.values)
            .map(|(p, v)| v.scale_real(&(h * BigRational::from_integer(BigInt::from(p[axis])))))
            .collect();
        Ok(BoxFunction {
            values,
            ..self.clone()
        })
    }

    fn first_difference(&self, other: &Self) -> Option<String> {
        if let Err(e) = self.same_carrier(other) {
            return Some(e.to_string());
        }
        let common = self.validity.intersect(&other.validity);
        for p in common.points() {
            let k = self.support.offset(&p);
            if self.values[k] != other.values[k] {
                return Some(format!(
                    "at {:?}: {} vs {}",
                    p, self.values[k], other.values[k]
                ));
            }
        }
        None
    }
}
