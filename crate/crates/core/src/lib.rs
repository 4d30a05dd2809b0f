//! Exact discrete differential forms and Clifford operators on symmetric
//! lattices.
//!
//! Everything is computed over exact complex rationals: lattice functions
//! and polynomials ([`coeff`]), the universal calculus on a finite torus
//! ([`universal`]), the bigraded form algebra ([`forms`]), its endomorphisms
//! ([`endo`]), the Dirac family ([`dirac`]) and discrete homogeneous and
//! hermitian monogenic polynomials ([`polynomials`]).

pub mod coeff;
pub mod dirac;
pub mod endo;
pub mod forms;
pub mod lattice;
pub mod linalg;
pub mod polynomials;
pub mod scalar;
pub mod suites;
pub mod universal;

pub use coeff::{BoxFunction, CoeffError, Coefficient, ExactPolynomial};
pub use lattice::{IntBox, LatticeStep, Mesh, MultiIndex, Sign};
pub use scalar::Scalar;
