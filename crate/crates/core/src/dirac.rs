//! Dirac operators, vector variables, Euler and Gamma operators.
//!
//! The vector variables `z = Σ ξ^{+j} M_j^+`, `z† = Σ ξ^{−j} M_j^−` and the
//! spin-Euler operator `β = Σ ξ^{−j} ξ^{+j}` are fixed. The hermitian Dirac
//! pair is not: taking `f_j ↔ ξ^{+j}` in both `z` and `∂_z` makes
//! `{z, ∂_z}` vanish, so [`HermitianConvention`] selects which Witt sign
//! multiplies the backward difference in `∂_z`. Every report names the
//! convention in use.

use std::fmt;
use std::str::FromStr;

use crate::endo::{anticommutator, commutator, compose, Operator, Relation};
use crate::lattice::{LatticeStep, Sign};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HermitianConvention {
    Paper,
    Swapped,
}

impl HermitianConvention {
    pub const ALL: [HermitianConvention; 2] =
        [HermitianConvention::Paper, HermitianConvention::Swapped];

    /// No convention satisfies every intertwining relation; this one fails
    /// only where the Witt duality carries an extra factor of two.
    pub const DEFAULT: HermitianConvention = HermitianConvention::Swapped;

    /// The Witt sign multiplying `D^{−j}` in `∂_z`.
    fn dz_sign(self) -> Sign {
        match self {
            HermitianConvention::Paper => Sign::Plus,
            HermitianConvention::Swapped => Sign::Minus,
        }
    }
}

impl fmt::Display for HermitianConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HermitianConvention::Paper => write!(f, "paper"),
            HermitianConvention::Swapped => write!(f, "swapped"),
        }
    }
}

impl FromStr for HermitianConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(HermitianConvention::Paper),
            "swapped" => Ok(HermitianConvention::Swapped),
            _ => Err(format!("unknown convention `{s}` (expected paper|swapped)")),
        }
    }
}

fn sum_axes(n: usize, f: impl Fn(usize) -> Operator) -> Operator {
    Operator::sum((0..n).map(f).collect())
}

fn i() -> Scalar {
    Scalar::i()
}

/// `∂_± = Σ_j ξ^{±j} D^{∓j}`.
pub fn dirac_pm(n: usize, sign: Sign) -> Operator {
    sum_axes(n, |j| {
        compose(
            &Operator::xi(LatticeStep::new(j, sign)),
            &Operator::diff(LatticeStep::new(j, sign.flip())),
        )
    })
    .named(if sign == Sign::Plus { "dplus" } else { "dminus" })
}

/// `∂ = Σ_j Υ^{−j} ∇^j + i Υ^{+j} ∇̃^j`.
pub fn dirac_kahler(n: usize) -> Operator {
    sum_axes(n, |j| {
        compose(&Operator::upsilon(Sign::Minus, j), &Operator::sym_diff(j)).plus(
            &compose(&Operator::upsilon(Sign::Plus, j), &Operator::skew_diff(j)).scaled(i()),
        )
    })
    .named("dX")
}

/// `Σ_j M_j^+ M_j^−`, multiplication by `Σ_j x_j (x_j + h)`.
pub fn square_variable(n: usize) -> Operator {
    sum_axes(n, |j| {
        compose(
            &Operator::coord_shift(LatticeStep::plus(j)),
            &Operator::coord_shift(LatticeStep::minus(j)),
        )
    })
}

/// The whole operator family for one convention.
#[derive(Clone, Debug)]
pub struct DiracFamily {
    pub n: usize,
    pub convention: HermitianConvention,
    pub d_plus: Operator,
    pub d_minus: Operator,
    pub d: Operator,
    pub dz: Operator,
    pub dz_dag: Operator,
    pub dx: Operator,
    pub dx_bar: Operator,
    pub z: Operator,
    pub z_dag: Operator,
    pub x: Operator,
    pub x_bar: Operator,
    pub ez: Operator,
    pub ez_dag: Operator,
    pub beta: Operator,
    pub gamma_z: Operator,
    pub gamma_z_dag: Operator,
    pub e_x: Operator,
    pub gamma_x: Operator,
    pub gamma_x_bar: Operator,
}

impl DiracFamily {
    pub fn new(n: usize, convention: HermitianConvention) -> Self {
        let ds = convention.dz_sign();
        let xi_dz = |j| Operator::xi(LatticeStep::new(j, ds));
        let xi_dzdag = |j| Operator::xi(LatticeStep::new(j, ds.flip()));
        let xi_f = |j| Operator::xi(LatticeStep::plus(j));
        let xi_fdag = |j| Operator::xi(LatticeStep::minus(j));

        let d_plus = dirac_pm(n, Sign::Plus);
        let d_minus = dirac_pm(n, Sign::Minus);
        let d = dirac_kahler(n);

        let dz = sum_axes(n, |j| compose(&xi_dz(j), &Operator::diff(LatticeStep::minus(j))))
            .named("dz");
        let dz_dag = sum_axes(n, |j| compose(&xi_dzdag(j), &Operator::diff(LatticeStep::plus(j))))
            .named("dzdag");
        let dx = d.clone();
        let dx_bar = dz.plus(&dz_dag).scaled(-i()).named("dXbar");

        let z = sum_axes(n, |j| compose(&xi_f(j), &Operator::coord_shift(LatticeStep::plus(j))))
            .named("z");
        let z_dag = sum_axes(n, |j| {
            compose(&xi_fdag(j), &Operator::coord_shift(LatticeStep::minus(j)))
        })
        .named("zdag");
        let x = z.minus(&z_dag).named("X");
        let x_bar = z.plus(&z_dag).scaled(-i()).named("Xbar");

        let ez = sum_axes(n, |j| {
            compose(
                &Operator::coord_shift(LatticeStep::plus(j)),
                &Operator::diff(LatticeStep::minus(j)),
            )
        })
        .named("Ez");
        let ez_dag = sum_axes(n, |j| {
            compose(
                &Operator::coord_shift(LatticeStep::minus(j)),
                &Operator::diff(LatticeStep::plus(j)),
            )
        })
        .named("Ezdag");
        let beta = sum_axes(n, |j| compose(&xi_fdag(j), &xi_f(j))).named("beta");
        let n_minus_beta = Operator::identity()
            .scaled(Scalar::from_int(n as i64))
            .minus(&beta);

        let gamma_z = commutator(&z, &dz).plus(&beta).named("Gz");
        let gamma_z_dag = commutator(&z_dag, &dz_dag).plus(&n_minus_beta).named("Gzdag");
        let e_x = ez.plus(&ez_dag).named("EX");
        let mixed = compose(&z_dag, &dz).plus(&compose(&z, &dz_dag));
        let gamma_x = gamma_z
            .plus(&gamma_z_dag)
            .minus(&mixed.scaled(Scalar::from_int(2)))
            .named("GX");
        let gamma_x_bar = gamma_z
            .plus(&gamma_z_dag)
            .plus(&mixed.scaled(Scalar::from_int(2)))
            .named("GXbar");

        DiracFamily {
            n,
            convention,
            d_plus,
            d_minus,
            d,
            dz,
            dz_dag,
            dx,
            dx_bar,
            z,
            z_dag,
            x,
            x_bar,
            ez,
            ez_dag,
            beta,
            gamma_z,
            gamma_z_dag,
            e_x,
            gamma_x,
            gamma_x_bar,
        }
    }

    /// Look up a family member by its expression-grammar name.
    pub fn member(&self, name: &str) -> Option<&Operator> {
        Some(match name {
            "dplus" => &self.d_plus,
            "dminus" => &self.d_minus,
            "dX" => &self.dx,
            "dXbar" => &self.dx_bar,
            "dz" => &self.dz,
            "dzdag" => &self.dz_dag,
            "z" => &self.z,
            "zdag" => &self.z_dag,
            "X" => &self.x,
            "Xbar" => &self.x_bar,
            "Ez" => &self.ez,
            "Ezdag" => &self.ez_dag,
            "beta" => &self.beta,
            "Gz" => &self.gamma_z,
            "Gzdag" => &self.gamma_z_dag,
            "EX" => &self.e_x,
            "GX" => &self.gamma_x,
            "GXbar" => &self.gamma_x_bar,
            _ => return None,
        })
    }

    fn n_id(&self) -> Operator {
        Operator::identity().scaled(Scalar::from_int(self.n as i64))
    }

    /// Isotropy, orthogonality, Laplacian and square-variable splittings,
    /// and `∂ = ∂_+ − ∂_−`.
    pub fn structure_relations(&self) -> Vec<Relation> {
        let sq = |a: &Operator| compose(a, a);
        let lap = Operator::laplacian();
        let neg_lap = lap.scaled(Scalar::from_int(-1));
        let m2 = square_variable(self.n);
        let neg_m2 = m2.scaled(Scalar::from_int(-1));
        let zero = Operator::zero;
        vec![
            Relation::new("isotropy_dz", sq(&self.dz), zero()),
            Relation::new("isotropy_dzdag", sq(&self.dz_dag), zero()),
            Relation::new("isotropy_z", sq(&self.z), zero()),
            Relation::new("isotropy_zdag", sq(&self.z_dag), zero()),
            Relation::new(
                "orthogonality_dX",
                anticommutator(&self.dx, &self.dx_bar),
                zero(),
            ),
            Relation::new("orthogonality_X", anticommutator(&self.x, &self.x_bar), zero()),
            Relation::new("laplacian_dX", sq(&self.dx), neg_lap.clone()),
            Relation::new("laplacian_dXbar", sq(&self.dx_bar), neg_lap),
            Relation::new("laplacian_hermitian", anticommutator(&self.dz, &self.dz_dag), lap),
            Relation::new("square_X", sq(&self.x), neg_m2.clone()),
            Relation::new("square_Xbar", sq(&self.x_bar), neg_m2),
            Relation::new("square_hermitian", anticommutator(&self.z, &self.z_dag), m2),
            Relation::new(
                "dirac_kahler_split",
                self.d_plus.minus(&self.d_minus),
                self.d.clone(),
            ),
        ]
    }

    /// The six intertwining relations and the two Euler identifications.
    ///
    /// `E_X` is read off the Clifford side as `{X, ∂_X} − n` and
    /// `E_{X|}` as `−{X|, ∂_{X|}} − n`; both must equal `E_z + E_z†`.
    pub fn intertwining_relations(&self) -> Vec<Relation> {
        let n_minus_beta = self.n_id().minus(&self.beta);
        vec![
            Relation::new(
                "acomm_z_dz",
                anticommutator(&self.z, &self.dz),
                self.beta.plus(&self.ez),
            ),
            Relation::new(
                "comm_z_dz",
                commutator(&self.z, &self.dz),
                self.gamma_z.minus(&self.beta),
            ),
            Relation::new(
                "acomm_zdag_dzdag",
                anticommutator(&self.z_dag, &self.dz_dag),
                n_minus_beta.plus(&self.ez_dag),
            ),
            Relation::new(
                "comm_zdag_dzdag",
                commutator(&self.z_dag, &self.dz_dag),
                self.gamma_z_dag.minus(&n_minus_beta),
            ),
            Relation::new(
                "acomm_zdag_dz",
                anticommutator(&self.z_dag, &self.dz),
                Operator::zero(),
            ),
            Relation::new(
                "acomm_z_dzdag",
                anticommutator(&self.z, &self.dz_dag),
                Operator::zero(),
            ),
        ]
    }

    pub fn euler_relations(&self) -> Vec<Relation> {
        let e_from_x = anticommutator(&self.x, &self.dx).minus(&self.n_id());
        let e_from_xbar = anticommutator(&self.x_bar, &self.dx_bar)
            .scaled(Scalar::from_int(-1))
            .minus(&self.n_id());
        vec![
            Relation::new("euler_X", e_from_x, self.e_x.clone()),
            Relation::new("euler_Xbar", e_from_xbar, self.e_x.clone()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::ExactPolynomial;
    use crate::endo::apply;
    use crate::forms::{Blade, Form, PolyForm};
    use crate::lattice::Mesh;

    #[test]
    fn dplus_on_coordinate() {
        let one = ExactPolynomial::constant(1, Mesh::unit(), Scalar::one());
        let x = crate::coeff::coordinate(&one, 0).unwrap();
        let got = apply(&dirac_pm(1, Sign::Plus), &Form::function(x)).unwrap();
        assert_eq!(got, Form::term(Blade::generator(1, LatticeStep::plus(0)), one));
    }

    #[test]
    fn beta_on_unit() {
        // ξ⁺(1) = dx⁺, then ξ⁻(dx⁺) = dx⁻dx⁺ + ϑ⁺(dx⁺) = dx⁻dx⁺ + 1
        let fam = DiracFamily::new(1, HermitianConvention::Paper);
        let one = PolyForm::constant(1, Mesh::unit(), Scalar::one());
        let got = apply(&fam.beta, &one).unwrap();
        let (_, b) = Blade::from_factors(1, &[LatticeStep::minus(0), LatticeStep::plus(0)]).unwrap();
        let expect = one.add(&PolyForm::unit_blade(Mesh::unit(), b)).unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn dx_squared_on_square() {
        let fam = DiracFamily::new(1, HermitianConvention::Paper);
        let sq = Form::function(ExactPolynomial::univariate(Mesh::unit(), &[0, 0, 1]));
        let got = apply(&compose(&fam.dx, &fam.dx), &sq).unwrap();
        let lap = apply(&Operator::laplacian(), &sq).unwrap();
        // the Laplacian of x² is 2; the factor in front is what the suite checks
        assert_eq!(lap, PolyForm::constant(1, Mesh::unit(), Scalar::from_int(2)));
        assert!(!got.is_zero());
    }

    #[test]
    fn convention_parse() {
        for c in HermitianConvention::ALL {
            assert_eq!(c.to_string().parse::<HermitianConvention>().unwrap(), c);
        }
        assert!("other".parse::<HermitianConvention>().is_err());
    }
}
