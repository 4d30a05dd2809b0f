mod common;

use common::*;
use latclif_core::coeff::{diff, star_laplacian, sym_diff};
use latclif_core::{Coefficient, ExactPolynomial, IntBox, LatticeStep, Mesh, MultiIndex, Scalar, Sign};
use num_rational::BigRational;
use proptest::prelude::*;

/// Direct evaluation of the forward difference at a rational point, from
/// values alone.
fn forward_at(p: &ExactPolynomial, xs: &[BigRational], axis: usize) -> Scalar {
    let h = p.mesh().value().clone();
    let mut ys = xs.to_vec();
    ys[axis] += &h;
    let num = &p.eval_at(&ys) - &p.eval_at(xs);
    num.scale_real(&(BigRational::from_integer(1.into()) / h))
}

fn point(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    proptest::collection::vec((-5i64..=5, 1i64..=3), n)
        .prop_map(|v| v.into_iter().map(|(a, b)| BigRational::new(a.into(), b.into())).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_is_commutative((a, b) in (1usize..=3).prop_flat_map(|n| (arb_poly(n, mesh_of(1, 2), 3), arb_poly(n, mesh_of(1, 2), 3)))) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
    }

    #[test]
    fn shifts_are_inverse(p in arb_poly(2, mesh_of(3, 1), 3), axis in 0usize..2) {
        let s = LatticeStep::plus(axis);
        prop_assert_eq!(p.shift(s).unwrap().shift(s.opposite()).unwrap(), p.clone());
        prop_assert_eq!(p.shift(s.opposite()).unwrap().shift(s).unwrap(), p);
    }

    #[test]
    fn forward_difference_matches_values(m in arb_mesh(), xs in point(2), axis in 0usize..2, seed in any::<u64>()) {
        let p = {
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
            latclif_core::suites::random_polynomial(2, &m, 3, &mut rng)
        };
        let d = diff(&p, LatticeStep::plus(axis)).unwrap();
        prop_assert_eq!(d.eval_at(&xs), forward_at(&p, &xs, axis));
    }

    #[test]
    fn forward_is_shifted_backward(p in arb_poly(2, mesh_of(1, 2), 3), axis in 0usize..2) {
        let fwd = diff(&p, LatticeStep::plus(axis)).unwrap();
        let bwd = diff(&p, LatticeStep::minus(axis)).unwrap().shift(LatticeStep::plus(axis)).unwrap();
        prop_assert_eq!(fwd, bwd);
    }

    #[test]
    fn product_rule(f in arb_poly(2, mesh_of(2, 3), 2), g in arb_poly(2, mesh_of(2, 3), 2), axis in 0usize..2, plus in any::<bool>()) {
        let s = LatticeStep::new(axis, if plus { Sign::Plus } else { Sign::Minus });
        let lhs = diff(&f.mul(&g).unwrap(), s).unwrap();
        let rhs = diff(&f, s).unwrap().mul(&g).unwrap()
            .add(&f.shift(s).unwrap().mul(&diff(&g, s).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sampling_commutes_with_operations(p in arb_poly(2, mesh_of(1, 3), 3), q in arb_poly(2, mesh_of(1, 3), 3), axis in 0usize..2) {
        let support = IntBox::cube(2, -3, 3);
        let (sp, sq) = (p.sample(&support), q.sample(&support));
        prop_assert_eq!(p.mul(&q).unwrap().sample(&support), sp.mul(&sq).unwrap());
        prop_assert_eq!(p.add(&q).unwrap().sample(&support), sp.add(&sq).unwrap());
        for s in LatticeStep::all(2) {
            prop_assert_eq!(diff(&p, s).unwrap().sample(&support), diff(&sp, s).unwrap());
        }
        prop_assert_eq!(p.mul_coordinate(axis).unwrap().sample(&support), sp.mul_coordinate(axis).unwrap());
        prop_assert_eq!(star_laplacian(&p).unwrap().sample(&support), star_laplacian(&sp).unwrap());
        prop_assert_eq!(sym_diff(&p, axis).unwrap().sample(&support), sym_diff(&sp, axis).unwrap());
    }

    #[test]
    fn scalar_text_round_trip(s in arb_scalar()) {
        let t = s.to_string();
        prop_assert_eq!(t.parse::<Scalar>().unwrap(), s);
    }
}

#[test]
fn coordinates_are_basic() {
    for n in 1..=3 {
        for k in 0..n {
            let xk = ExactPolynomial::monomial(n, mesh_of(1, 2), MultiIndex::unit(n, k), Scalar::one());
            for s in LatticeStep::all(n) {
                let want = if s.axis == k { Scalar::one() } else { Scalar::zero() };
                let got = diff(&xk, s).unwrap();
                assert_eq!(got, ExactPolynomial::constant(n, mesh_of(1, 2), want), "axis {k} step {s}");
            }
        }
    }
}

#[test]
fn star_laplacian_stencil() {
    // Σ_j D^{-j} D^{+j} x^2 = 2 on any mesh
    let h = mesh_of(1, 5);
    let x2 = ExactPolynomial::univariate(h.clone(), &[0, 0, 1]);
    assert_eq!(star_laplacian(&x2).unwrap(), ExactPolynomial::constant(1, h, Scalar::from_int(2)));
}

#[test]
fn shrinking_box_reports_exhaustion() {
    let p = ExactPolynomial::univariate(Mesh::unit(), &[1, 1]);
    let f = p.sample(&IntBox::cube(1, 0, 1));
    let once = f.shift(LatticeStep::plus(0)).unwrap();
    assert_eq!(once.validity(), &IntBox::cube(1, 0, 0));
    assert!(once.shift(LatticeStep::plus(0)).is_err());
}
