//! Operator identities on random forms, beyond the fixed spanning set.

mod common;

use common::*;
use latclif_core::dirac::{square_variable, DiracFamily, HermitianConvention};
use latclif_core::endo::{
    anticommutator, apply, clifford_relations, compose, difference_gamma_relations, fermionic_relations,
    verify_identity, verify_relation, weyl_heisenberg_relations, witt_relations, Operator,
};
use latclif_core::forms::PolyForm;
use latclif_core::{LatticeStep, Mesh, Scalar};
use proptest::prelude::*;

fn all_pass(rels: &[latclif_core::endo::Relation], inputs: &[PolyForm]) -> Result<(), String> {
    for r in rels {
        let rep = verify_relation(r, inputs);
        if !rep.pass {
            return Err(format!("{}: {}", rep.name, rep.witness.unwrap_or_default()));
        }
    }
    Ok(())
}

fn twice(op: &Operator) -> Operator {
    op.scaled(Scalar::from_int(2))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fermionic_and_difference_relations(ws in proptest::collection::vec(arb_form(2, mesh_of(1, 2), 2), 1..4)) {
        prop_assert_eq!(all_pass(&fermionic_relations(2), &ws), Ok(()));
        prop_assert_eq!(all_pass(&difference_gamma_relations(2), &ws), Ok(()));
        prop_assert_eq!(all_pass(&weyl_heisenberg_relations(2), &ws), Ok(()));
    }

    #[test]
    fn mixed_clifford_generators_anticommute(ws in proptest::collection::vec(arb_form(2, Mesh::unit(), 2), 1..4)) {
        let rels: Vec<_> = clifford_relations(2).into_iter().filter(|r| r.name.contains("mixed") || r.name.contains("distinct")).collect();
        prop_assert!(!rels.is_empty());
        prop_assert_eq!(all_pass(&rels, &ws), Ok(()));
        let iso: Vec<_> = witt_relations(2).into_iter().filter(|r| r.name.contains("isotropy")).collect();
        prop_assert_eq!(all_pass(&iso, &ws), Ok(()));
    }

    /// With `ξ^{±j} = γ^{±j} + ϑ^{∓j}` the Witt pairing is
    /// `{γ^{+j},ϑ^{+j}} + {ϑ^{-j},γ^{-j}} = 2`, so the Laplacian splittings
    /// carry the same factor.
    #[test]
    fn doubled_identities(ws in proptest::collection::vec(arb_form(2, mesh_of(1, 2), 2), 1..3), conv in prop_oneof![Just(HermitianConvention::Paper), Just(HermitianConvention::Swapped)]) {
        let fam = DiracFamily::new(2, conv);
        let lap = Operator::laplacian();
        for j in 0..2 {
            let pair = anticommutator(&Operator::xi(LatticeStep::plus(j)), &Operator::xi(LatticeStep::minus(j)));
            prop_assert!(verify_identity("witt", &pair, &twice(&Operator::identity()), &ws).pass);
        }
        prop_assert!(verify_identity("dz", &anticommutator(&fam.dz, &fam.dz_dag), &twice(&lap), &ws).pass);
        let neg2 = lap.scaled(Scalar::from_int(-2));
        prop_assert!(verify_identity("dX2", &compose(&fam.dx, &fam.dx), &neg2, &ws).pass);
        prop_assert!(verify_identity("dXbar2", &compose(&fam.dx_bar, &fam.dx_bar), &neg2, &ws).pass);
    }

    #[test]
    fn isotropy_and_orthogonality(ws in proptest::collection::vec(arb_form(2, mesh_of(2, 3), 2), 1..3)) {
        let fam = DiracFamily::new(2, HermitianConvention::DEFAULT);
        let zero = Operator::zero();
        for op in [&fam.dz, &fam.dz_dag, &fam.z, &fam.z_dag] {
            prop_assert!(verify_identity("iso", &compose(op, op), &zero, &ws).pass);
        }
        prop_assert!(verify_identity("orth", &anticommutator(&fam.dx, &fam.dx_bar), &zero, &ws).pass);
        prop_assert!(verify_identity("orthX", &anticommutator(&fam.x, &fam.x_bar), &zero, &ws).pass);
        let split = fam.d_plus.minus(&fam.d_minus);
        prop_assert!(verify_identity("split", &fam.d, &split, &ws).pass);
    }
}

#[test]
fn square_variable_on_one() {
    // M^+ M^- 1 = x T^+ x = x (x + h)
    let h = mesh_of(1, 2);
    let w = PolyForm::constant(1, h.clone(), Scalar::one());
    let got = apply(&square_variable(1), &w).unwrap();
    let want = latclif_core::ExactPolynomial::from_terms(
        1,
        h.clone(),
        [(latclif_core::MultiIndex(vec![2]), Scalar::one()), (latclif_core::MultiIndex(vec![1]), Scalar::ratio(1, 2))],
    );
    assert_eq!(got, latclif_core::forms::Form::function(want));
}
