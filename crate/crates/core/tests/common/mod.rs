#![allow(dead_code)]

use latclif_core::forms::{Blade, Form, PolyForm};
use latclif_core::{ExactPolynomial, Mesh, MultiIndex, Scalar};
use num_rational::BigRational;
use proptest::prelude::*;

pub fn mesh_of(num: i64, den: i64) -> Mesh {
    Mesh::new(BigRational::new(num.into(), den.into())).unwrap()
}

pub fn arb_mesh() -> impl Strategy<Value = Mesh> {
    prop_oneof![Just((1, 1)), Just((1, 2)), Just((2, 3)), Just((3, 1))].prop_map(|(a, b)| mesh_of(a, b))
}

pub fn arb_scalar() -> impl Strategy<Value = Scalar> {
    (-4i64..=4, 1i64..=3, -2i64..=2, 1i64..=2).prop_map(|(a, b, c, d)| {
        Scalar::ratio(a, b) + Scalar::ratio(c, d) * Scalar::i()
    })
}

pub fn arb_exponent(n: usize, max_deg: u32) -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec(0..=max_deg, n)
        .prop_filter("total degree", move |e| e.iter().sum::<u32>() <= max_deg)
        .prop_map(MultiIndex)
}

pub fn arb_poly(n: usize, mesh: Mesh, max_deg: u32) -> impl Strategy<Value = ExactPolynomial> {
    proptest::collection::vec((arb_exponent(n, max_deg), arb_scalar()), 0..5)
        .prop_map(move |t| ExactPolynomial::from_terms(n, mesh.clone(), t))
}

pub fn arb_blade(n: usize) -> impl Strategy<Value = Blade> {
    (0u32..(1u32 << (2 * n))).prop_map(move |b| Blade::from_bits(n, b))
}

pub fn arb_form(n: usize, mesh: Mesh, max_deg: u32) -> impl Strategy<Value = PolyForm> {
    proptest::collection::vec((arb_blade(n), arb_poly(n, mesh.clone(), max_deg)), 0..4).prop_map(move |t| {
        let mut f = Form::zero(n, mesh.clone());
        for (b, c) in t {
            f.push(b, c, false).unwrap();
        }
        f
    })
}

/// A form all of whose blades have degree `k`.
pub fn arb_homogeneous(n: usize, mesh: Mesh, max_deg: u32, k: usize) -> impl Strategy<Value = PolyForm> {
    let blades: Vec<Blade> = Blade::all(n).filter(|b| b.degree() == k).collect();
    proptest::collection::vec((proptest::sample::select(blades), arb_poly(n, mesh.clone(), max_deg)), 0..4)
        .prop_map(move |t| {
            let mut f = Form::zero(n, mesh.clone());
            for (b, c) in t {
                f.push(b, c, false).unwrap();
            }
            f
        })
}
