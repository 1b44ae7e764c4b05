#![allow(dead_code)]

use cosym3_core::poly::q;
use cosym3_core::{KForm, Poly, Rational, VectorField};
use proptest::prelude::*;

pub fn rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (prop_oneof![-4i64..=-1, 1i64..=4], 1i64..=3).prop_map(|(n, d)| q(n, d))
}

/// Sparse polynomial with at most three terms of degree at most 2 per variable.
pub fn poly(nvars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        (prop::collection::vec(0u32..=2, nvars), rational()),
        0..=3,
    )
    .prop_map(move |terms| Poly::from_terms(nvars, terms.into_iter().map(|(e, c)| (e, c))))
}

pub fn index_set(dim: usize, degree: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::sample::subsequence((0..dim).collect::<Vec<_>>(), degree)
}

pub fn form(dim: usize, degree: usize) -> impl Strategy<Value = KForm> {
    prop::collection::vec((index_set(dim, degree), poly(dim)), 0..=3).prop_map(move |terms| {
        terms.into_iter().fold(KForm::zero(dim, degree), |acc, (idx, c)| {
            acc.add(&KForm::monomial(dim, &idx, c)).unwrap()
        })
    })
}

pub fn any_form(dim: usize) -> impl Strategy<Value = KForm> {
    (0..=dim).prop_flat_map(move |k| form(dim, k))
}

pub fn constant_form(dim: usize, degree: usize) -> impl Strategy<Value = KForm> {
    prop::collection::vec((index_set(dim, degree), rational()), 0..=4).prop_map(move |terms| {
        terms.into_iter().fold(KForm::zero(dim, degree), |acc, (idx, c)| {
            acc.add(&KForm::monomial(dim, &idx, Poly::constant(dim, c))).unwrap()
        })
    })
}

pub fn vector_field(dim: usize) -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly(dim), dim).prop_map(VectorField::new)
}
