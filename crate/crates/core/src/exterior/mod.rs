//! Sparse exterior algebra with polynomial coefficients.
//!
//! Forms, vector fields, endomorphism fields and metrics all live on a
//! single coordinate chart; index tuples are 0-based internally and printed
//! 1-based. The volume form uses increasing coordinate order.

mod field;
mod form;
mod metric;

pub use field::{first_vector_difference, EndField, VectorField};
pub use form::{format_indices, KForm};
pub use metric::{hodge_star, ConstantMetric, Metric};

use crate::error::Result;
use crate::linalg::QMatrix;

/// Pullback of a constant-coefficient form by a constant endomorphism field.
pub fn pullback_linear(a: &EndField, w: &KForm) -> Result<KForm> {
    let m = a
        .to_constant()
        .ok_or(crate::error::Error::NonConstant("endomorphism"))?;
    w.pullback(&m)
}

/// `A*` as a matrix on `Λ^k` in the lexicographic basis (columns are images).
pub fn pullback_matrix(a: &QMatrix, degree: usize) -> QMatrix {
    let basis = crate::linalg::combinations(a.rows(), degree);
    let cols: Vec<Vec<_>> = basis
        .iter()
        .map(|idx| {
            KForm::basis(a.rows(), idx)
                .pullback(a)
                .and_then(|w| w.to_vector())
                .expect("constant basis form")
        })
        .collect();
    QMatrix::from_columns(basis.len(), &cols)
}
