use std::fmt;

use super::form::check_dim;
use super::KForm;
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::poly::{Poly, Rational};

/// A vector field given by its components in the coordinate frame.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    components: Vec<Poly>,
}

impl VectorField {
    pub fn new(components: Vec<Poly>) -> Self {
        let dim = components.len();
        assert!(
            components.iter().all(|c| c.nvars() == dim),
            "vector field components live on another chart"
        );
        VectorField { components }
    }

    pub fn zero(dim: usize) -> Self {
        VectorField {
            components: vec![Poly::zero(dim); dim],
        }
    }

    /// The coordinate field `∂/∂x_i`.
    pub fn coordinate(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.components[i] = Poly::one(dim);
        v
    }

    pub fn from_constants(values: &[Rational]) -> Self {
        let dim = values.len();
        VectorField {
            components: values.iter().map(|c| Poly::constant(dim, c.clone())).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &Poly {
        &self.components[i]
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.components.iter().all(Poly::is_constant)
    }

    pub fn to_constants(&self) -> Option<Vec<Rational>> {
        self.components.iter().map(Poly::as_constant).collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        VectorField {
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        check_dim(self.dim(), other.dim())?;
        Ok(VectorField {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    /// Directional derivative `X(f) = Σ X^j ∂_j f`.
    pub fn derive(&self, f: &Poly) -> Poly {
        let mut acc = Poly::zero(self.dim());
        for (j, xj) in self.components.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            acc += &(xj * &f.derivative(j));
        }
        acc
    }

    /// Lie bracket `[X, Y]^i = Σ_j (X^j ∂_j Y^i − Y^j ∂_j X^i)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        check_dim(self.dim(), other.dim())?;
        Ok(VectorField {
            components: (0..self.dim())
                .map(|i| &self.derive(&other.components[i]) - &other.derive(&self.components[i]))
                .collect(),
        })
    }

    pub fn with_component(mut self, i: usize, value: Poly) -> Self {
        self.components[i] = value;
        self
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.components.iter()).finish()
    }
}

/// Field of endomorphisms; `(A X)^i = Σ_j a_ij X^j`.
#[derive(Clone, PartialEq, Eq)]
pub struct EndField {
    entries: Vec<Vec<Poly>>,
}

impl EndField {
    pub fn new(entries: Vec<Vec<Poly>>) -> Self {
        let dim = entries.len();
        assert!(
            entries
                .iter()
                .all(|r| r.len() == dim && r.iter().all(|p| p.nvars() == dim)),
            "endomorphism field must be square with entries on the same chart"
        );
        EndField { entries }
    }

    pub fn zero(dim: usize) -> Self {
        EndField {
            entries: vec![vec![Poly::zero(dim); dim]; dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut a = Self::zero(dim);
        for i in 0..dim {
            a.entries[i][i] = Poly::one(dim);
        }
        a
    }

    pub fn from_constant(m: &QMatrix) -> Self {
        assert!(m.is_square());
        let dim = m.rows();
        EndField {
            entries: (0..dim)
                .map(|i| (0..dim).map(|j| Poly::constant(dim, m[(i, j)].clone())).collect())
                .collect(),
        }
    }

    /// `η ⊗ ξ`, the endomorphism `X ↦ η(X) ξ`.
    pub fn outer(eta: &KForm, xi: &VectorField) -> Result<Self> {
        check_dim(eta.dim(), xi.dim())?;
        let comps = eta.components();
        let dim = xi.dim();
        Ok(EndField {
            entries: (0..dim)
                .map(|i| (0..dim).map(|j| xi.component(i) * &comps[j]).collect())
                .collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    pub fn with_entry(mut self, i: usize, j: usize, value: Poly) -> Self {
        self.entries[i][j] = value;
        self
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().flatten().all(Poly::is_constant)
    }

    pub fn to_constant(&self) -> Option<QMatrix> {
        let rows: Option<Vec<Vec<Rational>>> = self
            .entries
            .iter()
            .map(|r| r.iter().map(Poly::as_constant).collect())
            .collect();
        rows.map(QMatrix::from_rows)
    }

    pub fn column(&self, j: usize) -> VectorField {
        VectorField::new(self.entries.iter().map(|r| r[j].clone()).collect())
    }

    pub fn apply(&self, x: &VectorField) -> Result<VectorField> {
        check_dim(self.dim(), x.dim())?;
        let dim = self.dim();
        Ok(VectorField::new(
            (0..dim)
                .map(|i| {
                    let mut acc = Poly::zero(dim);
                    for j in 0..dim {
                        if !self.entries[i][j].is_zero() && !x.component(j).is_zero() {
                            acc += &(&self.entries[i][j] * x.component(j));
                        }
                    }
                    acc
                })
                .collect(),
        ))
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &EndField) -> Result<EndField> {
        check_dim(self.dim(), other.dim())?;
        let dim = self.dim();
        let mut out = Self::zero(dim);
        for i in 0..dim {
            for k in 0..dim {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..dim {
                    let b = &other.entries[k][j];
                    if !b.is_zero() {
                        out.entries[i][j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> EndField {
        let dim = self.dim();
        EndField {
            entries: (0..dim)
                .map(|i| (0..dim).map(|j| self.entries[j][i].clone()).collect())
                .collect(),
        }
    }

    pub fn add(&self, other: &EndField) -> Result<EndField> {
        check_dim(self.dim(), other.dim())?;
        Ok(EndField {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        })
    }

    pub fn sub(&self, other: &EndField) -> Result<EndField> {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn scale(&self, c: &Rational) -> EndField {
        EndField {
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|p| p.scale(c)).collect())
                .collect(),
        }
    }

    /// The 1-form `η ∘ A`.
    pub fn precompose_form(&self, eta: &KForm) -> Result<KForm> {
        if eta.degree() != 1 {
            return Err(Error::InvalidInput("precompose_form expects a 1-form".into()));
        }
        check_dim(self.dim(), eta.dim())?;
        let comps = eta.components();
        let dim = self.dim();
        Ok(KForm::one_form(
            (0..dim)
                .map(|j| {
                    let mut acc = Poly::zero(dim);
                    for (i, c) in comps.iter().enumerate() {
                        if !c.is_zero() && !self.entries[i][j].is_zero() {
                            acc += &(c * &self.entries[i][j]);
                        }
                    }
                    acc
                })
                .collect(),
        ))
    }

    /// First entry (row-major) in which two fields differ.
    pub fn first_difference(&self, other: &EndField) -> Option<(usize, usize, Poly, Poly)> {
        let dim = self.dim();
        (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .find(|&(i, j)| self.entries[i][j] != other.entries[i][j])
            .map(|(i, j)| (i, j, self.entries[i][j].clone(), other.entries[i][j].clone()))
    }
}

impl fmt::Debug for EndField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

/// First coordinate where two vector fields differ.
pub fn first_vector_difference(a: &VectorField, b: &VectorField) -> Option<(usize, Poly, Poly)> {
    (0..a.dim())
        .find(|&i| a.component(i) != b.component(i))
        .map(|i| (i, a.component(i).clone(), b.component(i).clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qi;

    #[test]
    fn coordinate_fields_commute() {
        let e1 = VectorField::coordinate(3, 0);
        let e2 = VectorField::coordinate(3, 1);
        assert!(e1.bracket(&e2).unwrap().is_zero());
    }

    #[test]
    fn bracket_direct_expansion() {
        // [x1 ∂2, ∂1] = -∂1(x1) ∂2 = -∂2
        let x = VectorField::zero(3).with_component(1, Poly::var(3, 0));
        let e1 = VectorField::coordinate(3, 0);
        let b = x.bracket(&e1).unwrap();
        assert_eq!(b, VectorField::coordinate(3, 1).scale(&qi(-1)));
        assert!(x.bracket(&x).unwrap().is_zero());
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let a = VectorField::coordinate(3, 0);
        let b = VectorField::coordinate(4, 0);
        assert!(matches!(a.bracket(&b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn outer_product_acts_as_eta_times_xi() {
        let eta = KForm::dx(3, 2);
        let xi = VectorField::coordinate(3, 2);
        let p = EndField::outer(&eta, &xi).unwrap();
        let v = VectorField::from_constants(&[qi(4), qi(5), qi(6)]);
        assert_eq!(p.apply(&v).unwrap(), xi.scale(&qi(6)));
    }

    #[test]
    fn precompose_matches_pointwise_definition() {
        let a = EndField::from_constant(&QMatrix::from_i64_rows(&[
            vec![0, -1, 0],
            vec![1, 0, 0],
            vec![0, 0, 2],
        ]));
        let eta = KForm::dx(3, 0);
        let composed = a.precompose_form(&eta).unwrap();
        for j in 0..3 {
            let ej = VectorField::coordinate(3, j);
            assert_eq!(
                composed.apply(&ej).unwrap(),
                eta.apply(&a.apply(&ej).unwrap()).unwrap()
            );
        }
    }
}
