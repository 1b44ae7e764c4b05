use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::VectorField;
use crate::error::{Error, Result};
use crate::linalg::{combinations, QMatrix};
use crate::poly::{Poly, Rational};

/// A differential form of fixed degree on an `dim`-dimensional chart.
///
/// Terms are keyed by strictly increasing 0-based index tuples; the
/// permutation sign of any unsorted input is absorbed into the coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct KForm {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Poly>,
}

/// Sort `indices` in place and return the permutation sign, or `None` if an
/// index repeats.
pub(crate) fn sort_with_sign(indices: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] > indices[j] {
            indices.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if indices.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// Sign of the shuffle that sorts the concatenation `a ++ b` of two sorted,
/// disjoint tuples.
pub(crate) fn shuffle_sign(a: &[usize], b: &[usize]) -> i32 {
    let inversions: usize = a.iter().map(|x| b.iter().filter(|y| *y < x).count()).sum();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn merge(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i32)> {
    if a.iter().any(|x| b.contains(x)) {
        return None;
    }
    let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
    idx.sort_unstable();
    Some((idx, shuffle_sign(a, b)))
}

impl KForm {
    pub fn zero(dim: usize, degree: usize) -> Self {
        KForm {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Degree-0 form (a function).
    pub fn function(f: Poly) -> Self {
        let mut w = Self::zero(f.nvars(), 0);
        if !f.is_zero() {
            w.terms.insert(Vec::new(), f);
        }
        w
    }

    pub fn constant_function(dim: usize, c: Rational) -> Self {
        Self::function(Poly::constant(dim, c))
    }

    /// `coeff * dx_{i1} ∧ ... ∧ dx_{ik}` for arbitrary (possibly unsorted) indices.
    pub fn monomial(dim: usize, indices: &[usize], coeff: Poly) -> Self {
        assert_eq!(coeff.nvars(), dim, "coefficient lives on another chart");
        assert!(indices.iter().all(|&i| i < dim), "form index out of range");
        let mut w = Self::zero(dim, indices.len());
        let mut idx = indices.to_vec();
        if let Some(sign) = sort_with_sign(&mut idx) {
            let c = if sign < 0 { -coeff } else { coeff };
            if !c.is_zero() {
                w.terms.insert(idx, c);
            }
        }
        w
    }

    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        Self::monomial(dim, indices, Poly::one(dim))
    }

    /// The coordinate 1-form `dx_i`.
    pub fn dx(dim: usize, i: usize) -> Self {
        Self::basis(dim, &[i])
    }

    /// Build a 1-form from its components.
    pub fn one_form(components: Vec<Poly>) -> Self {
        let dim = components.len();
        let mut w = Self::zero(dim, 1);
        for (i, c) in components.into_iter().enumerate() {
            if !c.is_zero() {
                w.terms.insert(vec![i], c);
            }
        }
        w
    }

    /// Build a 2-form `Σ_{i<j} m_ij dx_i ∧ dx_j` from an antisymmetric matrix.
    pub fn two_form_from_matrix(m: &[Vec<Poly>]) -> Self {
        let dim = m.len();
        let mut w = Self::zero(dim, 2);
        for i in 0..dim {
            for j in i + 1..dim {
                if !m[i][j].is_zero() {
                    w.terms.insert(vec![i, j], m[i][j].clone());
                }
            }
        }
        w
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.values().all(Poly::is_constant)
    }

    /// Coefficient of `dx_I` for sorted `I`.
    pub fn coefficient(&self, indices: &[usize]) -> Poly {
        self.terms
            .get(indices)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.dim))
    }

    /// Components of a 1-form, one per coordinate.
    pub fn components(&self) -> Vec<Poly> {
        assert_eq!(self.degree, 1, "components() is only defined for 1-forms");
        (0..self.dim).map(|i| self.coefficient(&[i])).collect()
    }

    /// Evaluate a 1-form on a vector field.
    pub fn apply(&self, x: &VectorField) -> Result<Poly> {
        if self.degree != 1 {
            return Err(Error::InvalidInput(format!(
                "apply expects a 1-form, got degree {}",
                self.degree
            )));
        }
        check_dim(self.dim, x.dim())?;
        let mut acc = Poly::zero(self.dim);
        for (idx, c) in &self.terms {
            acc += &(c * x.component(idx[0]));
        }
        Ok(acc)
    }

    fn insert_add(&mut self, idx: Vec<usize>, c: Poly) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &KForm) -> Result<KForm> {
        check_dim(self.dim, other.dim)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidInput(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let mut out = self.clone();
        out.degree = degree;
        for (k, v) in &other.terms {
            out.insert_add(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &KForm) -> Result<KForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> KForm {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> KForm {
        if c.is_zero() {
            return KForm::zero(self.dim, self.degree);
        }
        KForm {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v.scale(c))).collect(),
        }
    }

    pub fn mul_function(&self, f: &Poly) -> KForm {
        let mut out = KForm::zero(self.dim, self.degree);
        for (k, v) in &self.terms {
            out.insert_add(k.clone(), v * f);
        }
        out
    }

    pub fn wedge(&self, other: &KForm) -> Result<KForm> {
        check_dim(self.dim, other.dim)?;
        let mut out = KForm::zero(self.dim, self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((idx, sign)) = merge(a, b) {
                    let c = ca * cb;
                    out.insert_add(idx, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Exterior derivative.
    pub fn d(&self) -> KForm {
        let mut out = KForm::zero(self.dim, self.degree + 1);
        for (idx, c) in &self.terms {
            for j in 0..self.dim {
                if idx.contains(&j) {
                    continue;
                }
                let dc = c.derivative(j);
                if dc.is_zero() {
                    continue;
                }
                let (sorted, sign) = merge(&[j], idx).expect("disjoint by construction");
                out.insert_add(sorted, if sign < 0 { -dc } else { dc });
            }
        }
        out
    }

    /// Interior product `i_X ω`.
    pub fn interior(&self, x: &VectorField) -> Result<KForm> {
        check_dim(self.dim, x.dim())?;
        if self.degree == 0 {
            return Err(Error::InteriorOfFunction);
        }
        let mut out = KForm::zero(self.dim, self.degree - 1);
        for (idx, c) in &self.terms {
            for (r, &i) in idx.iter().enumerate() {
                let xi = x.component(i);
                if xi.is_zero() {
                    continue;
                }
                let mut rest = idx.clone();
                rest.remove(r);
                let term = c * xi;
                out.insert_add(rest, if r % 2 == 1 { -term } else { term });
            }
        }
        Ok(out)
    }

    /// Coefficient vector in the lexicographic basis of `Λ^k`, for
    /// constant-coefficient forms.
    pub fn to_vector(&self) -> Result<Vec<Rational>> {
        let basis = combinations(self.dim, self.degree);
        basis
            .iter()
            .map(|idx| {
                self.coefficient(idx)
                    .as_constant()
                    .ok_or(Error::NonConstant("form"))
            })
            .collect()
    }

    pub fn from_vector(dim: usize, degree: usize, v: &[Rational]) -> KForm {
        let basis = combinations(dim, degree);
        assert_eq!(basis.len(), v.len(), "coefficient vector has wrong length");
        let mut w = KForm::zero(dim, degree);
        for (idx, c) in basis.into_iter().zip(v) {
            if !c.is_zero() {
                w.terms.insert(idx, Poly::constant(dim, c.clone()));
            }
        }
        w
    }

    /// Pullback `A*ω` by a constant linear map: `(A*ω)(v..) = ω(Av, ..)`.
    pub fn pullback(&self, a: &QMatrix) -> Result<KForm> {
        if a.rows() != self.dim || a.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: a.rows(),
            });
        }
        if !self.is_constant() {
            return Err(Error::NonConstant("pulled-back form"));
        }
        let targets = combinations(self.dim, self.degree);
        let mut out = KForm::zero(self.dim, self.degree);
        for (idx, c) in &self.terms {
            let c = c.as_constant().expect("checked constant");
            for j in &targets {
                let minor = a.select(idx, j).determinant();
                if minor.is_zero() {
                    continue;
                }
                out.insert_add(j.clone(), Poly::constant(self.dim, &c * &minor));
            }
        }
        Ok(out)
    }

    /// First index tuple (canonical order) where the two forms differ.
    pub fn first_difference(&self, other: &KForm) -> Option<(Vec<usize>, Poly, Poly)> {
        let mut keys: Vec<&Vec<usize>> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|k| {
            let a = self.coefficient(k);
            let b = other.coefficient(k);
            (a != b).then(|| (k.clone(), a, b))
        })
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Renders a basis tuple 1-based, e.g. `dx1^dx3`.
pub fn format_indices(idx: &[usize]) -> String {
    if idx.is_empty() {
        return "1".to_string();
    }
    idx.iter()
        .map(|i| format!("dx{}", i + 1))
        .collect::<Vec<_>>()
        .join("^")
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("({c}) {}", format_indices(k)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{q, qi};

    fn e(dim: usize, idx: &[usize]) -> KForm {
        KForm::basis(dim, idx)
    }

    #[test]
    fn wedge_antisymmetry_unit_and_nilpotence() {
        let dx1 = KForm::dx(3, 0);
        let dx2 = KForm::dx(3, 1);
        assert_eq!(dx1.wedge(&dx2).unwrap(), dx2.wedge(&dx1).unwrap().neg());
        let one = KForm::constant_function(3, qi(1));
        let w = e(3, &[0, 2]);
        assert_eq!(w.wedge(&one).unwrap(), w);
        assert!(dx1.wedge(&dx1).unwrap().is_zero());
        assert!(e(3, &[0, 1]).wedge(&e(3, &[1, 2])).unwrap().is_zero());
    }

    #[test]
    fn wedge_dimension_mismatch() {
        assert_eq!(
            KForm::dx(3, 0).wedge(&KForm::dx(4, 0)),
            Err(Error::DimensionMismatch { expected: 3, found: 4 })
        );
    }

    #[test]
    fn unsorted_monomial_absorbs_sign() {
        let w = KForm::monomial(3, &[2, 0], Poly::one(3));
        assert_eq!(w, e(3, &[0, 2]).neg());
        assert!(KForm::monomial(3, &[1, 1], Poly::one(3)).is_zero());
    }

    #[test]
    fn exterior_derivative_examples() {
        let x1 = Poly::var(3, 0);
        let w = KForm::monomial(3, &[1], x1.clone());
        assert_eq!(w.d(), e(3, &[0, 1]));
        let c = KForm::monomial(3, &[0, 2], Poly::constant(3, q(5, 7)));
        assert!(c.d().is_zero());
        let f = KForm::function(&x1 * &Poly::var(3, 1));
        assert!(!f.d().is_zero());
        assert!(f.d().d().is_zero());
    }

    #[test]
    fn interior_examples() {
        let e1 = VectorField::coordinate(3, 0);
        let e3 = VectorField::coordinate(3, 2);
        assert_eq!(e(3, &[0, 1]).interior(&e1).unwrap(), e(3, &[1]));
        assert!(e(3, &[0, 1]).interior(&e3).unwrap().is_zero());
        let top = e(3, &[0, 1, 2]);
        assert!(top.interior(&e1).unwrap().interior(&e1).unwrap().is_zero());
        assert_eq!(
            KForm::constant_function(3, qi(1)).interior(&e1),
            Err(Error::InteriorOfFunction)
        );
    }

    #[test]
    fn pullback_examples() {
        let w = e(4, &[0, 2]).add(&e(4, &[1])).err();
        assert!(w.is_some(), "mixed-degree addition must fail");

        let id = QMatrix::identity(4);
        let w = e(4, &[0, 3]).add(&e(4, &[1, 2]).scale(&q(2, 3))).unwrap();
        assert_eq!(w.pullback(&id).unwrap(), w);

        let mut diag = QMatrix::identity(4);
        diag[(0, 0)] = qi(2);
        assert_eq!(KForm::dx(4, 0).pullback(&diag).unwrap(), KForm::dx(4, 0).scale(&qi(2)));

        let nonconst = KForm::monomial(4, &[0], Poly::var(4, 1));
        assert_eq!(nonconst.pullback(&id), Err(Error::NonConstant("pulled-back form")));
    }

    #[test]
    fn pullback_by_quaternion_right_i_fixes_da_db() {
        // Oracle: (a + bi + cj + dk) i = -b + ai + dj - ck, so (a,b,c,d) -> (-b, a, d, -c).
        // Slotwise: da(Av) = -b-coordinate of v => A*da = -db; A*db = da.
        // Hence A*(da^db) = (-db)^(da) = da^db.
        let r = QMatrix::from_i64_rows(&[
            vec![0, -1, 0, 0],
            vec![1, 0, 0, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, -1, 0],
        ]);
        assert_eq!(KForm::dx(4, 0).pullback(&r).unwrap(), KForm::dx(4, 1).neg());
        assert_eq!(KForm::dx(4, 1).pullback(&r).unwrap(), KForm::dx(4, 0));
        assert_eq!(e(4, &[0, 1]).pullback(&r).unwrap(), e(4, &[0, 1]));
    }

    #[test]
    fn vector_round_trip() {
        let w = e(5, &[0, 3]).add(&e(5, &[2, 4]).scale(&q(-1, 2))).unwrap();
        let v = w.to_vector().unwrap();
        assert_eq!(v.len(), 10);
        assert_eq!(KForm::from_vector(5, 2, &v), w);
    }
}
