use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::form::{check_dim, shuffle_sign};
use super::{EndField, KForm, VectorField};
use crate::error::{Error, Result};
use crate::linalg::{combinations, QMatrix};
use crate::poly::{Poly, Rational};

/// Symmetric 2-tensor `g_ij` with polynomial entries.
///
/// Symmetry and positivity are properties that the structure checker
/// reports on, so construction only enforces squareness.
#[derive(Clone, PartialEq, Eq)]
pub struct Metric {
    entries: Vec<Vec<Poly>>,
}

impl Metric {
    pub fn new(entries: Vec<Vec<Poly>>) -> Self {
        let dim = entries.len();
        assert!(
            entries
                .iter()
                .all(|r| r.len() == dim && r.iter().all(|p| p.nvars() == dim)),
            "metric must be square with entries on the same chart"
        );
        Metric { entries }
    }

    pub fn euclidean(dim: usize) -> Self {
        Metric {
            entries: EndField::identity(dim).entries().to_vec(),
        }
    }

    pub fn from_constant(m: &QMatrix) -> Self {
        Metric {
            entries: EndField::from_constant(m).entries().to_vec(),
        }
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

    pub fn as_end_field(&self) -> EndField {
        EndField::new(self.entries.clone())
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().flatten().all(Poly::is_constant)
    }

    pub fn to_constant(&self) -> Option<QMatrix> {
        self.as_end_field().to_constant()
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        let dim = self.dim();
        (0..dim)
            .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
            .find(|&(i, j)| self.entries[i][j] != self.entries[j][i])
    }

    /// `g(X, Y)`.
    pub fn apply(&self, x: &VectorField, y: &VectorField) -> Result<Poly> {
        check_dim(self.dim(), x.dim())?;
        check_dim(self.dim(), y.dim())?;
        let dim = self.dim();
        let mut acc = Poly::zero(dim);
        for i in 0..dim {
            if x.component(i).is_zero() {
                continue;
            }
            for j in 0..dim {
                if self.entries[i][j].is_zero() || y.component(j).is_zero() {
                    continue;
                }
                acc += &(&(x.component(i) * &self.entries[i][j]) * y.component(j));
            }
        }
        Ok(acc)
    }

    /// The 1-form `g(X, ·)`.
    pub fn flat(&self, x: &VectorField) -> Result<KForm> {
        check_dim(self.dim(), x.dim())?;
        let dim = self.dim();
        Ok(KForm::one_form(
            (0..dim)
                .map(|j| {
                    let mut acc = Poly::zero(dim);
                    for i in 0..dim {
                        if !x.component(i).is_zero() && !self.entries[i][j].is_zero() {
                            acc += &(x.component(i) * &self.entries[i][j]);
                        }
                    }
                    acc
                })
                .collect(),
        ))
    }

    pub fn add(&self, other: &Metric) -> Result<Metric> {
        Ok(Metric {
            entries: self.as_end_field().add(&other.as_end_field())?.entries().to_vec(),
        })
    }

    pub fn scale(&self, c: &Rational) -> Metric {
        Metric {
            entries: self.as_end_field().scale(c).entries().to_vec(),
        }
    }

    /// `η ⊗ η` as a symmetric tensor.
    pub fn square_of(eta: &KForm) -> Metric {
        let c = eta.components();
        Metric {
            entries: c.iter().map(|a| c.iter().map(|b| a * b).collect()).collect(),
        }
    }

    /// Positive definiteness by leading principal minors at a point.
    pub fn is_positive_definite_at(&self, point: &[Rational]) -> bool {
        let m = QMatrix::from_rows(
            self.entries
                .iter()
                .map(|r| r.iter().map(|p| p.eval(point)).collect())
                .collect(),
        );
        m.leading_minors().iter().all(Signed::is_positive)
    }
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

/// Constant metric data prepared for Hodge-star and inner-product work.
#[derive(Clone, Debug)]
pub struct ConstantMetric {
    inverse: QMatrix,
    sqrt_det: Rational,
    dim: usize,
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let sq = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(Rational::new(sq(r.numer())?, sq(r.denom())?))
}

impl ConstantMetric {
    pub fn new(g: &Metric) -> Result<Self> {
        let m = g.to_constant().ok_or(Error::NonConstant("metric"))?;
        if !g.is_symmetric() {
            return Err(Error::InvalidInput("metric is not symmetric".into()));
        }
        let minors = m.leading_minors();
        let det = minors.last().cloned().unwrap_or_else(Rational::one);
        if det.is_zero() {
            return Err(Error::DegenerateMetric);
        }
        if !minors.iter().all(Signed::is_positive) {
            return Err(Error::NotPositiveDefinite);
        }
        let sqrt_det = rational_sqrt(&det).ok_or_else(|| Error::IrrationalVolume(det.to_string()))?;
        let inverse = m.inverse().ok_or(Error::DegenerateMetric)?;
        Ok(ConstantMetric {
            inverse,
            sqrt_det,
            dim: m.rows(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sqrt_det(&self) -> &Rational {
        &self.sqrt_det
    }

    /// `vol_g = √det g dx_1 ∧ … ∧ dx_m`, increasing coordinate order.
    pub fn volume_form(&self) -> KForm {
        let idx: Vec<usize> = (0..self.dim).collect();
        KForm::monomial(self.dim, &idx, Poly::constant(self.dim, self.sqrt_det.clone()))
    }

    /// Induced inner product on `Λ^k`: `⟨dx_I, dx_J⟩ = det(g^{-1}[I, J])`.
    pub fn inner_product(&self, a: &KForm, b: &KForm) -> Result<Rational> {
        check_dim(self.dim, a.dim())?;
        check_dim(self.dim, b.dim())?;
        if a.degree() != b.degree() {
            return Ok(Rational::zero());
        }
        let mut acc = Rational::zero();
        for (i, ca) in a.terms() {
            let ca = ca.as_constant().ok_or(Error::NonConstant("form"))?;
            for (j, cb) in b.terms() {
                let cb = cb.as_constant().ok_or(Error::NonConstant("form"))?;
                let minor = self.inverse.select(i, j).determinant();
                if !minor.is_zero() {
                    acc += &ca * &cb * minor;
                }
            }
        }
        Ok(acc)
    }

    /// Gram matrix of a list of forms under the induced inner product.
    pub fn gram(&self, forms: &[KForm]) -> Result<QMatrix> {
        let n = forms.len();
        let mut m = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.inner_product(&forms[i], &forms[j])?;
            }
        }
        Ok(m)
    }

    /// Hodge star, characterised by `α ∧ ∗β = ⟨α, β⟩ vol_g`.
    pub fn star(&self, w: &KForm) -> Result<KForm> {
        check_dim(self.dim, w.dim())?;
        if !w.is_constant() {
            return Err(Error::NonConstant("form"));
        }
        let k = w.degree();
        let mut out = KForm::zero(self.dim, self.dim - k);
        let all: Vec<usize> = (0..self.dim).collect();
        for kk in combinations(self.dim, k) {
            let complement: Vec<usize> = all.iter().copied().filter(|i| !kk.contains(i)).collect();
            let sign = shuffle_sign(&kk, &complement);
            let mut coeff = Rational::zero();
            for (i, c) in w.terms() {
                let minor = self.inverse.select(&kk, i).determinant();
                if !minor.is_zero() {
                    coeff += c.as_constant().expect("checked constant") * minor;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            coeff *= &self.sqrt_det;
            if sign < 0 {
                coeff = -coeff;
            }
            out = out.add(&KForm::monomial(
                self.dim,
                &complement,
                Poly::constant(self.dim, coeff),
            ))?;
        }
        Ok(out)
    }
}

/// Hodge star for a constant positive-definite metric.
pub fn hodge_star(g: &Metric, w: &KForm) -> Result<KForm> {
    ConstantMetric::new(g)?.star(w)
}
