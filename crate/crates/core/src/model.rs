//! Flat model spaces: `ℝ^{4n+3}`, `T^{4n+3}`, the hyper-Kähler torus
//! `T⁴ = ℍ/ℤ⁴` and mapping-torus quotients `(T^{4n} × ℝ³)/ℤ³`.
//!
//! Chart coordinates are ordered `(x_1, …, x_{4n}, t_1, t_2, t_3)`. On `ℍ ≅ ℝ⁴`
//! the basis is `(1, i, j, k)`; the complex structures are left
//! multiplications (so `J₁J₂ = J₃`) and monodromies built from quaternions
//! use right multiplication, which commutes with every `J_α`.

use num_traits::One;

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::exterior::{EndField, KForm, Metric, VectorField};
use crate::linalg::QMatrix;
use crate::poly::{qi, Rational};
use crate::structures::{
    check_three_cosymplectic, fundamental_form, levi_civita, CheckOptions, ThreeStructure,
    EVEN_PERMUTATIONS,
};

pub const DEFAULT_ORDER_BOUND: usize = 60;

/// Finite-order linear monodromy acting on the fiber coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monodromy {
    matrix: QMatrix,
    order: usize,
}

impl Monodromy {
    /// Validates integrality, `det = ±1`, and finite order within `bound`.
    pub fn new(matrix: QMatrix, bound: usize) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidInput("monodromy must be square".into()));
        }
        if !matrix.is_integral() {
            return Err(Error::InvalidInput("monodromy must have integer entries".into()));
        }
        let det = matrix.determinant();
        if det != Rational::one() && det != -Rational::one() {
            return Err(Error::InvalidInput(format!(
                "monodromy must preserve the lattice (det = {det})"
            )));
        }
        let order = finite_order(&matrix, bound).ok_or(Error::OrderBoundExceeded(bound))?;
        Ok(Monodromy { matrix, order })
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn fiber_dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `f ⊕ I₃` on the full chart.
    pub fn block_map(&self) -> QMatrix {
        QMatrix::block_diagonal(&[self.matrix.clone(), QMatrix::identity(3)])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Topology {
    Euclidean,
    /// Quotient by the standard integer lattice.
    Torus,
    MappingTorus(Monodromy),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpace {
    chart_dim: usize,
    topology: Topology,
}

impl ModelSpace {
    pub fn new(chart_dim: usize, topology: Topology) -> Result<Self> {
        if let Topology::MappingTorus(m) = &topology {
            if m.fiber_dim() + 3 != chart_dim {
                return Err(Error::InvalidInput(format!(
                    "mapping torus fiber dimension {} does not match chart dimension {chart_dim}",
                    m.fiber_dim()
                )));
            }
        }
        Ok(ModelSpace { chart_dim, topology })
    }

    pub fn chart_dim(&self) -> usize {
        self.chart_dim
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn is_compact(&self) -> bool {
        !matches!(self.topology, Topology::Euclidean)
    }

    pub fn topology_name(&self) -> &'static str {
        match self.topology {
            Topology::Euclidean => "euclidean",
            Topology::Torus => "torus",
            Topology::MappingTorus(_) => "mapping_torus",
        }
    }
}

/// Smallest `r ≤ bound` with `m^r = I`.
pub fn finite_order(m: &QMatrix, bound: usize) -> Option<usize> {
    let id = QMatrix::identity(m.rows());
    let mut p = m.clone();
    for r in 1..=bound {
        if p == id {
            return Some(r);
        }
        p = &p * m;
    }
    None
}

/// Integer quaternion `a + b i + c j + d k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quaternion(pub [i64; 4]);

impl Quaternion {
    pub const ONE: Quaternion = Quaternion([1, 0, 0, 0]);
    pub const I: Quaternion = Quaternion([0, 1, 0, 0]);
    pub const J: Quaternion = Quaternion([0, 0, 1, 0]);
    pub const K: Quaternion = Quaternion([0, 0, 0, 1]);

    /// The eight signed units `±1, ±i, ±j, ±k`.
    pub fn units() -> [Quaternion; 8] {
        let mut out = [Quaternion::ONE; 8];
        for (n, base) in [Self::ONE, Self::I, Self::J, Self::K].into_iter().enumerate() {
            out[2 * n] = base;
            out[2 * n + 1] = base.neg();
        }
        out
    }

    pub fn neg(self) -> Quaternion {
        Quaternion(self.0.map(|v| -v))
    }

    pub fn is_unit(self) -> bool {
        self.0.iter().map(|v| v * v).sum::<i64>() == 1
    }

    pub fn mul(self, o: Quaternion) -> Quaternion {
        let [a1, b1, c1, d1] = self.0;
        let [a2, b2, c2, d2] = o.0;
        Quaternion([
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ])
    }

    fn basis(n: usize) -> Quaternion {
        let mut v = [0; 4];
        v[n] = 1;
        Quaternion(v)
    }

    fn matrix_of(f: impl Fn(Quaternion) -> Quaternion) -> QMatrix {
        let cols: Vec<Vec<Rational>> = (0..4)
            .map(|n| f(Self::basis(n)).0.iter().map(|&v| qi(v)).collect())
            .collect();
        QMatrix::from_columns(4, &cols)
    }

    /// Matrix of `x ↦ self · x`.
    pub fn left_matrix(self) -> QMatrix {
        Self::matrix_of(|x| self.mul(x))
    }

    /// Matrix of `x ↦ x · self`.
    pub fn right_matrix(self) -> QMatrix {
        Self::matrix_of(|x| x.mul(self))
    }
}

/// Right multiplication by a signed quaternion unit, as an endomorphism field of `ℝ⁴`.
pub fn quaternion_right_mult(u: Quaternion) -> Result<EndField> {
    if !u.is_unit() {
        return Err(Error::InvalidInput(format!("{:?} is not a signed unit", u.0)));
    }
    Ok(EndField::from_constant(&u.right_matrix()))
}

/// Flat hyper-Kähler data `(J₁, J₂, J₃, G)` on `ℝ^{4n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperKahlerData {
    pub j: [QMatrix; 3],
    pub g: QMatrix,
}

impl HyperKahlerData {
    pub fn fiber_dim(&self) -> usize {
        self.g.rows()
    }

    /// `n` copies of the data, block diagonally.
    pub fn block_sum(&self, n: usize) -> HyperKahlerData {
        let rep = |m: &QMatrix| QMatrix::block_diagonal(&vec![m.clone(); n]);
        HyperKahlerData {
            j: [rep(&self.j[0]), rep(&self.j[1]), rep(&self.j[2])],
            g: rep(&self.g),
        }
    }

    /// `J_α² = −I`, `J₁J₂ = J₃` (and cyclic), `J_αᵀ G J_α = G`.
    pub fn verify(&self) -> CheckReport {
        let mut r = CheckReport::new();
        let d = self.fiber_dim();
        let minus_id = QMatrix::identity(d).scale(&-Rational::one());
        for a in 0..3 {
            let sq = &self.j[a] * &self.j[a];
            r.check(format!("J{}^2 = -I", a + 1), sq == minus_id, || {
                format!("differs at {:?}", sq.first_difference(&minus_id))
            });
        }
        for (a, b, c) in EVEN_PERMUTATIONS {
            let p = &self.j[a] * &self.j[b];
            r.check(format!("J{}J{} = J{}", a + 1, b + 1, c + 1), p == self.j[c], || {
                format!("differs at {:?}", p.first_difference(&self.j[c]))
            });
        }
        for a in 0..3 {
            let lhs = &(&self.j[a].transpose() * &self.g) * &self.j[a];
            r.check(format!("J{}^T G J{} = G", a + 1, a + 1), lhs == self.g, || {
                format!("differs at {:?}", lhs.first_difference(&self.g))
            });
        }
        r
    }
}

/// `T⁴ = ℍ/ℤ⁴` with `G = I` and `J_α` left multiplication by `i, j, k`.
pub fn hyper_kahler_torus() -> (ModelSpace, HyperKahlerData) {
    let data = HyperKahlerData {
        j: [
            Quaternion::I.left_matrix(),
            Quaternion::J.left_matrix(),
            Quaternion::K.left_matrix(),
        ],
        g: QMatrix::identity(4),
    };
    let space = ModelSpace {
        chart_dim: 4,
        topology: Topology::Torus,
    };
    (space, data)
}

/// Result of [`check_hyper_kahler_isometry`].
#[derive(Clone, Debug)]
pub struct IsometryVerdict {
    pub report: CheckReport,
    /// Order of `f`, when all algebraic checks passed.
    pub order: Option<usize>,
}

impl IsometryVerdict {
    pub fn passed(&self) -> bool {
        self.report.all_passed()
    }
}

/// Isometry, holomorphy for each `J_α`, lattice preservation and finite order.
pub fn check_hyper_kahler_isometry(
    f: &EndField,
    data: &HyperKahlerData,
    order_bound: usize,
) -> Result<IsometryVerdict> {
    let fm = f.to_constant().ok_or(Error::NonConstant("monodromy"))?;
    if fm.rows() != data.fiber_dim() {
        return Err(Error::DimensionMismatch {
            expected: data.fiber_dim(),
            found: fm.rows(),
        });
    }
    let mut r = CheckReport::new();
    let lhs = &(&fm.transpose() * &data.g) * &fm;
    r.check("f^T G f = G", lhs == data.g, || {
        let (i, j) = lhs.first_difference(&data.g).expect("differs");
        format!("entry ({},{}): lhs = {}, rhs = {}", i + 1, j + 1, lhs[(i, j)], data.g[(i, j)])
    });
    for a in 0..3 {
        let fj = &fm * &data.j[a];
        let jf = &data.j[a] * &fm;
        r.check(format!("f J{} = J{} f", a + 1, a + 1), fj == jf, || {
            let (i, j) = fj.first_difference(&jf).expect("differs");
            format!("entry ({},{}): lhs = {}, rhs = {}", i + 1, j + 1, fj[(i, j)], jf[(i, j)])
        });
    }
    r.check("f integer entries", fm.is_integral(), || "non-integer entry".into());
    let det = fm.determinant();
    r.check(
        "det f = ±1",
        det == Rational::one() || det == -Rational::one(),
        || format!("det f = {det}"),
    );
    let order = finite_order(&fm, order_bound);
    if r.all_passed() {
        let order = order.ok_or(Error::OrderBoundExceeded(order_bound))?;
        r.pass(format!("f finite order ≤ {order_bound}"));
        Ok(IsometryVerdict {
            report: r,
            order: Some(order),
        })
    } else {
        r.check(format!("f finite order ≤ {order_bound}"), order.is_some(), || {
            "no power up to the bound is the identity".into()
        });
        Ok(IsometryVerdict { report: r, order })
    }
}

/// Product 3-structure on `ℝ^{4n} × ℝ³` from hyper-Kähler data:
/// `φ_α = J_α` on the fiber, `φ_α ξ_β = ε_{αβγ} ξ_γ`, `ξ_α = ∂/∂t_α`,
/// `η_α = dt_α`, `g = G ⊕ I₃`.
pub fn product_structure(data: &HyperKahlerData) -> Result<ThreeStructure> {
    let d = data.fiber_dim();
    let m = d + 3;
    let g = Metric::from_constant(&QMatrix::block_diagonal(&[data.g.clone(), QMatrix::identity(3)]));
    let mut phi = Vec::with_capacity(3);
    for a in 0..3 {
        let mut vertical = QMatrix::zeros(3, 3);
        for b in 0..3 {
            for c in 0..3 {
                let s = levi_civita(a, b, c);
                if s != 0 {
                    // column b (image of ξ_b) has ε_{abc} in row c
                    vertical[(c, b)] = qi(s as i64);
                }
            }
        }
        phi.push(EndField::from_constant(&QMatrix::block_diagonal(&[
            data.j[a].clone(),
            vertical,
        ])));
    }
    let xi = [0, 1, 2].map(|a| VectorField::coordinate(m, d + a));
    let eta = [0, 1, 2].map(|a| KForm::dx(m, d + a));
    let phi: [EndField; 3] = phi.try_into().expect("three structures");
    ThreeStructure::from_parts(phi, xi, eta, g)
}

/// The quotient `(M^{4n} × ℝ³)/ℤ³` twisted by a hyper-Kähler isometry `f`.
pub fn mapping_torus(
    data: &HyperKahlerData,
    f: &EndField,
    order_bound: usize,
) -> Result<(ModelSpace, ThreeStructure)> {
    let verdict = check_hyper_kahler_isometry(f, data, order_bound)?;
    if let Some(item) = verdict.report.failures().next() {
        return Err(Error::NotHyperKahlerIsometry(format!(
            "{}{}",
            item.name,
            item.detail.as_ref().map(|d| format!(": {d}")).unwrap_or_default()
        )));
    }
    let fm = f.to_constant().expect("checked constant");
    let monodromy = Monodromy::new(fm, order_bound)?;
    let t = product_structure(data)?;
    let space = ModelSpace::new(data.fiber_dim() + 3, Topology::MappingTorus(monodromy))?;
    Ok((space, t))
}

fn block_sum_torus(n: usize) -> HyperKahlerData {
    hyper_kahler_torus().1.block_sum(n)
}

/// `ℝ^{4n+3}` with the standard structure.
pub fn standard_r(n: usize) -> Result<(ModelSpace, ThreeStructure)> {
    let t = product_structure(&block_sum_torus(n))?;
    Ok((ModelSpace::new(4 * n + 3, Topology::Euclidean)?, t))
}

/// The flat torus `T^{4n+3}`.
pub fn flat_torus(n: usize) -> Result<(ModelSpace, ThreeStructure)> {
    let t = product_structure(&block_sum_torus(n))?;
    Ok((ModelSpace::new(4 * n + 3, Topology::Torus)?, t))
}

/// `M⁷_f` with `f` right multiplication by `i` on `T⁴`.
pub fn m7f(order_bound: usize) -> Result<(ModelSpace, ThreeStructure)> {
    let (_, data) = hyper_kahler_torus();
    let f = quaternion_right_mult(Quaternion::I)?;
    mapping_torus(&data, &f, order_bound)
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &str = "standard7, torus7, m7f, torus{4n+3}, standard{4n+3} (n ≤ 3)";

/// Look up a builtin model by name.
pub fn builtin(name: &str, order_bound: usize) -> Result<(ModelSpace, ThreeStructure)> {
    if name == "m7f" {
        return m7f(order_bound);
    }
    let parse = |prefix: &str| -> Option<usize> {
        let dim: usize = name.strip_prefix(prefix)?.parse().ok()?;
        (dim >= 3 && (dim - 3) % 4 == 0 && dim <= 15).then(|| (dim - 3) / 4)
    };
    if let Some(n) = parse("torus") {
        return flat_torus(n);
    }
    if let Some(n) = parse("standard") {
        return standard_r(n);
    }
    Err(Error::InvalidInput(format!(
        "unknown builtin {name:?}; expected one of {BUILTIN_NAMES}"
    )))
}

/// Quotient-level checks: compact topologies need constant tensors, and a
/// mapping-torus structure must be invariant under `f ⊕ I₃`.
pub fn check_topology(space: &ModelSpace, t: &ThreeStructure) -> Result<CheckReport> {
    let mut r = CheckReport::new();
    if space.chart_dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.chart_dim(),
            found: t.dim(),
        });
    }
    if !space.is_compact() {
        return Ok(r);
    }
    r.check("constant coefficients (compact topology)", t.is_constant(), || {
        "polynomial coefficients are not periodic".into()
    });
    let Topology::MappingTorus(mono) = space.topology() else {
        return Ok(r);
    };
    if !t.is_constant() {
        r.fail("monodromy invariance", "structure is not constant");
        return Ok(r);
    }
    let fmap = mono.block_map();
    let f_end = EndField::from_constant(&fmap);
    for a in 0..3 {
        let label = a + 1;
        let pulled = t.eta(a).pullback(&fmap)?;
        r.check(format!("F* eta{label} = eta{label}"), &pulled == t.eta(a), || {
            format!("{pulled} vs {}", t.eta(a))
        });
        match fundamental_form(t.member(a)) {
            Ok(phi_form) => {
                let pulled = phi_form.pullback(&fmap)?;
                r.check(format!("F* Phi{label} = Phi{label}"), pulled == phi_form, || {
                    "pulled-back fundamental form differs".into()
                });
            }
            Err(e) => r.fail(format!("F* Phi{label} = Phi{label}"), e.to_string()),
        }
        let lhs = f_end.compose(t.phi(a))?;
        let rhs = t.phi(a).compose(&f_end)?;
        r.check(format!("F phi{label} = phi{label} F"), lhs == rhs, || {
            let (i, j, _, _) = lhs.first_difference(&rhs).expect("differs");
            format!("entry ({},{})", i + 1, j + 1)
        });
        let fx = f_end.apply(t.xi(a))?;
        r.check(format!("F xi{label} = xi{label}"), &fx == t.xi(a), || {
            "image differs".into()
        });
    }
    let gm = t.metric().to_constant().expect("constant");
    let lhs = &(&fmap.transpose() * &gm) * &fmap;
    r.check("F^T g F = g", lhs == gm, || {
        let (i, j) = lhs.first_difference(&gm).expect("differs");
        format!("entry ({},{})", i + 1, j + 1)
    });
    Ok(r)
}

/// [`check_three_cosymplectic`] followed by [`check_topology`].
pub fn check_model(
    space: &ModelSpace,
    t: &ThreeStructure,
    options: &CheckOptions,
) -> Result<CheckReport> {
    let mut r = check_three_cosymplectic(t, options)?;
    r.extend(check_topology(space, t)?);
    Ok(r)
}
