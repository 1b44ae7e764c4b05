//! Almost contact metric structures and 3-structures, with exact checks of
//! every pointwise and differential identity of the 3-cosymplectic class.
//!
//! Conventions: `(φX)^i = Σ_j φ_ij X^j`; `η ⊗ ξ` is the endomorphism
//! `X ↦ η(X) ξ`; the fundamental form is `Φ(X, Y) = g(X, φY)` with
//! `Φ = Σ_{i<j} Φ_ij dx_i ∧ dx_j` (determinant wedge convention).

use num_traits::{One, Signed, Zero};

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::exterior::{first_vector_difference, format_indices, EndField, KForm, Metric, VectorField};
use crate::poly::{Poly, Rational};

/// The three even permutations of `{1, 2, 3}`, 0-based.
pub const EVEN_PERMUTATIONS: [(usize, usize, usize); 3] = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];

/// Sign of the permutation `(a, b, c)` of `{0, 1, 2}`, and 0 on repeats.
pub fn levi_civita(a: usize, b: usize, c: usize) -> i32 {
    if a == b || b == c || a == c {
        return 0;
    }
    if EVEN_PERMUTATIONS.contains(&(a, b, c)) {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostContactMetricStructure {
    pub phi: EndField,
    pub xi: VectorField,
    pub eta: KForm,
    pub g: Metric,
}

impl AlmostContactMetricStructure {
    pub fn new(phi: EndField, xi: VectorField, eta: KForm, g: Metric) -> Result<Self> {
        let dim = phi.dim();
        for found in [xi.dim(), eta.dim(), g.dim()] {
            if found != dim {
                return Err(Error::DimensionMismatch { expected: dim, found });
            }
        }
        if eta.degree() != 1 {
            return Err(Error::InvalidInput(format!(
                "eta must be a 1-form, got degree {}",
                eta.degree()
            )));
        }
        Ok(AlmostContactMetricStructure { phi, xi, eta, g })
    }

    pub fn dim(&self) -> usize {
        self.phi.dim()
    }

    pub fn is_constant(&self) -> bool {
        self.phi.is_constant() && self.xi.is_constant() && self.eta.is_constant() && self.g.is_constant()
    }

    /// `Φ_ij = g(e_i, φ e_j)` as a matrix of polynomials.
    pub fn fundamental_matrix(&self) -> Vec<Vec<Poly>> {
        self.g
            .as_end_field()
            .compose(&self.phi)
            .expect("dimensions checked at construction")
            .entries()
            .to_vec()
    }
}

fn show_entry(i: usize, j: usize, lhs: &Poly, rhs: &Poly) -> String {
    format!("entry ({},{}): lhs = {lhs}, rhs = {rhs}", i + 1, j + 1)
}

fn end_diff(lhs: &EndField, rhs: &EndField) -> Option<String> {
    lhs.first_difference(rhs)
        .map(|(i, j, a, b)| show_entry(i, j, &a, &b))
}

fn vec_diff(lhs: &VectorField, rhs: &VectorField) -> Option<String> {
    first_vector_difference(lhs, rhs)
        .map(|(i, a, b)| format!("component {}: lhs = {a}, rhs = {b}", i + 1))
}

fn form_diff(lhs: &KForm, rhs: &KForm) -> Option<String> {
    lhs.first_difference(rhs).map(|(idx, a, b)| {
        format!("coefficient of {}: lhs = {a}, rhs = {b}", format_indices(&idx))
    })
}

fn nonzero_form(w: &KForm) -> Option<String> {
    w.terms()
        .next()
        .map(|(idx, c)| format!("coefficient of {} is {c}", format_indices(idx)))
}

/// Fundamental 2-form `Φ = g(·, φ·)`; fails if `g φ` is not antisymmetric.
pub fn fundamental_form(s: &AlmostContactMetricStructure) -> Result<KForm> {
    let m = s.fundamental_matrix();
    let dim = s.dim();
    for i in 0..dim {
        for j in i..dim {
            if m[i][j] != -&m[j][i] {
                return Err(Error::NotAlmostContactMetric(format!(
                    "g(X, phi Y) not antisymmetric at ({},{})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(KForm::two_form_from_matrix(&m))
}

/// `φ² = −I + η⊗ξ` and its standard consequences, for the structure labelled `label`.
pub fn check_almost_contact(s: &AlmostContactMetricStructure, label: usize) -> CheckReport {
    let mut r = CheckReport::new();
    let dim = s.dim();
    let phi2 = s.phi.compose(&s.phi).expect("same chart");
    let rhs = EndField::identity(dim)
        .scale(&-Rational::one())
        .add(&EndField::outer(&s.eta, &s.xi).expect("same chart"))
        .expect("same chart");
    r.push(
        format!("phi{label}^2 = -I + eta{label}⊗xi{label}"),
        end_diff(&phi2, &rhs),
    );
    let phixi = s.phi.apply(&s.xi).expect("same chart");
    r.push(
        format!("phi{label} xi{label} = 0"),
        vec_diff(&phixi, &VectorField::zero(dim)),
    );
    let etaphi = s.phi.precompose_form(&s.eta).expect("1-form");
    r.push(format!("eta{label} ∘ phi{label} = 0"), nonzero_form(&etaphi));
    let etaxi = s.eta.apply(&s.xi).expect("same chart");
    let one = Poly::one(dim);
    r.check(format!("eta{label}(xi{label}) = 1"), etaxi == one, || {
        format!("eta(xi) = {etaxi}")
    });
    r
}

/// `g(φX, φY) = g(X, Y) − η(X)η(Y)`, i.e. `φᵀ g φ = g − η ηᵀ`.
pub fn check_compatible(s: &AlmostContactMetricStructure, label: usize) -> CheckReport {
    let mut r = CheckReport::new();
    let g = s.g.as_end_field();
    let lhs = s
        .phi
        .transpose()
        .compose(&g)
        .and_then(|m| m.compose(&s.phi))
        .expect("same chart");
    let rhs = g
        .sub(&Metric::square_of(&s.eta).as_end_field())
        .expect("same chart");
    r.push(
        format!("g(phi{label}X, phi{label}Y) = g(X,Y) - eta{label}(X) eta{label}(Y)"),
        end_diff(&lhs, &rhs),
    );
    r
}

/// Nijenhuis torsion and normality tensor on coordinate pairs `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NijenhuisTensors {
    /// `N_φ(∂_i, ∂_j)` for every `i < j`.
    pub torsion: Vec<((usize, usize), VectorField)>,
    /// `N_φ(∂_i, ∂_j) + 2 dη(∂_i, ∂_j) ξ`.
    pub normality: Vec<((usize, usize), VectorField)>,
}

impl NijenhuisTensors {
    fn first_nonzero(entries: &[((usize, usize), VectorField)]) -> Option<String> {
        entries.iter().find(|(_, v)| !v.is_zero()).map(|((i, j), v)| {
            let (k, c) = v
                .components()
                .iter()
                .enumerate()
                .find(|(_, c)| !c.is_zero())
                .expect("nonzero field");
            format!("(∂{}, ∂{}) component {} = {c}", i + 1, j + 1, k + 1)
        })
    }

    pub fn torsion_failure(&self) -> Option<String> {
        Self::first_nonzero(&self.torsion)
    }

    pub fn normality_failure(&self) -> Option<String> {
        Self::first_nonzero(&self.normality)
    }

    pub fn torsion_vanishes(&self) -> bool {
        self.torsion.iter().all(|(_, v)| v.is_zero())
    }

    pub fn normality_vanishes(&self) -> bool {
        self.normality.iter().all(|(_, v)| v.is_zero())
    }
}

/// `N_φ(X,Y) = φ²[X,Y] + [φX,φY] − φ[φX,Y] − φ[X,φY]` on coordinate fields.
pub fn nijenhuis(phi: &EndField, eta: &KForm, xi: &VectorField) -> Result<NijenhuisTensors> {
    let dim = phi.dim();
    if eta.dim() != dim || xi.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: if eta.dim() != dim { eta.dim() } else { xi.dim() },
        });
    }
    let phi2 = phi.compose(phi)?;
    let deta = eta.d();
    let mut torsion = Vec::new();
    let mut normality = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            let x = VectorField::coordinate(dim, i);
            let y = VectorField::coordinate(dim, j);
            let px = phi.column(i);
            let py = phi.column(j);
            let n = phi2
                .apply(&x.bracket(&y)?)?
                .add(&px.bracket(&py)?)?
                .sub(&phi.apply(&px.bracket(&y)?)?)?
                .sub(&phi.apply(&x.bracket(&py)?)?)?;
            let c = deta.coefficient(&[i, j]);
            let two = Poly::constant(dim, Rational::from_integer(2.into()));
            let correction = VectorField::new(
                xi.components().iter().map(|v| &(&two * &c) * v).collect(),
            );
            normality.push(((i, j), n.add(&correction)?));
            torsion.push(((i, j), n));
        }
    }
    Ok(NijenhuisTensors { torsion, normality })
}

/// Three almost contact metric structures sharing one metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreeStructure {
    members: [AlmostContactMetricStructure; 3],
}

impl ThreeStructure {
    pub fn new(members: [AlmostContactMetricStructure; 3]) -> Result<Self> {
        let dim = members[0].dim();
        for m in &members[1..] {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.dim() });
            }
            if m.g != members[0].g {
                return Err(Error::InvalidInput(
                    "the three structures must share one metric".into(),
                ));
            }
        }
        Ok(ThreeStructure { members })
    }

    /// Build from the three (φ, ξ, η) triples and the shared metric.
    pub fn from_parts(
        phi: [EndField; 3],
        xi: [VectorField; 3],
        eta: [KForm; 3],
        g: Metric,
    ) -> Result<Self> {
        let [p1, p2, p3] = phi;
        let [x1, x2, x3] = xi;
        let [e1, e2, e3] = eta;
        Self::new([
            AlmostContactMetricStructure::new(p1, x1, e1, g.clone())?,
            AlmostContactMetricStructure::new(p2, x2, e2, g.clone())?,
            AlmostContactMetricStructure::new(p3, x3, e3, g)?,
        ])
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    /// `n` with `dim = 4n + 3`, or `None` when the dimension has another form.
    pub fn quaternionic_rank(&self) -> Option<usize> {
        let m = self.dim();
        (m >= 3 && (m - 3) % 4 == 0).then(|| (m - 3) / 4)
    }

    pub fn members(&self) -> &[AlmostContactMetricStructure; 3] {
        &self.members
    }

    pub fn member(&self, a: usize) -> &AlmostContactMetricStructure {
        &self.members[a]
    }

    pub fn metric(&self) -> &Metric {
        &self.members[0].g
    }

    pub fn phi(&self, a: usize) -> &EndField {
        &self.members[a].phi
    }

    pub fn xi(&self, a: usize) -> &VectorField {
        &self.members[a].xi
    }

    pub fn eta(&self, a: usize) -> &KForm {
        &self.members[a].eta
    }

    pub fn is_constant(&self) -> bool {
        self.members.iter().all(AlmostContactMetricStructure::is_constant)
    }

    /// Replace one member's tensors; the metric replaces the shared one.
    pub fn map_members<F>(&self, mut f: F) -> Result<ThreeStructure>
    where
        F: FnMut(usize, &AlmostContactMetricStructure) -> AlmostContactMetricStructure,
    {
        let m = [
            f(0, &self.members[0]),
            f(1, &self.members[1]),
            f(2, &self.members[2]),
        ];
        ThreeStructure::new(m)
    }

    /// Same tensors with a different shared metric. Used to build mutants and
    /// deformations; performs no validation beyond dimensions.
    pub fn with_metric(&self, g: Metric) -> Result<ThreeStructure> {
        self.map_members(|_, s| AlmostContactMetricStructure { g: g.clone(), ..s.clone() })
    }

    /// Projector `h = I − Σ ξ_α ⊗ η_α` onto the horizontal distribution.
    pub fn horizontal_projector(&self) -> EndField {
        let mut h = EndField::identity(self.dim());
        for a in 0..3 {
            h = h
                .sub(&EndField::outer(self.eta(a), self.xi(a)).expect("same chart"))
                .expect("same chart");
        }
        h
    }
}

/// All eighteen identities relating the three structures, for each even permutation.
pub fn check_quaternionic(t: &ThreeStructure) -> CheckReport {
    let mut r = CheckReport::new();
    for (a, b, c) in EVEN_PERMUTATIONS {
        let (la, lb, lc) = (a + 1, b + 1, c + 1);
        let pa = t.phi(a);
        let pb = t.phi(b);
        let pc = t.phi(c);
        let rhs1 = pa
            .compose(pb)
            .and_then(|m| m.sub(&EndField::outer(t.eta(b), t.xi(a))?))
            .expect("same chart");
        r.push(
            format!("phi{lc} = phi{la} phi{lb} - eta{lb}⊗xi{la}"),
            end_diff(pc, &rhs1),
        );
        let rhs2 = pb
            .compose(pa)
            .map(|m| m.scale(&-Rational::one()))
            .and_then(|m| m.add(&EndField::outer(t.eta(a), t.xi(b))?))
            .expect("same chart");
        r.push(
            format!("phi{lc} = -phi{lb} phi{la} + eta{la}⊗xi{lb}"),
            end_diff(pc, &rhs2),
        );
        let x1 = pa.apply(t.xi(b)).expect("same chart");
        r.push(format!("xi{lc} = phi{la} xi{lb}"), vec_diff(t.xi(c), &x1));
        let x2 = pb.apply(t.xi(a)).expect("same chart").scale(&-Rational::one());
        r.push(format!("xi{lc} = -phi{lb} xi{la}"), vec_diff(t.xi(c), &x2));
        let e1 = pb.precompose_form(t.eta(a)).expect("1-form");
        r.push(format!("eta{lc} = eta{la} ∘ phi{lb}"), form_diff(t.eta(c), &e1));
        let e2 = pa.precompose_form(t.eta(b)).expect("1-form").neg();
        r.push(format!("eta{lc} = -eta{lb} ∘ phi{la}"), form_diff(t.eta(c), &e2));
    }
    r
}

/// Options for [`check_three_cosymplectic`].
#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    /// Points at which a non-constant metric is tested for positivity.
    /// When empty, the origin is used.
    pub sample_points: Vec<Vec<Rational>>,
}

/// Metric symmetry and positivity line items.
pub fn check_metric(g: &Metric, options: &CheckOptions) -> CheckReport {
    let mut r = CheckReport::new();
    r.push(
        "g symmetric",
        g.first_asymmetry().map(|(i, j)| {
            show_entry(i, j, g.entry(i, j), g.entry(j, i))
        }),
    );
    match g.to_constant() {
        Some(m) => {
            let minors = m.leading_minors();
            let bad = minors.iter().position(|d| !d.is_positive());
            r.push(
                "g positive definite",
                bad.map(|k| format!("leading minor {} = {}", k + 1, minors[k])),
            );
        }
        None => {
            let origin = vec![vec![Rational::zero(); g.dim()]];
            let points = if options.sample_points.is_empty() {
                &origin
            } else {
                &options.sample_points
            };
            let bad = points.iter().find(|p| !g.is_positive_definite_at(p));
            r.push(
                "g positive definite (at sample points)",
                bad.map(|p| {
                    let s: Vec<String> = p.iter().map(ToString::to_string).collect();
                    format!("fails at ({})", s.join(", "))
                }),
            );
        }
    }
    r
}

/// Full 3-cosymplectic certificate. Errors before any check when the
/// dimension is not `4n + 3`.
pub fn check_three_cosymplectic(t: &ThreeStructure, options: &CheckOptions) -> Result<CheckReport> {
    if t.quaternionic_rank().is_none() {
        return Err(Error::NotFourNPlusThree(t.dim()));
    }
    let mut r = CheckReport::new();
    for (a, s) in t.members().iter().enumerate() {
        let label = a + 1;
        r.extend(check_almost_contact(s, label));
        r.extend(check_compatible(s, label));
        let phi_form = fundamental_form(s);
        r.push(
            format!("Phi{label} antisymmetric"),
            phi_form.as_ref().err().map(ToString::to_string),
        );
        r.push(format!("d eta{label} = 0"), nonzero_form(&s.eta.d()));
        r.push(
            format!("d Phi{label} = 0"),
            match &phi_form {
                Ok(w) => nonzero_form(&w.d()),
                Err(_) => Some("fundamental form undefined".into()),
            },
        );
        let n = nijenhuis(&s.phi, &s.eta, &s.xi)?;
        r.push(format!("N_phi{label} = 0"), n.torsion_failure());
        r.push(
            format!("N1(phi{label}) = N_phi{label} + 2 d eta{label} ⊗ xi{label} = 0"),
            n.normality_failure(),
        );
    }
    r.extend(check_quaternionic(t));
    for a in 0..3 {
        let label = a + 1;
        let lowered = t.metric().flat(t.xi(a))?;
        r.push(
            format!("g(xi{label}, X) = eta{label}(X)"),
            form_diff(&lowered, t.eta(a)),
        );
    }
    r.extend(check_metric(t.metric(), options));
    Ok(r)
}

/// `η_α(ξ_β)` and `g(ξ_α, ξ_β)` tables, rows indexed by `α`.
pub fn reeb_gram(t: &ThreeStructure) -> Result<(Vec<Vec<Poly>>, Vec<Vec<Poly>>)> {
    let mut eta_xi = Vec::with_capacity(3);
    let mut g_xi = Vec::with_capacity(3);
    for a in 0..3 {
        let mut er = Vec::with_capacity(3);
        let mut gr = Vec::with_capacity(3);
        for b in 0..3 {
            er.push(t.eta(a).apply(t.xi(b))?);
            gr.push(t.metric().apply(t.xi(a), t.xi(b))?);
        }
        eta_xi.push(er);
        g_xi.push(gr);
    }
    Ok((eta_xi, g_xi))
}

/// `D_a`-homothetic deformation applied to all three structures with the
/// common metric `ḡ = a g + a(a − 1) Σ_α η_α ⊗ η_α`.
pub fn deform_da(t: &ThreeStructure, a: &Rational) -> Result<ThreeStructure> {
    if !a.is_positive() {
        return Err(Error::NonPositiveParameter(a.to_string()));
    }
    let coeff = a * (a - Rational::one());
    let mut g = t.metric().scale(a);
    for b in 0..3 {
        g = g.add(&Metric::square_of(t.eta(b)).scale(&coeff))?;
    }
    let inv = a.recip();
    t.map_members(|_, s| AlmostContactMetricStructure {
        phi: s.phi.clone(),
        xi: s.xi.scale(&inv),
        eta: s.eta.scale(a),
        g: g.clone(),
    })
}
