//! Harmonic forms on compact flat model quotients and their splitting into
//! the eight joint eigenspaces of `e_α = l_α ∘ λ_α`, where `l_α ω = η_α ∧ ω`
//! and `λ_α ω = i_{ξ_α} ω`.
//!
//! Harmonic forms are identified with constant forms fixed by the
//! monodromy, so every space here is a subspace of `Λ^k(ℚ^m)` in the
//! lexicographic basis. Betti numbers follow
//! `b_k = Σ_p C(3, p) dim (Λ^{k−p})^{f*}`.

use num_traits::{One, Zero};

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::exterior::{pullback_matrix, KForm};
use crate::linalg::{binomial, combinations, QMatrix, Subspace};
use crate::model::{finite_order, ModelSpace, Topology};
use crate::poly::{qi, Rational};
use crate::structures::{ThreeStructure, EVEN_PERMUTATIONS};

/// The eight eigenvalue patterns `(ε₁, ε₂, ε₃)` in report order.
pub const EPSILONS: [[u8; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 1, 0],
    [1, 0, 1],
    [0, 1, 1],
    [1, 1, 1],
];

pub fn epsilon_label(eps: [u8; 3]) -> String {
    eps.iter().map(|e| e.to_string()).collect()
}

fn epsilon_index(eps: [u8; 3]) -> usize {
    EPSILONS.iter().position(|e| *e == eps).expect("valid pattern")
}

fn weight(eps: [u8; 3]) -> usize {
    eps.iter().map(|&e| e as usize).sum()
}

/// Fixed subspace of `A*` on `Λ^q`.
#[derive(Clone, Debug)]
pub struct InvariantForms {
    pub degree: usize,
    pub order: usize,
    pub space: Subspace,
    /// Trace of the averaging projector; equals `space.dim()`.
    pub projector_trace: Rational,
}

impl InvariantForms {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis_forms(&self, chart_dim: usize) -> Vec<KForm> {
        self.space
            .basis()
            .iter()
            .map(|v| KForm::from_vector(chart_dim, self.degree, v))
            .collect()
    }
}

/// Averaging projector `P = (1/r) Σ_{j<r} (A*)^j` on `Λ^q`.
pub fn averaging_projector(a: &QMatrix, degree: usize, order: usize) -> QMatrix {
    let pull = pullback_matrix(a, degree);
    let n = pull.rows();
    let mut sum = QMatrix::zeros(n, n);
    let mut power = QMatrix::identity(n);
    for _ in 0..order {
        sum = &sum + &power;
        power = &power * &pull;
    }
    sum.scale(&qi(order as i64).recip())
}

/// Exact basis of `ker(A* − I)` on `Λ^q`, cross-validated against the trace
/// of the averaging projector and the nullity of `A* − I`.
pub fn invariant_forms(a: &QMatrix, degree: usize, order_bound: usize) -> Result<InvariantForms> {
    let order = finite_order(a, order_bound).ok_or(Error::OrderBoundExceeded(order_bound))?;
    let p = averaging_projector(a, degree, order);
    let space = Subspace::column_space(&p);
    let projector_trace = p.trace();
    if projector_trace != qi(space.dim() as i64) {
        return Err(Error::Inconsistent(format!(
            "projector trace {projector_trace} differs from image dimension {}",
            space.dim()
        )));
    }
    let pull = pullback_matrix(a, degree);
    let fixed = &pull - &QMatrix::identity(pull.rows());
    let nullity = pull.rows() - fixed.rank();
    if nullity != space.dim() {
        return Err(Error::Inconsistent(format!(
            "fixed space has dimension {nullity}, projector image {}",
            space.dim()
        )));
    }
    Ok(InvariantForms {
        degree,
        order,
        space,
        projector_trace,
    })
}

fn require_compact_constant(space: &ModelSpace, t: &ThreeStructure) -> Result<()> {
    if !space.is_compact() {
        return Err(Error::NonCompact);
    }
    if space.chart_dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.chart_dim(),
            found: t.dim(),
        });
    }
    if !t.is_constant() {
        return Err(Error::NonConstant("structure"));
    }
    Ok(())
}

/// `Ω^k_H` as a subspace of `Λ^k`.
pub fn harmonic_subspace(space: &ModelSpace, t: &ThreeStructure, k: usize) -> Result<Subspace> {
    require_compact_constant(space, t)?;
    let m = space.chart_dim();
    match space.topology() {
        Topology::Euclidean => Err(Error::NonCompact),
        Topology::Torus => Ok(Subspace::full(binomial(m, k))),
        Topology::MappingTorus(mono) => {
            Ok(invariant_forms(&mono.block_map(), k, mono.order())?.space)
        }
    }
}

/// Basis of `Ω^k_H` as forms.
pub fn harmonic_space(space: &ModelSpace, t: &ThreeStructure, k: usize) -> Result<Vec<KForm>> {
    let m = space.chart_dim();
    Ok(harmonic_subspace(space, t, k)?
        .basis()
        .iter()
        .map(|v| KForm::from_vector(m, k, v))
        .collect())
}

/// `i_{ξ_α} ω = 0` and `i_{ξ_α} dω = 0` for every `α`.
pub fn is_basic(t: &ThreeStructure, w: &KForm) -> Result<bool> {
    let dw = w.d();
    for a in 0..3 {
        let contracted = w.degree() > 0 && !w.interior(t.xi(a))?.is_zero();
        if contracted || !dw.interior(t.xi(a))?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Matrix of a linear map `Λ^k → Λ^{k'}` on constant forms, columns are the
/// images of the lexicographic basis.
pub fn form_operator_matrix<F>(m: usize, k: usize, target_degree: usize, f: F) -> Result<QMatrix>
where
    F: Fn(&KForm) -> Result<KForm>,
{
    let cols: Vec<Vec<Rational>> = combinations(m, k)
        .iter()
        .map(|idx| {
            let image = f(&KForm::basis(m, idx))?;
            if image.is_zero() {
                return Ok(vec![Rational::zero(); binomial(m, target_degree)]);
            }
            image.to_vector()
        })
        .collect::<Result<_>>()?;
    Ok(QMatrix::from_columns(binomial(m, target_degree), &cols))
}

/// Matrix of `M` from `source` to `target`, in their echelon bases. `None`
/// when some image leaves `target`.
pub fn restrict(m: &QMatrix, source: &Subspace, target: &Subspace) -> Option<QMatrix> {
    let cols: Option<Vec<Vec<Rational>>> = source
        .basis()
        .iter()
        .map(|v| target.coordinates(&m.mul_vec(v)))
        .collect();
    Some(QMatrix::from_columns(target.dim(), &cols?))
}

/// Per-degree matrices of a graded operator restricted to a graded family
/// of subspaces. `blocks[k]` maps degree `k` to degree `k + shift`; blocks
/// that leave the degree range are `0 × dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedOperatorMatrix {
    pub name: String,
    pub shift: isize,
    pub blocks: Vec<QMatrix>,
}

fn target_degree(k: usize, shift: isize, top: usize) -> Option<usize> {
    let d = k as isize + shift;
    (0..=top as isize).contains(&d).then_some(d as usize)
}

/// Build a graded operator on the given spaces; fails if some degree's image
/// is not contained in the target space.
pub fn graded_operator<F>(
    name: impl Into<String>,
    m: usize,
    spaces: &[Subspace],
    shift: isize,
    f: F,
) -> Result<GradedOperatorMatrix>
where
    F: Fn(&KForm) -> Result<KForm>,
{
    let name = name.into();
    let mut blocks = Vec::with_capacity(spaces.len());
    for (k, src) in spaces.iter().enumerate() {
        let Some(kt) = target_degree(k, shift, m) else {
            blocks.push(QMatrix::zeros(0, src.dim()));
            continue;
        };
        let full = form_operator_matrix(m, k, kt, &f)?;
        let block = restrict(&full, src, &spaces[kt]).ok_or_else(|| {
            Error::Inconsistent(format!(
                "{name} does not preserve the chosen spaces in degree {k}"
            ))
        })?;
        blocks.push(block);
    }
    Ok(GradedOperatorMatrix {
        name,
        shift,
        blocks,
    })
}

/// `l_α`, `λ_α` and `e_α` on `Ω^*_H`.
#[derive(Clone, Debug)]
pub struct SmallOperators {
    pub l: [GradedOperatorMatrix; 3],
    pub lambda: [GradedOperatorMatrix; 3],
    pub e: [GradedOperatorMatrix; 3],
}

fn e_op<'a>(t: &'a ThreeStructure, a: usize) -> impl Fn(&KForm) -> Result<KForm> + 'a {
    move |w| {
        if w.degree() == 0 {
            return Ok(KForm::zero(w.dim(), 0));
        }
        t.eta(a).wedge(&w.interior(t.xi(a))?)
    }
}

pub fn small_operators(t: &ThreeStructure, harmonic: &[Subspace]) -> Result<SmallOperators> {
    let m = t.dim();
    let build = |a: usize| -> Result<(GradedOperatorMatrix, GradedOperatorMatrix, GradedOperatorMatrix)> {
        let label = a + 1;
        let l = graded_operator(format!("l{label}"), m, harmonic, 1, |w| t.eta(a).wedge(w))?;
        let lambda = graded_operator(format!("lambda{label}"), m, harmonic, -1, |w| {
            w.interior(t.xi(a))
        })?;
        let e = graded_operator(format!("e{label}"), m, harmonic, 0, e_op(t, a))?;
        Ok((l, lambda, e))
    };
    let (l1, g1, e1) = build(0)?;
    let (l2, g2, e2) = build(1)?;
    let (l3, g3, e3) = build(2)?;
    Ok(SmallOperators {
        l: [l1, l2, l3],
        lambda: [g1, g2, g3],
        e: [e1, e2, e3],
    })
}

/// Harmonic spaces per degree and their eigenspace splitting.
#[derive(Clone, Debug)]
pub struct HarmonicTable {
    pub chart_dim: usize,
    /// `Ω^k_H`, `k = 0..=m`.
    pub harmonic: Vec<Subspace>,
    /// `components[k][i]` is `Ω^k_{H,ε}` for `ε = EPSILONS[i]`.
    pub components: Vec<Vec<Subspace>>,
    pub b: Vec<usize>,
    pub bh: Vec<usize>,
    /// Structural identities established while decomposing.
    pub checks: CheckReport,
}

impl HarmonicTable {
    pub fn component(&self, k: usize, eps: [u8; 3]) -> &Subspace {
        &self.components[k][epsilon_index(eps)]
    }

    /// `Ω^k_{H,000}` for every degree.
    pub fn basic(&self) -> Vec<Subspace> {
        self.components.iter().map(|c| c[0].clone()).collect()
    }

    pub fn basic_forms(&self, k: usize) -> Vec<KForm> {
        self.components[k][0]
            .basis()
            .iter()
            .map(|v| KForm::from_vector(self.chart_dim, k, v))
            .collect()
    }

    /// `dim Ω^k_{H,ε}` rows by degree, columns in [`EPSILONS`] order.
    pub fn dimension_table(&self) -> Vec<[usize; 8]> {
        self.components
            .iter()
            .map(|c| std::array::from_fn(|i| c[i].dim()))
            .collect()
    }
}

/// Constant k-forms annihilated by every `i_{ξ_α}`.
fn basic_constant_forms(t: &ThreeStructure, k: usize) -> Result<Subspace> {
    let m = t.dim();
    let n = binomial(m, k);
    if k == 0 {
        return Ok(Subspace::full(1));
    }
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for a in 0..3 {
        let mat = form_operator_matrix(m, k, k - 1, |w| w.interior(t.xi(a)))?;
        rows.extend((0..mat.rows()).map(|i| mat.row(i).to_vec()));
    }
    let stacked = QMatrix::from_rows(rows);
    Ok(Subspace::span(n, &stacked.nullspace()))
}

/// Joint eigenspaces of `e₁, e₂, e₃` on every `Ω^k_H`.
pub fn decompose(space: &ModelSpace, t: &ThreeStructure) -> Result<HarmonicTable> {
    require_compact_constant(space, t)?;
    let m = space.chart_dim();
    let harmonic: Vec<Subspace> = (0..=m)
        .map(|k| harmonic_subspace(space, t, k))
        .collect::<Result<_>>()?;
    let ops = small_operators(t, &harmonic)?;
    let mut checks = CheckReport::new();
    let mut components = Vec::with_capacity(m + 1);
    for k in 0..=m {
        let h = &harmonic[k];
        let id = QMatrix::identity(h.dim());
        let e: Vec<&QMatrix> = ops.e.iter().map(|op| &op.blocks[k]).collect();
        for a in 0..3 {
            if &(e[a] * e[a]) != e[a] {
                return Err(Error::Inconsistent(format!("e{}^2 != e{} in degree {k}", a + 1, a + 1)));
            }
        }
        for (a, b, _) in EVEN_PERMUTATIONS {
            if !e[a].commutator(e[b]).is_zero() {
                return Err(Error::Inconsistent(format!(
                    "e{} and e{} do not commute in degree {k}",
                    a + 1,
                    b + 1
                )));
            }
        }
        let mut row = Vec::with_capacity(8);
        for eps in EPSILONS {
            let mut joint = Subspace::full(h.dim());
            for a in 0..3 {
                let shifted = e[a] - &id.scale(&qi(eps[a] as i64));
                let kernel = Subspace::span(h.dim(), &shifted.nullspace());
                joint = joint.intersect(&kernel);
            }
            let ambient: Vec<Vec<Rational>> = joint.basis().iter().map(|c| h.combine(c)).collect();
            row.push(Subspace::span(h.ambient(), &ambient));
        }
        let total: usize = row.iter().map(Subspace::dim).sum();
        if total != h.dim() {
            return Err(Error::Inconsistent(format!(
                "eigenspaces in degree {k} have total dimension {total}, expected {}",
                h.dim()
            )));
        }
        let basic = basic_constant_forms(t, k)?.intersect(h);
        checks.check(
            format!("Ω^{k}_H,000 = harmonic ∩ basic"),
            basic == row[0],
            || format!("dim {} vs {}", row[0].dim(), basic.dim()),
        );
        components.push(row);
    }
    let b: Vec<usize> = harmonic.iter().map(Subspace::dim).collect();
    let bh: Vec<usize> = components.iter().map(|c| c[0].dim()).collect();
    for k in 0..=m {
        for (i, eps) in EPSILONS.iter().enumerate() {
            let w = weight(*eps);
            let expected = if k >= w { bh[k - w] } else { 0 };
            let found = components[k][i].dim();
            checks.check(
                format!("dim Ω^{k}_H,{} = bh_{}", epsilon_label(*eps), k as isize - w as isize),
                found == expected,
                || format!("{found} vs {expected}"),
            );
        }
    }
    Ok(HarmonicTable {
        chart_dim: m,
        harmonic,
        components,
        b,
        bh,
        checks,
    })
}

/// Each `l_α: Ω^k_{H,ε} → Ω^{k+1}_{H,ε+e_α}` (with `ε_α = 0`) is a bijection.
pub fn verify_ladder(t: &ThreeStructure, table: &HarmonicTable) -> Result<CheckReport> {
    let m = table.chart_dim;
    let mut r = CheckReport::new();
    for k in 0..m {
        for eps in EPSILONS {
            for a in 0..3 {
                if eps[a] == 1 {
                    continue;
                }
                let mut up = eps;
                up[a] = 1;
                let src = table.component(k, eps);
                let dst = table.component(k + 1, up);
                let full = form_operator_matrix(m, k, k + 1, |w| t.eta(a).wedge(w))?;
                let name = format!(
                    "l{}: Ω^{k}_{} → Ω^{}_{}",
                    a + 1,
                    epsilon_label(eps),
                    k + 1,
                    epsilon_label(up)
                );
                match restrict(&full, src, dst) {
                    None => r.fail(name, "image leaves the target component"),
                    Some(block) => {
                        let rank = block.rank();
                        r.check(name, rank == src.dim() && rank == dst.dim(), || {
                            format!("rank {rank}, dims {} → {}", src.dim(), dst.dim())
                        });
                    }
                }
            }
        }
    }
    Ok(r)
}

/// Arithmetic consequences of the decomposition for a space of dimension `4n + 3`.
pub fn betti_checks(table: &HarmonicTable, n: usize) -> CheckReport {
    let mut r = CheckReport::new();
    let b = &table.b;
    let bh = &table.bh;
    let m = table.chart_dim;
    let bh_at = |k: isize| if k < 0 { 0 } else { bh[k as usize] };
    for k in 0..=m {
        let ki = k as isize;
        let rhs = bh_at(ki) + 3 * bh_at(ki - 1) + 3 * bh_at(ki - 2) + bh_at(ki - 3);
        r.check(
            format!("b_{k} = bh_{k} + 3 bh_{} + 3 bh_{} + bh_{}", ki - 1, ki - 2, ki - 3),
            b[k] == rhs,
            || format!("{} vs {rhs}", b[k]),
        );
    }
    for k in 0..=m {
        let sum: usize = table.components[k].iter().map(Subspace::dim).sum();
        r.check(format!("Σ_ε dim Ω^{k}_H,ε = b_{k}"), sum == b[k], || {
            format!("{sum} vs {}", b[k])
        });
    }
    for k in (1..=m).step_by(2) {
        r.check(format!("4 | bh_{k}"), bh[k] % 4 == 0, || format!("bh_{k} = {}", bh[k]));
        let s = b[k - 1] + b[k];
        r.check(format!("4 | b_{} + b_{k}", k - 1), s % 4 == 0, || format!("sum = {s}"));
    }
    for k in 0..=(2 * n + 1).min(m) {
        let bound = binomial(k + 2, 2);
        r.check(format!("b_{k} ≥ C({},2) = {bound}", k + 2), b[k] >= bound, || {
            format!("b_{k} = {}", b[k])
        });
    }
    for k in 0..=n {
        let bound = binomial(k + 2, 2);
        if 2 * k <= m {
            r.check(
                format!("b_{} ≥ C({},2) = {bound} (weaker even-degree bound)", 2 * k, k + 2),
                b[2 * k] >= bound,
                || format!("b_{} = {}", 2 * k, b[2 * k]),
            );
        }
    }
    for k in 0..=m {
        r.check(format!("b_{k} = b_{}", m - k), b[k] == b[m - k], || {
            format!("{} vs {}", b[k], b[m - k])
        });
    }
    let euler: isize = b
        .iter()
        .enumerate()
        .map(|(k, &v)| if k % 2 == 0 { v as isize } else { -(v as isize) })
        .sum();
    r.check("Euler characteristic = 0", euler == 0, || format!("χ = {euler}"));
    r
}

/// Result of [`quaternion_module`].
#[derive(Clone, Debug)]
pub struct QuaternionModuleVerdict {
    pub degree: usize,
    pub dim: usize,
    /// `I_α` in the echelon basis of `Ω^k_{H,000}`.
    pub actions: Vec<QMatrix>,
    pub report: CheckReport,
}

/// Slotwise `φ_α`-pullback `I_α` on `Ω^k_{H,000}` for odd `k`: checks
/// `I_α² = −1`, `I_α I_β = −I_γ`, and certifies `4 | dim` by building a
/// basis of the form `v, I₁v, I₂v, I₃v`.
pub fn quaternion_module(
    t: &ThreeStructure,
    table: &HarmonicTable,
    k: usize,
) -> Result<QuaternionModuleVerdict> {
    if k % 2 == 0 {
        return Err(Error::InvalidInput(format!("degree {k} is even")));
    }
    let basic = &table.components[k][0];
    let dim = basic.dim();
    let mut r = CheckReport::new();
    let mut actions = Vec::with_capacity(3);
    for a in 0..3 {
        let phi = t.phi(a).to_constant().ok_or(Error::NonConstant("phi"))?;
        let full = pullback_matrix(&phi, k);
        match restrict(&full, basic, basic) {
            Some(block) => {
                r.pass(format!("I{} preserves Ω^{k}_H,000", a + 1));
                actions.push(block);
            }
            None => {
                r.fail(format!("I{} preserves Ω^{k}_H,000", a + 1), "image leaves the space");
            }
        }
    }
    if actions.len() == 3 {
        let minus = QMatrix::identity(dim).scale(&-Rational::one());
        for a in 0..3 {
            let sq = &actions[a] * &actions[a];
            r.check(format!("I{}^2 = -1", a + 1), sq == minus, || "differs".into());
        }
        for (a, b, c) in EVEN_PERMUTATIONS {
            let p = &actions[a] * &actions[b];
            let target = actions[c].scale(&-Rational::one());
            r.check(format!("I{} I{} = -I{}", a + 1, b + 1, c + 1), p == target, || {
                "differs".into()
            });
        }
        let mut spanned = Subspace::zero(dim);
        let mut ok = true;
        let id = QMatrix::identity(dim);
        while spanned.dim() < dim {
            let v = (0..dim)
                .map(|i| id.column(i))
                .find(|v| !spanned.contains(v))
                .expect("proper subspace misses a basis vector");
            let mut vecs: Vec<Vec<Rational>> = spanned.basis().to_vec();
            vecs.push(v.clone());
            vecs.extend(actions.iter().map(|i| i.mul_vec(&v)));
            let next = Subspace::span(dim, &vecs);
            if next.dim() != spanned.dim() + 4 {
                ok = false;
                break;
            }
            spanned = next;
        }
        r.check(format!("quaternionic basis of Ω^{k}_H,000"), ok, || {
            "some orbit {v, I1 v, I2 v, I3 v} is dependent".into()
        });
    }
    r.check(format!("4 | dim Ω^{k}_H,000"), dim % 4 == 0, || format!("dim = {dim}"));
    Ok(QuaternionModuleVerdict {
        degree: k,
        dim,
        actions,
        report: r,
    })
}
