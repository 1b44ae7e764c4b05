//! Degree-shifting operators on basic harmonic forms and an exact
//! certificate that their span is a real form of type `so(4,1)`.
//!
//! Operators act on `V = ⊕_k Ω^k_{H,000}` with the concatenated echelon
//! bases. `L_α ω = Ξ_α ∧ ω`, `Λ_α = ∗ L_α ∗`, `H = 2n − k` on degree `k`
//! and `K_α = [L_β, Λ_γ]` for even `(α, β, γ)`.

use num_traits::{One, Signed, Zero};

use crate::check::CheckReport;
use crate::cohomology::{graded_operator, GradedOperatorMatrix, HarmonicTable};
use crate::error::{Error, Result};
use crate::exterior::{ConstantMetric, KForm};
use crate::linalg::{inertia, QMatrix};
use crate::model::ModelSpace;
use crate::poly::{qi, Rational};
use crate::structures::{fundamental_form, ThreeStructure, EVEN_PERMUTATIONS};

pub const GENERATOR_NAMES: [&str; 10] = ["H", "L1", "L2", "L3", "Λ1", "Λ2", "Λ3", "K1", "K2", "K3"];

/// Killing signature `(positive, negative)` of `so(4,1)`.
pub const SO41_SIGNATURE: (usize, usize) = (4, 6);

/// `Ξ_α = Φ_α + η_β ∧ η_γ`, the horizontal part of `Φ_α`.
pub fn xi_form(t: &ThreeStructure, a: usize) -> Result<KForm> {
    let (_, b, c) = EVEN_PERMUTATIONS[a];
    let phi = fundamental_form(t.member(a))?;
    phi.add(&t.eta(b).wedge(t.eta(c))?)
}

#[derive(Clone, Debug)]
pub struct BigOperators {
    /// Offset of degree `k` inside `V`.
    pub offsets: Vec<usize>,
    pub module_dim: usize,
    pub h: QMatrix,
    pub l: [QMatrix; 3],
    pub lambda: [QMatrix; 3],
    pub k: [QMatrix; 3],
    /// Induced inner product on `V`.
    pub gram: QMatrix,
    pub graded_l: [GradedOperatorMatrix; 3],
    pub graded_lambda: [GradedOperatorMatrix; 3],
}

impl BigOperators {
    /// The ten generators in [`GENERATOR_NAMES`] order.
    pub fn generators(&self) -> Vec<QMatrix> {
        let mut out = vec![self.h.clone()];
        out.extend(self.l.iter().cloned());
        out.extend(self.lambda.iter().cloned());
        out.extend(self.k.iter().cloned());
        out
    }
}

fn assemble(op: &GradedOperatorMatrix, offsets: &[usize], n: usize) -> QMatrix {
    let mut out = QMatrix::zeros(n, n);
    for (k, block) in op.blocks.iter().enumerate() {
        let kt = k as isize + op.shift;
        if block.rows() == 0 || block.cols() == 0 || kt < 0 {
            continue;
        }
        let (r0, c0) = (offsets[kt as usize], offsets[k]);
        for i in 0..block.rows() {
            for j in 0..block.cols() {
                out[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }
    out
}

fn quaternionic_rank(t: &ThreeStructure) -> Result<usize> {
    t.quaternionic_rank().ok_or(Error::NotFourNPlusThree(t.dim()))
}

pub fn big_operators(
    space: &ModelSpace,
    t: &ThreeStructure,
    table: &HarmonicTable,
) -> Result<BigOperators> {
    if !space.is_compact() {
        return Err(Error::NonCompact);
    }
    let n = quaternionic_rank(t)?;
    let m = t.dim();
    let metric = ConstantMetric::new(t.metric())?;
    let basic = table.basic();
    let mut offsets = Vec::with_capacity(m + 2);
    let mut acc = 0;
    for s in &basic {
        offsets.push(acc);
        acc += s.dim();
    }
    offsets.push(acc);
    let total = acc;

    let mut h = QMatrix::zeros(total, total);
    for (k, s) in basic.iter().enumerate() {
        let value = qi(2 * n as i64 - k as i64);
        for i in 0..s.dim() {
            h[(offsets[k] + i, offsets[k] + i)] = value.clone();
        }
    }

    let mut graded_l = Vec::with_capacity(3);
    let mut graded_lambda = Vec::with_capacity(3);
    for a in 0..3 {
        let xi = xi_form(t, a)?;
        let label = a + 1;
        graded_l.push(graded_operator(format!("L{label}"), m, &basic, 2, |w| xi.wedge(w))?);
        graded_lambda.push(graded_operator(format!("Λ{label}"), m, &basic, -2, |w| {
            metric.star(&xi.wedge(&metric.star(w)?)?)
        })?);
    }
    let l: Vec<QMatrix> = graded_l.iter().map(|op| assemble(op, &offsets, total)).collect();
    let lambda: Vec<QMatrix> = graded_lambda
        .iter()
        .map(|op| assemble(op, &offsets, total))
        .collect();
    let k: Vec<QMatrix> = EVEN_PERMUTATIONS
        .iter()
        .map(|&(_, b, c)| l[b].commutator(&lambda[c]))
        .collect();

    let mut gram = QMatrix::zeros(total, total);
    for (deg, s) in basic.iter().enumerate() {
        let forms = table.basic_forms(deg);
        let g = metric.gram(&forms)?;
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                gram[(offsets[deg] + i, offsets[deg] + j)] = g[(i, j)].clone();
            }
        }
    }

    let arr = |v: Vec<QMatrix>| -> [QMatrix; 3] { v.try_into().expect("three operators") };
    let garr = |v: Vec<GradedOperatorMatrix>| -> [GradedOperatorMatrix; 3] {
        v.try_into().expect("three operators")
    };
    Ok(BigOperators {
        offsets,
        module_dim: total,
        h,
        l: arr(l),
        lambda: arr(lambda),
        k: arr(k),
        gram,
        graded_l: garr(graded_l),
        graded_lambda: garr(graded_lambda),
    })
}

fn flatten(m: &QMatrix) -> Vec<Rational> {
    m.entries().to_vec()
}

/// Coordinates of `v` in the span of the independent vectors `basis`.
fn express(basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let nb = basis.len();
    let mut cols = basis.to_vec();
    cols.push(v.to_vec());
    let (r, pivots) = QMatrix::from_columns(v.len(), &cols).rref();
    if pivots.contains(&nb) {
        return None;
    }
    let mut out = vec![Rational::zero(); nb];
    for (row, &p) in pivots.iter().enumerate() {
        out[p] = r[(row, nb)].clone();
    }
    Some(out)
}

/// Render `Σ c_i x_i` with the given names, e.g. `"-H"` or `"2 L1 - K3"`.
pub fn render_combination(coords: &[Rational], names: &[String]) -> String {
    let mut s = String::new();
    for (c, name) in coords.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let term = if mag.is_one() {
            name.clone()
        } else {
            format!("{mag} {name}")
        };
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(if c.is_negative() { " - " } else { " + " });
        }
        s.push_str(&term);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Structure constants of a Lie algebra: `brackets[i][j][l]` is the
/// coefficient of `b_l` in `[b_i, b_j]`.
pub type StructureConstants = Vec<Vec<Vec<Rational>>>;

/// Killing form `κ_ij = Σ_{k,l} c_ik^l c_jl^k`.
pub fn killing_form(c: &StructureConstants) -> QMatrix {
    let d = c.len();
    let mut kappa = QMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let mut acc = Rational::zero();
            for k in 0..d {
                for l in 0..d {
                    let a = &c[i][k][l];
                    let b = &c[j][l][k];
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
            }
            kappa[(i, j)] = acc;
        }
    }
    kappa
}

/// Structure constants of a family of matrices that spans a Lie algebra,
/// with the matrices taken as the basis. `None` if they are dependent or
/// their span is not closed.
pub fn matrix_structure_constants(basis: &[QMatrix]) -> Option<StructureConstants> {
    let flat: Vec<Vec<Rational>> = basis.iter().map(flatten).collect();
    if QMatrix::from_rows(flat.clone()).rank() != basis.len() {
        return None;
    }
    basis
        .iter()
        .map(|x| {
            basis
                .iter()
                .map(|y| express(&flat, &flatten(&x.commutator(y))))
                .collect()
        })
        .collect()
}

fn add_scaled(acc: &mut [Rational], v: &[Rational], c: &Rational) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        *a += c * x;
    }
}

/// `[x, [y, z]] + [y, [z, x]] + [z, [x, y]] = 0` on all basis triples.
pub fn jacobi_holds(c: &StructureConstants) -> bool {
    let d = c.len();
    let nested = |x: usize, y: usize, z: usize| -> Vec<Rational> {
        let mut out = vec![Rational::zero(); d];
        for (l, coeff) in c[y][z].iter().enumerate() {
            add_scaled(&mut out, &c[x][l], coeff);
        }
        out
    };
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let mut sum = nested(x, y, z);
                for (a, b) in sum.iter_mut().zip(nested(y, z, x)) {
                    *a += b;
                }
                for (a, b) in sum.iter_mut().zip(nested(z, x, y)) {
                    *a += b;
                }
                if sum.iter().any(|v| !v.is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

/// `κ([x, y], z) + κ(y, [x, z]) = 0` on all basis triples.
pub fn killing_invariant(c: &StructureConstants, kappa: &QMatrix) -> bool {
    let d = c.len();
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                let mut s = Rational::zero();
                for l in 0..d {
                    s += &c[x][y][l] * &kappa[(l, z)];
                    s += &c[x][z][l] * &kappa[(y, l)];
                }
                if !s.is_zero() {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct LieAlgebraReport {
    pub module_dim: usize,
    pub generators: Vec<QMatrix>,
    /// Names of the basis of the bracket-closed span; the independent
    /// generators first, then any brackets needed to close it.
    pub basis_names: Vec<String>,
    pub span_dim: usize,
    /// Whether the span of the ten generators is already closed.
    pub generators_closed: bool,
    pub structure_constants: StructureConstants,
    /// `[X_i, X_j]` for the ten generators, rendered in the basis.
    pub bracket_table: Vec<Vec<String>>,
    pub killing: QMatrix,
    pub killing_rank: usize,
    /// `(positive, negative, zero)`.
    pub signature: (usize, usize, usize),
    /// `[L_α, Λ_α]` rendered in the basis.
    pub l_lambda: [String; 3],
    pub checks: CheckReport,
}

pub fn lie_report(
    space: &ModelSpace,
    t: &ThreeStructure,
    table: &HarmonicTable,
) -> Result<LieAlgebraReport> {
    let ops = big_operators(space, t, table)?;
    Ok(lie_report_from_operators(&ops))
}

pub fn lie_report_from_operators(ops: &BigOperators) -> LieAlgebraReport {
    let generators = ops.generators();
    let mut checks = CheckReport::new();

    let mut basis: Vec<QMatrix> = Vec::new();
    let mut flat: Vec<Vec<Rational>> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    for (g, name) in generators.iter().zip(GENERATOR_NAMES) {
        let v = flatten(g);
        if express(&flat, &v).is_none() {
            flat.push(v);
            basis.push(g.clone());
            names.push(name.to_string());
        }
    }
    let independent = basis.len();
    let mut generators_closed = true;
    let cap = ops.module_dim * ops.module_dim;
    let mut i = 0;
    while i < basis.len() && basis.len() <= cap {
        for j in 0..basis.len() {
            let br = basis[i].commutator(&basis[j]);
            let v = flatten(&br);
            if express(&flat, &v).is_none() {
                generators_closed = false;
                names.push(format!("[{},{}]", names[i], names[j]));
                flat.push(v);
                basis.push(br);
            }
        }
        i += 1;
    }
    let span_dim = basis.len();
    checks.check("generators linearly independent", independent == 10, || {
        format!("rank {independent}")
    });
    checks.check("span of generators closed under bracket", generators_closed, || {
        format!("closure has dimension {span_dim}")
    });
    checks.check("dimension of bracket-closed span = 10", span_dim == 10, || {
        format!("dimension {span_dim}")
    });

    let sc = matrix_structure_constants(&basis).expect("closed independent basis");
    let coords = |x: &QMatrix| express(&flat, &flatten(x)).expect("inside the closed span");
    let bracket_table: Vec<Vec<String>> = generators
        .iter()
        .map(|x| {
            generators
                .iter()
                .map(|y| render_combination(&coords(&x.commutator(y)), &names))
                .collect()
        })
        .collect();
    let antisym = (0..basis.len()).all(|i| {
        (0..basis.len()).all(|j| {
            sc[i][j]
                .iter()
                .zip(&sc[j][i])
                .all(|(a, b)| a == &-b)
        })
    });
    checks.check("bracket table antisymmetric", antisym, || "differs".into());

    let minus_h = ops.h.scale(&-Rational::one());
    let l_lambda: [String; 3] = std::array::from_fn(|a| {
        render_combination(&coords(&ops.l[a].commutator(&ops.lambda[a])), &names)
    });
    for a in 0..3 {
        let br = ops.l[a].commutator(&ops.lambda[a]);
        checks.check(format!("[L{0},Λ{0}] = -H", a + 1), br == minus_h, || {
            format!("observed {}", l_lambda[a])
        });
    }

    checks.check("Jacobi identity", jacobi_holds(&sc), || "fails on some triple".into());
    let killing = killing_form(&sc);
    checks.check("Killing form symmetric", killing == killing.transpose(), || {
        "asymmetric".into()
    });
    checks.check("Killing form invariant", killing_invariant(&sc, &killing), || {
        "fails on some triple".into()
    });
    let killing_rank = killing.rank();
    let signature = inertia(&killing);
    checks.check("Killing form rank = 10", killing_rank == 10, || {
        format!("rank {killing_rank}")
    });
    checks.check(
        format!(
            "Killing signature = ({}+, {}-)",
            SO41_SIGNATURE.0, SO41_SIGNATURE.1
        ),
        (signature.0, signature.1, signature.2) == (SO41_SIGNATURE.0, SO41_SIGNATURE.1, 0),
        || format!("({}+, {}-, {} zero)", signature.0, signature.1, signature.2),
    );

    match ops.gram.inverse() {
        Some(gi) => {
            for a in 0..3 {
                let adj = &(&gi * &ops.l[a].transpose()) * &ops.gram;
                checks.check(
                    format!("Λ{0} adjoint to L{0}", a + 1),
                    adj == ops.lambda[a],
                    || "Λ differs from the adjoint of L".into(),
                );
            }
        }
        None => checks.fail("Λ adjoint to L", "degenerate Gram matrix"),
    }

    LieAlgebraReport {
        module_dim: ops.module_dim,
        generators,
        basis_names: names,
        span_dim,
        generators_closed,
        structure_constants: sc,
        bracket_table,
        killing,
        killing_rank,
        signature,
        l_lambda,
        checks,
    }
}
