use std::path::{Path, PathBuf};

use cosym3_core::cohomology::{
    betti_checks, decompose, epsilon_label, quaternion_module, verify_ladder, EPSILONS,
};
use cosym3_core::lie::lie_report;
use cosym3_core::model::{builtin, check_model, ModelSpace};
use cosym3_core::{deform_da, CheckOptions, CheckReport, Rational, ThreeStructure};
use num_traits::Signed;

use crate::error::CliError;
use crate::file_format::{parse_rational, StructureFile};
use crate::report::{
    items, BettiResults, CheckResults, DeformResults, InputEcho, LiealgResults, Report, Results,
    Signature, Versions,
};

pub const ORDER_BOUND_VAR: &str = "COSYM3_ORDER_BOUND";

/// Where a structure comes from.
#[derive(Clone, Debug)]
pub enum Source {
    Builtin(String),
    File(PathBuf),
}

pub struct Loaded {
    pub space: ModelSpace,
    pub structure: ThreeStructure,
    pub echo: InputEcho,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load(source: &Source, order_bound: usize) -> Result<Loaded, CliError> {
    let (space, structure, kind, name) = match source {
        Source::Builtin(name) => {
            let (s, t) = builtin(name, order_bound).map_err(|e| match e {
                cosym3_core::Error::InvalidInput(m) => CliError::Usage(m),
                other => other.into(),
            })?;
            (s, t, "builtin", name.clone())
        }
        Source::File(path) => {
            let file = StructureFile::from_json(&read(path)?)?;
            let (s, t) = file.to_model(order_bound)?;
            (s, t, "file", path.display().to_string())
        }
    };
    let echo = InputEcho {
        source: kind.to_string(),
        name,
        dim: space.chart_dim(),
        topology: space.topology_name().to_string(),
        order_bound,
    };
    Ok(Loaded {
        space,
        structure,
        echo,
    })
}

pub fn conventions() -> Vec<String> {
    [
        "(phi X)^i = sum_j phi_ij X^j; eta⊗xi is X ↦ eta(X) xi",
        "Phi(X,Y) = g(X, phi Y), Phi = sum_{i<j} Phi_ij dx_i∧dx_j (determinant wedge)",
        "orientation: increasing coordinate order; a∧*b = <a,b> vol_g",
        "coordinates (x1..x4n, t1, t2, t3); xi_a = d/dt_a, eta_a = dt_a on builtins",
        "J_a: left multiplication by i, j, k on H in basis (1,i,j,k); J1 J2 = J3",
        "monodromy: right multiplication, commuting with every J_a",
        "harmonic forms: constant forms fixed by the monodromy",
        "Xi_a = Phi_a + eta_b∧eta_c for even (a,b,c)",
        "epsilon classes: e_a = l_a ∘ lambda_a eigenvalues, ordered 000,100,010,001,110,101,011,111",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn report(command: &str, echo: InputEcho, passed: bool, verdict: &str, results: Results) -> Report {
    Report {
        command: command.to_string(),
        input: echo,
        versions: Versions::default(),
        conventions: conventions(),
        passed,
        verdict: verdict.to_string(),
        results,
    }
}

fn failures(r: &CheckReport) -> usize {
    r.failures().count()
}

pub fn cmd_check(loaded: &Loaded) -> Result<Report, CliError> {
    let r = check_model(&loaded.space, &loaded.structure, &CheckOptions::default())?;
    let passed = r.all_passed();
    let verdict = if passed { "3-cosymplectic" } else { "not 3-cosymplectic" };
    Ok(report(
        "check",
        loaded.echo.clone(),
        passed,
        verdict,
        Results::Check(CheckResults {
            failures: failures(&r),
            checks: items(&r),
        }),
    ))
}

fn betti_notes(b: &[usize], dim: usize) -> Vec<String> {
    if dim != 7 {
        return Vec::new();
    }
    [(21, "T4×T3"), (25, "K3×T3")]
        .iter()
        .map(|&(other, name)| {
            let rel = match b[2].cmp(&other) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            };
            format!("b2 = {} {rel} {other} = b2({name})", b[2])
        })
        .collect()
}

pub fn cmd_betti(loaded: &Loaded) -> Result<Report, CliError> {
    let (space, t) = (&loaded.space, &loaded.structure);
    if !space.is_compact() {
        return Err(cosym3_core::Error::NonCompact.into());
    }
    let n = t
        .quaternionic_rank()
        .ok_or(cosym3_core::Error::NotFourNPlusThree(t.dim()))?;
    let table = decompose(space, t)?;
    let mut r = table.checks.clone();
    r.extend(betti_checks(&table, n));
    r.extend(verify_ladder(t, &table)?);
    for k in (1..=t.dim()).step_by(2) {
        r.extend(quaternion_module(t, &table, k)?.report);
    }
    let passed = r.all_passed();
    Ok(report(
        "betti",
        loaded.echo.clone(),
        passed,
        if passed { "all cohomology identities hold" } else { "cohomology identity failed" },
        Results::Betti(BettiResults {
            b: table.b.clone(),
            bh: table.bh.clone(),
            epsilon_order: EPSILONS.iter().map(|e| epsilon_label(*e)).collect(),
            decomposition: table.dimension_table().iter().map(|r| r.to_vec()).collect(),
            notes: betti_notes(&table.b, t.dim()),
            failures: failures(&r),
            checks: items(&r),
        }),
    ))
}

pub fn parse_parameter(text: &str) -> Result<Rational, CliError> {
    let a = parse_rational(text).map_err(|_| CliError::Usage(format!("--a: not a rational: {text:?}")))?;
    if !a.is_positive() {
        return Err(CliError::Usage(format!("--a must be positive, got {a}")));
    }
    Ok(a)
}

/// Returns the report and the deformed structure file.
pub fn cmd_deform(
    loaded: &Loaded,
    a: &Rational,
    output: Option<&Path>,
) -> Result<(Report, StructureFile), CliError> {
    let deformed = deform_da(&loaded.structure, a)?;
    let file = StructureFile::from_model(&loaded.space, &deformed);
    let r = check_model(&loaded.space, &deformed, &CheckOptions::default())?;
    let passed = r.all_passed();
    let results = DeformResults {
        a: a.to_string(),
        identical_to_input: deformed == loaded.structure,
        output: output.map(|p| p.display().to_string()),
        failures: failures(&r),
        checks: items(&r),
        structure: output.is_none().then(|| file.clone()),
    };
    Ok((
        report(
            "deform",
            loaded.echo.clone(),
            passed,
            if passed { "deformed structure is 3-cosymplectic" } else { "deformed structure is not 3-cosymplectic" },
            Results::Deform(results),
        ),
        file,
    ))
}

pub fn cmd_liealg(loaded: &Loaded) -> Result<Report, CliError> {
    let (space, t) = (&loaded.space, &loaded.structure);
    if !space.is_compact() {
        return Err(cosym3_core::Error::NonCompact.into());
    }
    let table = decompose(space, t)?;
    let lr = lie_report(space, t, &table)?;
    let passed = lr.checks.all_passed();
    let d = lr.killing.rows();
    let results = LiealgResults {
        module_dim: lr.module_dim,
        generators: cosym3_core::lie::GENERATOR_NAMES.iter().map(|s| s.to_string()).collect(),
        span_dim: lr.span_dim,
        generators_closed: lr.generators_closed,
        basis: lr.basis_names.clone(),
        bracket_table: lr.bracket_table.clone(),
        killing_form: (0..d)
            .map(|i| (0..d).map(|j| lr.killing[(i, j)].to_string()).collect())
            .collect(),
        killing_rank: lr.killing_rank,
        signature: Signature {
            positive: lr.signature.0,
            negative: lr.signature.1,
            zero: lr.signature.2,
        },
        l_lambda: (0..3)
            .map(|a| format!("[L{0},Λ{0}] = {1}", a + 1, lr.l_lambda[a]))
            .collect(),
        failures: failures(&lr.checks),
        checks: items(&lr.checks),
    };
    Ok(report(
        "liealg",
        loaded.echo.clone(),
        passed,
        if passed { "so(4,1)" } else { "so(4,1) certificate failed" },
        Results::Liealg(results),
    ))
}
