//! Acceptance suite. Prints one `[PASS]`/`[FAIL]` line per criterion and
//! exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cosym3_cli::commands::{cmd_betti, cmd_check, cmd_deform, cmd_liealg, load, Loaded};
use cosym3_cli::report::Results;
use cosym3_cli::Source;
use cosym3_core::cohomology::{
    averaging_projector, betti_checks, decompose, invariant_forms, small_operators, verify_ladder,
    EPSILONS,
};
use cosym3_core::exterior::{pullback_matrix, ConstantMetric};
use cosym3_core::lie::{killing_form, lie_report, matrix_structure_constants};
use cosym3_core::linalg::{binomial, inertia, QMatrix};
use cosym3_core::model::{builtin, check_model, Quaternion};
use cosym3_core::poly::{q, qi};
use cosym3_core::structures::check_quaternionic;
use cosym3_core::{
    deform_da, CheckOptions, HarmonicTable, KForm, Metric, ModelSpace, Poly, Rational,
    ThreeStructure, VectorField,
};
use num_traits::One;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Verdict = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn model(name: &str) -> (ModelSpace, ThreeStructure) {
    builtin(name, 60).expect("builtin")
}

fn loaded(name: &str) -> Loaded {
    load(&Source::Builtin(name.to_string()), 60).expect("builtin")
}

fn elapsed_under(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:.2?}, limit {limit:?}"))?;
    Ok(took)
}

// ---------------------------------------------------------------- mutants

#[derive(Clone, Debug)]
enum Site {
    Phi(usize, usize, usize),
    Xi(usize, usize),
    Eta(usize, usize),
    Metric(usize, usize),
}

fn site() -> impl Strategy<Value = Site> {
    prop_oneof![
        (0usize..3, 0usize..7, 0usize..7).prop_map(|(a, i, j)| Site::Phi(a, i, j)),
        (0usize..3, 0usize..7).prop_map(|(a, i)| Site::Xi(a, i)),
        (0usize..3, 0usize..7).prop_map(|(a, i)| Site::Eta(a, i)),
        (0usize..7, 0usize..7).prop_map(|(i, j)| Site::Metric(i, j)),
    ]
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (prop_oneof![-4i64..=-1, 1i64..=4], 1i64..=3).prop_map(|(n, d)| q(n, d))
}

fn mutate(t: &ThreeStructure, site: &Site, delta: &Rational) -> ThreeStructure {
    let bump = |p: &Poly| p + &Poly::constant(7, delta.clone());
    match *site {
        Site::Metric(i, j) => {
            let g = t.metric().clone();
            let v = bump(g.entry(i, j));
            t.with_metric(g.with_entry(i, j, v)).unwrap()
        }
        _ => t
            .map_members(|a, s| {
                let mut s = s.clone();
                match *site {
                    Site::Phi(b, i, j) if a == b => {
                        let v = bump(s.phi.entry(i, j));
                        s.phi = s.phi.with_entry(i, j, v);
                    }
                    Site::Xi(b, i) if a == b => {
                        let v = bump(s.xi.component(i));
                        s.xi = s.xi.with_component(i, v);
                    }
                    Site::Eta(b, i) if a == b => {
                        let mut comps = s.eta.components();
                        comps[i] = bump(&comps[i]);
                        s.eta = KForm::one_form(comps);
                    }
                    _ => {}
                }
                s
            })
            .unwrap(),
    }
}

// ---------------------------------------------------------------- criteria

fn criterion_1() -> Verdict {
    let start = Instant::now();
    for name in ["standard7", "torus7", "m7f"] {
        let (_, t) = model(name);
        let quaternionic = check_quaternionic(&t);
        ensure(quaternionic.len() == 18 && quaternionic.all_passed(), || {
            format!("{name}: quaternionic identities {quaternionic}")
        })?;
        let report = cmd_check(&loaded(name)).map_err(|e| e.to_string())?;
        ensure(report.passed, || format!("{name} not 3-cosymplectic"))?;
    }
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 50,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let models: Vec<_> = ["standard7", "torus7", "m7f"].iter().map(|n| (*n, model(n))).collect();
    let strategy = (0usize..3, site(), nonzero_rational());
    let rejected = std::cell::Cell::new(0usize);
    runner
        .run(&strategy, |(which, site, delta)| {
            let (name, (space, t)) = &models[which];
            let mutant = mutate(t, &site, &delta);
            let r = check_model(space, &mutant, &CheckOptions::default()).unwrap();
            prop_assert!(r.failures().next().is_some(), "{} {:?} +{} undetected", name, site, delta);
            rejected.set(rejected.get() + 1);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let rejected = rejected.get();
    ensure(rejected == 50, || format!("{rejected}/50 mutants ran"))?;
    let took = elapsed_under(start, Duration::from_secs(5))?;
    Ok(format!("3 builtins pass, 18 quaternionic identities each; 50/50 mutants rejected; {took:.2?}"))
}

fn betti_of(name: &str) -> Result<(Vec<usize>, Vec<String>), String> {
    let report = cmd_betti(&loaded(name)).map_err(|e| e.to_string())?;
    ensure(report.passed, || format!("{name}: betti report failed"))?;
    match report.results {
        Results::Betti(b) => Ok((b.b, b.notes)),
        _ => Err("wrong report kind".into()),
    }
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let (torus, _) = betti_of("torus7")?;
    let binomials: Vec<usize> = (0..=7).map(|k| binomial(7, k)).collect();
    ensure(torus == binomials, || format!("torus7 b = {torus:?}"))?;
    let (m7f, notes) = betti_of("m7f")?;
    ensure(m7f == [1, 3, 7, 13, 13, 7, 3, 1], || format!("m7f b = {m7f:?}"))?;
    ensure(m7f[2] == 7 && m7f[2] < 21 && m7f[2] != 25, || format!("b2 = {}", m7f[2]))?;
    ensure(notes.iter().any(|n| n.starts_with("b2 = 7 < 21")), || format!("notes {notes:?}"))?;
    ensure(notes.iter().any(|n| n.starts_with("b2 = 7 < 25")), || format!("notes {notes:?}"))?;
    let took = elapsed_under(start, Duration::from_secs(5))?;
    Ok(format!("torus7 {torus:?}, m7f {m7f:?}, b2 = 7 < 21 (T4×T3), ≠ 25 (K3×T3); {took:.2?}"))
}

fn tables() -> Vec<(&'static str, ThreeStructure, HarmonicTable)> {
    ["torus7", "m7f"]
        .iter()
        .map(|name| {
            let (space, t) = model(name);
            let table = decompose(&space, &t).expect("compact");
            (*name, t, table)
        })
        .collect()
}

fn at(v: &[usize], k: isize) -> usize {
    if k < 0 {
        0
    } else {
        v.get(k as usize).copied().unwrap_or(0)
    }
}

fn criterion_3(tables: &[(&str, ThreeStructure, HarmonicTable)]) -> Verdict {
    let mut ladder_items = 0;
    for (name, t, table) in tables {
        let (b, bh) = (&table.b, &table.bh);
        for k in 0..b.len() as isize {
            let rhs = at(bh, k) + 3 * at(bh, k - 1) + 3 * at(bh, k - 2) + at(bh, k - 3);
            ensure(at(b, k) == rhs, || format!("{name}: b_{k} = {} ≠ {rhs}", at(b, k)))?;
        }
        for (k, row) in table.dimension_table().iter().enumerate() {
            for (e, eps) in EPSILONS.iter().enumerate() {
                let w = eps.iter().map(|&x| x as isize).sum::<isize>();
                let expected = at(bh, k as isize - w);
                ensure(row[e] == expected, || {
                    format!("{name}: dim Ω^{k}_{eps:?} = {} ≠ {expected}", row[e])
                })?;
            }
            let total: usize = row.iter().sum();
            ensure(total == b[k], || format!("{name}: Σ dims at k={k} is {total} ≠ {}", b[k]))?;
        }
        let ladder = verify_ladder(t, table).map_err(|e| e.to_string())?;
        ensure(ladder.all_passed() && !ladder.is_empty(), || format!("{name}: ladder {ladder}"))?;
        let checks = betti_checks(table, 1);
        ensure(checks.all_passed(), || format!("{name}: {checks}"))?;
        ladder_items += ladder.len();
    }
    Ok(format!("formula and dims hold for every k on torus7 and m7f; {ladder_items} ladder bijections"))
}

fn criterion_4(tables: &[(&str, ThreeStructure, HarmonicTable)]) -> Verdict {
    let mut concrete = String::new();
    for (name, _, table) in tables {
        let (b, bh) = (&table.b, &table.bh);
        for k in (1..b.len()).step_by(2) {
            ensure(bh[k] % 4 == 0, || format!("{name}: bh_{k} = {}", bh[k]))?;
            ensure((b[k - 1] + b[k]) % 4 == 0, || format!("{name}: b_{} + b_{k}", k - 1))?;
        }
        for k in 0..=3 {
            let bound = binomial(k + 2, 2);
            ensure(b[k] >= bound, || format!("{name}: b_{k} = {} < {bound}", b[k]))?;
            if *name == "m7f" {
                concrete.push_str(&format!("{}≥{} ", b[k], bound));
            }
        }
    }
    let m7f = &tables.iter().find(|t| t.0 == "m7f").unwrap().2.b;
    ensure(m7f[..4] == [1, 3, 7, 13], || format!("m7f b = {m7f:?}"))?;
    Ok(format!("divisibility on both; m7f bounds {}", concrete.trim_end()))
}

/// `so(4,1)` as 5×5 matrices preserving `diag(1,1,1,1,−1)`.
fn reference_signature() -> (usize, usize, usize) {
    let eta = [1, 1, 1, 1, -1];
    let mut basis = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            let mut m = QMatrix::zeros(5, 5);
            m[(a, b)] = qi(eta[b]);
            m[(b, a)] = qi(-eta[a]);
            basis.push(m);
        }
    }
    let sc = matrix_structure_constants(&basis).expect("closed");
    inertia(&killing_form(&sc))
}

fn criterion_5(tables: &[(&str, ThreeStructure, HarmonicTable)]) -> Verdict {
    let start = Instant::now();
    let reference = reference_signature();
    ensure(reference == (4, 6, 0), || format!("reference signature {reference:?}"))?;
    for (name, t, table) in tables {
        let (space, _) = model(name);
        let r = lie_report(&space, t, table).map_err(|e| e.to_string())?;
        ensure(r.span_dim == 10, || format!("{name}: span dim {}", r.span_dim))?;
        ensure(r.l_lambda.iter().all(|s| s == "-H"), || format!("{name}: {:?}", r.l_lambda))?;
        ensure(r.killing_rank == 10, || format!("{name}: Killing rank {}", r.killing_rank))?;
        ensure(r.signature == reference, || format!("{name}: signature {:?}", r.signature))?;
        ensure(r.checks.all_passed(), || format!("{name}: {}", r.checks))?;
        let via_cli = cmd_liealg(&loaded(name)).map_err(|e| e.to_string())?;
        ensure(via_cli.passed, || format!("{name}: liealg report failed"))?;
    }
    let took = elapsed_under(start, Duration::from_secs(10))?;
    Ok(format!("dim 10, [Lα,Λα] = -H, rank 10, signature (4+,6-) on torus7 and m7f; {took:.2?}"))
}

fn criterion_6() -> Verdict {
    let params = [q(1, 1), q(2, 1), q(1, 2), q(7, 3)];
    for name in ["standard7", "torus7", "m7f"] {
        let (space, t) = model(name);
        for a in &params {
            let d = deform_da(&t, a).map_err(|e| e.to_string())?;
            let r = check_model(&space, &d, &CheckOptions::default()).map_err(|e| e.to_string())?;
            ensure(r.all_passed(), || format!("{name}, a = {a}: {r}"))?;
            for b in &params {
                let lhs = deform_da(&d, b).map_err(|e| e.to_string())?;
                let rhs = deform_da(&t, &(a * b)).map_err(|e| e.to_string())?;
                ensure(lhs == rhs, || format!("{name}: D({a})∘D({b}) ≠ D({})", a * b))?;
            }
            if a.is_one() {
                ensure(d == t, || format!("{name}: a = 1 changed the tensors"))?;
            }
        }
        let (report, _) = cmd_deform(&loaded(name), &q(1, 1), None).map_err(|e| e.to_string())?;
        match report.results {
            Results::Deform(r) => ensure(r.identical_to_input, || format!("{name}: a = 1 report"))?,
            _ => return Err("wrong report kind".into()),
        }
    }
    Ok("a ∈ {1, 2, 1/2, 7/3} on 3 builtins: class preserved, composition law, a = 1 identity".into())
}

// ---------------------------------------------------------------- properties

fn rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| q(n, d))
}

fn poly(nvars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, nvars), rational()), 0..=3)
        .prop_map(move |terms| Poly::from_terms(nvars, terms))
}

fn index_set(dim: usize, degree: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::sample::subsequence((0..dim).collect::<Vec<_>>(), degree)
}

fn form(dim: usize, degree: usize) -> impl Strategy<Value = KForm> {
    prop::collection::vec((index_set(dim, degree), poly(dim)), 0..=3).prop_map(move |terms| {
        terms.into_iter().fold(KForm::zero(dim, degree), |acc, (idx, c)| {
            acc.add(&KForm::monomial(dim, &idx, c)).unwrap()
        })
    })
}

fn any_form(dim: usize) -> impl Strategy<Value = KForm> {
    (0..=dim).prop_flat_map(move |k| form(dim, k))
}

fn constant_form(dim: usize, degree: usize) -> impl Strategy<Value = KForm> {
    prop::collection::vec((index_set(dim, degree), rational()), 0..=4).prop_map(move |terms| {
        terms.into_iter().fold(KForm::zero(dim, degree), |acc, (idx, c)| {
            acc.add(&KForm::monomial(dim, &idx, Poly::constant(dim, c))).unwrap()
        })
    })
}

fn vector_field(dim: usize) -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly(dim), dim).prop_map(VectorField::new)
}

fn sign(k: usize) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

const CASES: u32 = 500;

fn suite<S, F>(name: &str, strategy: S, test: F) -> Result<(), String>
where
    S: Strategy,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn criterion_7(tables: &[(&str, ThreeStructure, HarmonicTable)]) -> Verdict {
    const DIM: usize = 4;
    suite("d² = 0", any_form(DIM), |w| {
        prop_assert!(w.d().d().is_zero());
        Ok(())
    })?;
    suite("graded Leibniz", (any_form(DIM), any_form(DIM)), |(a, b)| {
        let lhs = a.wedge(&b).unwrap().d();
        let rhs = a
            .d()
            .wedge(&b)
            .unwrap()
            .add(&a.wedge(&b.d()).unwrap().scale(&sign(a.degree())))
            .unwrap();
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })?;
    let pair = (1usize..=DIM, 0usize..=DIM).prop_flat_map(|(ka, kb)| (form(DIM, ka), form(DIM, kb)));
    suite("interior antiderivation", (pair, vector_field(DIM)), |((a, b), x)| {
        let (ka, kb) = (a.degree(), b.degree());
        let lhs = a.wedge(&b).unwrap().interior(&x).unwrap();
        let first = a.interior(&x).unwrap().wedge(&b).unwrap();
        let second = if kb == 0 {
            KForm::zero(DIM, ka + kb - 1)
        } else {
            a.wedge(&b.interior(&x).unwrap()).unwrap().scale(&sign(ka))
        };
        prop_assert_eq!(lhs, first.add(&second).unwrap());
        Ok(())
    })?;
    suite(
        "Jacobi",
        (vector_field(3), vector_field(3), vector_field(3)),
        |(x, y, z)| {
            let t1 = x.bracket(&y.bracket(&z).unwrap()).unwrap();
            let t2 = y.bracket(&z.bracket(&x).unwrap()).unwrap();
            let t3 = z.bracket(&x.bracket(&y).unwrap()).unwrap();
            prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().is_zero());
            Ok(())
        },
    )?;
    suite(
        "** = id in dim 7",
        (
            (0usize..=7).prop_flat_map(|k| constant_form(7, k)),
            prop::collection::vec(nonzero_rational(), 7),
        ),
        |(w, seed)| {
            let mut m = QMatrix::zeros(7, 7);
            for (i, d) in seed.iter().enumerate() {
                m[(i, i)] = d * d;
            }
            let g = ConstantMetric::new(&Metric::from_constant(&m)).unwrap();
            prop_assert_eq!(g.star(&g.star(&w).unwrap()).unwrap(), w);
            Ok(())
        },
    )?;
    let ops: Vec<_> = tables
        .iter()
        .map(|(_, t, table)| small_operators(t, &table.harmonic).unwrap())
        .collect();
    suite("e_α commuting idempotents", (0..ops.len(), 0usize..=7), |(choice, k)| {
        let e = &ops[choice].e;
        for a in 0..3 {
            let ea = &e[a].blocks[k];
            prop_assert_eq!(&(ea * ea), ea);
            for b in 0..3 {
                prop_assert!(ea.commutator(&e[b].blocks[k]).is_zero());
            }
        }
        Ok(())
    })?;
    suite(
        "projector trace = invariant dimension",
        (prop::collection::vec(0usize..8, 1..=2), 0usize..=4),
        |(us, degree)| {
            let units = Quaternion::units();
            let blocks: Vec<QMatrix> = us.iter().map(|&u| units[u].right_matrix()).collect();
            let a = QMatrix::block_diagonal(&blocks);
            if degree > a.rows() {
                return Ok(());
            }
            let inv = invariant_forms(&a, degree, 60).unwrap();
            let p = averaging_projector(&a, degree, inv.order);
            prop_assert_eq!(p.trace(), qi(inv.dim() as i64));
            let pull = pullback_matrix(&a, degree);
            let nullity = pull.rows() - (&pull - &QMatrix::identity(pull.rows())).rank();
            prop_assert_eq!(nullity, inv.dim());
            Ok(())
        },
    )?;
    Ok(format!("7 suites × {CASES} cases: d², Leibniz, interior, Jacobi, **, e_α, projector trace"))
}

// ---------------------------------------------------------------- driver

fn run(n: usize, title: &str, f: impl FnOnce() -> Verdict) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    });
    match outcome {
        Ok(detail) => {
            println!("[PASS] criterion {n}: {title} ({detail})");
            true
        }
        Err(why) => {
            println!("[FAIL] criterion {n}: {title} ({why})");
            false
        }
    }
}

fn main() -> ExitCode {
    let mut ok = true;
    ok &= run(1, "check on builtins and single-entry mutants", criterion_1);
    ok &= run(2, "exact Betti tables", criterion_2);
    let tables = tables();
    ok &= run(3, "Betti formula, decomposition dims, ladder bijections", || criterion_3(&tables));
    ok &= run(4, "arithmetic constraints", || criterion_4(&tables));
    ok &= run(5, "so(4,1) certificate", || criterion_5(&tables));
    ok &= run(6, "deformation suite", criterion_6);
    ok &= run(7, "property suites", || criterion_7(&tables));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
