use cosym3_cli::StructureFile;
use cosym3_core::model::{builtin, ModelSpace, Topology};
use cosym3_core::poly::q;
use cosym3_core::{deform_da, EndField, KForm, Metric, Poly, Rational, ThreeStructure, VectorField};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

fn poly(nvars: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, nvars), rational()), 0..3)
        .prop_map(move |terms| Poly::from_terms(nvars, terms))
}

fn row(dim: usize) -> impl Strategy<Value = Vec<Poly>> {
    prop::collection::vec(poly(dim), dim)
}

fn square(dim: usize) -> impl Strategy<Value = Vec<Vec<Poly>>> {
    prop::collection::vec(row(dim), dim)
}

fn euclidean_structure(dim: usize) -> impl Strategy<Value = ThreeStructure> {
    (
        prop::collection::vec((square(dim), row(dim), row(dim)), 3),
        square(dim),
    )
        .prop_map(|(parts, g)| {
            let mut phi = Vec::new();
            let mut xi = Vec::new();
            let mut eta = Vec::new();
            for (p, x, e) in parts {
                phi.push(EndField::new(p));
                xi.push(VectorField::new(x));
                eta.push(KForm::one_form(e));
            }
            ThreeStructure::from_parts(
                phi.try_into().unwrap(),
                xi.try_into().unwrap(),
                eta.try_into().unwrap(),
                Metric::new(g),
            )
            .unwrap()
        })
}

fn assert_round_trip(space: &ModelSpace, t: &ThreeStructure) {
    let file = StructureFile::from_model(space, t);
    let text = file.to_json();
    let parsed = StructureFile::from_json(&text).unwrap();
    assert_eq!(parsed, file);
    let (space2, t2) = parsed.to_model(60).unwrap();
    assert_eq!(&t2, t);
    assert_eq!(space2.topology_name(), space.topology_name());
    assert_eq!(StructureFile::from_model(&space2, &t2).to_json(), text);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn euclidean_files_round_trip(t in euclidean_structure(3)) {
        let space = ModelSpace::new(3, Topology::Euclidean).unwrap();
        assert_round_trip(&space, &t);
    }

    #[test]
    fn deformed_compact_files_round_trip(
        name in prop::sample::select(vec!["torus7", "m7f", "standard7"]),
        p in 1i64..20,
        d in 1i64..20,
    ) {
        let (space, t) = builtin(name, 60).unwrap();
        let a = q(p, d);
        let d = deform_da(&t, &a).unwrap();
        assert_round_trip(&space, &d);
    }
}

#[test]
fn zero_denominator_is_rejected() {
    assert!(cosym3_cli::file_format::parse_rational("1/0").is_err());
    assert!(cosym3_cli::file_format::parse_rational("x").is_err());
    assert_eq!(
        cosym3_cli::file_format::parse_rational("-4/6").unwrap().to_string(),
        "-2/3"
    );
}

#[test]
fn non_constant_compact_input_is_rejected() {
    let (space, t) = builtin("torus7", 60).unwrap();
    let mut file = StructureFile::from_model(&space, &t);
    let mut e = vec![0u32; 7];
    e[0] = 1;
    file.metric[0][0].push(cosym3_cli::file_format::Term { c: "1".into(), e });
    assert!(matches!(file.to_model(60), Err(cosym3_cli::CliError::Parse(_))));
}

#[test]
fn unknown_fields_are_rejected() {
    let (space, t) = builtin("torus7", 60).unwrap();
    let text = StructureFile::from_model(&space, &t).to_json();
    let broken = text.replacen("\"dim\"", "\"extra\": 1,\n  \"dim\"", 1);
    assert!(StructureFile::from_json(&broken).is_err());
}
