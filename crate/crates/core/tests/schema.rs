use std::path::PathBuf;

use curvelab::schema::{emit, parse, CurveKind};
use curvelab::suite::{self, Family};
use curvelab::{CurveError, CurveFile, CurveModel};
use proptest::prelude::*;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../curves")
        .join(name)
}

#[test]
fn every_fixture_parses() {
    let dir = fixture("");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let f = parse(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            f.model().unwrap();
            seen += 1;
        }
    }
    assert!(seen >= 10);
}

#[test]
fn unit_circle_file() {
    let f = parse(&fixture("circle.json")).unwrap();
    assert_eq!(f.kind, CurveKind::Trig);
    let CurveModel::Trig(c) = f.model().unwrap() else {
        panic!("expected trig")
    };
    assert_eq!(c.components().len(), 1);
}

#[test]
fn trott_file() {
    let f = parse(&fixture("trott.json")).unwrap();
    assert_eq!((f.kind, f.degree), (CurveKind::Algebraic, Some(4)));
    let CurveModel::Algebraic(c) = f.model().unwrap() else {
        panic!("expected algebraic")
    };
    // x⁴, y⁴, x²y², x²z², y²z², z⁴.
    assert_eq!(c.poly().terms().iter().filter(|m| m.c != 0.0).count(), 6);
}

#[test]
fn nodal_metadata_and_chart() {
    let f = parse(&fixture("nodal_cubic.json")).unwrap();
    assert_eq!(f.nodal.map(|n| n.total), Some(1));
    assert_eq!(f.line_at_infinity, Some([0.1, 0.2, 1.0]));
    let json: serde_json::Value = serde_json::from_str(&f.to_json()).unwrap();
    assert_eq!(json["nodal"]["N"], 1);
}

#[test]
fn malformed_files() {
    let missing = parse(&fixture("does_not_exist.json")).unwrap_err();
    assert!(matches!(missing, CurveError::Io(_)));
    let syntax = CurveFile::from_json("{\"schema_version\": 1,\n \"kind\": }").unwrap_err();
    assert!(syntax.to_string().contains("line 2"), "{syntax}");
    let kind = CurveFile::from_json(r#"{"schema_version": 1, "kind": "spline"}"#).unwrap_err();
    assert!(kind.is_schema());
    let no_comps =
        CurveFile::from_json(r#"{"schema_version": 1, "kind": "trig", "components": []}"#)
            .unwrap_err();
    assert_eq!(no_comps, CurveError::EmptyCurve);
    let mixed = r#"{"schema_version": 1, "kind": "algebraic", "degree": 3,
        "monomials": [{"i": 3, "j": 0, "k": 0, "c": 1}, {"i": 0, "j": 2, "k": 0, "c": 1}]}"#;
    assert!(matches!(
        CurveFile::from_json(mixed),
        Err(CurveError::DegreeMismatch { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn trig_files_round_trip(seed in 0u64..100_000, fam in 0usize..4, line in prop::array::uniform3(-2.0..2.0f64)) {
        let family = if fam == 0 { Family::Affine } else { Family::Crossing(fam) };
        let c = suite::random_curve(&mut suite::rng(seed), family);
        prop_assume!(line.iter().any(|v| v.abs() > 1e-3));
        let f = CurveFile::trig(&c).unwrap().with_line_at_infinity(line);
        let back = CurveFile::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.model().unwrap(), CurveModel::Trig(c));
    }

    #[test]
    fn algebraic_files_round_trip(seed in 0u64..100_000, family in 0usize..4, nodes in prop::option::of(0u32..4)) {
        let (d, a) = [(2, 2), (3, 1), (4, 0), (4, 4)][family];
        let c = suite::random_algebraic(&mut suite::rng(seed), d, a);
        let mut f = CurveFile::algebraic(&c);
        if let Some(n) = nodes {
            f = f.with_nodes(n);
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("curve.json");
        emit(&f, &path).unwrap();
        let back = parse(&path).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.model().unwrap(), CurveModel::Algebraic(c));
    }
}
