mod common;

use std::path::PathBuf;

use common::*;
use kodaira::format::{parse_lattice_config, parse_model, AnyModel};
use kodaira::lattice::shioda_tate_discr;
use kodaira::poly::Place;
use kodaira::{classify_all, KodairaType};
use proptest::prelude::*;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(path).expect("fixture exists")
}

fn table(name: &str) -> (String, Vec<String>) {
    let mf = parse_model(&fixture(name)).unwrap();
    let m = mf.finite().unwrap();
    let r = classify_all(m, 6).unwrap();
    assert!(r.complete(), "{name}");
    assert!(m.k3_from_report(&r).unwrap().k3, "{name}");
    let lines = r.fibres.iter().map(|f| f.line(&mf.var)).collect();
    (r.configuration().iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","), lines)
}

#[test]
fn char3_i14star_fixture() {
    let (conf, lines) = table("char3_i14star.model");
    assert_eq!(conf, "I1,I1,I1,I1,I14*");
    assert!(lines.contains(&"s=0 | I14* | 20 | 19 | 0".to_string()));
}

#[test]
fn char2_i18_fixture() {
    let (conf, lines) = table("char2_i18.model");
    assert_eq!(conf, "I2,I2,I2,I18");
    assert!(lines.contains(&"t=inf | I18 | 18 | 18 | 0".to_string()));
}

#[test]
fn char2_i13star_fixture() {
    let (conf, lines) = table("char2_i13star.model");
    assert_eq!(conf, "I1,I1,I1,I13*");
    assert!(lines.contains(&"t=inf | I13* | 21 | 18 | 2".to_string()));
}

#[test]
fn i13star_fixture_moves_to_origin() {
    // t -> 1/t puts the I13* fibre at 0 with the same invariants.
    let mf = parse_model(&fixture("char2_i13star.model")).unwrap();
    let m = mf.finite().unwrap().chart_at_infinity().unwrap();
    let r = kodaira::tate_classify(&m, &Place::zero(m.field())).unwrap();
    assert_eq!((r.kodaira, r.v_delta, r.components, r.wild_defect), (KodairaType::IStar(13), 21, 18, 2));
}

#[test]
fn lattice_fixtures() {
    let d = |name: &str| shioda_tate_discr(&parse_lattice_config(&fixture(name)).unwrap()).unwrap().value.to_string();
    assert_eq!(d("i16star.cfg"), "4");
    assert_eq!(d("i20.cfg"), "40");
    assert_eq!(d("i15star_far.cfg"), "3");
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn model_format_round_trips(f in field_from(SMALL), raw in raw_k3()) {
        let m = model(&f, &raw);
        let parsed = parse_model(&m.format("t")).unwrap();
        match parsed.model {
            AnyModel::Finite(back) => prop_assert_eq!(back, m),
            AnyModel::Integer(_) => prop_assert!(false, "finite model parsed as integer"),
        }
    }

    #[test]
    fn parsers_never_panic(s in "\\PC{0,64}") {
        let _ = parse_model(&s);
        let _ = parse_lattice_config(&s);
        let _ = kodaira::format::parse_field_literal(&s);
    }

    #[test]
    fn structured_garbage_never_panics(
        header in prop::sample::select(vec!["char=2 ext=1", "char=3 ext=2", "char=0", "char=2 ext=40", "var=s char=5 ext=1"]),
        body in "(a[1-6]=[-+*^t0-9 :,]{0,20}\n){0,6}",
    ) {
        let _ = parse_model(&format!("{header}\n{body}"));
    }
}
