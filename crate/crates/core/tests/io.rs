use std::sync::Arc;

use serde_json::json;
use vbalg_core::chern_simons::GradedMetric;
use vbalg_core::classify::normal_form;
use vbalg_core::io::{Body, DocErrorKind, Document};
use vbalg_core::models::{self, ModelSpec, EXAMPLES};
use vbalg_core::scalar::qr;

fn doc_of(name: &str) -> Document {
    let d = models::named_example(&ModelSpec::new(name)).unwrap();
    let mut doc = Document::new();
    doc.add_superdata(name, &d);
    doc
}

#[test]
fn every_example_round_trips() {
    for name in EXAMPLES {
        let doc = doc_of(name);
        let text = doc.emit();
        let back = Document::parse(&text).unwrap();
        assert_eq!(back, doc, "{name}");
        assert_eq!(back.emit(), text, "{name}");
    }
}

#[test]
fn all_section_kinds_round_trip() {
    let d = models::random_flat_instance(4, (2, 2, 2)).unwrap();
    let mut doc = Document::new();
    doc.add_superdata("D", &d);
    doc.add_metric("g", "D", &GradedMetric::identity(&d));
    doc.add_connection("adj", &d.algebroid().adjoint_connection());
    let nf = normal_form(&d).unwrap();
    doc.add_hom_form("sigma", d.algebroid(), &nf.sigma);
    doc.add_form("f", d.algebroid(), &vbalg_core::forms::Form::monomial(2, &[0], qr(1, 3)));
    doc.add_tuple("t", d.algebroid(), &nf.tuple);
    doc.add_certificate("c", "example", true, &["D", "t"], json!({ "note": ["1/2"] }));
    let text = doc.emit();
    let back = Document::parse(&text).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.emit(), text);
}

#[test]
fn parsing_canonicalizes() {
    let text = r#"{"sections":[
        {"kind":"ring","id":"R","unit":["2/2"],"mult":["1"],"dim":1},
        {"id":"M","kind":"module","ring":"R","dim":2,"action":[[["1","0"],["0","3/3"]]]},
        {"id":"A","kind":"algebroid","module":"M",
         "bracket":["0","0","1","0","-1","0","0","0"],"anchor":[[["0"]],[["0"]]]},
        {"id":"f","kind":"form","algebroid":"A","degree":1,"rows":1,"cols":1,"values":[[["2/6"]],[["-4/2"]]]}
    ],"format_version":"1"}"#;
    let doc = Document::parse(text).unwrap();
    let canon = doc.emit();
    assert!(canon.contains("\"1/3\"") && canon.contains("\"-2\""));
    assert!(!canon.contains("2/6"));
    assert_eq!(Document::parse(&canon).unwrap(), doc);
    match doc.get("f") {
        Some(Body::Form { form, .. }) => assert_eq!(form.values()[0][(0, 0)], qr(1, 3)),
        _ => panic!("missing form"),
    }
}

#[test]
fn dangling_reference_names_the_id() {
    let text = doc_of("aff1-type1").emit().replace("\"module\": \"module0\"", "\"module\": \"ghost\"");
    let e = Document::parse(&text).unwrap_err();
    assert_eq!(e.kind, DocErrorKind::UnresolvedReference("ghost".into()));
    assert_eq!(e.section.as_deref(), Some("algebroid0"));
    assert_eq!(e.path, "/module");
    assert!(e.to_string().contains("ghost"));
}

#[test]
fn references_must_have_the_right_kind() {
    let text = doc_of("aff1-type1").emit().replace("\"side\": \"module1\"", "\"side\": \"ring0\"");
    let e = Document::parse(&text).unwrap_err();
    assert!(matches!(e.kind, DocErrorKind::UnresolvedReference(_)));
    assert!(e.message.contains("expected a module"));
}

#[test]
fn invariant_violations_carry_section_and_path() {
    let alg = Arc::new(models::aff1());
    let mut doc = Document::new();
    doc.add_algebroid(&alg);
    let mut v = doc.to_value();
    let sections = v["sections"].as_array_mut().unwrap();
    let a = sections.iter_mut().find(|s| s["kind"] == "algebroid").unwrap();
    a["bracket"][1] = json!("1");
    let e = Document::from_value(&v).unwrap_err();
    assert_eq!(e.kind, DocErrorKind::Invariant);
    assert_eq!(e.section.as_deref(), Some("algebroid0"));
    assert_eq!(e.path, "/bracket");

    let mut v = doc_of("aff1-type1").to_value();
    let sd = v["sections"].as_array_mut().unwrap().iter_mut().find(|s| s["kind"] == "superdata").unwrap();
    sd["core_anchor"] = json!([["1", "2"]]);
    let e = Document::from_value(&v).unwrap_err();
    assert_eq!(e.kind, DocErrorKind::Syntax);
    assert_eq!(e.section.as_deref(), Some("aff1-type1"));
    assert_eq!(e.path, "/core_anchor/0");
}

#[test]
fn metrics_are_validated() {
    let d = models::aff1_type1().unwrap();
    let mut doc = Document::new();
    doc.add_superdata("D", &d);
    doc.add_metric("g", "D", &GradedMetric::identity(&d));
    let text =
        doc.emit().replace("\"gram_c\": [\n        [\n          \"1\"", "\"gram_c\": [\n        [\n          \"0\"");
    let e = Document::parse(&text).unwrap_err();
    assert_eq!(e.kind, DocErrorKind::Invariant);
    assert_eq!(e.section.as_deref(), Some("g"));
}

#[test]
fn scalars_must_be_exact_strings() {
    let mut v = doc_of("aff1-type1").to_value();
    v["sections"][0]["unit"][0] = json!(1.0);
    let e = Document::from_value(&v).unwrap_err();
    assert_eq!(e.kind, DocErrorKind::Syntax);
    assert_eq!(e.path, "/unit/0");
}

#[test]
fn version_and_duplicates_are_rejected() {
    let text = doc_of("zero").emit().replace("\"format_version\": \"1\"", "\"format_version\": \"2\"");
    assert_eq!(Document::parse(&text).unwrap_err().kind, DocErrorKind::Version);
    let mut v = doc_of("zero").to_value();
    let first = v["sections"][0].clone();
    v["sections"].as_array_mut().unwrap().push(first);
    let e = Document::from_value(&v).unwrap_err();
    assert!(e.message.contains("duplicate"));
}

#[test]
fn forward_references_resolve() {
    let mut v = doc_of("adjoint-sl2").to_value();
    v["sections"].as_array_mut().unwrap().reverse();
    let doc = Document::from_value(&v).unwrap();
    assert_eq!(doc.superdata(None).unwrap().1, doc_of("adjoint-sl2").superdata(None).unwrap().1);
}
