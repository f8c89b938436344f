//! Every JSON output validates against the documented schemas.

use biassoc::cli::run;
use biassoc::multiplihedron::enumerate_diaphragms;
use biassoc::prop::PropTerm;
use serde_json::{json, Value};

const SCHEMA: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../docs/schemas/biassoc.schema.json"
));

fn validate(def: &str, doc: &Value) {
    let mut schema: Value = serde_json::from_str(SCHEMA).unwrap();
    assert!(schema["$defs"].get(def).is_some(), "no schema named {def}");
    schema["$ref"] = json!(format!("#/$defs/{def}"));
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator
        .iter_errors(doc)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "{def}: {errors:#?}\n{doc}");
}

fn cli_json(args: &str) -> Value {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("biassoc").chain(args.split_whitespace()),
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0, "{args}: {}", String::from_utf8_lossy(&err));
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn enumerations_match_their_schema() {
    for family in ["perm", "biperm", "assoc", "biassoc", "multipl"] {
        for (m, n) in [(1, 1), (3, 1), (2, 3), (4, 2)] {
            let args = match family {
                "perm" | "assoc" | "multipl" => {
                    format!("enumerate --family {family} -m {m} --format json")
                }
                _ => format!("enumerate --family {family} -m {m} -n {n} --format json"),
            };
            let doc = cli_json(&args);
            assert_eq!(
                doc["count"].as_u64().unwrap() as usize,
                doc["elements"].as_array().unwrap().len()
            );
            validate("enumeration", &doc);
        }
    }
}

#[test]
fn posets_and_fvectors_match_their_schema() {
    for family in ["biperm -n 2", "biassoc -n 2", "assoc", "multipl"] {
        validate(
            "poset",
            &cli_json(&format!("hasse --family {family} -m 3 --format json")),
        );
        validate(
            "fvector",
            &cli_json(&format!("fvector --family {family} -m 3 --format json")),
        );
    }
}

#[test]
fn codec_and_term_outputs_match_their_schema() {
    let pair = "((* *)3 *)1 ~ (* *)2";
    let (mut out, mut err) = (Vec::new(), Vec::new());
    for (verb, def) in [("varpi", "term"), ("encode", "bipartition")] {
        let mut args = vec!["biassoc", verb, pair, "--format", "json"];
        if verb == "encode" {
            args.push("--gamma");
        }
        out.clear();
        assert_eq!(
            run(args, &mut out, &mut err),
            0,
            "{}",
            String::from_utf8_lossy(&err)
        );
        validate(def, &serde_json::from_slice(&out).unwrap());
    }
    validate("term", &PropTerm::unit().to_json());
    validate("term", &PropTerm::generator(2, 3).unwrap().to_json());
}

#[test]
fn diaphragms_match_their_schema() {
    for m in 1..=4 {
        for d in enumerate_diaphragms(m).unwrap() {
            validate("diaphragm", &d.to_json());
        }
    }
}
