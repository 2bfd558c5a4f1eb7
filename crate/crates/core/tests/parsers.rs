//! Parsers never panic, and the fuzz corpus seeds are all valid inputs.

use std::fs;
use std::path::PathBuf;

use proptest::prelude::*;

use logcave::formats::*;

fn run_all(text: &str) {
    let _ = parse_graph(text);
    let _ = parse_matrix(text);
    let _ = parse_arrangement(text);
    let _ = parse_ideal(text);
    let _ = parse_polytope(text);
    let _ = parse_polynomial(text);
    let _ = parse_class_json(text);
    let _ = parse_exponents(text);
}

#[test]
fn corpus_seeds_parse() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus");
    let mut seen = 0;
    for dir in fs::read_dir(&root).unwrap() {
        let dir = dir.unwrap().path();
        let target = dir.file_name().unwrap().to_string_lossy().into_owned();
        for seed in fs::read_dir(&dir).unwrap() {
            let text = fs::read_to_string(seed.unwrap().path()).unwrap();
            let ok = match target.as_str() {
                "parse_graph" => parse_graph(&text).is_ok(),
                "parse_matrix" => parse_matrix(&text).is_ok(),
                "parse_arrangement" => parse_arrangement(&text).is_ok(),
                "parse_ideal" => parse_ideal(&text).is_ok(),
                "parse_polytope" => parse_polytope(&text).is_ok(),
                "parse_polynomial" => parse_polynomial(&text).is_ok(),
                "parse_class_json" => parse_class_json(&text).is_ok(),
                "parse_exponents" => parse_exponents(&text).is_ok(),
                other => panic!("unknown target {other}"),
            };
            assert!(ok, "{target}: {text:?}");
            seen += 1;
        }
    }
    assert!(seen >= 16);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn line_formats_never_panic(text in "(p|vars|dim|#|-|/|[0-9]{1,3}| |\n){0,40}") {
        run_all(&text);
    }

    #[test]
    fn class_json_never_panics(
        n in 0usize..5, m in 0usize..5, k in 0usize..12,
        e in prop::collection::vec(-3i64..1000, 0..6),
        sparse in any::<bool>(),
    ) {
        let body = if sparse {
            let pairs: Vec<String> = e.iter().enumerate().map(|(i, v)| format!("\"{i}\":{v}")).collect();
            format!("{{{}}}", pairs.join(","))
        } else {
            format!("{e:?}")
        };
        run_all(&format!("{{\"n\":{n},\"m\":{m},\"k\":{k},\"e\":{body}}}"));
    }

    #[test]
    fn arbitrary_text_never_panics(text in "\\PC{0,80}") {
        run_all(&text);
    }
}
