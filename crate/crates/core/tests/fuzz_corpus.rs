//! Replays the fuzz corpus seeds through the parser invariants the fuzz
//! targets check, so the seeds stay meaningful without cargo-fuzz.

use std::fs;
use std::path::PathBuf;

use kklab_core::config::parse_config;
use kklab_core::exact::{format_rational, parse_rational, parse_value};
use kklab_core::graph::io::{parse_edge_list, parse_graph, parse_graph6, to_edge_list, to_graph6};

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            let bytes = fs::read(&p).unwrap();
            (p.file_name().unwrap().to_string_lossy().into_owned(), String::from_utf8(bytes).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn graph6_seeds_round_trip() {
    let mut accepted = 0;
    for (name, text) in seeds("graph6_decode") {
        if let Ok(g) = parse_graph6(&text) {
            accepted += 1;
            assert_eq!(parse_graph6(&to_graph6(&g)).unwrap(), g, "{name}");
        }
    }
    assert!(accepted >= 4);
    let petersen = parse_graph6(&fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus/graph6_decode/petersen"),
    ).unwrap())
    .unwrap();
    assert_eq!((petersen.vertex_count(), petersen.edge_count()), (10, 15));
}

#[test]
fn edge_list_seeds_round_trip() {
    let mut rejected = 0;
    for (name, text) in seeds("edge_list_parse") {
        match parse_edge_list(&text) {
            Ok(g) => {
                assert!(g.check_consistency(), "{name}");
                assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g, "{name}");
            }
            Err(_) => rejected += 1,
        }
    }
    // duplicate, loop, out_of_range
    assert_eq!(rejected, 3);
}

#[test]
fn parse_graph_seeds() {
    for (name, text) in seeds("parse_graph") {
        let _ = parse_graph(&text).map(|g| assert!(g.check_consistency(), "{name}"));
    }
}

#[test]
fn rational_seeds() {
    for (name, text) in seeds("rational_token") {
        if let Ok(r) = parse_rational(&text) {
            assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r, "{name}");
        }
        let _ = parse_value(&text);
    }
    assert!(parse_value("root:120:3").is_ok());
    assert!(parse_value("root:0:2").is_err());
    assert!(parse_rational("1/0").is_err());
}

#[test]
fn config_seeds() {
    let results: Vec<_> = seeds("config_parse").into_iter().map(|(n, t)| (n, parse_config(&t).is_ok())).collect();
    assert_eq!(
        results,
        vec![
            ("bad_key".to_string(), false),
            ("basic".to_string(), true),
            ("duplicate".to_string(), false),
            ("no_equals".to_string(), false),
        ]
    );
}
