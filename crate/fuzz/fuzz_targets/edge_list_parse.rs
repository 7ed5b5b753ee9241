#![no_main]

use kklab_core::graph::io::{parse_edge_list, to_edge_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = parse_edge_list(text) {
        assert!(g.check_consistency());
        let again = parse_edge_list(&to_edge_list(&g)).expect("own output parses");
        assert_eq!(g, again);
    }
});
