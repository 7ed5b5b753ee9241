#![no_main]

use kklab_core::graph::io::{parse_graph6, to_graph6};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // anything accepted must survive a round trip
    if let Ok(g) = parse_graph6(text) {
        let again = parse_graph6(&to_graph6(&g)).expect("own encoding parses");
        assert_eq!(g, again);
    }
});
