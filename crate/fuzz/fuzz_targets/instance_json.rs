#![no_main]

use certilab::graph::json::{instance_from_json, instance_to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = instance_from_json(text) {
        let again = instance_from_json(&instance_to_json(&inst)).expect("serialized instances parse");
        assert_eq!(again, inst);
    }
});
