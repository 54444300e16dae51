#![no_main]

use bondcal::formats::{material_to_json, parse_material_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_material_json(text) {
        // Whatever is accepted must survive a write/read cycle unchanged.
        let again = parse_material_json(&material_to_json(&c)).expect("written material parses");
        assert_eq!(again.matrix(), c.matrix());
    }
});
