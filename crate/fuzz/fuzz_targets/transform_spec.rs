#![no_main]

use bondcal::formats::{parse_angle, parse_normal, TransformSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_angle(text);
    if let Ok(n) = parse_normal(text) {
        assert!((n.norm() - 1.0).abs() < 1e-12);
    }
    if let Ok(spec) = text.parse::<TransformSpec>() {
        if let Ok(q) = spec.to_transform() {
            assert!((q.determinant().abs() - 1.0).abs() < 1e-9);
        }
    }
});
