#![no_main]

use bondcal::formats::parse_report_json;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(report) = parse_report_json(text) {
            let _ = report.anisotropy_index_ref();
        }
    }
});
