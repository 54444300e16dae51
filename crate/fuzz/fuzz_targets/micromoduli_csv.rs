#![no_main]

use bondcal::formats::{read_micromoduli_csv, write_micromoduli_csv, write_vtk};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(records) = read_micromoduli_csv(data) else {
        return;
    };
    let mut buf = Vec::new();
    write_micromoduli_csv(&mut buf, &records).expect("records serialize");
    let again = read_micromoduli_csv(buf.as_slice()).expect("written CSV parses");
    assert_eq!(again, records);
    let _ = write_vtk(std::io::sink(), &records);
});
