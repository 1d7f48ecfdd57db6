#![no_main]

use blm_core::dataset::{parse_record, record_line};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_record(text, 1) {
        let line = record_line(&m);
        assert_eq!(parse_record(&line, 1).unwrap(), m);
    }
});
