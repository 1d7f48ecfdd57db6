#![no_main]

use blm_core::embedding::{decode_embeddings, write_embeddings};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = decode_embeddings(data) {
        let mut out = Vec::new();
        write_embeddings(&mut out, &records).unwrap();
        assert_eq!(out, data);
    }
});
