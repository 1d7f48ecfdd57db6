//! Replays the checked-in fuzz seeds through the same checks the fuzz
//! targets run, so a regression shows up under plain `cargo test`.

use std::path::PathBuf;

use blm_core::dataset::{parse_record, record_line};
use blm_core::embedding::{decode_embeddings, write_embeddings};
use blm_core::*;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn lexicon_seeds() {
    for (name, data) in seeds("lexicon_parse") {
        let parsed = parse_lexicon(std::str::from_utf8(&data).unwrap());
        assert_eq!(parsed.is_ok(), !name.starts_with("bad_"), "{name}: {parsed:?}");
    }
}

#[test]
fn sentence_seeds_are_canonical() {
    let lex = Lexicon::builtin();
    for (name, data) in seeds("sentence_parse") {
        let text = std::str::from_utf8(&data).unwrap();
        let plan = parse_sentence(text, &lex).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(linearize(&plan, &lex).unwrap(), text, "{name}");
    }
}

#[test]
fn dataset_seeds_round_trip() {
    let lex = Lexicon::builtin();
    for (name, data) in seeds("dataset_record") {
        let m = parse_record(std::str::from_utf8(&data).unwrap(), 1).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(record_line(&m).as_bytes(), &data[..], "{name}");
        assert!(validate_matrix(&m, &lex).is_empty(), "{name}");
    }
}

#[test]
fn embedding_seeds() {
    for (name, data) in seeds("embedding_container") {
        match decode_embeddings(&data) {
            Ok(records) => {
                let mut out = Vec::new();
                write_embeddings(&mut out, &records).unwrap();
                assert_eq!(out, data, "{name}");
            }
            Err(_) => assert!(name.starts_with("truncated"), "{name}"),
        }
    }
}
