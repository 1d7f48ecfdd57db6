#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(lex) = blm_core::parse_lexicon(text) {
            // Whatever loads must be usable for lookups.
            for e in lex.entries() {
                assert!(lex.get(&e.lemma, e.category).is_some());
            }
        }
    }
});
