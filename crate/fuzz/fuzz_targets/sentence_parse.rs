#![no_main]

use std::sync::OnceLock;

use blm_core::{linearize, parse_sentence, Lexicon};
use libfuzzer_sys::fuzz_target;

fn lexicon() -> &'static Lexicon {
    static LEX: OnceLock<Lexicon> = OnceLock::new();
    LEX.get_or_init(Lexicon::builtin)
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(plan) = parse_sentence(text, lexicon()) {
        // Accepted input in generator shape must be canonical.
        if let Ok(s) = linearize(&plan, lexicon()) {
            assert_eq!(s, text);
        }
    }
});
