use thiserror::Error;

use crate::lexicon::Category;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: duplicate entry ({lemma}, {category})")]
    Duplicate {
        line: usize,
        lemma: String,
        category: Category,
    },

    #[error("line {line}: entry {lemma}: {msg}")]
    InvalidEntry {
        line: usize,
        lemma: String,
        msg: String,
    },

    #[error("{lemma} is a {found} entry, expected {expected}")]
    Category {
        lemma: String,
        expected: Category,
        found: Category,
    },

    #[error("no {category} entry for lemma {lemma:?}")]
    Lookup { lemma: String, category: Category },

    #[error("preposition {0:?} is not in the lexicon")]
    UnknownPreposition(String),

    #[error("invalid sentence plan: {0}")]
    Plan(String),

    #[error("invalid rule program: {0}")]
    Program(String),

    #[error("incomplete binding: missing {0}")]
    Binding(&'static str),

    #[error("cannot build {contrast} candidate: {msg}")]
    Construction { contrast: String, msg: String },

    #[error("expected 6 answer candidates, one per contrast type; {0}")]
    Arity(String),

    #[error("substitute {lemma:?} for row {row}: row requires {expected}, substitute is {found}")]
    Number {
        row: usize,
        lemma: String,
        expected: crate::Number,
        found: crate::Number,
    },

    #[error("sentence pool has no sentence for cell {0}")]
    Coverage(String),

    #[error("matrix {0} is already shuffled")]
    AlreadyShuffled(String),

    #[error("line {line}: expected 6 answers, found {found}")]
    AnswerArity { line: usize, found: usize },

    #[error("line {line}: expected 7 contexts, found {found}")]
    ContextArity { line: usize, found: usize },

    #[error("dataset format version {found}, this build reads version {expected}")]
    Version { expected: u32, found: u32 },

    #[error("bad split fractions: {0}")]
    Fractions(String),

    #[error("embedding container: {0}")]
    Container(String),

    #[error("cannot analyse {sentence:?}: {msg}")]
    Analysis { sentence: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
