//! Blackbird's Language Matrices for French subject-verb agreement.
//!
//! A matrix is a sequence of seven context sentences governed by number
//! rules (subject alternation, attractor progression, first-attractor
//! alternation, constant second attractor) plus a six-way answer set made of
//! the correct continuation and five minimal-pair distractors.
//!
//! The pipeline runs lexicon → sentence plans → rule program → answer set →
//! matrix assembly (three lexical-variation regimes) → dataset files, with a
//! recognizer-based validator closing the loop.

pub mod analysis;
pub mod answers;
pub mod dataset;
pub mod embedding;
pub mod error;
pub mod generate;
pub mod grammar;
pub mod lexicon;
pub mod rules;
pub mod validate;
pub mod variation;

pub use analysis::parse_sentence;
pub use answers::{make_candidates, make_contrast, rotate_answers, AnswerCandidate, AnswerSet, ContrastType};
pub use dataset::{read_matrices, split, stats, write_matrices, DatasetManifest, Fractions};
pub use error::{Error, Result};
pub use generate::{generate, GenerateConfig};
pub use grammar::{linearize, AttractorSlot, ClauseType, Link, SentencePlan};
pub use lexicon::{load_lexicon, parse_lexicon, realize_np, realize_verb, Category, LexEntry, Lexicon, Number, NpContext};
pub use rules::{apply_rules, build_matrix_plans, Binding, PositionAssignment, RuleProgram};
pub use validate::{validate_matrix, Rule, Violation};
pub use variation::{
    build_type1, build_type2, build_type3, shuffle_contexts, MatrixInstance, SentencePool, Substitute,
    VariationType, VariedSlot,
};
