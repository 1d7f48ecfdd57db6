//! Corpus generation from a lexicon.
//!
//! Matrix `i` draws its lexemes from a generator seeded with
//! `derive_seed(seed, i)`, so changing `count` never changes the matrices
//! that were already there. Type III pools depend on the seed and clause
//! type only.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grammar::ClauseType;
use crate::lexicon::{Category, Lexicon};
use crate::rules::{apply_rules, Binding, RuleProgram, CONTEXT_LENGTH};
use crate::variation::{
    build_type1, build_type2, build_type3, derive_seed, derive_seed_for_id, shuffle_contexts,
    MatrixInstance, SentencePool, Substitute, VariationType, VariedSlot,
};

/// Prepositions drawn for attractor PPs.
pub const BINDING_PREPOSITIONS: &[&str] = &["avec", "de", "sur", "dans", "pour", "sous", "à"];

/// Bindings realized in every cell of a Type III pool.
pub const POOL_BINDINGS: usize = 24;

#[derive(Debug, Clone)]
pub struct GenerateConfig {
    pub variation: VariationType,
    pub clauses: Vec<ClauseType>,
    pub count: usize,
    pub seed: u64,
    pub program: RuleProgram,
    /// Emit the unordered control instead of ordered matrices.
    pub shuffled: bool,
}

impl GenerateConfig {
    pub fn new(variation: VariationType, clauses: Vec<ClauseType>, count: usize, seed: u64) -> Self {
        GenerateConfig {
            variation,
            clauses,
            count,
            seed,
            program: RuleProgram::default(),
            shuffled: false,
        }
    }
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T], what: &'static str) -> Result<&'a T> {
    items.choose(rng).ok_or(Error::Binding(what))
}

/// A random complete binding: three distinct nouns, a verb, two
/// prepositions, a completive frame and a relative clause.
pub fn random_binding(rng: &mut ChaCha8Rng, lexicon: &Lexicon) -> Result<Binding> {
    let nouns: Vec<&str> = lexicon.of_category(Category::Noun).map(|e| e.lemma.as_str()).collect();
    if nouns.len() < 3 {
        return Err(Error::Binding("three distinct nouns"));
    }
    let chosen: Vec<&str> = nouns.choose_multiple(rng, 3).copied().collect();
    let verbs: Vec<&str> = lexicon.of_category(Category::Verb).map(|e| e.lemma.as_str()).collect();
    let frames: Vec<&str> = lexicon.of_category(Category::Frame).map(|e| e.lemma.as_str()).collect();
    let rels: Vec<&str> = lexicon.of_category(Category::RelClause).map(|e| e.lemma.as_str()).collect();
    let preps: Vec<&str> = BINDING_PREPOSITIONS
        .iter()
        .copied()
        .filter(|p| lexicon.is_preposition(p))
        .collect();
    let verb = *pick(rng, &verbs, "verb")?;
    let prep1 = *pick(rng, &preps, "prep1")?;
    let prep2 = *pick(rng, &preps, "prep2")?;
    let frame = *pick(rng, &frames, "frame")?;
    let rel = *pick(rng, &rels, "relative clause")?;
    Ok(Binding::new(chosen[0], prep1, chosen[1], verb)
        .with_n2(prep2, chosen[2])
        .with_frame(frame)
        .with_relclause(rel))
}

/// Seven subject substitutes for a Type II matrix, distinct from each other
/// when the lexicon allows and never equal to the attractor nouns.
fn random_substitutes(
    rng: &mut ChaCha8Rng,
    lexicon: &Lexicon,
    base: &Binding,
    program: &RuleProgram,
) -> Result<Vec<Substitute>> {
    let nouns: Vec<&str> = lexicon
        .of_category(Category::Noun)
        .map(|e| e.lemma.as_str())
        .filter(|l| *l != base.n1 && Some(*l) != base.n2.as_deref())
        .collect();
    if nouns.is_empty() {
        return Err(Error::Binding("subject substitutes"));
    }
    let lemmas: Vec<&str> = if nouns.len() >= CONTEXT_LENGTH {
        nouns.choose_multiple(rng, CONTEXT_LENGTH).copied().collect()
    } else {
        (0..CONTEXT_LENGTH).map(|_| nouns[rng.gen_range(0..nouns.len())]).collect()
    };
    Ok(apply_rules(program)?
        .iter()
        .zip(lemmas)
        .map(|(a, l)| Substitute::new(l, a.subject_number))
        .collect())
}

pub fn build_pool(
    lexicon: &Lexicon,
    clause: ClauseType,
    program: &RuleProgram,
    seed: u64,
) -> Result<SentencePool> {
    let clause_idx = ClauseType::ALL.iter().position(|&c| c == clause).unwrap_or(0) as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, u64::MAX - clause_idx));
    let bindings = (0..POOL_BINDINGS)
        .map(|_| random_binding(&mut rng, lexicon))
        .collect::<Result<Vec<_>>>()?;
    SentencePool::from_bindings(clause, program, &bindings, lexicon)
}

/// Generate `count` matrices, cycling through the requested clause types and
/// rotating answers by ordinal.
pub fn generate(config: &GenerateConfig, lexicon: &Lexicon) -> Result<Vec<MatrixInstance>> {
    if config.clauses.is_empty() {
        return Err(Error::Binding("at least one clause type"));
    }
    lexicon.check_generation_ready()?;
    config.program.check()?;
    let pools = match config.variation {
        VariationType::III => config
            .clauses
            .iter()
            .map(|&c| build_pool(lexicon, c, &config.program, config.seed).map(|p| (c, p)))
            .collect::<Result<Vec<_>>>()?,
        _ => Vec::new(),
    };
    (0..config.count as u64)
        .into_par_iter()
        .map(|ordinal| {
            let clause = config.clauses[(ordinal % config.clauses.len() as u64) as usize];
            let matrix_seed = derive_seed(config.seed, ordinal);
            let mut rng = ChaCha8Rng::seed_from_u64(matrix_seed);
            let m = match config.variation {
                VariationType::I => {
                    let b = random_binding(&mut rng, lexicon)?;
                    build_type1(&b, clause, &config.program, ordinal, lexicon)?
                }
                VariationType::II => {
                    let b = random_binding(&mut rng, lexicon)?;
                    let subs = random_substitutes(&mut rng, lexicon, &b, &config.program)?;
                    build_type2(&b, VariedSlot::Subject, &subs, clause, &config.program, ordinal, lexicon)?
                }
                VariationType::III => {
                    let pool = &pools.iter().find(|(c, _)| *c == clause).expect("pool per clause").1;
                    build_type3(pool, &config.program, clause, ordinal, rng.gen(), lexicon)?
                }
            };
            if config.shuffled {
                shuffle_contexts(&m, derive_seed_for_id(config.seed, &m.id))
            } else {
                Ok(m)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_changes_keep_prefix() {
        let lex = Lexicon::builtin();
        for variation in VariationType::ALL {
            let small = generate(&GenerateConfig::new(variation, ClauseType::ALL.to_vec(), 5, 42), &lex).unwrap();
            let big = generate(&GenerateConfig::new(variation, ClauseType::ALL.to_vec(), 12, 42), &lex).unwrap();
            assert_eq!(small[..], big[..5]);
        }
    }

    #[test]
    fn clauses_are_balanced() {
        let lex = Lexicon::builtin();
        let ms = generate(&GenerateConfig::new(VariationType::I, ClauseType::ALL.to_vec(), 9, 1), &lex).unwrap();
        for c in ClauseType::ALL {
            assert_eq!(ms.iter().filter(|m| m.clause_type == c).count(), 3);
        }
    }

    #[test]
    fn empty_clause_list_is_rejected() {
        let lex = Lexicon::builtin();
        assert!(generate(&GenerateConfig::new(VariationType::I, vec![], 1, 1), &lex).is_err());
    }
}
