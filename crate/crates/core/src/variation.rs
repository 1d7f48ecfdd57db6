//! Matrix assembly under the three lexical-variation regimes, and the
//! unordered (shuffled-context) control.
//!
//! * Type I: one binding for every row and every answer.
//! * Type II: one slot (the subject by default) takes a different lexeme on
//!   each row; everything else comes from a base binding.
//! * Type III: each row is drawn from a pool of sentences that realize the
//!   row's number pattern, with pairwise distinct subject lemmas whenever the
//!   pool allows it.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::answers::{contrast_plan, make_candidates, rotate_answers, AnswerCandidate, AnswerSet, ContrastType};
use crate::error::{Error, Result};
use crate::grammar::{linearize, ClauseType, Link, SentencePlan};
use crate::lexicon::{Lexicon, Number};
use crate::rules::{
    apply_rules, build_matrix_plans, plan_for, Binding, Pattern, PositionAssignment, RuleProgram,
    CONTEXT_LENGTH,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VariationType {
    I,
    II,
    III,
}

impl VariationType {
    pub const ALL: [VariationType; 3] = [VariationType::I, VariationType::II, VariationType::III];

    pub fn as_str(self) -> &'static str {
        match self {
            VariationType::I => "I",
            VariationType::II => "II",
            VariationType::III => "III",
        }
    }

    pub fn parse(s: &str) -> Option<VariationType> {
        VariationType::ALL.into_iter().find(|v| v.as_str() == s)
    }
}

impl fmt::Display for VariationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where the distractor lexemes came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistractorSource {
    /// Same binding as the correct answer.
    Shared,
    /// Sampled from the pool independently of the correct answer.
    Independent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowRecord {
    /// Template position the row realizes (differs from its index once shuffled).
    pub position: usize,
    pub plan: SentencePlan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub contexts: Vec<RowRecord>,
    pub distractors: DistractorSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixInstance {
    pub id: String,
    pub clause_type: ClauseType,
    pub variation_type: VariationType,
    pub ordered: bool,
    pub contexts: Vec<String>,
    pub answer_set: AnswerSet,
    pub program: RuleProgram,
    pub provenance: Provenance,
}

pub fn matrix_id(variation: VariationType, clause: ClauseType, ordinal: u64) -> String {
    format!("{variation}-{clause}-{ordinal:06}")
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-matrix seed from the global seed and the matrix ordinal.
pub fn derive_seed(global_seed: u64, ordinal: u64) -> u64 {
    splitmix64(global_seed ^ splitmix64(ordinal))
}

/// Per-matrix seed from the global seed and a matrix id (FNV-1a over the id).
pub fn derive_seed_for_id(global_seed: u64, id: &str) -> u64 {
    let hash = id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    });
    splitmix64(global_seed ^ splitmix64(hash))
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    variation: VariationType,
    clause_type: ClauseType,
    program: &RuleProgram,
    ordinal: u64,
    context_plans: Vec<SentencePlan>,
    candidates: Vec<AnswerCandidate>,
    distractors: DistractorSource,
    lexicon: &Lexicon,
) -> Result<MatrixInstance> {
    let contexts = context_plans
        .iter()
        .map(|p| linearize(p, lexicon))
        .collect::<Result<Vec<_>>>()?;
    let rows = context_plans
        .into_iter()
        .enumerate()
        .map(|(position, plan)| RowRecord { position, plan })
        .collect();
    Ok(MatrixInstance {
        id: matrix_id(variation, clause_type, ordinal),
        clause_type,
        variation_type: variation,
        ordered: true,
        contexts,
        answer_set: rotate_answers(candidates, ordinal)?,
        program: *program,
        provenance: Provenance {
            contexts: rows,
            distractors,
        },
    })
}

pub fn build_type1(
    binding: &Binding,
    clause_type: ClauseType,
    program: &RuleProgram,
    ordinal: u64,
    lexicon: &Lexicon,
) -> Result<MatrixInstance> {
    let plans = build_matrix_plans(program, clause_type, binding)?;
    let candidates = make_candidates(&plans.answer, lexicon)?;
    assemble(
        VariationType::I,
        clause_type,
        program,
        ordinal,
        plans.contexts,
        candidates,
        DistractorSource::Shared,
        lexicon,
    )
}

/// The noun slot that varies across rows of a Type II matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VariedSlot {
    #[default]
    Subject,
    N1,
    N2,
}

/// Replacement lexeme for one row, with the number it is meant to carry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitute {
    pub lemma: String,
    pub number: Number,
}

impl Substitute {
    pub fn new(lemma: &str, number: Number) -> Substitute {
        Substitute {
            lemma: lemma.into(),
            number,
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn build_type2(
    base: &Binding,
    slot: VariedSlot,
    substitutes: &[Substitute],
    clause_type: ClauseType,
    program: &RuleProgram,
    ordinal: u64,
    lexicon: &Lexicon,
) -> Result<MatrixInstance> {
    if substitutes.len() != CONTEXT_LENGTH {
        return Err(Error::Binding("one substitute per context row"));
    }
    let assignments = apply_rules(program)?;
    let mut plans = Vec::with_capacity(CONTEXT_LENGTH);
    for (row, (a, sub)) in assignments.iter().zip(substitutes).enumerate() {
        let mut binding = base.clone();
        let required = match slot {
            VariedSlot::Subject => {
                binding.subject = sub.lemma.clone();
                Some(a.subject_number)
            }
            VariedSlot::N1 => {
                binding.n1 = sub.lemma.clone();
                Some(a.n1_number)
            }
            VariedSlot::N2 => {
                binding.n2 = Some(sub.lemma.clone());
                a.n2_number
            }
        };
        if let Some(expected) = required {
            if expected != sub.number {
                return Err(Error::Number {
                    row,
                    lemma: sub.lemma.clone(),
                    expected,
                    found: sub.number,
                });
            }
        }
        plans.push(plan_for(a, clause_type, &binding)?);
    }
    let answer = plan_for(&assignments[CONTEXT_LENGTH], clause_type, base)?;
    let candidates = make_candidates(&answer, lexicon)?;
    assemble(
        VariationType::II,
        clause_type,
        program,
        ordinal,
        plans,
        candidates,
        DistractorSource::Shared,
        lexicon,
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PooledSentence {
    pub surface: String,
    pub binding: Binding,
}

/// Sentences grouped by clause type and number pattern.
#[derive(Debug, Clone, Default)]
pub struct SentencePool {
    cells: BTreeMap<(ClauseType, Pattern), Vec<PooledSentence>>,
}

fn assignment_for(pattern: Pattern) -> PositionAssignment {
    PositionAssignment {
        position: 0,
        subject_number: pattern.subject,
        n1_number: pattern.n1,
        n2_number: pattern.n2,
        attractor_count: pattern.attractor_count,
    }
}

impl SentencePool {
    pub fn new() -> SentencePool {
        SentencePool::default()
    }

    /// Realize `binding` in the cell and add it.
    pub fn insert(
        &mut self,
        clause_type: ClauseType,
        pattern: Pattern,
        binding: Binding,
        lexicon: &Lexicon,
    ) -> Result<()> {
        let plan = plan_for(&assignment_for(pattern), clause_type, &binding)?;
        let surface = linearize(&plan, lexicon)?;
        self.cells
            .entry((clause_type, pattern))
            .or_default()
            .push(PooledSentence { surface, binding });
        Ok(())
    }

    /// Add an existing sentence; it must be exactly what its binding realizes
    /// in the cell.
    pub fn insert_sentence(
        &mut self,
        clause_type: ClauseType,
        pattern: Pattern,
        surface: &str,
        binding: Binding,
        lexicon: &Lexicon,
    ) -> Result<()> {
        let plan = plan_for(&assignment_for(pattern), clause_type, &binding)?;
        let realized = linearize(&plan, lexicon)?;
        if realized != surface {
            return Err(Error::Plan(format!(
                "pooled sentence {surface:?} does not match its cell ({pattern}): binding realizes {realized:?}"
            )));
        }
        self.insert(clause_type, pattern, binding, lexicon)
    }

    /// Every binding realized in every cell the program uses.
    pub fn from_bindings(
        clause_type: ClauseType,
        program: &RuleProgram,
        bindings: &[Binding],
        lexicon: &Lexicon,
    ) -> Result<SentencePool> {
        let mut patterns: Vec<Pattern> = apply_rules(program)?.iter().map(|a| a.pattern()).collect();
        patterns.sort();
        patterns.dedup();
        let mut pool = SentencePool::new();
        for binding in bindings {
            for &pattern in &patterns {
                pool.insert(clause_type, pattern, binding.clone(), lexicon)?;
            }
        }
        Ok(pool)
    }

    pub fn cell(&self, clause_type: ClauseType, pattern: Pattern) -> &[PooledSentence] {
        self.cells
            .get(&(clause_type, pattern))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.cells.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

const MAX_SEARCH_STEPS: usize = 20_000;

/// Pick one sentence per row with pairwise distinct subjects, searching rows
/// in order with shuffled candidates.
fn distinct_rows<'p>(
    cells: &[&'p [PooledSentence]],
    rng: &mut ChaCha8Rng,
) -> Option<Vec<&'p PooledSentence>> {
    let orders: Vec<Vec<usize>> = cells
        .iter()
        .map(|c| {
            let mut idx: Vec<usize> = (0..c.len()).collect();
            idx.shuffle(rng);
            idx
        })
        .collect();
    let mut cursor = vec![0usize; cells.len()];
    let mut chosen: Vec<&PooledSentence> = Vec::with_capacity(cells.len());
    let mut steps = 0;
    let mut row = 0;
    while row < cells.len() {
        steps += 1;
        if steps > MAX_SEARCH_STEPS {
            return None;
        }
        let mut advanced = false;
        while cursor[row] < orders[row].len() {
            let candidate = &cells[row][orders[row][cursor[row]]];
            cursor[row] += 1;
            if chosen.iter().all(|c| c.binding.subject != candidate.binding.subject) {
                chosen.push(candidate);
                advanced = true;
                break;
            }
        }
        if advanced {
            row += 1;
        } else {
            if row == 0 {
                return None;
            }
            cursor[row] = 0;
            chosen.pop();
            row -= 1;
        }
    }
    Some(chosen)
}

/// Bindings in a cell that can fill a two-attractor answer row.
fn usable(cell: &[PooledSentence]) -> Vec<&Binding> {
    cell.iter()
        .map(|s| &s.binding)
        .filter(|b| b.n2.is_some() && b.prep2.is_some())
        .collect()
}

fn contrast_pattern(plan: &SentencePlan) -> Pattern {
    Pattern {
        subject: plan.subject_number,
        n1: plan.attractors[0].number,
        n2: plan.attractors.get(1).map(|s| s.number),
        attractor_count: plan.attractors.len(),
    }
}

pub fn build_type3(
    pool: &SentencePool,
    program: &RuleProgram,
    clause_type: ClauseType,
    ordinal: u64,
    seed: u64,
    lexicon: &Lexicon,
) -> Result<MatrixInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let assignments = apply_rules(program)?;
    let cells = assignments
        .iter()
        .map(|a| {
            let cell = pool.cell(clause_type, a.pattern());
            if cell.is_empty() {
                Err(Error::Coverage(format!("{clause_type} {}", a.pattern())))
            } else {
                Ok(cell)
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let context_cells = &cells[..CONTEXT_LENGTH];
    let rows = match distinct_rows(context_cells, &mut rng) {
        Some(rows) => rows,
        // Not enough distinct subjects: fall back to plain sampling.
        None => context_cells
            .iter()
            .map(|c| &c[rng.gen_range(0..c.len())])
            .collect(),
    };
    let plans = rows
        .iter()
        .zip(&assignments)
        .map(|(s, a)| plan_for(a, clause_type, &s.binding))
        .collect::<Result<Vec<_>>>()?;

    let answer_assignment = &assignments[CONTEXT_LENGTH];
    let answer_cell = cells[CONTEXT_LENGTH];
    let correct_binding = &answer_cell[rng.gen_range(0..answer_cell.len())].binding;
    let answer_plan = plan_for(answer_assignment, clause_type, correct_binding)?;

    let mut candidates = Vec::with_capacity(6);
    for contrast in ContrastType::CANONICAL {
        let plan = if contrast == ContrastType::Correct {
            answer_plan.clone()
        } else {
            let target = contrast_pattern(&contrast_plan(contrast, &answer_plan)?);
            let mut source = usable(pool.cell(clause_type, target));
            if source.is_empty() {
                source = usable(answer_cell);
            }
            let binding = source
                .get(rng.gen_range(0..source.len().max(1)))
                .copied()
                .unwrap_or(correct_binding);
            contrast_plan(contrast, &plan_for(answer_assignment, clause_type, binding)?)?
        };
        candidates.push(AnswerCandidate {
            surface: linearize(&plan, lexicon)?,
            contrast_type: contrast,
            plan,
        });
    }
    assemble(
        VariationType::III,
        clause_type,
        program,
        ordinal,
        plans,
        candidates,
        DistractorSource::Independent,
        lexicon,
    )
}

/// Randomly permute the contexts of an ordered matrix.
pub fn shuffle_contexts(m: &MatrixInstance, seed: u64) -> Result<MatrixInstance> {
    if !m.ordered {
        return Err(Error::AlreadyShuffled(m.id.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..m.contexts.len()).collect();
    perm.shuffle(&mut rng);
    let mut out = m.clone();
    out.contexts = perm.iter().map(|&i| m.contexts[i].clone()).collect();
    out.provenance.contexts = perm.iter().map(|&i| m.provenance.contexts[i].clone()).collect();
    out.ordered = false;
    out.id = format!("{}-shuf", m.id);
    Ok(out)
}

/// Lemmas of every noun in a plan, subject first.
pub fn plan_nouns(plan: &SentencePlan) -> Vec<&str> {
    std::iter::once(plan.subject.as_str())
        .chain(plan.attractors.iter().map(|s| s.noun.as_str()))
        .collect()
}

/// True when a plan coordinates its last noun.
pub fn is_coordinated(plan: &SentencePlan) -> bool {
    plan.attractors.iter().any(|s| s.link == Link::Coord)
}

/// Distinct subject lemmas among the context rows.
pub fn distinct_subjects(m: &MatrixInstance) -> usize {
    m.provenance
        .contexts
        .iter()
        .map(|r| r.plan.subject.as_str())
        .collect::<HashSet<_>>()
        .len()
}
