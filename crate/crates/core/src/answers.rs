//! Answer sets: the correct continuation and five minimal-pair distractors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammar::{linearize, Link, SentencePlan};
use crate::lexicon::{Lexicon, Number};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContrastType {
    Correct,
    Coord,
    WNA,
    AE,
    AlterN1,
    AlterN2,
}

impl ContrastType {
    /// Presentation order before rotation.
    pub const CANONICAL: [ContrastType; 6] = [
        ContrastType::Coord,
        ContrastType::Correct,
        ContrastType::WNA,
        ContrastType::AE,
        ContrastType::AlterN1,
        ContrastType::AlterN2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ContrastType::Correct => "Correct",
            ContrastType::Coord => "Coord",
            ContrastType::WNA => "WNA",
            ContrastType::AE => "AE",
            ContrastType::AlterN1 => "AlterN1",
            ContrastType::AlterN2 => "AlterN2",
        }
    }

    pub fn canonical_index(self) -> usize {
        ContrastType::CANONICAL
            .iter()
            .position(|&c| c == self)
            .expect("every type is canonical")
    }
}

impl fmt::Display for ContrastType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerCandidate {
    pub surface: String,
    pub contrast_type: ContrastType,
    pub plan: SentencePlan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnswerSet {
    pub candidates: Vec<AnswerCandidate>,
    pub correct_index: usize,
}

impl AnswerSet {
    pub fn correct(&self) -> &AnswerCandidate {
        &self.candidates[self.correct_index]
    }

    pub fn position_of(&self, contrast: ContrastType) -> Option<usize> {
        self.candidates.iter().position(|c| c.contrast_type == contrast)
    }
}

/// Plan of the distractor `contrast` derived from the correct plan.
///
/// Coord, WNA and AE are built on a singular subject with a singular first
/// attractor; AlterN1 and AlterN2 flip the number of one attractor of the
/// correct plan.
pub fn contrast_plan(contrast: ContrastType, answer_plan: &SentencePlan) -> Result<SentencePlan> {
    let needs_n2 = |plan: &SentencePlan| -> Result<()> {
        if plan.attractors.len() == 2 {
            Ok(())
        } else {
            Err(Error::Construction {
                contrast: contrast.to_string(),
                msg: "answer plan has no second attractor".into(),
            })
        }
    };
    let mut plan = answer_plan.clone();
    match contrast {
        ContrastType::Correct => {}
        ContrastType::Coord => {
            needs_n2(&plan)?;
            plan.subject_number = Number::Sing;
            plan.verb_number = Number::Sing;
            plan.attractors[0].number = Number::Sing;
            plan.attractors[1].link = Link::Coord;
        }
        ContrastType::WNA => {
            needs_n2(&plan)?;
            plan.subject_number = Number::Sing;
            plan.verb_number = Number::Sing;
            plan.attractors.truncate(1);
            plan.attractors[0].number = Number::Sing;
        }
        ContrastType::AE => {
            needs_n2(&plan)?;
            plan.subject_number = Number::Sing;
            plan.verb_number = Number::Plur;
            plan.attractors[0].number = Number::Sing;
            plan.agreement_override = true;
        }
        ContrastType::AlterN1 => {
            let n1 = &mut plan.attractors[0].number;
            *n1 = n1.flip();
        }
        ContrastType::AlterN2 => {
            needs_n2(&plan)?;
            let n2 = &mut plan.attractors[1].number;
            *n2 = n2.flip();
        }
    }
    Ok(plan)
}

pub fn make_contrast(
    contrast: ContrastType,
    answer_plan: &SentencePlan,
    lexicon: &Lexicon,
) -> Result<AnswerCandidate> {
    let plan = contrast_plan(contrast, answer_plan)?;
    Ok(AnswerCandidate {
        surface: linearize(&plan, lexicon)?,
        contrast_type: contrast,
        plan,
    })
}

/// All six candidates for one answer plan, in canonical order.
pub fn make_candidates(answer_plan: &SentencePlan, lexicon: &Lexicon) -> Result<Vec<AnswerCandidate>> {
    ContrastType::CANONICAL
        .iter()
        .map(|&c| make_contrast(c, answer_plan, lexicon))
        .collect()
}

/// Cyclic rotation of the canonical order by `matrix_ordinal mod 6`: the
/// candidate at canonical index `i` lands at position `(i + r) mod 6`.
pub fn rotate_answers(candidates: Vec<AnswerCandidate>, matrix_ordinal: u64) -> Result<AnswerSet> {
    if candidates.len() != 6 {
        return Err(Error::Arity(format!("got {} candidates", candidates.len())));
    }
    let mut slots: [Option<AnswerCandidate>; 6] = Default::default();
    for candidate in candidates {
        let idx = candidate.contrast_type.canonical_index();
        if slots[idx].is_some() {
            return Err(Error::Arity(format!("{} appears twice", candidate.contrast_type)));
        }
        slots[idx] = Some(candidate);
    }
    let shift = (matrix_ordinal % 6) as usize;
    let mut rotated: Vec<AnswerCandidate> = slots.into_iter().map(|s| s.expect("six distinct types")).collect();
    rotated.rotate_right(shift);
    let correct_index = (ContrastType::Correct.canonical_index() + shift) % 6;
    Ok(AnswerSet {
        candidates: rotated,
        correct_index,
    })
}
