//! Rule programs: alternation and progression operators over the eight
//! positions of a matrix (seven contexts plus the answer).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammar::{AttractorSlot, ClauseType, SentencePlan};
use crate::lexicon::Number;

pub const SEQUENCE_LENGTH: usize = 8;
pub const CONTEXT_LENGTH: usize = SEQUENCE_LENGTH - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum NumberRule {
    /// Flip the value every `period` positions, beginning with `start`.
    Alternate { period: u32, start: Number },
    Constant { value: Number },
}

impl NumberRule {
    pub fn at(&self, position: usize) -> Number {
        match *self {
            NumberRule::Constant { value } => value,
            NumberRule::Alternate { period, start } => {
                if (position / period as usize).is_multiple_of(2) {
                    start
                } else {
                    start.flip()
                }
            }
        }
    }

    fn check(&self, name: &str) -> Result<()> {
        match self {
            NumberRule::Alternate { period: 0, .. } => {
                Err(Error::Program(format!("{name}: alternation period must be positive")))
            }
            _ => Ok(()),
        }
    }
}

/// Attractor count grows by one every `block` positions from `start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Progression {
    pub block: u32,
    pub start: u32,
}

impl Progression {
    pub fn at(&self, position: usize) -> usize {
        self.start as usize + position / self.block.max(1) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleProgram {
    pub subject: NumberRule,
    pub n1: NumberRule,
    pub n2: NumberRule,
    pub attractors: Progression,
    pub sequence_length: usize,
}

impl Default for RuleProgram {
    /// Subject alternates every sentence, N1 every two, N2 stays singular,
    /// and the attractor count steps from one to two halfway through.
    fn default() -> Self {
        RuleProgram {
            subject: NumberRule::Alternate {
                period: 1,
                start: Number::Sing,
            },
            n1: NumberRule::Alternate {
                period: 2,
                start: Number::Sing,
            },
            n2: NumberRule::Constant { value: Number::Sing },
            attractors: Progression { block: 4, start: 1 },
            sequence_length: SEQUENCE_LENGTH,
        }
    }
}

impl RuleProgram {
    pub fn check(&self) -> Result<()> {
        if self.sequence_length != SEQUENCE_LENGTH {
            return Err(Error::Program(format!(
                "sequence length {} (must be {SEQUENCE_LENGTH})",
                self.sequence_length
            )));
        }
        self.subject.check("subject")?;
        self.n1.check("n1")?;
        self.n2.check("n2")?;
        if self.attractors.block == 0 || self.attractors.start == 0 {
            return Err(Error::Program("progression block and start must be positive".into()));
        }
        let last = self.attractors.at(SEQUENCE_LENGTH - 1);
        if last > 2 {
            return Err(Error::Program(format!(
                "progression reaches {last} attractors (at most 2)"
            )));
        }
        Ok(())
    }
}

/// Number pattern of one sentence, independent of its position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pattern {
    pub subject: Number,
    pub n1: Number,
    pub n2: Option<Number>,
    pub attractor_count: usize,
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "subj-{} n1-{}", self.subject, self.n1)?;
        if let Some(n2) = self.n2 {
            write!(f, " n2-{n2}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PositionAssignment {
    pub position: usize,
    pub subject_number: Number,
    pub n1_number: Number,
    pub n2_number: Option<Number>,
    pub attractor_count: usize,
}

impl PositionAssignment {
    pub fn pattern(&self) -> Pattern {
        Pattern {
            subject: self.subject_number,
            n1: self.n1_number,
            n2: self.n2_number,
            attractor_count: self.attractor_count,
        }
    }
}

pub fn apply_rules(program: &RuleProgram) -> Result<Vec<PositionAssignment>> {
    program.check()?;
    Ok((0..program.sequence_length)
        .map(|position| {
            let attractor_count = program.attractors.at(position);
            PositionAssignment {
                position,
                subject_number: program.subject.at(position),
                n1_number: program.n1.at(position),
                n2_number: (attractor_count == 2).then(|| program.n2.at(position)),
                attractor_count,
            }
        })
        .collect())
}

/// Lexical choices for every slot of a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Binding {
    pub subject: String,
    pub verb: String,
    pub prep1: String,
    pub n1: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prep2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n2: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relclause: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trailer: Option<String>,
}

impl Binding {
    pub fn new(subject: &str, prep1: &str, n1: &str, verb: &str) -> Binding {
        Binding {
            subject: subject.into(),
            verb: verb.into(),
            prep1: prep1.into(),
            n1: n1.into(),
            ..Binding::default()
        }
    }

    pub fn with_n2(mut self, prep2: &str, n2: &str) -> Binding {
        self.prep2 = Some(prep2.into());
        self.n2 = Some(n2.into());
        self
    }

    pub fn with_frame(mut self, frame: &str) -> Binding {
        self.frame = Some(frame.into());
        self
    }

    pub fn with_relclause(mut self, relclause: &str) -> Binding {
        self.relclause = Some(relclause.into());
        self
    }

    /// The ordinateur / programme / expérience binding of the reference
    /// matrices, with the frames needed by every clause type.
    pub fn reference() -> Binding {
        Binding::new("ordinateur", "avec", "programme", "être-en-panne")
            .with_n2("de", "expérience")
            .with_frame("jean-supposer")
            .with_relclause("jean-se-servir")
    }
}

fn required<'a>(value: &'a Option<String>, what: &'static str) -> Result<&'a str> {
    match value.as_deref() {
        Some(v) if !v.is_empty() => Ok(v),
        _ => Err(Error::Binding(what)),
    }
}

/// The plan realizing `assignment` with `binding`'s lexemes.
pub fn plan_for(
    assignment: &PositionAssignment,
    clause_type: ClauseType,
    binding: &Binding,
) -> Result<SentencePlan> {
    for (value, what) in [
        (&binding.subject, "subject"),
        (&binding.verb, "verb"),
        (&binding.n1, "n1"),
        (&binding.prep1, "prep1"),
    ] {
        if value.is_empty() {
            return Err(Error::Binding(what));
        }
    }
    let mut attractors = vec![AttractorSlot::prep(
        &binding.prep1,
        &binding.n1,
        assignment.n1_number,
    )];
    if assignment.attractor_count == 2 {
        let n2 = required(&binding.n2, "n2")?;
        let prep2 = required(&binding.prep2, "prep2")?;
        let number = assignment
            .n2_number
            .ok_or_else(|| Error::Program("two attractors without an N2 number".into()))?;
        attractors.push(AttractorSlot::prep(prep2, n2, number));
    }
    let frame = match clause_type {
        ClauseType::Completive => Some(required(&binding.frame, "frame")?.to_owned()),
        _ => None,
    };
    let relclause = match clause_type {
        ClauseType::Relative => Some(required(&binding.relclause, "relative clause")?.to_owned()),
        _ => None,
    };
    Ok(SentencePlan {
        clause_type,
        subject: binding.subject.clone(),
        subject_number: assignment.subject_number,
        bare_subject: false,
        attractors,
        verb: binding.verb.clone(),
        verb_number: assignment.subject_number,
        frame,
        relclause,
        trailer: binding.trailer.clone(),
        agreement_override: false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixPlans {
    pub contexts: Vec<SentencePlan>,
    pub answer: SentencePlan,
}

pub fn build_matrix_plans(
    program: &RuleProgram,
    clause_type: ClauseType,
    binding: &Binding,
) -> Result<MatrixPlans> {
    let mut plans = apply_rules(program)?
        .iter()
        .map(|a| plan_for(a, clause_type, binding))
        .collect::<Result<Vec<_>>>()?;
    let answer = plans.pop().expect("eight positions");
    Ok(MatrixPlans {
        contexts: plans,
        answer,
    })
}
