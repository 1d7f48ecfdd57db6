//! Rule-conformance checks for matrices.
//!
//! Every sentence is read back with the recognizer in [`crate::analysis`], so
//! the checks rest on the surface strings rather than on the generator's
//! own records. Provenance is checked separately: each recorded plan must
//! realize exactly the sentence it sits next to.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::parse_sentence;
use crate::answers::ContrastType;
use crate::grammar::{linearize, Link, SentencePlan};
use crate::lexicon::{Lexicon, Number};
use crate::rules::{apply_rules, PositionAssignment, CONTEXT_LENGTH};
use crate::variation::{DistractorSource, MatrixInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    /// Subject-verb agreement and the subject alternation.
    R1,
    /// Attractor-count progression.
    R2,
    /// First-attractor alternation.
    R3,
    /// Second-attractor constancy.
    R4,
    AnswerArity,
    RotationSkew,
    DuplicateAnswer,
    /// A sentence the recognizer cannot read, a program that cannot run, or
    /// provenance that does not reproduce its sentence.
    Malformed,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub matrix_id: String,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.matrix_id, self.rule, self.detail)
    }
}

/// Agreement features read off one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Features {
    subject: Number,
    verb: Number,
    n1: Option<Number>,
    n2: Option<Number>,
    count: usize,
    coordinated: bool,
    first_coordinated: bool,
}

impl Features {
    fn of(plan: &SentencePlan) -> Features {
        Features {
            subject: plan.subject_number,
            verb: plan.verb_number,
            n1: plan.attractors.first().map(|s| s.number),
            n2: plan.attractors.get(1).map(|s| s.number),
            count: plan.attractors.len(),
            coordinated: plan.attractors.iter().skip(1).any(|s| s.link == Link::Coord),
            first_coordinated: plan.attractors.first().is_some_and(|s| s.link == Link::Coord),
        }
    }
}

struct Report<'a> {
    id: &'a str,
    out: Vec<Violation>,
}

impl Report<'_> {
    fn push(&mut self, rule: Rule, detail: impl Into<String>) {
        self.out.push(Violation {
            matrix_id: self.id.to_owned(),
            rule,
            detail: detail.into(),
        });
    }
}

/// Compare a grammatical sentence with its template row. An agreement
/// failure is reported alone: the other attributes are not meaningful for
/// an ungrammatical sentence.
fn check_against_template(report: &mut Report, what: &str, f: &Features, a: &PositionAssignment) {
    if f.subject != f.verb {
        report.push(Rule::R1, format!("{what}: {} subject with {} verb", f.subject, f.verb));
        return;
    }
    if f.subject != a.subject_number {
        report.push(
            Rule::R1,
            format!("{what}: subject is {}, template has {}", f.subject, a.subject_number),
        );
    }
    if f.count != a.attractor_count || f.coordinated || f.first_coordinated {
        report.push(
            Rule::R2,
            format!(
                "{what}: {} attractor(s){}, template has {}",
                f.count,
                if f.coordinated || f.first_coordinated { " with coordination" } else { "" },
                a.attractor_count
            ),
        );
    }
    if f.n1 != Some(a.n1_number) {
        report.push(Rule::R3, format!("{what}: N1 is {:?}, template has {}", f.n1, a.n1_number));
    }
    if let (Some(got), Some(want)) = (f.n2, a.n2_number) {
        if got != want {
            report.push(Rule::R4, format!("{what}: N2 is {got}, template has {want}"));
        }
    }
}

fn check_unordered(report: &mut Report, rows: &[Features], template: &[PositionAssignment]) {
    for (i, f) in rows.iter().enumerate() {
        if f.subject != f.verb {
            report.push(Rule::R1, format!("context {i}: {} subject with {} verb", f.subject, f.verb));
        }
        if f.coordinated || f.first_coordinated {
            report.push(Rule::R2, format!("context {i}: coordination in a context row"));
        }
    }
    fn sorted<T: Ord>(mut v: Vec<T>) -> Vec<T> {
        v.sort();
        v
    }
    let checks: [(Rule, Vec<String>, Vec<String>); 4] = [
        (
            Rule::R1,
            rows.iter().map(|f| f.subject.to_string()).collect(),
            template.iter().map(|a| a.subject_number.to_string()).collect(),
        ),
        (
            Rule::R2,
            rows.iter().map(|f| f.count.to_string()).collect(),
            template.iter().map(|a| a.attractor_count.to_string()).collect(),
        ),
        (
            Rule::R3,
            rows.iter().map(|f| format!("{:?}", f.n1)).collect(),
            template.iter().map(|a| format!("{:?}", Some(a.n1_number))).collect(),
        ),
        (
            Rule::R4,
            rows.iter().filter_map(|f| f.n2.map(|n| n.to_string())).collect(),
            template.iter().filter_map(|a| a.n2_number.map(|n| n.to_string())).collect(),
        ),
    ];
    let mut marginals_ok = true;
    for (rule, got, want) in checks {
        if sorted(got) != sorted(want) {
            marginals_ok = false;
            report.push(rule, "shuffled rows are not a permutation of the template rows");
        }
    }
    if marginals_ok {
        let got = sorted(rows.iter().map(|f| (f.subject, f.n1, f.n2, f.count)).collect());
        let want = sorted(
            template
                .iter()
                .map(|a| (a.subject_number, Some(a.n1_number), a.n2_number, a.attractor_count))
                .collect(),
        );
        if got != want {
            report.push(Rule::R2, "shuffled rows pair attributes differently from the template");
        }
    }
}

/// Expected features of each distractor relative to the correct template
/// row, and the rule whose violation a mismatch signals.
fn distractor_expectation(contrast: ContrastType, a: &PositionAssignment) -> Option<(Rule, Features)> {
    let n2 = a.n2_number?;
    let base = Features {
        subject: a.subject_number,
        verb: a.subject_number,
        n1: Some(a.n1_number),
        n2: Some(n2),
        count: 2,
        coordinated: false,
        first_coordinated: false,
    };
    let singular = Features {
        subject: Number::Sing,
        verb: Number::Sing,
        n1: Some(Number::Sing),
        ..base
    };
    Some(match contrast {
        ContrastType::Correct => return None,
        ContrastType::Coord => (Rule::R2, Features { coordinated: true, ..singular }),
        ContrastType::WNA => (Rule::R2, Features { n2: None, count: 1, ..singular }),
        ContrastType::AE => (Rule::R1, Features { verb: Number::Plur, ..singular }),
        ContrastType::AlterN1 => (Rule::R3, Features { n1: Some(a.n1_number.flip()), ..base }),
        ContrastType::AlterN2 => (Rule::R4, Features { n2: Some(n2.flip()), ..base }),
    })
}

/// Lexical identity of a distractor with the correct answer, for answer sets
/// that share one binding.
fn same_lexemes(contrast: ContrastType, plan: &SentencePlan, correct: &SentencePlan) -> bool {
    if plan.subject != correct.subject || plan.verb != correct.verb {
        return false;
    }
    plan.attractors.iter().zip(&correct.attractors).enumerate().all(|(i, (x, y))| {
        x.noun == y.noun && (x.link == y.link || (contrast == ContrastType::Coord && i == 1))
    })
}

pub fn validate_matrix(m: &MatrixInstance, lexicon: &Lexicon) -> Vec<Violation> {
    let mut report = Report {
        id: &m.id,
        out: Vec::new(),
    };
    let template = match apply_rules(&m.program) {
        Ok(t) => t,
        Err(e) => {
            report.push(Rule::Malformed, e.to_string());
            return report.out;
        }
    };

    // Contexts.
    if m.contexts.len() != CONTEXT_LENGTH {
        report.push(
            Rule::Malformed,
            format!("{} contexts, expected {CONTEXT_LENGTH}", m.contexts.len()),
        );
    }
    let mut rows = Vec::new();
    for (i, surface) in m.contexts.iter().enumerate() {
        match parse_sentence(surface, lexicon) {
            Ok(plan) => {
                if plan.clause_type != m.clause_type {
                    report.push(
                        Rule::Malformed,
                        format!("context {i} is a {} clause in a {} matrix", plan.clause_type, m.clause_type),
                    );
                }
                rows.push(Features::of(&plan));
            }
            Err(e) => report.push(Rule::Malformed, format!("context {i}: {e}")),
        }
    }
    if rows.len() == m.contexts.len() && rows.len() == CONTEXT_LENGTH {
        if m.ordered {
            for (i, f) in rows.iter().enumerate() {
                check_against_template(&mut report, &format!("context {i}"), f, &template[i]);
            }
        } else {
            check_unordered(&mut report, &rows, &template[..CONTEXT_LENGTH]);
        }
    }

    // Answer set shape.
    let candidates = &m.answer_set.candidates;
    if candidates.len() != 6 {
        report.push(Rule::AnswerArity, format!("{} candidates, expected 6", candidates.len()));
    }
    for contrast in ContrastType::CANONICAL {
        let n = candidates.iter().filter(|c| c.contrast_type == contrast).count();
        if n != 1 {
            report.push(Rule::AnswerArity, format!("{contrast} appears {n} times"));
        }
    }
    match candidates.get(m.answer_set.correct_index) {
        Some(c) if c.contrast_type == ContrastType::Correct => {}
        _ => report.push(
            Rule::AnswerArity,
            format!("correct_index {} does not point at the Correct candidate", m.answer_set.correct_index),
        ),
    }
    let mut seen = HashSet::new();
    for c in candidates {
        if !seen.insert(c.surface.as_str()) {
            report.push(Rule::DuplicateAnswer, format!("{:?} appears more than once", c.surface));
        }
    }

    // Answer content.
    let answer_template = &template[CONTEXT_LENGTH];
    let parsed: Vec<Option<SentencePlan>> = candidates
        .iter()
        .map(|c| match parse_sentence(&c.surface, lexicon) {
            Ok(plan) => {
                if plan.clause_type != m.clause_type {
                    report.push(
                        Rule::Malformed,
                        format!("{} answer is a {} clause", c.contrast_type, plan.clause_type),
                    );
                }
                Some(plan)
            }
            Err(e) => {
                report.push(Rule::Malformed, format!("{} answer: {e}", c.contrast_type));
                None
            }
        })
        .collect();
    let correct_plan = candidates
        .iter()
        .zip(&parsed)
        .find(|(c, _)| c.contrast_type == ContrastType::Correct)
        .and_then(|(_, p)| p.as_ref());
    for (c, plan) in candidates.iter().zip(&parsed) {
        let Some(plan) = plan else { continue };
        let f = Features::of(plan);
        match distractor_expectation(c.contrast_type, answer_template) {
            None if c.contrast_type == ContrastType::Correct => {
                check_against_template(&mut report, "correct answer", &f, answer_template)
            }
            None => report.push(
                Rule::R2,
                format!("{} needs a two-attractor answer row", c.contrast_type),
            ),
            Some((rule, expected)) => {
                if f != expected {
                    report.push(
                        rule,
                        format!("{} answer {:?} is not its minimal pair", c.contrast_type, c.surface),
                    );
                } else if m.provenance.distractors == DistractorSource::Shared {
                    if let Some(correct) = correct_plan {
                        if !same_lexemes(c.contrast_type, plan, correct) {
                            report.push(
                                rule,
                                format!("{} answer uses different lexemes from the correct answer", c.contrast_type),
                            );
                        }
                    }
                }
            }
        }
    }

    // Provenance.
    if m.provenance.contexts.len() != m.contexts.len() {
        report.push(Rule::Malformed, "provenance does not cover every context");
    }
    for (i, (surface, row)) in m.contexts.iter().zip(&m.provenance.contexts).enumerate() {
        if linearize(&row.plan, lexicon).ok().as_deref() != Some(surface.as_str()) {
            report.push(Rule::Malformed, format!("provenance of context {i} does not realize it"));
        }
    }
    for c in candidates {
        if linearize(&c.plan, lexicon).ok().as_deref() != Some(c.surface.as_str()) {
            report.push(
                Rule::Malformed,
                format!("provenance of the {} answer does not realize it", c.contrast_type),
            );
        }
    }
    report.out
}
