//! Sentence plans and their linearization.
//!
//! A plan is the attribute-value description of one sentence: clause
//! construction, subject and attractor numbers, and the lemmas filling each
//! slot. [`linearize`] turns a plan into a surface string.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{realize_np, Category, Lexicon, Number, NpContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClauseType {
    Main,
    Completive,
    Relative,
}

impl ClauseType {
    pub const ALL: [ClauseType; 3] = [ClauseType::Main, ClauseType::Completive, ClauseType::Relative];

    pub fn as_str(self) -> &'static str {
        match self {
            ClauseType::Main => "main",
            ClauseType::Completive => "completive",
            ClauseType::Relative => "relative",
        }
    }

    pub fn parse(s: &str) -> Option<ClauseType> {
        ClauseType::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for ClauseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How an attractor noun attaches to the phrase before it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Link {
    Prep(String),
    /// `et` + NP, used by the coordination distractor.
    Coord,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AttractorSlot {
    pub link: Link,
    pub noun: String,
    pub number: Number,
}

impl AttractorSlot {
    pub fn prep(preposition: &str, noun: &str, number: Number) -> AttractorSlot {
        AttractorSlot {
            link: Link::Prep(preposition.to_owned()),
            noun: noun.to_owned(),
            number,
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SentencePlan {
    pub clause_type: ClauseType,
    pub subject: String,
    pub subject_number: Number,
    /// Subject realized without determiner.
    #[serde(default, skip_serializing_if = "is_false")]
    pub bare_subject: bool,
    pub attractors: Vec<AttractorSlot>,
    pub verb: String,
    pub verb_number: Number,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relclause: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trailer: Option<String>,
    /// Set on deliberately ungrammatical plans (agreement-error distractors).
    #[serde(default, skip_serializing_if = "is_false")]
    pub agreement_override: bool,
}

impl SentencePlan {
    pub fn attractor_count(&self) -> usize {
        self.attractors.len()
    }

    pub fn n1(&self) -> Option<&AttractorSlot> {
        self.attractors.first()
    }

    pub fn n2(&self) -> Option<&AttractorSlot> {
        self.attractors.get(1)
    }

    pub fn is_grammatical(&self) -> bool {
        self.verb_number == self.subject_number
    }

    pub fn check(&self) -> Result<()> {
        if !(1..=2).contains(&self.attractors.len()) {
            return Err(Error::Plan(format!(
                "{} attractors, expected 1 or 2",
                self.attractors.len()
            )));
        }
        if self.attractors[0].link == Link::Coord {
            return Err(Error::Plan("first attractor cannot be coordinated".into()));
        }
        if !self.is_grammatical() && !self.agreement_override {
            return Err(Error::Plan(format!(
                "{} verb with {} subject and no agreement override",
                self.verb_number, self.subject_number
            )));
        }
        match self.clause_type {
            ClauseType::Completive if self.frame.is_none() => {
                Err(Error::Plan("completive clause without frame".into()))
            }
            ClauseType::Relative if self.relclause.is_none() => {
                Err(Error::Plan("relative clause without relative-clause material".into()))
            }
            _ => Ok(()),
        }
    }
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Realize a plan as a single sentence with terminal period.
pub fn linearize(plan: &SentencePlan, lexicon: &Lexicon) -> Result<String> {
    plan.check()?;
    let subject = lexicon.lookup(&plan.subject, Category::Noun)?;
    let mut body = if plan.bare_subject {
        subject.form(plan.subject_number).to_owned()
    } else {
        realize_np(subject, plan.subject_number, NpContext::Subject)?
    };
    for slot in &plan.attractors {
        let noun = lexicon.lookup(&slot.noun, Category::Noun)?;
        body.push(' ');
        match &slot.link {
            Link::Prep(p) => {
                if !lexicon.is_preposition(p) {
                    return Err(Error::UnknownPreposition(p.clone()));
                }
                body.push_str(&realize_np(noun, slot.number, NpContext::AfterPrep(p))?);
            }
            Link::Coord => {
                body.push_str("et ");
                body.push_str(&realize_np(noun, slot.number, NpContext::Subject)?);
            }
        }
    }
    if plan.clause_type == ClauseType::Relative {
        let rel = plan.relclause.as_deref().unwrap_or_default();
        body.push(' ');
        body.push_str(&lexicon.lookup(rel, Category::RelClause)?.sing_form);
    }
    let verb = lexicon.lookup(&plan.verb, Category::Verb)?;
    body.push(' ');
    body.push_str(verb.form(plan.verb_number));
    if let Some(trailer) = &plan.trailer {
        let entry = lexicon
            .entries()
            .find(|e| e.category.is_trailer() && &e.lemma == trailer)
            .ok_or_else(|| Error::Lookup {
                lemma: trailer.clone(),
                category: Category::FixedTMP,
            })?;
        body.push(' ');
        body.push_str(&entry.sing_form);
    }
    let mut sentence = match plan.clause_type {
        ClauseType::Completive => {
            let frame = plan.frame.as_deref().unwrap_or_default();
            format!("{} {}", lexicon.lookup(frame, Category::Frame)?.sing_form, body)
        }
        _ => capitalize(&body),
    };
    sentence.push('.');
    Ok(sentence)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fig_plan(clause: ClauseType, subj: Number, attractors: &[Number]) -> SentencePlan {
        let nouns = [("avec", "programme"), ("de", "expérience")];
        SentencePlan {
            clause_type: clause,
            subject: "ordinateur".into(),
            subject_number: subj,
            bare_subject: false,
            attractors: attractors
                .iter()
                .zip(nouns)
                .map(|(n, (p, noun))| AttractorSlot::prep(p, noun, *n))
                .collect(),
            verb: "être-en-panne".into(),
            verb_number: subj,
            frame: (clause == ClauseType::Completive).then(|| "jean-supposer".into()),
            relclause: (clause == ClauseType::Relative).then(|| "jean-se-servir".into()),
            trailer: None,
            agreement_override: false,
        }
    }

    #[test]
    fn reference_rows() {
        use Number::*;
        let lex = Lexicon::builtin();
        assert_eq!(
            linearize(&fig_plan(ClauseType::Main, Sing, &[Sing]), &lex).unwrap(),
            "L’ordinateur avec le programme est en panne."
        );
        assert_eq!(
            linearize(&fig_plan(ClauseType::Completive, Plur, &[Sing, Sing]), &lex).unwrap(),
            "Jean suppose que les ordinateurs avec le programme de l’expérience sont en panne."
        );
        assert_eq!(
            linearize(&fig_plan(ClauseType::Relative, Sing, &[Plur]), &lex).unwrap(),
            "L’ordinateur avec les programmes dont Jean se servait est en panne."
        );
    }

    #[test]
    fn coordination_and_trailer() {
        use Number::*;
        let lex = Lexicon::builtin();
        let mut plan = fig_plan(ClauseType::Main, Sing, &[Sing, Sing]);
        plan.attractors[1].link = Link::Coord;
        plan.trailer = Some("depuis-hier".into());
        assert_eq!(
            linearize(&plan, &lex).unwrap(),
            "L’ordinateur avec le programme et l’expérience est en panne depuis hier."
        );
    }

    #[test]
    fn bare_subject() {
        let lex = Lexicon::builtin();
        let mut plan = fig_plan(ClauseType::Main, Number::Plur, &[Number::Sing]);
        plan.bare_subject = true;
        assert_eq!(
            linearize(&plan, &lex).unwrap(),
            "Ordinateurs avec le programme sont en panne."
        );
    }

    #[test]
    fn plan_errors() {
        use Number::*;
        let lex = Lexicon::builtin();
        let mut plan = fig_plan(ClauseType::Main, Sing, &[Sing]);
        plan.verb_number = Plur;
        assert!(matches!(linearize(&plan, &lex), Err(Error::Plan(_))));
        plan.agreement_override = true;
        assert_eq!(
            linearize(&plan, &lex).unwrap(),
            "L’ordinateur avec le programme sont en panne."
        );

        let mut plan = fig_plan(ClauseType::Main, Sing, &[Sing]);
        plan.subject = "licorne".into();
        assert!(matches!(linearize(&plan, &lex), Err(Error::Lookup { .. })));

        let mut plan = fig_plan(ClauseType::Main, Sing, &[Sing]);
        plan.attractors[0].link = Link::Prep("malgré".into());
        assert!(matches!(linearize(&plan, &lex), Err(Error::UnknownPreposition(_))));

        let plan = fig_plan(ClauseType::Main, Sing, &[]);
        assert!(matches!(linearize(&plan, &lex), Err(Error::Plan(_))));

        let mut plan = fig_plan(ClauseType::Completive, Sing, &[Sing]);
        plan.frame = None;
        assert!(matches!(linearize(&plan, &lex), Err(Error::Plan(_))));
    }
}
