//! Recognizer for generated sentences.
//!
//! [`parse_sentence`] reads a surface string back into a [`SentencePlan`]
//! using only the lexicon's stored forms: frame and relative-clause material
//! are matched literally, the verb by suffix, and the noun-phrase chain token
//! by token with determiners and contracted prepositions undone. Agreement
//! features come from the recognized forms, never from any record attached to
//! the sentence.

use crate::error::{Error, Result};
use crate::grammar::{linearize, AttractorSlot, ClauseType, Link, SentencePlan};
use crate::lexicon::{Category, Gender, Lexicon, Number, APOSTROPHE};

fn fail<T>(sentence: &str, msg: impl Into<String>) -> Result<T> {
    Err(Error::Analysis {
        sentence: sentence.to_owned(),
        msg: msg.into(),
    })
}

fn lowercase_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// Longest entry of `categories` whose form closes `text` after a space.
fn strip_suffix_entry<'a>(
    text: &'a str,
    lexicon: &'a Lexicon,
    categories: &[Category],
    numbers: &[Number],
) -> Option<(&'a str, String, Number)> {
    let mut best: Option<(&str, String, Number)> = None;
    for &category in categories {
        for entry in lexicon.of_category(category) {
            for &number in numbers {
                let form = entry.form(number);
                let Some(head) = text.strip_suffix(form).and_then(|h| h.strip_suffix(' ')) else {
                    continue;
                };
                if best.as_ref().is_none_or(|(h, ..)| head.len() < h.len()) {
                    best = Some((head, entry.lemma.clone(), number));
                }
            }
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Det {
    Le,
    La,
    Elided,
    Les,
}

impl Det {
    fn from_token(tok: &str) -> Option<Det> {
        match tok {
            "le" => Some(Det::Le),
            "la" => Some(Det::La),
            "les" => Some(Det::Les),
            "l\u{2019}" => Some(Det::Elided),
            _ => None,
        }
    }
}

fn tokenize(text: &str) -> Option<Vec<&str>> {
    let mut out = Vec::new();
    for tok in text.split(' ') {
        if tok.is_empty() {
            return None;
        }
        let elided = tok
            .strip_prefix('l')
            .and_then(|r| r.strip_prefix(APOSTROPHE))
            .filter(|r| !r.is_empty());
        match elided {
            Some(rest) => {
                out.push(&tok[..'l'.len_utf8() + APOSTROPHE.len_utf8()]);
                out.push(rest);
            }
            None => out.push(tok),
        }
    }
    Some(out)
}

struct NpReader<'a> {
    sentence: &'a str,
    lexicon: &'a Lexicon,
    tokens: Vec<&'a str>,
    pos: usize,
}

impl<'a> NpReader<'a> {
    fn next(&mut self) -> Option<&'a str> {
        let t = self.tokens.get(self.pos).copied();
        self.pos += 1;
        t
    }

    fn done(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    /// A noun form agreeing with `det` (or any noun when there is none).
    fn noun(&mut self, det: Option<Det>) -> Result<(String, Number)> {
        let Some(tok) = self.next() else {
            return fail(self.sentence, "noun phrase ends before its noun");
        };
        for (lemma, number) in self.lexicon.nouns_with_form(tok) {
            let Some(entry) = self.lexicon.get(lemma, Category::Noun) else {
                continue;
            };
            let agrees = match det {
                None => true,
                Some(Det::Les) => *number == Number::Plur,
                Some(Det::Elided) => *number == Number::Sing && entry.vowel_onset,
                Some(Det::Le) => {
                    *number == Number::Sing && !entry.vowel_onset && entry.gender == Gender::Masc
                }
                Some(Det::La) => {
                    *number == Number::Sing && !entry.vowel_onset && entry.gender == Gender::Fem
                }
            };
            if agrees {
                return Ok((lemma.clone(), *number));
            }
        }
        fail(self.sentence, format!("no noun agreeing with {det:?} for {tok:?}"))
    }

    fn det_noun(&mut self) -> Result<(String, Number)> {
        let tok = self.next().unwrap_or_default();
        match Det::from_token(tok) {
            Some(det) => self.noun(Some(det)),
            None => fail(self.sentence, format!("expected a determiner, found {tok:?}")),
        }
    }

    fn subject(&mut self) -> Result<(String, Number, bool)> {
        match self.tokens.first().copied().and_then(Det::from_token) {
            Some(_) => self.det_noun().map(|(l, n)| (l, n, false)),
            None => self.noun(None).map(|(l, n)| (l, n, true)),
        }
    }

    fn attractor(&mut self) -> Result<AttractorSlot> {
        let tok = self.next().unwrap_or_default();
        let contracted = match tok {
            "du" => Some(("de", Det::Le)),
            "des" => Some(("de", Det::Les)),
            "au" => Some(("à", Det::Le)),
            "aux" => Some(("à", Det::Les)),
            _ => None,
        };
        let (link, (noun, number)) = if let Some((prep, det)) = contracted {
            (Link::Prep(prep.into()), self.noun(Some(det))?)
        } else if tok == "et" {
            (Link::Coord, self.det_noun()?)
        } else if self.lexicon.is_preposition(tok) {
            (Link::Prep(tok.into()), self.det_noun()?)
        } else {
            return fail(self.sentence, format!("expected a preposition, found {tok:?}"));
        };
        Ok(AttractorSlot { link, noun, number })
    }
}

/// Recover the plan behind a generated sentence.
///
/// Sentences whose shape the grammar can produce must also be in canonical
/// form (re-realizing the recovered plan gives back the input byte for
/// byte). Shapes outside the grammar, such as three attractors or a
/// coordinated first attractor, are returned as recognized so callers can
/// report which rule they break.
pub fn parse_sentence(surface: &str, lexicon: &Lexicon) -> Result<SentencePlan> {
    let Some(text) = surface.strip_suffix('.') else {
        return fail(surface, "missing terminal period");
    };

    let mut clause_type = ClauseType::Main;
    let mut frame = None;
    let mut rest = None;
    for entry in lexicon.of_category(Category::Frame) {
        if let Some(body) = text.strip_prefix(entry.sing_form.as_str()).and_then(|b| b.strip_prefix(' ')) {
            clause_type = ClauseType::Completive;
            frame = Some(entry.lemma.clone());
            rest = Some(body.to_owned());
            break;
        }
    }
    let rest = rest.unwrap_or_else(|| lowercase_first(text));

    let trailer_categories = [Category::FixedPP, Category::FixedTMP, Category::FixedMNR];
    let (rest, trailer) = match strip_suffix_entry(&rest, lexicon, &trailer_categories, &[Number::Sing]) {
        Some((head, lemma, _)) => (head, Some(lemma)),
        None => (rest.as_str(), None),
    };
    let Some((rest, verb, verb_number)) =
        strip_suffix_entry(rest, lexicon, &[Category::Verb], &[Number::Sing, Number::Plur])
    else {
        return fail(surface, "no verb form closes the sentence");
    };
    let mut relclause = None;
    let mut rest = rest;
    if clause_type == ClauseType::Main {
        if let Some((head, lemma, _)) =
            strip_suffix_entry(rest, lexicon, &[Category::RelClause], &[Number::Sing])
        {
            clause_type = ClauseType::Relative;
            relclause = Some(lemma);
            rest = head;
        }
    }

    let Some(tokens) = tokenize(rest) else {
        return fail(surface, "empty token");
    };
    let mut reader = NpReader {
        sentence: surface,
        lexicon,
        tokens,
        pos: 0,
    };
    let (subject, subject_number, bare_subject) = reader.subject()?;
    let mut attractors = Vec::new();
    while !reader.done() {
        attractors.push(reader.attractor()?);
    }

    let plan = SentencePlan {
        clause_type,
        subject,
        subject_number,
        bare_subject,
        attractors,
        verb,
        verb_number,
        frame,
        relclause,
        trailer,
        agreement_override: verb_number != subject_number,
    };
    if plan.check().is_ok() {
        match linearize(&plan, lexicon) {
            Ok(canonical) if canonical == surface => {}
            Ok(canonical) => {
                return fail(surface, format!("not in canonical form (expected {canonical:?})"))
            }
            Err(e) => return fail(surface, e.to_string()),
        }
    }
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recognizes_reference_sentences() {
        let lex = Lexicon::builtin();
        let p = parse_sentence(
            "Jean suppose que les ordinateurs avec le programme de l’expérience sont en panne.",
            &lex,
        )
        .unwrap();
        assert_eq!(p.clause_type, ClauseType::Completive);
        assert_eq!(p.subject, "ordinateur");
        assert_eq!(p.subject_number, Number::Plur);
        assert_eq!(
            p.attractors,
            vec![
                AttractorSlot::prep("avec", "programme", Number::Sing),
                AttractorSlot::prep("de", "expérience", Number::Sing),
            ]
        );
        assert_eq!(p.verb_number, Number::Plur);

        let p = parse_sentence("L’ordinateur avec les programmes dont Jean se servait est en panne.", &lex)
            .unwrap();
        assert_eq!(p.clause_type, ClauseType::Relative);
        assert_eq!(p.attractors[0].number, Number::Plur);

        let p = parse_sentence("L’ordinateur avec le programme de l’expérience sont en panne.", &lex).unwrap();
        assert!(p.agreement_override);
        assert!(!p.is_grammatical());

        let p = parse_sentence("L’ordinateur avec le programme et l’expérience est en panne.", &lex).unwrap();
        assert_eq!(p.attractors[1].link, Link::Coord);
    }

    #[test]
    fn contractions_are_undone() {
        let lex = Lexicon::builtin();
        let p = parse_sentence("Les responsables du droit vont démissionner.", &lex).unwrap();
        assert_eq!(p.attractors, vec![AttractorSlot::prep("de", "droit", Number::Sing)]);
        let p = parse_sentence("La menace des réformes dans l’école inquiète les médecins.", &lex).unwrap();
        assert_eq!(p.attractors[0], AttractorSlot::prep("de", "réforme", Number::Plur));
        assert_eq!(p.attractors[1], AttractorSlot::prep("dans", "école", Number::Sing));
        assert_eq!(p.verb, "inquiéter-les-médecins");
    }

    #[test]
    fn rejects_non_canonical_input() {
        let lex = Lexicon::builtin();
        for bad in [
            "L’ordinateur avec le programme est en panne",
            "l’ordinateur avec le programme est en panne.",
            "Les menaces de les réformes inquiètent les médecins.",
            "L’ordinateur avec la programme est en panne.",
            "L’ordinateur  avec le programme est en panne.",
            "L’ordinateur avec le programme mange.",
            "Le ordinateur avec le programme est en panne.",
            "",
            ".",
        ] {
            assert!(parse_sentence(bad, &lex).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn out_of_grammar_shapes_are_reported_not_rejected() {
        let lex = Lexicon::builtin();
        let p = parse_sentence(
            "L’ordinateur avec le programme de l’expérience sur la table est en panne.",
            &lex,
        )
        .unwrap();
        assert_eq!(p.attractor_count(), 3);
    }
}
