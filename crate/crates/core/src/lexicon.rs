//! French lexical material and noun-phrase realization.
//!
//! Surface forms are stored, never computed: each entry carries its singular
//! and plural form and an explicit vowel-onset flag that drives elision
//! (`l’ordinateur`, `l’hôpital`, but `la hache`).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// Typographic apostrophe used in every realized string.
pub const APOSTROPHE: char = '\u{2019}';

/// Prepositions that may introduce an attractor PP.
pub const PREPOSITIONS: &[&str] = &[
    "avec", "de", "sur", "à", "dans", "pour", "sous", "chez", "contre", "vers", "par", "sans",
];

static BUILTIN: &str = include_str!("../data/lexicon_fr.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Number {
    Sing,
    Plur,
}

impl Number {
    pub fn flip(self) -> Number {
        match self {
            Number::Sing => Number::Plur,
            Number::Plur => Number::Sing,
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Number::Sing => "sing",
            Number::Plur => "plur",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    Noun,
    Verb,
    FixedPP,
    FixedTMP,
    FixedMNR,
    RelClause,
    /// Completive embedding frame such as `Jean suppose que`.
    Frame,
}

impl Category {
    const ALL: [Category; 7] = [
        Category::Noun,
        Category::Verb,
        Category::FixedPP,
        Category::FixedTMP,
        Category::FixedMNR,
        Category::RelClause,
        Category::Frame,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Noun => "Noun",
            Category::Verb => "Verb",
            Category::FixedPP => "FixedPP",
            Category::FixedTMP => "FixedTMP",
            Category::FixedMNR => "FixedMNR",
            Category::RelClause => "RelClause",
            Category::Frame => "Frame",
        }
    }

    /// Categories whose entries may close a sentence after the verb.
    pub fn is_trailer(self) -> bool {
        matches!(self, Category::FixedPP | Category::FixedTMP | Category::FixedMNR)
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gender {
    Masc,
    Fem,
    NA,
}

impl FromStr for Gender {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "Masc" => Ok(Gender::Masc),
            "Fem" => Ok(Gender::Fem),
            "NA" => Ok(Gender::NA),
            _ => Err(format!("unknown gender {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub lemma: String,
    pub category: Category,
    pub gender: Gender,
    pub sing_form: String,
    pub plur_form: String,
    /// Singular form begins with a vowel or a mute h.
    pub vowel_onset: bool,
}

/// Where a noun phrase appears.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NpContext<'a> {
    Subject,
    AfterPrep(&'a str),
}

fn is_vowel_letter(c: char) -> bool {
    matches!(
        c.to_lowercase().next().unwrap_or(c),
        'a' | 'e' | 'i' | 'o' | 'u' | 'y' | 'à' | 'â' | 'ä' | 'é' | 'è' | 'ê' | 'ë' | 'î' | 'ï'
            | 'ô' | 'ö' | 'ù' | 'û' | 'ü' | 'ÿ' | 'æ' | 'œ'
    )
}

impl LexEntry {
    pub fn form(&self, number: Number) -> &str {
        match number {
            Number::Sing => &self.sing_form,
            Number::Plur => &self.plur_form,
        }
    }

    fn check(&self) -> std::result::Result<(), String> {
        if self.lemma.is_empty() || self.sing_form.is_empty() || self.plur_form.is_empty() {
            return Err("empty field".into());
        }
        if matches!(self.category, Category::Noun | Category::Verb)
            && self.sing_form == self.plur_form
        {
            return Err("singular and plural forms must differ".into());
        }
        if self.category == Category::Noun && self.gender == Gender::NA {
            return Err("nouns need a gender".into());
        }
        if self.category == Category::Noun && self.sing_form.contains(' ') {
            return Err("noun forms are single words".into());
        }
        // h may be mute or aspirated; every other letter fixes the onset class.
        let first = self.sing_form.chars().next().unwrap_or(' ');
        if !matches!(first, 'h' | 'H') && is_vowel_letter(first) != self.vowel_onset {
            return Err(format!(
                "vowel_onset={} contradicts the onset of {:?}",
                self.vowel_onset, self.sing_form
            ));
        }
        Ok(())
    }

    fn expect(&self, category: Category) -> Result<()> {
        if self.category == category {
            Ok(())
        } else {
            Err(Error::Category {
                lemma: self.lemma.clone(),
                expected: category,
                found: self.category,
            })
        }
    }
}

/// Determiner plus noun, with elision and preposition contraction.
pub fn realize_np(entry: &LexEntry, number: Number, context: NpContext<'_>) -> Result<String> {
    entry.expect(Category::Noun)?;
    let noun = entry.form(number);
    let det = match (number, entry.vowel_onset, entry.gender) {
        (Number::Plur, ..) => "les",
        (Number::Sing, true, _) => "l’",
        (Number::Sing, false, Gender::Fem) => "la",
        (Number::Sing, false, _) => "le",
    };
    let np = if det == "l’" {
        format!("l’{noun}")
    } else {
        format!("{det} {noun}")
    };
    Ok(match context {
        NpContext::Subject => np,
        NpContext::AfterPrep(prep) => match (prep, det) {
            ("de", "le") => format!("du {noun}"),
            ("de", "les") => format!("des {noun}"),
            ("à", "le") => format!("au {noun}"),
            ("à", "les") => format!("aux {noun}"),
            _ => format!("{prep} {np}"),
        },
    })
}

pub fn realize_verb(entry: &LexEntry, number: Number) -> Result<String> {
    entry.expect(Category::Verb)?;
    Ok(entry.form(number).to_owned())
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: BTreeMap<(Category, String), LexEntry>,
    prepositions: Vec<String>,
    noun_forms: HashMap<String, Vec<(String, Number)>>,
}

impl Lexicon {
    pub fn from_entries(entries: impl IntoIterator<Item = LexEntry>) -> Result<Lexicon> {
        let mut lexicon = Lexicon {
            entries: BTreeMap::new(),
            prepositions: PREPOSITIONS.iter().map(|p| p.to_string()).collect(),
            noun_forms: HashMap::new(),
        };
        for (i, entry) in entries.into_iter().enumerate() {
            lexicon.insert(i + 1, entry)?;
        }
        Ok(lexicon)
    }

    fn insert(&mut self, line: usize, entry: LexEntry) -> Result<()> {
        entry.check().map_err(|msg| Error::InvalidEntry {
            line,
            lemma: entry.lemma.clone(),
            msg,
        })?;
        let key = (entry.category, entry.lemma.clone());
        if self.entries.contains_key(&key) {
            return Err(Error::Duplicate {
                line,
                lemma: entry.lemma,
                category: entry.category,
            });
        }
        if entry.category == Category::Noun {
            for number in [Number::Sing, Number::Plur] {
                self.noun_forms
                    .entry(entry.form(number).to_owned())
                    .or_default()
                    .push((entry.lemma.clone(), number));
            }
        }
        self.entries.insert(key, entry);
        Ok(())
    }

    /// The lexicon shipped with the crate: the Franck-adapted items, the
    /// lexically varied exemplars, and an extension list.
    pub fn builtin() -> Lexicon {
        parse_lexicon(BUILTIN).expect("bundled lexicon is valid")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, lemma: &str, category: Category) -> Option<&LexEntry> {
        self.entries.get(&(category, lemma.to_owned()))
    }

    pub fn lookup(&self, lemma: &str, category: Category) -> Result<&LexEntry> {
        self.get(lemma, category).ok_or_else(|| Error::Lookup {
            lemma: lemma.to_owned(),
            category,
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values()
    }

    pub fn of_category(&self, category: Category) -> impl Iterator<Item = &LexEntry> {
        self.entries
            .range((category, String::new())..)
            .take_while(move |((c, _), _)| *c == category)
            .map(|(_, e)| e)
    }

    pub fn prepositions(&self) -> &[String] {
        &self.prepositions
    }

    pub fn is_preposition(&self, word: &str) -> bool {
        self.prepositions.iter().any(|p| p == word)
    }

    /// Noun lemmas (with number) whose stored form is `form`.
    pub fn nouns_with_form(&self, form: &str) -> &[(String, Number)] {
        self.noun_forms.get(form).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Generation needs three nouns, a verb, a completive frame and a
    /// relative clause.
    pub fn check_generation_ready(&self) -> Result<()> {
        let nouns = self.of_category(Category::Noun).count();
        if nouns < 3 {
            return Err(Error::Lookup {
                lemma: format!("<{} nouns, need 3>", nouns),
                category: Category::Noun,
            });
        }
        for category in [Category::Verb, Category::Frame, Category::RelClause] {
            if self.of_category(category).next().is_none() {
                return Err(Error::Lookup {
                    lemma: "<any>".into(),
                    category,
                });
            }
        }
        Ok(())
    }
}

fn normalize(text: &str) -> String {
    text.nfc().map(|c| if c == '\'' { APOSTROPHE } else { c }).collect()
}

/// Parse lexicon records from text. Input apostrophes are normalized to
/// U+2019 and the text to NFC.
pub fn parse_lexicon(text: &str) -> Result<Lexicon> {
    let text = normalize(text);
    let mut lexicon = Lexicon::from_entries([])?;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.split('\t').collect();
        if fields.len() != 6 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 6 tab-separated fields, found {}", fields.len()),
            });
        }
        let parse_err = |msg: String| Error::Parse { line, msg };
        let category: Category = fields[0].parse().map_err(parse_err)?;
        let gender: Gender = fields[2].parse().map_err(parse_err)?;
        let vowel_onset = match fields[5] {
            "true" => true,
            "false" => false,
            other => return Err(parse_err(format!("vowel_onset must be true/false, got {other:?}"))),
        };
        lexicon.insert(
            line,
            LexEntry {
                lemma: fields[1].to_owned(),
                category,
                gender,
                sing_form: fields[3].to_owned(),
                plur_form: fields[4].to_owned(),
                vowel_onset,
            },
        )?;
    }
    Ok(lexicon)
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<Lexicon> {
    let text = std::fs::read_to_string(path)?;
    parse_lexicon(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noun(lexicon: &Lexicon, lemma: &str) -> LexEntry {
        lexicon.lookup(lemma, Category::Noun).unwrap().clone()
    }

    #[test]
    fn singleton_load() {
        let lex = parse_lexicon("Noun\tordinateur\tMasc\tordinateur\tordinateurs\ttrue\n").unwrap();
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let lex = parse_lexicon("# header\n\nNoun\tchat\tMasc\tchat\tchats\tfalse\r\n").unwrap();
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn vowel_onset_contradiction_is_rejected() {
        let err = parse_lexicon("# c\nNoun\tordinateur\tMasc\tordinateur\tordinateurs\tfalse\n")
            .unwrap_err();
        assert!(matches!(err, Error::InvalidEntry { line: 2, .. }), "{err}");
    }

    #[test]
    fn h_onset_accepts_both_flags() {
        let lex = parse_lexicon(
            "Noun\thôpital\tMasc\thôpital\thôpitaux\ttrue\nNoun\thache\tFem\thache\thaches\tfalse\n",
        )
        .unwrap();
        let h = noun(&lex, "hôpital");
        assert_eq!(realize_np(&h, Number::Sing, NpContext::Subject).unwrap(), "l’hôpital");
        let h = noun(&lex, "hache");
        assert_eq!(realize_np(&h, Number::Sing, NpContext::Subject).unwrap(), "la hache");
    }

    #[test]
    fn duplicates_and_malformed_lines() {
        let dup = "Noun\tchat\tMasc\tchat\tchats\tfalse\nNoun\tchat\tMasc\tchat\tchats\tfalse\n";
        assert!(matches!(parse_lexicon(dup), Err(Error::Duplicate { line: 2, .. })));
        assert!(matches!(
            parse_lexicon("Noun\tchat\tMasc\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_lexicon("Adjective\tgrand\tMasc\tgrand\tgrands\tfalse\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        // Same lemma in two categories is fine.
        let ok = "Noun\tchange\tMasc\tchange\tchanges\tfalse\nVerb\tchange\tNA\tchange\tchangent\tfalse\n";
        assert_eq!(parse_lexicon(ok).unwrap().len(), 2);
    }

    #[test]
    fn identical_forms_rejected_for_nouns() {
        let err = parse_lexicon("Noun\tpalais\tMasc\tpalais\tpalais\tfalse\n").unwrap_err();
        assert!(matches!(err, Error::InvalidEntry { .. }));
    }

    #[test]
    fn ascii_apostrophe_is_normalized() {
        let lex = parse_lexicon("Verb\treposer\tNA\trepose sur l'étagère\treposent sur l'étagère\tfalse\n")
            .unwrap();
        let v = lex.lookup("reposer", Category::Verb).unwrap();
        assert_eq!(realize_verb(v, Number::Sing).unwrap(), "repose sur l’étagère");
    }

    #[test]
    fn decomposed_input_is_nfc_normalized() {
        let lex = parse_lexicon("Noun\te\u{301}cole\tFem\te\u{301}cole\te\u{301}coles\ttrue\n").unwrap();
        assert!(lex.get("école", Category::Noun).is_some());
    }

    #[test]
    fn reference_noun_phrases() {
        let lex = Lexicon::builtin();
        let ordinateur = noun(&lex, "ordinateur");
        let programme = noun(&lex, "programme");
        let experience = noun(&lex, "expérience");
        assert_eq!(
            realize_np(&ordinateur, Number::Sing, NpContext::Subject).unwrap(),
            "l’ordinateur"
        );
        assert_eq!(
            realize_np(&experience, Number::Plur, NpContext::AfterPrep("de")).unwrap(),
            "des expériences"
        );
        assert_eq!(
            realize_np(&programme, Number::Plur, NpContext::AfterPrep("avec")).unwrap(),
            "avec les programmes"
        );
        assert_eq!(
            realize_np(&programme, Number::Sing, NpContext::AfterPrep("de")).unwrap(),
            "du programme"
        );
        assert_eq!(
            realize_np(&experience, Number::Sing, NpContext::AfterPrep("de")).unwrap(),
            "de l’expérience"
        );
        assert_eq!(
            realize_np(&programme, Number::Plur, NpContext::AfterPrep("à")).unwrap(),
            "aux programmes"
        );
        assert_eq!(
            realize_np(&programme, Number::Sing, NpContext::AfterPrep("à")).unwrap(),
            "au programme"
        );
        let peinture = noun(&lex, "peinture");
        assert_eq!(
            realize_np(&peinture, Number::Sing, NpContext::AfterPrep("à")).unwrap(),
            "à la peinture"
        );
    }

    #[test]
    fn verbs() {
        let lex = Lexicon::builtin();
        let v = lex.lookup("être-en-panne", Category::Verb).unwrap();
        assert_eq!(realize_verb(v, Number::Sing).unwrap(), "est en panne");
        assert_eq!(realize_verb(v, Number::Plur).unwrap(), "sont en panne");
        let n = lex.lookup("ordinateur", Category::Noun).unwrap();
        assert!(matches!(realize_verb(n, Number::Sing), Err(Error::Category { .. })));
        assert!(matches!(
            realize_np(v, Number::Sing, NpContext::Subject),
            Err(Error::Category { .. })
        ));
    }

    #[test]
    fn builtin_is_generation_ready() {
        let lex = Lexicon::builtin();
        lex.check_generation_ready().unwrap();
        assert!(lex.of_category(Category::Noun).count() >= 40);
        assert!(lex.of_category(Category::Noun).all(|e| e.category == Category::Noun));
        assert!(Lexicon::from_entries([]).unwrap().check_generation_ready().is_err());
    }
}
