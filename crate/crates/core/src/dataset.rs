//! Line-delimited dataset files, manifests, splits and corpus statistics.
//!
//! One matrix per line, as a JSON object with a fixed key order: `id`,
//! `clause_type`, `variation_type`, `ordered`, `contexts`, `answers`,
//! `correct_index`, `program`, `provenance`. Writing is byte-deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::answers::{AnswerCandidate, AnswerSet, ContrastType};
use crate::error::{Error, Result};
use crate::grammar::{ClauseType, SentencePlan};
use crate::rules::{RuleProgram, CONTEXT_LENGTH};
use crate::validate::{Rule, Violation};
use crate::variation::{DistractorSource, MatrixInstance, Provenance, RowRecord, VariationType};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnswerRecord {
    surface: String,
    contrast_type: ContrastType,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProvenanceRecord {
    contexts: Vec<RowRecord>,
    answers: Vec<SentencePlan>,
    distractors: DistractorSource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRecord {
    id: String,
    clause_type: ClauseType,
    variation_type: VariationType,
    ordered: bool,
    contexts: Vec<String>,
    answers: Vec<AnswerRecord>,
    correct_index: usize,
    program: RuleProgram,
    provenance: ProvenanceRecord,
}

impl From<&MatrixInstance> for MatrixRecord {
    fn from(m: &MatrixInstance) -> Self {
        MatrixRecord {
            id: m.id.clone(),
            clause_type: m.clause_type,
            variation_type: m.variation_type,
            ordered: m.ordered,
            contexts: m.contexts.clone(),
            answers: m
                .answer_set
                .candidates
                .iter()
                .map(|c| AnswerRecord {
                    surface: c.surface.clone(),
                    contrast_type: c.contrast_type,
                })
                .collect(),
            correct_index: m.answer_set.correct_index,
            program: m.program,
            provenance: ProvenanceRecord {
                contexts: m.provenance.contexts.clone(),
                answers: m.answer_set.candidates.iter().map(|c| c.plan.clone()).collect(),
                distractors: m.provenance.distractors,
            },
        }
    }
}

impl MatrixRecord {
    fn into_instance(self, line: usize) -> Result<MatrixInstance> {
        if self.contexts.len() != CONTEXT_LENGTH {
            return Err(Error::ContextArity {
                line,
                found: self.contexts.len(),
            });
        }
        if self.provenance.contexts.len() != CONTEXT_LENGTH {
            return Err(Error::ContextArity {
                line,
                found: self.provenance.contexts.len(),
            });
        }
        if self.answers.len() != 6 {
            return Err(Error::AnswerArity {
                line,
                found: self.answers.len(),
            });
        }
        if self.provenance.answers.len() != 6 {
            return Err(Error::AnswerArity {
                line,
                found: self.provenance.answers.len(),
            });
        }
        if self.correct_index >= 6 {
            return Err(Error::Parse {
                line,
                msg: format!("correct_index {} out of range", self.correct_index),
            });
        }
        let candidates = self
            .answers
            .into_iter()
            .zip(self.provenance.answers)
            .map(|(a, plan)| AnswerCandidate {
                surface: a.surface,
                contrast_type: a.contrast_type,
                plan,
            })
            .collect();
        Ok(MatrixInstance {
            id: self.id,
            clause_type: self.clause_type,
            variation_type: self.variation_type,
            ordered: self.ordered,
            contexts: self.contexts,
            answer_set: AnswerSet {
                candidates,
                correct_index: self.correct_index,
            },
            program: self.program,
            provenance: Provenance {
                contexts: self.provenance.contexts,
                distractors: self.provenance.distractors,
            },
        })
    }
}

/// Serialize one matrix as a record line (without newline).
pub fn record_line(m: &MatrixInstance) -> String {
    serde_json::to_string(&MatrixRecord::from(m)).expect("records serialize")
}

/// Parse one record line; `line` is used in error messages.
pub fn parse_record(text: &str, line: usize) -> Result<MatrixInstance> {
    let record: MatrixRecord = serde_json::from_str(text).map_err(|e| Error::Parse {
        line,
        msg: e.to_string(),
    })?;
    record.into_instance(line)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountEntry {
    pub clause_type: ClauseType,
    pub variation_type: VariationType,
    pub ordered: bool,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub train: usize,
    pub val: usize,
    pub test: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format_version: u32,
    pub total: usize,
    pub counts: Vec<CountEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splits: Option<SplitSizes>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl DatasetManifest {
    pub fn for_matrices(matrices: &[MatrixInstance]) -> DatasetManifest {
        let mut counts: BTreeMap<(ClauseType, VariationType, bool), usize> = BTreeMap::new();
        for m in matrices {
            *counts.entry((m.clause_type, m.variation_type, m.ordered)).or_default() += 1;
        }
        DatasetManifest {
            format_version: FORMAT_VERSION,
            total: matrices.len(),
            counts: counts
                .into_iter()
                .map(|((clause_type, variation_type, ordered), count)| CountEntry {
                    clause_type,
                    variation_type,
                    ordered,
                    count,
                })
                .collect(),
            splits: None,
            seed: None,
        }
    }

    pub fn count(&self, clause: ClauseType, variation: VariationType, ordered: bool) -> usize {
        self.counts
            .iter()
            .find(|c| c.clause_type == clause && c.variation_type == variation && c.ordered == ordered)
            .map_or(0, |c| c.count)
    }
}

/// Sidecar manifest path for a dataset file.
pub fn manifest_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest");
    PathBuf::from(name)
}

pub fn write_matrices_to<W: Write>(matrices: &[MatrixInstance], mut writer: W) -> Result<DatasetManifest> {
    for m in matrices {
        writer.write_all(record_line(m).as_bytes())?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(DatasetManifest::for_matrices(matrices))
}

/// Write the dataset file; the manifest is returned, not written.
pub fn write_matrices(matrices: &[MatrixInstance], path: impl AsRef<Path>) -> Result<DatasetManifest> {
    write_matrices_to(matrices, BufWriter::new(File::create(path)?))
}

pub fn read_matrices_from<R: Read>(reader: R) -> Result<Vec<MatrixInstance>> {
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::Parse {
                line: line_no,
                msg: "invalid UTF-8".into(),
            },
            _ => Error::Io(e),
        })?;
        if line.is_empty() {
            continue;
        }
        out.push(parse_record(&line, line_no)?);
    }
    Ok(out)
}

/// Read a dataset file. When a sidecar manifest exists its format version
/// must match this build's.
pub fn read_matrices(path: impl AsRef<Path>) -> Result<Vec<MatrixInstance>> {
    let path = path.as_ref();
    let sidecar = manifest_path(path);
    if sidecar.exists() {
        let manifest = read_manifest(&sidecar)?;
        if manifest.format_version != FORMAT_VERSION {
            return Err(Error::Version {
                expected: FORMAT_VERSION,
                found: manifest.format_version,
            });
        }
    }
    read_matrices_from(File::open(path)?)
}

pub fn write_manifest(manifest: &DatasetManifest, path: impl AsRef<Path>) -> Result<()> {
    let mut line = serde_json::to_string(manifest).expect("manifest serializes");
    line.push('\n');
    std::fs::write(path, line)?;
    Ok(())
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let text = std::fs::read_to_string(path)?;
    let line = text.lines().next().unwrap_or_default();
    serde_json::from_str(line).map_err(|e| Error::Parse {
        line: 1,
        msg: e.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fractions {
    pub train: f64,
    pub val: f64,
    pub test: f64,
}

impl Fractions {
    pub fn new(train: f64, val: f64, test: f64) -> Result<Fractions> {
        let f = Fractions { train, val, test };
        for (name, v) in [("train", train), ("val", val), ("test", test)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Fractions(format!("{name} fraction {v} is not in [0, 1]")));
            }
        }
        let sum = train + val + test;
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Fractions(format!("fractions sum to {sum}, not 1")));
        }
        Ok(f)
    }

    pub fn sizes(&self, n: usize) -> SplitSizes {
        let train = ((n as f64) * self.train).round().min(n as f64) as usize;
        let val = (((n as f64) * self.val).round() as usize).min(n - train);
        SplitSizes {
            train,
            val,
            test: n - train - val,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Split<T> {
    pub train: Vec<T>,
    pub val: Vec<T>,
    pub test: Vec<T>,
}

impl<T> Split<T> {
    pub fn sizes(&self) -> SplitSizes {
        SplitSizes {
            train: self.train.len(),
            val: self.val.len(),
            test: self.test.len(),
        }
    }
}

/// Seeded shuffle, then cut into train / val / test.
pub fn split<T>(items: Vec<T>, fractions: Fractions, seed: u64) -> Split<T> {
    let sizes = fractions.sizes(items.len());
    let mut items = items;
    items.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let test = items.split_off(sizes.train + sizes.val);
    let val = items.split_off(sizes.train);
    Split {
        train: items,
        val,
        test,
    }
}

/// Counts of each contrast type at each answer position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationHistogram {
    pub matrices: usize,
    /// Indexed by canonical contrast index, then answer position.
    pub counts: [[usize; 6]; 6],
}

impl RotationHistogram {
    pub fn of(matrices: &[MatrixInstance]) -> RotationHistogram {
        let mut counts = [[0usize; 6]; 6];
        let mut n = 0;
        for m in matrices.iter().filter(|m| m.answer_set.candidates.len() == 6) {
            n += 1;
            for (pos, c) in m.answer_set.candidates.iter().enumerate() {
                counts[c.contrast_type.canonical_index()][pos] += 1;
            }
        }
        RotationHistogram { matrices: n, counts }
    }

    pub fn count(&self, contrast: ContrastType, position: usize) -> usize {
        self.counts[contrast.canonical_index()][position]
    }

    /// Cells deviating from the uniform count by more than one.
    pub fn skew(&self) -> Vec<Violation> {
        let uniform = self.matrices as f64 / 6.0;
        let mut out = Vec::new();
        for contrast in ContrastType::CANONICAL {
            for pos in 0..6 {
                let c = self.count(contrast, pos);
                if (c as f64 - uniform).abs() > 1.0 {
                    out.push(Violation {
                        matrix_id: "*".into(),
                        rule: Rule::RotationSkew,
                        detail: format!("{contrast} at position {pos}: {c} (uniform {uniform:.2})"),
                    });
                }
            }
        }
        out
    }
}

impl fmt::Display for RotationHistogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type")?;
        for pos in 0..6 {
            write!(f, "\tpos{pos}")?;
        }
        writeln!(f)?;
        for contrast in ContrastType::CANONICAL {
            write!(f, "{contrast}")?;
            for pos in 0..6 {
                write!(f, "\t{}", self.count(contrast, pos))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stats {
    pub manifest: DatasetManifest,
    pub histogram: RotationHistogram,
    pub violations: Vec<Violation>,
}

pub fn stats(matrices: &[MatrixInstance]) -> Stats {
    let histogram = RotationHistogram::of(matrices);
    Stats {
        manifest: DatasetManifest::for_matrices(matrices),
        violations: histogram.skew(),
        histogram,
    }
}
