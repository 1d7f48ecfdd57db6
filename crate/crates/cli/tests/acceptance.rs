//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.
//!
//! Pinned limits: golden reproduction under 1 s, 10,000-matrix conformance
//! sweep under 30 s, rotation and split counts exact.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use blm_core::dataset::RotationHistogram;
use blm_core::variation::derive_seed_for_id;
use blm_core::*;

const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
const SWEEP_LIMIT: Duration = Duration::from_secs(30);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const REFERENCE: [[&str; 8]; 3] = [
    [
        "L’ordinateur avec le programme est en panne.",
        "Les ordinateurs avec le programme sont en panne.",
        "L’ordinateur avec les programmes est en panne.",
        "Les ordinateurs avec les programmes sont en panne.",
        "L’ordinateur avec le programme de l’expérience est en panne.",
        "Les ordinateurs avec le programme de l’expérience sont en panne.",
        "L’ordinateur avec les programmes de l’expérience est en panne.",
        "Les ordinateurs avec les programmes de l’expérience sont en panne.",
    ],
    [
        "Jean suppose que l’ordinateur avec le programme est en panne.",
        "Jean suppose que les ordinateurs avec le programme sont en panne.",
        "Jean suppose que l’ordinateur avec les programmes est en panne.",
        "Jean suppose que les ordinateurs avec les programmes sont en panne.",
        "Jean suppose que l’ordinateur avec le programme de l’expérience est en panne.",
        "Jean suppose que les ordinateurs avec le programme de l’expérience sont en panne.",
        "Jean suppose que l’ordinateur avec les programmes de l’expérience est en panne.",
        "Jean suppose que les ordinateurs avec les programmes de l’expérience sont en panne.",
    ],
    [
        "L’ordinateur avec le programme dont Jean se servait est en panne.",
        "Les ordinateurs avec le programme dont Jean se servait sont en panne.",
        "L’ordinateur avec les programmes dont Jean se servait est en panne.",
        "Les ordinateurs avec les programmes dont Jean se servait sont en panne.",
        "L’ordinateur avec le programme de l’expérience dont Jean se servait est en panne.",
        "Les ordinateurs avec le programme de l’expérience dont Jean se servait sont en panne.",
        "L’ordinateur avec les programmes de l’expérience dont Jean se servait est en panne.",
        "Les ordinateurs avec les programmes de l’expérience dont Jean se servait sont en panne.",
    ],
];

const REFERENCE_ANSWERS: [(ContrastType, &str); 6] = [
    (ContrastType::Coord, "L’ordinateur avec le programme et l’expérience est en panne."),
    (ContrastType::Correct, "Les ordinateurs avec les programmes de l’expérience sont en panne."),
    (ContrastType::WNA, "L’ordinateur avec le programme est en panne."),
    (ContrastType::AE, "L’ordinateur avec le programme de l’expérience sont en panne."),
    (ContrastType::AlterN1, "Les ordinateurs avec le programme de l’expérience sont en panne."),
    (ContrastType::AlterN2, "Les ordinateurs avec les programmes des expériences sont en panne."),
];

fn golden() -> Outcome {
    let start = Instant::now();
    let lex = Lexicon::builtin();
    for (clause, expected) in ClauseType::ALL.into_iter().zip(REFERENCE) {
        let m = build_type1(&Binding::reference(), clause, &RuleProgram::default(), 0, &lex)
            .map_err(|e| e.to_string())?;
        ensure(m.contexts == expected[..7], || format!("{clause} contexts differ: {:?}", m.contexts))?;
        let answer = &m.answer_set.correct().surface;
        ensure(answer == expected[7], || format!("{clause} answer differs: {answer}"))?;
        if clause == ClauseType::Main {
            let got: Vec<(ContrastType, &str)> = m
                .answer_set
                .candidates
                .iter()
                .map(|c| (c.contrast_type, c.surface.as_str()))
                .collect();
            ensure(got == REFERENCE_ANSWERS, || format!("answer set differs: {got:?}"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < GOLDEN_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("3 matrices and 6 answers byte-identical in {elapsed:.2?}"))
}

fn conformance() -> Outcome {
    let start = Instant::now();
    let lex = Lexicon::builtin();
    let total = 10_000usize;
    // Every variation type under two seeds, the second run as shuffled controls.
    let configs: Vec<(VariationType, u64, bool)> = VariationType::ALL
        .into_iter()
        .flat_map(|v| [(v, 11, false), (v, 22, true)])
        .collect();
    let mut checked = 0;
    for (i, &(variation, seed, shuffled)) in configs.iter().enumerate() {
        let count = total / configs.len() + usize::from(i < total % configs.len());
        let mut config = GenerateConfig::new(variation, ClauseType::ALL.to_vec(), count, seed);
        config.shuffled = shuffled;
        for m in generate(&config, &lex).map_err(|e| e.to_string())? {
            let v = validate_matrix(&m, &lex);
            ensure(v.is_empty(), || format!("{}: {}", m.id, v[0]))?;
            checked += 1;
        }
    }
    ensure(checked == total, || format!("checked {checked} matrices"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < SWEEP_LIMIT, || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} matrices, 0 violations in {elapsed:.2?}"))
}

fn rotation() -> Outcome {
    let config = GenerateConfig::new(VariationType::I, ClauseType::ALL.to_vec(), 6_000, 5);
    let ms = generate(&config, &Lexicon::builtin()).map_err(|e| e.to_string())?;
    let h = RotationHistogram::of(&ms);
    for c in ContrastType::CANONICAL {
        for p in 0..6 {
            let n = h.count(c, p);
            ensure(n == 1_000, || format!("{c} at position {p}: {n}"))?;
        }
    }
    Ok("36 cells of 1000 over 6000 matrices".into())
}

fn split_arithmetic() -> Outcome {
    let config = GenerateConfig::new(VariationType::I, ClauseType::ALL.to_vec(), 44_800, 8);
    let ms = generate(&config, &Lexicon::builtin()).map_err(|e| e.to_string())?;
    let ids: BTreeSet<String> = ms.iter().map(|m| m.id.clone()).collect();
    let parts = split(ms, Fractions::new(0.8, 0.1, 0.1).map_err(|e| e.to_string())?, 8);
    let sizes = (parts.train.len(), parts.val.len(), parts.test.len());
    ensure(sizes == (35_840, 4_480, 4_480), || format!("sizes {sizes:?}"))?;
    let mut union = BTreeSet::new();
    for m in parts.train.iter().chain(&parts.val).chain(&parts.test) {
        ensure(union.insert(m.id.clone()), || format!("{} appears twice", m.id))?;
    }
    ensure(union == ids, || "union differs from input".into())?;
    Ok("(35840, 4480, 4480), disjoint, union complete".into())
}

fn blm(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_blm"))
        .args(args)
        .env_remove("BLM_LEXICON")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("blm {args:?} failed: {}", String::from_utf8_lossy(&out.stderr))
    })
}

/// Run every subcommand that writes files; return (relative path, bytes).
fn pipeline(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    for t in ["I", "II", "III"] {
        let out = p(&format!("{t}.jsonl"));
        blm(&["generate", "--type", t, "--count", "60", "--seed", "17", "--out", &out])?;
    }
    blm(&[
        "generate", "--type", "III", "--clauses", "relative", "--count", "12", "--seed", "3", "--shuffled",
        "--out", &p("ctl.jsonl"),
    ])?;
    blm(&["shuffle", "--in", &p("II.jsonl"), "--out", &p("II-shuf.jsonl"), "--seed", "4"])?;
    blm(&[
        "split", "--in", &p("I.jsonl"), "--train", "0.8", "--val", "0.1", "--test", "0.1", "--seed", "6",
        "--out-dir", &p("split"),
    ])?;
    let mut files = Vec::new();
    for root in [dir.to_path_buf(), dir.join("split")] {
        let mut paths: Vec<_> = std::fs::read_dir(&root)
            .map_err(|e| e.to_string())?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.is_file())
            .collect();
        paths.sort();
        for path in paths {
            let bytes = std::fs::read(&path).map_err(|e| e.to_string())?;
            files.push((path.strip_prefix(dir).unwrap().to_string_lossy().into_owned(), bytes));
        }
    }
    Ok(files)
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (fa, fb) = (pipeline(a.path())?, pipeline(b.path())?);
    ensure(fa.len() == fb.len(), || "different file sets".into())?;
    for ((na, ba), (nb, bb)) in fa.iter().zip(&fb) {
        ensure(na == nb, || format!("{na} vs {nb}"))?;
        ensure(ba == bb, || format!("{na} differs between runs"))?;
    }
    Ok(format!("{} output files byte-identical across two runs", fa.len()))
}

fn shuffle_control() -> Outcome {
    let lex = Lexicon::builtin();
    let config = GenerateConfig::new(VariationType::I, ClauseType::ALL.to_vec(), 1_000, 2);
    let ms = generate(&config, &lex).map_err(|e| e.to_string())?;
    for m in &ms {
        let s = shuffle_contexts(m, derive_seed_for_id(99, &m.id)).map_err(|e| e.to_string())?;
        let mut a = m.contexts.clone();
        let mut b = s.contexts.clone();
        a.sort();
        b.sort();
        ensure(a == b, || format!("{}: context multiset changed", m.id))?;
        ensure(s.answer_set == m.answer_set, || format!("{}: answer set changed", m.id))?;
        ensure(!s.ordered, || format!("{}: still marked ordered", m.id))?;
    }
    Ok("1000 matrices keep contexts and answers".into())
}

fn main() {
    let criteria: [Criterion; 6] = [
        ("golden-matrix reproduction", golden),
        ("rule conformance", conformance),
        ("rotation uniformity", rotation),
        ("split arithmetic", split_arithmetic),
        ("determinism", determinism),
        ("shuffle control", shuffle_control),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
