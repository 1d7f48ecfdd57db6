//! Command-line front end for matrix generation and dataset handling.
//!
//! Exit codes: 0 success, 1 validation found violations, 2 usage error,
//! 3 any other failure (I/O, malformed input).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use blm_core::dataset::{manifest_path, write_manifest, DatasetManifest, SplitSizes};
use blm_core::variation::derive_seed_for_id;
use blm_core::{
    generate, load_lexicon, read_matrices, shuffle_contexts, split, stats, validate_matrix, write_matrices,
    ClauseType, Fractions, GenerateConfig, Lexicon, MatrixInstance, VariationType,
};
use clap::{Parser, Subcommand};

/// Environment variable naming the default lexicon file.
pub const LEXICON_ENV: &str = "BLM_LEXICON";

#[derive(Debug, Parser)]
#[command(name = "blm", about = "Generate and inspect agreement matrices", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate matrices into a JSON-lines file plus a sidecar manifest.
    Generate {
        #[arg(long = "type", value_parser = parse_variation)]
        variation: VariationType,
        /// Comma-separated clause types.
        #[arg(long, value_delimiter = ',', value_parser = parse_clause, default_value = "main,completive,relative")]
        clauses: Vec<ClauseType>,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Emit the shuffled-context control.
        #[arg(long)]
        shuffled: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Shuffle the contexts of every matrix in a file.
    Shuffle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Split a file into train / val / test.
    Split {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        train: f64,
        #[arg(long)]
        val: f64,
        #[arg(long)]
        test: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Check every matrix against the rule program; exit 1 on violations.
    Validate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
    },
    /// Print counts and the answer-rotation histogram.
    Stats {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn parse_variation(s: &str) -> Result<VariationType, String> {
    VariationType::parse(s).ok_or_else(|| format!("unknown variation type {s:?} (expected I, II or III)"))
}

fn parse_clause(s: &str) -> Result<ClauseType, String> {
    ClauseType::parse(s.trim()).ok_or_else(|| format!("unknown clause type {s:?}"))
}

enum Failure {
    Usage(String),
    Other(String),
}

impl From<blm_core::Error> for Failure {
    fn from(e: blm_core::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Other(e.to_string())
    }
}

fn lexicon(flag: Option<PathBuf>) -> Result<Lexicon, Failure> {
    match flag.or_else(|| std::env::var_os(LEXICON_ENV).map(PathBuf::from)) {
        Some(path) => load_lexicon(&path).map_err(|e| Failure::Other(format!("{}: {e}", path.display()))),
        None => Ok(Lexicon::builtin()),
    }
}

fn read(path: &Path) -> Result<Vec<MatrixInstance>, Failure> {
    read_matrices(path).map_err(|e| Failure::Other(format!("{}: {e}", path.display())))
}

/// Write data plus sidecar manifest.
fn write(matrices: &[MatrixInstance], path: &Path, seed: Option<u64>, splits: Option<SplitSizes>) -> Result<DatasetManifest, Failure> {
    let mut manifest = write_matrices(matrices, path)?;
    manifest.seed = seed;
    manifest.splits = splits;
    write_manifest(&manifest, manifest_path(path))?;
    Ok(manifest)
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Generate {
            variation,
            clauses,
            count,
            seed,
            lexicon: lex_path,
            shuffled,
            out: path,
        } => {
            let lex = lexicon(lex_path)?;
            let mut config = GenerateConfig::new(variation, clauses, count, seed);
            config.shuffled = shuffled;
            let matrices = generate(&config, &lex)?;
            write(&matrices, &path, Some(seed), None)?;
            writeln!(out, "wrote {} matrices to {}", matrices.len(), path.display())?;
        }
        Command::Shuffle { input, out: path, seed } => {
            let shuffled = read(&input)?
                .iter()
                .map(|m| shuffle_contexts(m, derive_seed_for_id(seed, &m.id)))
                .collect::<blm_core::Result<Vec<_>>>()?;
            write(&shuffled, &path, Some(seed), None)?;
            writeln!(out, "wrote {} matrices to {}", shuffled.len(), path.display())?;
        }
        Command::Split {
            input,
            train,
            val,
            test,
            seed,
            out_dir,
        } => {
            let fractions = Fractions::new(train, val, test).map_err(|e| Failure::Usage(e.to_string()))?;
            let matrices = read(&input)?;
            let mut manifest = DatasetManifest::for_matrices(&matrices);
            let parts = split(matrices, fractions, seed);
            let sizes = parts.sizes();
            std::fs::create_dir_all(&out_dir)?;
            for (name, part) in [("train", &parts.train), ("val", &parts.val), ("test", &parts.test)] {
                write(part, &out_dir.join(format!("{name}.jsonl")), Some(seed), None)?;
            }
            manifest.seed = Some(seed);
            manifest.splits = Some(sizes);
            write_manifest(&manifest, out_dir.join("manifest.jsonl"))?;
            writeln!(out, "train {}\tval {}\ttest {}", sizes.train, sizes.val, sizes.test)?;
        }
        Command::Validate { input, lexicon: lex_path } => {
            let lex = lexicon(lex_path)?;
            let matrices = read(&input)?;
            let mut found = 0;
            for m in &matrices {
                for v in validate_matrix(m, &lex) {
                    writeln!(out, "{v}")?;
                    found += 1;
                }
            }
            if found > 0 {
                return Ok(1);
            }
            writeln!(out, "{} matrices, no violations", matrices.len())?;
        }
        Command::Stats { input } => {
            let s = stats(&read(&input)?);
            writeln!(out, "{}", serde_json::to_string(&s.manifest).expect("manifest serializes"))?;
            write!(out, "{}", s.histogram)?;
            for v in &s.violations {
                writeln!(out, "{v}")?;
            }
        }
    }
    Ok(0)
}

/// Run with explicit arguments (the first is the program name) and return
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            3
        }
    }
}
