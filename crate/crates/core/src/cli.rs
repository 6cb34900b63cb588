//! The `symtern` command-line tool.
//!
//! Exit codes: 0 success, 1 semantic failure (not a metric, not binary,
//! reconstruction failed), 2 invalid object (bad tree, missing color,
//! non-discriminating tree with `--require-discriminating`), 3 unreadable
//! input or file-format error. Data goes to stdout (or `--output`),
//! diagnostics to stderr.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::checks::{verify_metric, StarMode, VerifyOptions};
use crate::error::TreeError;
use crate::newick::parse_newick;
use crate::oracle;
use crate::quartets::generate_quartets;
use crate::reconstruct::{check_binary, reconstruct_with_trace};
use crate::table::{parse_table, write_table};
use crate::ternary::TernaryMap;
use crate::tree::ColoredTree;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SEMANTIC: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "symtern", version, about = "Symbolic ternary metrics on colored phylogenetic trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write data to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newick tree to triple table.
    Encode {
        /// Newick file, or `-` for stdin.
        input: String,
        /// Reject trees with two adjacent vertices of the same color.
        #[arg(long)]
        require_discriminating: bool,
    },
    /// Check whether a triple table is a symbolic ternary metric.
    Verify {
        /// Triple table file, or `-` for stdin.
        input: String,
        /// Stop at the first violation.
        #[arg(long)]
        fail_fast: bool,
        /// Also report 4-sets without a resolving fifth taxon.
        #[arg(long)]
        star: bool,
        /// Use the exact resolver pattern for `--star` (`false` accepts any 4-6 split).
        #[arg(long, num_args = 0..=1, default_value_t = true, default_missing_value = "true", value_name = "BOOL")]
        strict_star: bool,
    },
    /// Rebuild the tree of a triple table and print it as Newick.
    Reconstruct {
        /// Triple table file, or `-` for stdin.
        input: String,
        /// Print each contraction step to stderr.
        #[arg(long)]
        trace: bool,
        /// Also write the tree in Graphviz format.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// List the quartets generated by a triple table.
    Quartets {
        /// Triple table file, or `-` for stdin.
        input: String,
    },
    /// Exit 0 iff the table is a metric of a binary tree.
    CheckBinary {
        /// Triple table file, or `-` for stdin.
        input: String,
        /// Use the exact resolver pattern (`false` accepts any 4-6 split).
        #[arg(long, num_args = 0..=1, default_value_t = true, default_missing_value = "true", value_name = "BOOL")]
        strict_star: bool,
    },
    /// Run the built-in exhaustive checks on small trees.
    Selftest,
}

/// What a command produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn fail(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

fn star_mode(strict: bool) -> StarMode {
    if strict {
        StarMode::Strict
    } else {
        StarMode::Loose
    }
}

fn read_input(input: &str) -> Result<String, Outcome> {
    let result = if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map(|_| s)
    } else {
        std::fs::read_to_string(input)
    };
    result.map_err(|e| Outcome::fail(EXIT_FORMAT, format!("cannot read {input}: {e}")))
}

fn read_table(input: &str) -> Result<TernaryMap, Outcome> {
    let text = read_input(input)?;
    parse_table(&text).map_err(|e| Outcome::fail(EXIT_FORMAT, format!("{input}: {e}")))
}

fn read_tree(input: &str) -> Result<ColoredTree, Outcome> {
    let text = read_input(input)?;
    parse_newick(&text).map_err(|e: TreeError| {
        let code = if e.is_syntax() { EXIT_FORMAT } else { EXIT_INVALID };
        Outcome::fail(code, format!("{input}: {e}"))
    })
}

fn encode(input: &str, require_discriminating: bool) -> Result<Outcome, Outcome> {
    let tree = read_tree(input)?;
    if require_discriminating && !tree.is_discriminating() {
        return Err(Outcome::fail(EXIT_INVALID, "adjacent interior vertices share a color"));
    }
    Ok(Outcome { stdout: write_table(&tree.encode()), ..Default::default() })
}

fn verify(input: &str, options: &VerifyOptions) -> Result<Outcome, Outcome> {
    let map = read_table(input)?;
    let report = verify_metric(&map, options);
    let code = if report.verdict { EXIT_OK } else { EXIT_SEMANTIC };
    Ok(Outcome { code, stdout: report.to_string(), stderr: String::new() })
}

fn reconstruct(input: &str, trace: bool, dot: Option<&Path>) -> Result<Outcome, Outcome> {
    let map = read_table(input)?;
    let result = reconstruct_with_trace(&map).map_err(|e| Outcome::fail(EXIT_SEMANTIC, e))?;
    if let Some(path) = dot {
        std::fs::write(path, result.tree.to_dot())
            .map_err(|e| Outcome::fail(EXIT_FORMAT, format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Outcome {
        code: EXIT_OK,
        stdout: format!("{}\n", result.tree.to_newick()),
        stderr: if trace { result.trace() } else { String::new() },
    })
}

fn quartets(input: &str) -> Result<Outcome, Outcome> {
    let map = read_table(input)?;
    let report = verify_metric(&map, &VerifyOptions { fail_fast: true, star: None });
    if report.violations.iter().any(|v| v.condition == crate::checks::Condition::FourPoint) {
        return Err(Outcome { code: EXIT_SEMANTIC, stdout: String::new(), stderr: report.to_string() });
    }
    let system = generate_quartets(&map);
    let mut stderr = String::new();
    for s in system.non_thin_subsets() {
        writeln!(stderr, "warning: several quartets on {{{}}}", map.taxa().names_of(&s).join(",")).unwrap();
    }
    Ok(Outcome { code: EXIT_OK, stdout: system.to_lines(), stderr })
}

fn binary(input: &str, strict: bool) -> Result<Outcome, Outcome> {
    let map = read_table(input)?;
    let report = verify_metric(&map, &VerifyOptions { fail_fast: true, star: Some(star_mode(strict)) });
    if !report.verdict {
        return Err(Outcome { code: EXIT_SEMANTIC, stdout: String::new(), stderr: report.to_string() });
    }
    let resolved = report.is_fully_resolved();
    Ok(if resolved {
        Outcome { code: EXIT_OK, stdout: "binary\n".into(), stderr: String::new() }
    } else {
        Outcome { code: EXIT_SEMANTIC, stdout: "not binary\n".into(), stderr: report.to_string() }
    })
}

fn selftest() -> Outcome {
    let mut out = String::new();
    let mut failed = false;
    let mut record = |name: &str, ok: bool| {
        failed |= !ok;
        writeln!(out, "{} {name}", if ok { "PASS" } else { "FAIL" }).unwrap();
    };
    for n in 3..=5 {
        let trees = oracle::corpus(n, 3, usize::MAX).expect("n is in range");
        let all = |f: &dyn Fn(&ColoredTree) -> bool| trees.iter().all(f);
        record(&format!("n={n} encodings verify"), all(&|t| verify_metric(&t.encode(), &Default::default()).verdict));
        record(
            &format!("n={n} reconstruction round-trips"),
            all(&|t| reconstruct_with_trace(&t.encode()).is_ok_and(|r| r.tree.isomorphic(t).unwrap())),
        );
        record(
            &format!("n={n} generated quartets are displayed quartets"),
            all(&|t| generate_quartets(&t.encode()) == t.displayed_quartets()),
        );
        record(&format!("n={n} binary check"), all(&|t| check_binary(&t.encode()) == t.is_binary()));
    }
    let counts: Vec<usize> =
        (4..=6).map(|n| oracle::enumerate_trees(n).unwrap().iter().filter(|t| t.is_binary()).count()).collect();
    record("binary tree counts 3 15 105", counts == [3, 15, 105]);
    record("non-thin witness found", oracle::find_fig6_like().is_some());
    Outcome { code: if failed { EXIT_SEMANTIC } else { EXIT_OK }, stdout: out, stderr: String::new() }
}

/// Runs a parsed command line. Writes `--output` and `--dot` files itself;
/// everything else is returned.
pub fn execute(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Encode { input, require_discriminating } => encode(input, *require_discriminating),
        Command::Verify { input, fail_fast, star, strict_star } => {
            verify(input, &VerifyOptions { fail_fast: *fail_fast, star: star.then(|| star_mode(*strict_star)) })
        }
        Command::Reconstruct { input, trace, dot } => reconstruct(input, *trace, dot.as_deref()),
        Command::Quartets { input } => quartets(input),
        Command::CheckBinary { input, strict_star } => binary(input, *strict_star),
        Command::Selftest => Ok(selftest()),
    };
    let mut outcome = result.unwrap_or_else(|e| e);
    if let Some(path) = &cli.output {
        if let Err(e) = std::fs::write(path, &outcome.stdout) {
            return Outcome::fail(EXIT_FORMAT, format!("cannot write {}: {e}", path.display()));
        }
        outcome.stdout.clear();
    }
    outcome
}

/// Entry point of the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let outcome = execute(&cli);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    outcome.code
}
