//! The `qdt` command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 degenerate lattice, 1 anything
//! else (unreadable files, write failures).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::action_algebra::enumerate_elementary;
use crate::decision::{
    decompose, interference_terms, order_prospects, DecisionRecord, ProspectOrdering,
};
use crate::io::{from_complex, parse_problem, Complex, Problem, ProblemError};
use crate::machine::{run_pipeline, MachineConfig, MachineRun};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

/// Quantum decision theory engine.
#[derive(Parser, Debug)]
#[command(name = "qdt", version, about)]
pub struct Cli {
    /// Emit JSON with every number at full precision.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the report here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse and validate a problem file.
    Validate {
        /// Problem file, or `-` for standard input.
        file: PathBuf,
    },
    /// List basic states with their flat indices.
    Enumerate { file: PathBuf },
    /// Rank the prospects and report the optimal one.
    Solve { file: PathBuf },
    /// Raw and normalized p, p0 and q for every prospect.
    Decompose { file: PathBuf },
    /// Run the measurement pipeline with finite shots.
    Sample {
        file: PathBuf,
        /// Override `machine.shots`.
        #[arg(long)]
        shots: Option<u64>,
        /// Override `machine.seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Per-prospect breakdown of the interference terms.
    Explain {
        file: PathBuf,
        /// Only explain this prospect.
        #[arg(long)]
        prospect: Option<String>,
    },
}

#[derive(Debug)]
enum Failure {
    Problem(ProblemError),
    Engine(Error),
    Internal(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Problem(_) => EXIT_INVALID,
            Failure::Engine(Error::DegenerateLattice(_)) => EXIT_DEGENERATE,
            Failure::Engine(_) => EXIT_INVALID,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Problem(e) => write!(f, "{e}"),
            Failure::Engine(e) => write!(f, "{e}"),
            Failure::Internal(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

/// Runs one command. `args` includes the program name.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match execute(&cli, stdin) {
        Ok(report) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, &report)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout
                    .write_all(report.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    EXIT_INTERNAL
                }
            }
        }
        Err(failure) => {
            let _ = writeln!(stderr, "error: {failure}");
            failure.exit_code()
        }
    }
}

fn load(file: &PathBuf, stdin: &mut dyn Read) -> Result<Problem, Failure> {
    let text = if file.as_os_str() == "-" {
        let mut buf = String::new();
        stdin
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Internal(format!("cannot read standard input: {e}")))?;
        buf
    } else {
        std::fs::read_to_string(file)
            .map_err(|e| Failure::Internal(format!("cannot read {}: {e}", file.display())))?
    };
    parse_problem(&text).map_err(Failure::Problem)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<String, Failure> {
    match &cli.command {
        Command::Validate { file } => {
            let problem = load(file, stdin)?;
            let report = ValidateReport {
                status: "ok".into(),
                dims: problem.space.dims().to_vec(),
                total_dim: problem.space.total_dim(),
                prospects: names(&problem),
            };
            Ok(if cli.json {
                json(&report)
            } else {
                format!(
                    "ok: {} action(s), {} basic state(s), {} prospect(s)\n",
                    report.dims.len(),
                    report.total_dim,
                    report.prospects.len()
                )
            })
        }
        Command::Enumerate { file } => {
            let problem = load(file, stdin)?;
            let basis: Vec<BasisEntry> = enumerate_elementary(&problem.ring)
                .into_iter()
                .enumerate()
                .map(|(index, n)| BasisEntry {
                    index,
                    modes: problem
                        .ring
                        .actions()
                        .iter()
                        .zip(n.modes())
                        .map(|(a, &k)| a.modes[k - 1].clone())
                        .collect(),
                    multi_index: n.modes().to_vec(),
                })
                .collect();
            Ok(if cli.json {
                json(&EnumerateReport { basis })
            } else {
                let mut out = String::from("index  multi-index  modes\n");
                for b in &basis {
                    let mi: Vec<String> = b.multi_index.iter().map(usize::to_string).collect();
                    let _ = writeln!(
                        out,
                        "{:>5}  {:<11}  ({})",
                        b.index,
                        format!("({})", mi.join(",")),
                        b.modes.join(", ")
                    );
                }
                out
            })
        }
        Command::Solve { file } => {
            let problem = load(file, stdin)?;
            let record = decompose(&problem.strategic, &problem.lattice)?;
            let ordering = order_prospects(&record);
            Ok(if cli.json {
                json(&SolveReport {
                    optimal_name: record.optimal_name().to_string(),
                    ordering,
                    record,
                })
            } else {
                let mut out = factor_table(&record, problem.machine.report_raw);
                out.push_str(&summary(&record, &ordering));
                out
            })
        }
        Command::Decompose { file } => {
            let problem = load(file, stdin)?;
            let record = decompose(&problem.strategic, &problem.lattice)?;
            Ok(if cli.json {
                json(&DecomposeReport { record })
            } else {
                let mut out = factor_table(&record, true);
                let sums = [
                    record.p.iter().sum::<f64>(),
                    record.p0.iter().sum::<f64>(),
                    record.q.iter().sum::<f64>(),
                ];
                let _ = writeln!(
                    out,
                    "sum p = {:.6}, sum p0 = {:.6}, sum q = {:+.6}",
                    sums[0], sums[1], sums[2]
                );
                out
            })
        }
        Command::Sample { file, shots, seed } => {
            let problem = load(file, stdin)?;
            let config = MachineConfig {
                shots: shots.unwrap_or(problem.machine.shots),
                seed: seed.unwrap_or(problem.machine.seed),
                report_raw: problem.machine.report_raw,
            };
            let run = run_pipeline(&problem.strategic, &problem.lattice, config)?;
            Ok(if cli.json {
                json(&SampleReport::from(&run))
            } else {
                sample_table(&run)
            })
        }
        Command::Explain { file, prospect } => {
            let problem = load(file, stdin)?;
            let record = decompose(&problem.strategic, &problem.lattice)?;
            let mut entries = Vec::new();
            for (j, pi) in problem.lattice.prospects().iter().enumerate() {
                if prospect.as_deref().is_some_and(|name| name != pi.name()) {
                    continue;
                }
                let label = |k: usize| problem.ring.label(&problem.space.multi_index(k));
                let c = problem.strategic.amplitudes();
                let diagonal = pi
                    .amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| a.norm_sqr() > 0.0)
                    .map(|(n, a)| DiagonalTerm {
                        index: n,
                        label: label(n),
                        weight: c[n].norm_sqr() * a.norm_sqr(),
                    })
                    .collect();
                let terms = interference_terms(&problem.strategic, pi)?
                    .into_iter()
                    .map(|(m, n, z)| PairTerm {
                        m,
                        n,
                        m_label: label(m),
                        n_label: label(n),
                        term: from_complex(&z),
                    })
                    .collect();
                entries.push(ExplainEntry {
                    name: pi.name().to_string(),
                    raw_p: record.raw_p[j],
                    raw_p0: record.raw_p0[j],
                    raw_q: record.raw_q[j],
                    diagonal,
                    terms,
                });
            }
            if let Some(name) = prospect {
                if entries.is_empty() {
                    return Err(Failure::Engine(Error::Validation(format!(
                        "no prospect named `{name}`"
                    ))));
                }
            }
            Ok(if cli.json {
                json(&ExplainReport { prospects: entries })
            } else {
                explain_text(&entries)
            })
        }
    }
}

fn names(problem: &Problem) -> Vec<String> {
    problem
        .lattice
        .prospects()
        .iter()
        .map(|p| p.name().to_string())
        .collect()
}

fn name_width(names: &[String]) -> usize {
    names
        .iter()
        .map(|n| n.chars().count())
        .max()
        .unwrap_or(0)
        .max(8)
}

/// Fixed-width table, six decimals.
pub fn factor_table(record: &DecisionRecord, with_raw: bool) -> String {
    let w = name_width(&record.names);
    let mut out = String::new();
    let _ = write!(out, "{:<w$}", "prospect");
    if with_raw {
        let _ = write!(out, " {:>10} {:>10} {:>10}", "raw_p", "raw_p0", "raw_q");
    }
    let _ = writeln!(out, " {:>10} {:>10} {:>10}", "p", "p0", "q");
    for j in 0..record.len() {
        let _ = write!(out, "{:<w$}", record.names[j]);
        if with_raw {
            let _ = write!(
                out,
                " {:>10.6} {:>10.6} {:>+10.6}",
                record.raw_p[j], record.raw_p0[j], record.raw_q[j]
            );
        }
        let _ = writeln!(
            out,
            " {:>10.6} {:>10.6} {:>+10.6}",
            record.p[j], record.p0[j], record.q[j]
        );
    }
    out
}

fn summary(record: &DecisionRecord, ordering: &ProspectOrdering) -> String {
    let mut out = format!(
        "ranking: {}\noptimal: {}\n",
        ordering.render(&record.names),
        record.optimal_name()
    );
    if record.ties.len() > 1 {
        let tied: Vec<&str> = record
            .ties
            .iter()
            .map(|&j| record.names[j].as_str())
            .collect();
        let _ = writeln!(out, "ties: {}", tied.join(", "));
    }
    out
}

fn sample_table(run: &MachineRun) -> String {
    let record = &run.record;
    let w = name_width(&record.names);
    let mut out = format!("shots: {}, seed: {}\n", run.config.shots, run.config.seed);
    let _ = writeln!(
        out,
        "{:<w$} {:>10} {:>10} {:>10}",
        "prospect", "p", "count", "freq"
    );
    for j in 0..record.len() {
        let (count, freq) = match (&run.counts, &run.frequencies) {
            (Some(c), Some(f)) => (c[j].to_string(), format!("{:.6}", f[j])),
            _ => ("-".into(), "-".into()),
        };
        let _ = writeln!(
            out,
            "{:<w$} {:>10.6} {:>10} {:>10}",
            record.names[j], record.p[j], count, freq
        );
    }
    let _ = writeln!(out, "chosen: {}", record.names[run.chosen]);
    if let Some(e) = run.empirical_choice {
        let _ = writeln!(out, "empirical: {}", record.names[e]);
    }
    out
}

fn explain_text(entries: &[ExplainEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let _ = writeln!(
            out,
            "{}: raw_p = {:.6}, raw_p0 = {:.6}, raw_q = {:+.6}",
            e.name, e.raw_p, e.raw_p0, e.raw_q
        );
        let _ = writeln!(out, "  utility terms |c_n|^2 |a_n|^2:");
        for d in &e.diagonal {
            let _ = writeln!(out, "    {:<24} {:.6}", d.label, d.weight);
        }
        let _ = writeln!(out, "  interference terms conj(c_m) c_n a_m conj(a_n):");
        if e.terms.is_empty() {
            let _ = writeln!(out, "    none");
        }
        for t in &e.terms {
            let _ = writeln!(
                out,
                "    {} x {}: {:+.6} {:+.6}i",
                t.m_label, t.n_label, t.term[0], t.term[1]
            );
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub status: String,
    pub dims: Vec<usize>,
    pub total_dim: usize,
    pub prospects: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub index: usize,
    pub multi_index: Vec<usize>,
    pub modes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerateReport {
    pub basis: Vec<BasisEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub record: DecisionRecord,
    pub ordering: ProspectOrdering,
    pub optimal_name: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeReport {
    pub record: DecisionRecord,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputState {
    pub name: String,
    pub amplitudes: Vec<Complex>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub config: MachineConfig,
    pub record: DecisionRecord,
    pub counts: Option<Vec<u64>>,
    pub frequencies: Option<Vec<f64>>,
    pub chosen: usize,
    pub empirical_choice: Option<usize>,
    pub output: OutputState,
}

impl From<&MachineRun> for SampleReport {
    fn from(run: &MachineRun) -> Self {
        SampleReport {
            config: run.config,
            record: run.record.clone(),
            counts: run.counts.clone(),
            frequencies: run.frequencies.clone(),
            chosen: run.chosen,
            empirical_choice: run.empirical_choice,
            output: OutputState {
                name: run.output.name().to_string(),
                amplitudes: run.output.amplitudes().iter().map(from_complex).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalTerm {
    pub index: usize,
    pub label: String,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairTerm {
    pub m: usize,
    pub n: usize,
    pub m_label: String,
    pub n_label: String,
    pub term: Complex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplainEntry {
    pub name: String,
    pub raw_p: f64,
    pub raw_p0: f64,
    pub raw_q: f64,
    pub diagonal: Vec<DiagonalTerm>,
    pub terms: Vec<PairTerm>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplainReport {
    pub prospects: Vec<ExplainEntry>,
}
