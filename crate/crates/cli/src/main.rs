//! `mta`: evaluate, compare, learn and minimize multiplicity tree automata,
//! and move between automaton equivalence and circuit identity testing.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use mta_core::adversary::{adversarial_teacher, query_lower_bound, HardFamily};
use mta_core::automaton::{difference, parse_mta, product, write_mta};
use mta_core::circuits::{
    acit_pair_to_mta, acit_random_test, acit_to_mta, equiv_to_acit, normalize_circuit, parse_circuit, split_subtraction, write_circuit, AcitVerdict,
};
use mta_core::equivalence::{brute_force_equiv, check_equiv, EquivResult};
use mta_core::learner::{simulated_teacher, LearnError, Learner, QueryStats, Teacher};
use mta_core::text::ParseError;
use mta_core::trees::{parse_dag, write_dag};
use mta_core::{Field, Mta};

#[derive(Parser, Debug)]
#[command(name = "mta", version, about = "Multiplicity tree automata over exact fields")]
struct Cli {
    /// Field for all automata: `q` or `fp:<prime>`. Rational inputs are
    /// reduced into a prime field; by default each file's own field is used.
    #[arg(long, global = true)]
    field: Option<Field>,
    /// Seed of the one random generator used by randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Error exponent `k` of randomized identity tests (error ≤ 2^-k).
    #[arg(long, global = true, default_value_t = 40)]
    confidence: u32,
    /// Cross-check `equiv` against every tree of height at most this bound.
    #[arg(long, global = true)]
    max_height: Option<usize>,
    /// Print `EQ= MQ= S= DIM=` after learning.
    #[arg(long, global = true)]
    stats: bool,
    /// Write the learner's query transcript to this file.
    #[arg(long, global = true)]
    transcript: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the weight of a DAG.
    Eval { automaton: PathBuf, dag: PathBuf },
    /// Write the product automaton.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print `equivalent`, or write a counterexample DAG.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide equivalence of integer automata by a randomized circuit test.
    EquivRand { a: PathBuf, b: PathBuf },
    /// Learn the teacher automaton's series and write the result.
    Learn {
        #[arg(long)]
        teacher: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a minimal equivalent automaton.
    Minimize {
        automaton: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a circuit that is zero iff the two rational automata agree.
    ToAcit {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write an automaton equivalent to the zero automaton iff the
    /// variable-free circuit is zero.
    FromAcit {
        circuit: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Randomized zero test of a circuit.
    AcitTest { circuit: PathBuf },
    /// Learn a hard target against the adversarial teacher and compare the
    /// query count with the lower bound.
    BenchAdversary {
        #[arg(long)]
        n: usize,
        /// Heavy symbols as `name:rank,…`, added to `s0/0, s1/1`.
        #[arg(long, default_value = "s2:2")]
        heavy: String,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}:{}:{}: {}", .err.line, .err.column, .err.message)]
    Parse { path: String, err: ParseError },
    #[error("{0}")]
    Learn(LearnError),
    #[error("{path}: {err}")]
    Io { path: String, err: io::Error },
    #[error("{0}")]
    Other(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Learn(LearnError::Inconsistent(_)) => 2,
            _ => 1,
        }
    }
}

fn other(e: impl std::fmt::Display) -> CliError {
    CliError::Other(e.to_string())
}

impl From<LearnError> for CliError {
    fn from(e: LearnError) -> Self {
        CliError::Learn(e)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|err| CliError::Io { path: path.display().to_string(), err })
}

fn parse_err(path: &Path) -> impl Fn(ParseError) -> CliError + '_ {
    move |err| CliError::Parse { path: path.display().to_string(), err }
}

/// Writes to `path`, or to stdout without one.
fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|err| CliError::Io { path: p.display().to_string(), err }),
        None => io::stdout().write_all(text.as_bytes()).map_err(|err| CliError::Io { path: "<stdout>".into(), err }),
    }
}

impl Cli {
    fn load_mta(&self, path: &Path) -> Result<Mta, CliError> {
        let a = parse_mta(&read(path)?).map_err(parse_err(path))?;
        match self.field {
            Some(f) => a.to_field(f).map_err(|e| CliError::Other(format!("{}: {e}", path.display()))),
            None => Ok(a),
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn write_transcript(&self, lines: &[String]) -> Result<(), CliError> {
        if let Some(p) = &self.transcript {
            let mut text = lines.join("\n");
            text.push('\n');
            emit(Some(p), &text)?;
        }
        Ok(())
    }

    fn learn_with<T: Teacher>(&self, teacher: &mut T) -> Result<(Mta, QueryStats), CliError> {
        let mut learner = Learner::new(teacher.field(), teacher.alphabet().clone());
        if self.transcript.is_some() {
            learner = learner.with_transcript();
        }
        let result = learner.learn(teacher);
        self.write_transcript(learner.transcript())?;
        let h = result?;
        let stats = learner.stats();
        if self.stats {
            eprintln!("EQ={} MQ={} S={} DIM={}", stats.equivalence_queries, stats.membership_queries, stats.max_counterexample, h.dim());
        }
        Ok((h, stats))
    }

    fn run(&self) -> Result<(), CliError> {
        match &self.command {
            Command::Eval { automaton, dag } => {
                let a = self.load_mta(automaton)?;
                let g = parse_dag(&read(dag)?, a.alphabet()).map_err(parse_err(dag))?;
                println!("{}", a.weight(&g).map_err(other)?);
            }
            Command::Product { a, b, output } => {
                let p = product(&self.load_mta(a)?, &self.load_mta(b)?).map_err(other)?;
                emit(output.as_deref(), &write_mta(&p))?;
            }
            Command::Equiv { a, b, output } => {
                let (a, b) = (self.load_mta(a)?, self.load_mta(b)?);
                let result = check_equiv(&a, &b).map_err(other)?;
                if let Some(h) = self.max_height {
                    let brute = brute_force_equiv(&a, &b, h + 1, 1 << 24).map_err(other)?;
                    // brute force sees every disagreement of height at most h;
                    // the basis check sees every disagreement at all
                    let contradiction = match &result {
                        EquivResult::Equivalent => !brute,
                        EquivResult::Counterexample { dag, .. } => brute && dag.height() <= h,
                    };
                    if contradiction {
                        return Err(CliError::Other(format!("basis check and brute force to height {h} disagree")));
                    }
                }
                match result {
                    EquivResult::Equivalent => println!("equivalent"),
                    EquivResult::Counterexample { dag, left, right } => {
                        eprintln!("not equivalent: {left} vs {right} on a DAG of {} nodes", dag.size());
                        emit(output.as_deref(), &write_dag(&dag, a.alphabet()))?;
                    }
                }
            }
            Command::EquivRand { a, b } => {
                let (a, b) = (self.load_mta(a)?, self.load_mta(b)?);
                let c = equiv_to_acit(&a, &b).map_err(other)?;
                match acit_random_test(&c, self.confidence, &mut self.rng()).map_err(other)? {
                    AcitVerdict::ZeroLikely { trials } => println!("equivalent (trials={trials}, error<=2^-{})", self.confidence),
                    AcitVerdict::NonZero { modulus, residue, .. } => println!("not equivalent (difference is {residue} mod {modulus})"),
                }
            }
            Command::Learn { teacher, output } => {
                let target = self.load_mta(teacher)?;
                let (h, _) = self.learn_with(&mut simulated_teacher(target))?;
                emit(output.as_deref(), &write_mta(&h))?;
            }
            Command::Minimize { automaton, output } => {
                let a = self.load_mta(automaton)?;
                let (h, _) = self.learn_with(&mut simulated_teacher(a))?;
                emit(output.as_deref(), &write_mta(&h))?;
            }
            Command::ToAcit { a, b, output } => {
                let c = equiv_to_acit(&self.load_mta(a)?, &self.load_mta(b)?).map_err(other)?;
                emit(output.as_deref(), &write_circuit(&c))?;
            }
            Command::FromAcit { circuit, output } => {
                let c = parse_circuit(&read(circuit)?).map_err(parse_err(circuit))?;
                let (p, n) = split_subtraction(&c);
                let (p, n) = (normalize_circuit(&p).map_err(other)?, normalize_circuit(&n).map_err(other)?);
                // without subtraction the negative track is the constant 0
                let a = if n.circuit().gates() == [mta_core::circuits::Gate::Zero] {
                    acit_to_mta(&p)
                } else {
                    let (ap, an) = acit_pair_to_mta(&p, &n);
                    difference(&ap, &an).map_err(other)?
                };
                let a = match self.field {
                    Some(f) => a.to_field(f).map_err(other)?,
                    None => a,
                };
                emit(output.as_deref(), &write_mta(&a))?;
            }
            Command::AcitTest { circuit } => {
                let c = parse_circuit(&read(circuit)?).map_err(parse_err(circuit))?;
                match acit_random_test(&c, self.confidence, &mut self.rng()).map_err(other)? {
                    AcitVerdict::ZeroLikely { trials } => println!("zero (trials={trials}, error<=2^-{})", self.confidence),
                    AcitVerdict::NonZero { modulus, residue, assignment } => {
                        let vars: Vec<String> = assignment.iter().map(u64::to_string).collect();
                        println!("nonzero (value {residue} mod {modulus} at [{}])", vars.join(", "));
                    }
                }
            }
            Command::BenchAdversary { n, heavy } => {
                let heavy = parse_heavy(heavy)?;
                let spec: Vec<(&str, usize)> = heavy.iter().map(|(s, k)| (s.as_str(), *k)).collect();
                let family = HardFamily::with_heavy(*n, &spec).map_err(other)?;
                let field = self.field.unwrap_or(Field::Rational);
                let mut teacher = adversarial_teacher(family.clone(), field, self.seed);
                let (h, stats) = self.learn_with(&mut teacher)?;
                let total = stats.equivalence_queries + stats.membership_queries;
                println!(
                    "n={n} dim={} entries={} lower_bound={} EQ={} MQ={} total={total} learned_dim={}",
                    family.dim(),
                    family.entry_count(),
                    query_lower_bound(family.alphabet(), family.dim()),
                    stats.equivalence_queries,
                    stats.membership_queries,
                    h.dim()
                );
            }
        }
        Ok(())
    }
}

fn parse_heavy(spec: &str) -> Result<Vec<(String, usize)>, CliError> {
    spec.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (name, rank) = item.trim().split_once(':').ok_or_else(|| CliError::Other(format!("heavy symbol `{item}` is not `name:rank`")))?;
            let rank = rank.parse().map_err(|_| CliError::Other(format!("bad rank in `{item}`")))?;
            Ok((name.to_string(), rank))
        })
        .collect()
}

fn main() -> ExitCode {
    // clap's own usage status is 2, which is reserved for teacher inconsistency
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
