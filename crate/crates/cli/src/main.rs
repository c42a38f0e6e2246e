use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use postlb::attack::{probe_crossing, Adversary, CrossingProbe, Mode};
use postlb::boolean::{full_representation, Formula, Style};
use postlb::convention::{BipartiteInput, Convention, Verdict};
use postlb::encoding::encode_formula;
use postlb::machine::{Program, RunStatus, DEFAULT_STEP_CAP};
use postlb::paths::{enumerate_paths, path_of, verify_path_bound, Path};
use postlb::random::{random_convention, random_input, random_program};
use postlb::reduction::{to_3cnf, CnfFormula, ReductionMap, ReductionSummary};

const DEFAULT_SEED: u64 = 2024;

#[derive(Parser)]
#[command(
    name = "postlb",
    version,
    about = "Post machine simulator and branch lower-bound adversary"
)]
struct Cli {
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct InputArgs {
    /// Bipartite input file (`first: ...` / `second: ...`).
    #[arg(long, conflicts_with_all = ["first", "second"])]
    input: Option<PathBuf>,
    /// Formula file encoded as the first part.
    #[arg(long, requires = "second")]
    first: Option<PathBuf>,
    /// Formula file encoded as the second part.
    #[arg(long, requires = "first")]
    second: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program on a bipartite input.
    Run {
        #[arg(long)]
        program: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        convention: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STEP_CAP)]
        step_cap: u64,
    },
    /// Like `run`, also reporting the executed addresses and path.
    Trace {
        #[arg(long)]
        program: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        convention: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STEP_CAP)]
        step_cap: u64,
    },
    /// Count paths per branch budget and check the 2^m ceiling.
    Paths {
        #[arg(long)]
        program: PathBuf,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(0..=20))]
        m_max: u32,
        /// Also list the paths at budget m-max.
        #[arg(long)]
        list: bool,
    },
    /// Refute a candidate decider with the fooling family.
    Attack {
        #[arg(long)]
        program: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
        n: u32,
        #[arg(long, value_enum, default_value_t = ReprArg::MintermDnf)]
        repr: ReprArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
        mode: ModeArg,
        #[arg(long)]
        convention: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_STEP_CAP)]
        step_cap: u64,
        /// Permit n = 4 (65,536 runs).
        #[arg(long)]
        allow_large: bool,
    },
    /// Reduce a CNF formula to 3CNF.
    Reduce {
        #[arg(long)]
        formula: PathBuf,
        /// Arity used to choose the fresh-variable blocks.
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, requires = "stride")]
        fresh_base: Option<u32>,
        #[arg(long, requires = "fresh_base")]
        stride: Option<u32>,
        #[arg(long, default_value_t = 0)]
        conjunct: u8,
    },
    /// Write a full representation as one formula file per function.
    GenRepr {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
        n: u32,
        #[arg(long, value_enum, default_value_t = ReprArg::MintermDnf)]
        style: ReprArg,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Randomized check that crossing inputs of runs sharing a path keeps the path.
    #[command(name = "lemma2", visible_alias = "crossing")]
    Crossing {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Defaults to POSTLB_SEED, then to a fixed seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 10_000)]
        step_cap: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReprArg {
    MintermDnf,
    MaxtermCnf,
}

impl From<ReprArg> for Style {
    fn from(r: ReprArg) -> Style {
        match r {
            ReprArg::MintermDnf => Style::MintermDnf,
            ReprArg::MaxtermCnf => Style::MaxtermCnf,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Plain,
    #[value(name = "3cnf")]
    ThreeCnf,
}

fn read(path: &FsPath) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_program(path: &FsPath) -> Result<Program> {
    Program::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_formula(path: &FsPath) -> Result<Formula> {
    read(path)?
        .trim()
        .parse()
        .with_context(|| format!("parsing {}", path.display()))
}

fn load_convention(path: Option<&PathBuf>) -> Result<Convention> {
    match path {
        Some(p) => Convention::parse(&read(p)?).with_context(|| format!("parsing {}", p.display())),
        None => Ok(Convention::default()),
    }
}

fn load_input(args: &InputArgs) -> Result<BipartiteInput> {
    match (&args.input, &args.first, &args.second) {
        (Some(p), _, _) => {
            BipartiteInput::parse(&read(p)?).with_context(|| format!("parsing {}", p.display()))
        }
        (None, Some(a), Some(b)) => Ok(BipartiteInput::new(
            encode_formula(&load_formula(a)?),
            encode_formula(&load_formula(b)?),
        )),
        _ => bail!("give either --input or both --first and --second"),
    }
}

#[derive(Serialize)]
struct RunReport {
    status: RunStatus,
    verdict: Option<Verdict>,
    steps_executed: u64,
    branches_executed: u64,
    final_head: i64,
    final_address: u32,
    marked: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    path: Option<Path>,
}

fn run(
    program: &FsPath,
    input: &InputArgs,
    convention: Option<&PathBuf>,
    step_cap: u64,
    traced: bool,
) -> Result<(RunReport, String)> {
    let program = load_program(program)?;
    let convention = load_convention(convention)?;
    let input = load_input(input)?;
    let result = program.run(
        convention.layout(&input)?,
        convention.initial_head(),
        step_cap,
    );
    let verdict = result
        .halted()
        .then(|| convention.read_verdict(&result.final_state.space));
    let state = result.final_state;
    let path = match (traced, state.trace.is_empty()) {
        (true, false) => Some(path_of(&state.trace, &program)?),
        _ => None,
    };
    let summary = match verdict {
        Some(v) => format!(
            "{v} after {} steps, {} branches",
            state.steps_executed, state.branches_executed
        ),
        None => format!(
            "no verdict: {:?} after {} steps",
            result.status, state.steps_executed
        ),
    };
    let report = RunReport {
        status: result.status,
        verdict,
        steps_executed: state.steps_executed,
        branches_executed: state.branches_executed,
        final_head: state.head,
        final_address: state.ip,
        marked: state.space.marked().collect(),
        trace: traced.then_some(state.trace),
        path,
    };
    Ok((report, summary))
}

#[derive(Serialize)]
struct PathsReport {
    levels: Vec<postlb::paths::BudgetLevel>,
    holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    paths: Option<postlb::paths::PathSet>,
}

#[derive(Serialize)]
struct ReduceReport {
    input: String,
    output: String,
    map: ReductionMap,
    conjunct: u8,
    summary: ReductionSummary,
}

#[derive(Serialize)]
struct IndexEntry {
    index: u64,
    table: String,
    file: String,
    formula: String,
}

#[derive(Serialize)]
struct GenReprIndex {
    arity: u32,
    style: Style,
    functions: Vec<IndexEntry>,
}

#[derive(Serialize)]
struct CrossingReport {
    seed: u64,
    trials: u64,
    step_cap: u64,
    non_vacuous: u64,
    counter_witnesses: u64,
    holds: bool,
}

fn seed_from(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("POSTLB_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .with_context(|| format!("POSTLB_SEED={s:?} is not a u64")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

/// Returns the JSON report and a one-line summary.
fn dispatch(command: &Command) -> Result<(String, String)> {
    match command {
        Command::Run {
            program,
            input,
            convention,
            step_cap,
        } => {
            let (report, summary) = run(program, input, convention.as_ref(), *step_cap, false)?;
            Ok((to_json(&report)?, summary))
        }
        Command::Trace {
            program,
            input,
            convention,
            step_cap,
        } => {
            let (report, summary) = run(program, input, convention.as_ref(), *step_cap, true)?;
            Ok((to_json(&report)?, summary))
        }
        Command::Paths {
            program,
            m_max,
            list,
        } => {
            let program = load_program(program)?;
            let report = verify_path_bound(&program, *m_max);
            let holds = report.holds();
            let out = PathsReport {
                levels: report.levels,
                holds,
                paths: list.then(|| enumerate_paths(&program, *m_max)),
            };
            let summary = format!(
                "ceiling {} for m = 0..={m_max}",
                if holds { "holds" } else { "VIOLATED" }
            );
            Ok((to_json(&out)?, summary))
        }
        Command::Attack {
            program,
            n,
            repr,
            mode,
            convention,
            step_cap,
            allow_large,
        } => {
            let program = load_program(program)?;
            let convention = load_convention(convention.as_ref())?;
            let set = full_representation(*n, (*repr).into())?;
            let mode = match mode {
                ModeArg::Plain => Mode::Plain,
                ModeArg::ThreeCnf => Mode::Reduced(ReductionMap::for_arity(*n)),
            };
            let adversary = if *allow_large {
                Adversary::allow_large(&program, convention, &set, mode, *step_cap)?
            } else {
                Adversary::new(&program, convention, &set, mode, *step_cap)?
            };
            let outcome = adversary.attack()?;
            let report = outcome.report();
            let summary = format!("{} (functions {:?})", report.kind, report.function_indices);
            Ok((to_json(&report)?, summary))
        }
        Command::Reduce {
            formula,
            n,
            fresh_base,
            stride,
            conjunct,
        } => {
            let formula = load_formula(formula)?;
            let cnf = CnfFormula::from_formula(&formula)?;
            let map = match (fresh_base, stride, n) {
                (Some(b), Some(s), _) => ReductionMap::new(*b, *s)?,
                (_, _, Some(n)) => ReductionMap::for_arity(*n),
                _ => ReductionMap::for_arity(cnf.max_var()),
            };
            let output = to_3cnf(&cnf, &map, *conjunct)?;
            let summary = ReductionSummary::new(&cnf, &output, &map, *conjunct);
            let line = format!(
                "{} clauses -> {} clauses",
                summary.input_clauses, summary.output_clauses
            );
            let report = ReduceReport {
                input: cnf.to_string(),
                output: output.to_string(),
                map,
                conjunct: *conjunct,
                summary,
            };
            Ok((to_json(&report)?, line))
        }
        Command::GenRepr { n, style, out_dir } => {
            let style: Style = (*style).into();
            let set = full_representation(*n, style)?;
            fs::create_dir_all(out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            let width = set.len().to_string().len();
            let mut functions = Vec::with_capacity(set.len());
            for (table, formula) in set.iter() {
                let index = table.index().context("table index")?;
                let file = format!("f{index:0width$}.txt");
                fs::write(out_dir.join(&file), format!("{formula}\n"))?;
                functions.push(IndexEntry {
                    index,
                    table: table.to_string(),
                    file,
                    formula: formula.to_string(),
                });
            }
            let index = to_json(&GenReprIndex {
                arity: *n,
                style,
                functions,
            })?;
            fs::write(out_dir.join("index.json"), &index)?;
            let summary = format!("wrote {} formulas to {}", set.len(), out_dir.display());
            Ok((index, summary))
        }
        Command::Crossing {
            trials,
            seed,
            step_cap,
        } => {
            let seed = seed_from(*seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut non_vacuous, mut counter_witnesses) = (0, 0);
            for _ in 0..*trials {
                let size = rng.random_range(1..=20);
                let program = random_program(&mut rng, size);
                let convention = random_convention(&mut rng);
                let a = random_input(&mut rng, 6);
                let b = if rng.random_bool(0.5) {
                    BipartiteInput::new(a.first.clone(), random_input(&mut rng, 6).second)
                } else {
                    random_input(&mut rng, 6)
                };
                match probe_crossing(&program, &convention, [&a, &b], *step_cap)? {
                    CrossingProbe::Holds { vacuous } => non_vacuous += u64::from(!vacuous),
                    CrossingProbe::CounterWitness { .. } => counter_witnesses += 1,
                }
            }
            let report = CrossingReport {
                seed,
                trials: *trials,
                step_cap: *step_cap,
                non_vacuous,
                counter_witnesses,
                holds: counter_witnesses == 0,
            };
            let summary = format!(
                "{trials} trials, {non_vacuous} non-vacuous, {counter_witnesses} counter-witnesses"
            );
            Ok((to_json(&report)?, summary))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok((json, summary)) => match &cli.output {
            Some(path) => match fs::write(path, json) {
                Ok(()) => {
                    println!("{summary}");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: writing {}: {e}", path.display());
                    ExitCode::from(1)
                }
            },
            None => {
                print!("{json}");
                ExitCode::SUCCESS
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
