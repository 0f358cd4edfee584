//! `pjlab`: command-line front end.
//!
//! Every command except `sweep` and `examples` prints a JSON run report:
//!
//! ```text
//! {"command", "arith", "inputs_sha256", "seed", "schedule", "outputs"}
//! ```
//!
//! Reports contain no timestamps, so identical inputs give identical bytes.
//! Wall time goes to stderr. Randomized commands draw from
//! `stream_rng(seed, stream)`; see the per-command help for the streams.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pjlab_core::constructor::checks::all_checks;
use pjlab_core::io::{collection_to_json, function_to_json, load_collection, load_function_capped};
use pjlab_core::scalar::parse_rational;
use pjlab_core::space::DEFAULT_ENUM_CAP;
use pjlab_core::verify::{run_all, run_suite, SUITES};
use pjlab_core::{
    boost_bruteforce, boost_via_atoms, check_prop_direct, conditional_expectation, construct,
    influences_exact, influences_mc, influences_spectral, pbiased_coefficients, round_half, russo_sweep,
    walsh_expand, Builtin, ConstructOptions, FunctionRep, JuntaCollection, Mode, Overrides, ProductSpace,
    Rational, Scalar,
};
use serde_json::{json, Value};

use report::{CliError, Inputs, RunReport};

#[derive(Parser, Debug)]
#[command(
    name = "pjlab",
    version,
    about = "Walsh expansions and influences on finite product spaces, with pseudo-junta tools"
)]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Arith::Exact)]
    arith: Arith,
    /// Largest number of outcomes any enumeration may visit.
    #[arg(long, global = true, env = "PJLAB_ENUM_CAP", default_value_t = DEFAULT_ENUM_CAP)]
    enum_cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Arith {
    Exact,
    Float,
}

impl Arith {
    fn name(self) -> &'static str {
        match self {
            Arith::Exact => "exact",
            Arith::Float => "float",
        }
    }
}

#[derive(Args, Debug)]
struct Input {
    /// Function document (JSON).
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generalized Walsh expansion: every component with its norms.
    Decompose(Input),
    /// Coordinate and total influences.
    Influence {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = InfluenceMethod::Exact)]
        method: InfluenceMethod,
        /// Samples per coordinate (`mc`); coordinate `j` uses stream `j`.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Margulis-Russo sweep over a grid of biases, as CSV.
    Sweep {
        #[command(flatten)]
        input: Input,
        /// Comma-separated biases, or `lo:hi:count`.
        #[arg(long, default_value = "0.1:0.9:9")]
        grid: String,
        /// Central-difference step.
        #[arg(long, default_value = "1e-4")]
        h: String,
    },
    /// Pseudo-junta collections.
    Pseudojunta {
        #[arg(value_enum)]
        action: PjAction,
        #[command(flatten)]
        input: Input,
        /// Collection document (JSON).
        #[arg(long)]
        collection: PathBuf,
    },
    /// Run a structure construction and report `h` with its measured error.
    Construct {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long)]
        epsilon: String,
        /// Schedule override `name=value`; repeatable.
        #[arg(long = "override", value_name = "NAME=VALUE")]
        overrides: Vec<String>,
    },
    /// Find `S` with `E[f | x_S = 1] ≥ 1 - ε` for an increasing `f`.
    Boost {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        epsilon: String,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[arg(long, value_enum, default_value_t = BoostArg::Brute)]
        method: BoostArg,
        /// Collection whose atoms seed the search (`atoms`).
        #[arg(long)]
        collection: Option<PathBuf>,
    },
    /// Randomized invariant suites. Trial `t` of suite `s` uses stream `(s << 32) | t`.
    Verify {
        /// One suite, or all of them.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Print a builtin function as a document usable with `--in`.
    Examples {
        /// or, and, parity, parity-even, majority, threshold, tribes, dictator, const.
        name: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1/2")]
        p: String,
        /// Parameter of threshold, tribes, dictator or const.
        #[arg(long)]
        param: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InfluenceMethod {
    Exact,
    Spectral,
    Mc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PjAction {
    Cost,
    Atoms,
    Condexp,
    Check,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Pbiased,
    General,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BoostArg {
    Brute,
    Atoms,
}

fn number(s: &str, what: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Usage(format!("--{what}: {e}")))
}

fn parse_grid(s: &str) -> Result<Vec<Rational>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [lo, hi, count] => {
            let (lo, hi) = (number(lo, "grid")?, number(hi, "grid")?);
            let count: i64 =
                count.parse().map_err(|_| CliError::Usage(format!("--grid: bad count `{count}`")))?;
            if count < 2 {
                return Err(CliError::Usage("--grid: count must be at least 2".into()));
            }
            let step = (hi - &lo) / Rational::from_integer((count - 1).into());
            Ok((0..count).map(|i| lo.clone() + step.clone() * Rational::from_integer(i.into())).collect())
        }
        [_] => s.split(',').map(|p| number(p.trim(), "grid")).collect(),
        _ => Err(CliError::Usage(format!("--grid: expected a list or lo:hi:count, got `{s}`"))),
    }
}

fn load<T: Scalar>(inputs: &mut Inputs, path: &Path, cap: u64) -> Result<FunctionRep<T>, CliError> {
    let doc = inputs.read_json(path)?;
    Ok(load_function_capped(&doc, Some(cap))?)
}

fn load_coll<T: Scalar>(
    inputs: &mut Inputs,
    path: &Path,
    space: &ProductSpace<T>,
) -> Result<JuntaCollection<T>, CliError> {
    let doc = inputs.read_json(path)?;
    Ok(load_collection(&doc, space)?)
}

fn js<T: Scalar>(v: &T) -> Value {
    v.to_json()
}

fn decompose<T: Scalar>(f: &FunctionRep<T>) -> Result<Value, CliError> {
    let e = walsh_expand(f)?;
    let basis = match f.space().common_bias() {
        Some(_) if f.space().is_binary() => Some(pbiased_coefficients(f)?),
        _ => None,
    };
    let components: Vec<Value> = e
        .components()
        .map(|(s, c)| {
            let mut v = json!({
                "S": s.indices(),
                "sq_norm": js(e.sq_norm(s)),
                "sup_norm": js(e.sup_norm(s)),
                "table": c.values().iter().map(js).collect::<Vec<_>>(),
            });
            if let Some(b) = &basis {
                v["coefficient"] = json!(b.coefficient(s));
                v["coefficient_sq"] = js(&b.coefficient_sq[s.bits() as usize]);
            }
            v
        })
        .collect();
    let parseval = e.parseval_report();
    Ok(json!({
        "n": f.n(),
        "f_sq_norm": js(e.f_sq_norm()),
        "parseval_holds": parseval.holds(),
        "components": components,
    }))
}

fn influence<T: Scalar>(
    f: &FunctionRep<T>,
    method: InfluenceMethod,
    seed: u64,
    samples: usize,
) -> Result<Value, CliError> {
    let (tag, per, total, se) = match method {
        InfluenceMethod::Exact => {
            let r = influences_exact(f)?;
            ("exact", r.per_coord.iter().map(js).collect(), js(&r.total), None)
        }
        InfluenceMethod::Spectral => {
            let r = influences_spectral(&walsh_expand(f)?);
            ("spectral", r.per_coord.iter().map(js).collect(), js(&r.total), None)
        }
        InfluenceMethod::Mc => {
            let r = influences_mc(f, seed, samples)?;
            (
                "monte-carlo",
                r.per_coord.iter().map(|v| json!(v)).collect::<Vec<_>>(),
                json!(r.total),
                r.std_errors,
            )
        }
    };
    Ok(json!({"method": tag, "per_coord": per, "total": total, "std_errors": se}))
}

fn sweep<T: Scalar>(f: &FunctionRep<T>, grid: &[Rational], h: &Rational) -> Result<String, CliError> {
    let grid: Vec<T> = grid.iter().map(T::from_rational).collect();
    let rows = russo_sweep(f, &grid, &T::from_rational(h))?;
    let mut out = String::from("p,mu,total_influence,russo_lhs,residual\n");
    let cell = |v: &T| if T::EXACT { v.to_rational().to_string() } else { format!("{}", v.to_f64()) };
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            cell(&r.p),
            cell(&r.mu),
            cell(&r.total_influence),
            cell(&r.russo_lhs),
            cell(&r.residual)
        ));
    }
    Ok(out)
}

fn pseudojunta<T: Scalar>(
    action: PjAction,
    f: &FunctionRep<T>,
    c: &JuntaCollection<T>,
) -> Result<Value, CliError> {
    Ok(match action {
        PjAction::Cost => json!({"cost": js(&c.cost()?), "collection": collection_to_json(c)}),
        PjAction::Atoms => {
            let atoms = c.atoms()?;
            json!({
                "count": atoms.len(),
                "atoms": atoms.atoms.iter().map(|a| json!({
                    "A": a.set().indices(),
                    "y": a.key.values(),
                    "mass": js(&a.mass),
                    "members": a.members,
                })).collect::<Vec<_>>(),
            })
        }
        PjAction::Condexp => {
            let g = conditional_expectation(f, c)?;
            let h = round_half(&g)?;
            json!({
                "conditional": g.values()?.iter().map(js).collect::<Vec<_>>(),
                "h": function_to_json(&h),
                "l1_error": js(&f.l1_distance(&h)?),
            })
        }
        PjAction::Check => {
            let r = check_prop_direct(c, f)?;
            json!({"influence": js(&r.influence), "twice_cost": js(&r.twice_cost), "pass": r.pass})
        }
    })
}

fn run_construct<T: Scalar>(
    f: &FunctionRep<T>,
    opts: &ConstructOptions,
) -> Result<(Value, Value, bool), CliError> {
    let c = construct(f, opts)?;
    let checks = all_checks(&c)?;
    let pass = checks.iter().all(|ch| ch.pass);
    let outputs = json!({
        "report": c.report.to_json(),
        "collection": collection_to_json(&c.collection),
        "h": function_to_json(&c.h),
        "checks": checks.iter().map(|ch| json!({"name": ch.name, "pass": ch.pass, "detail": ch.detail})).collect::<Vec<_>>(),
    });
    Ok((c.schedule.to_json(), outputs, pass))
}

fn boost<T: Scalar>(
    f: &FunctionRep<T>,
    eps: &Rational,
    max_size: usize,
    collection: Option<&JuntaCollection<T>>,
) -> Result<Value, CliError> {
    let eps = T::from_rational(eps);
    let r = match collection {
        None => boost_bruteforce(f, &eps, max_size)?,
        Some(c) => Some(boost_via_atoms(f, c, &eps)?),
    };
    Ok(match r {
        None => json!({"found": false, "max_size": max_size}),
        Some(r) => json!({
            "found": true,
            "method": r.method.tag(),
            "S": r.set.indices(),
            "value": js(&r.value),
            "alpha": js(&r.alpha),
            "epsilon": js(&r.epsilon),
            "atom": r.atom.map(|a| json!({"A": a.support().indices(), "y": a.values()})),
            "atom_density": r.atom_density.as_ref().map(js),
        }),
    })
}

/// What a command produced: a report, or raw text (`sweep`, `examples`).
enum Output {
    Report(RunReport),
    Text(String),
}

fn dispatch<T: Scalar>(cli: &Cli, inputs: &mut Inputs) -> Result<(Output, bool), CliError> {
    let cap = cli.enum_cap;
    let mut report = RunReport::new(cli.command.name(), cli.arith.name(), cli.seed);
    let mut ok = true;
    match &cli.command {
        Command::Decompose(i) => report.outputs = decompose(&load::<T>(inputs, &i.input, cap)?)?,
        Command::Influence { input, method, samples } => {
            report.outputs = influence(&load::<T>(inputs, &input.input, cap)?, *method, cli.seed, *samples)?
        }
        Command::Sweep { input, grid, h } => {
            let (grid, h) = (parse_grid(grid)?, number(h, "h")?);
            let f = load::<T>(inputs, &input.input, cap)?;
            return Ok((Output::Text(sweep(&f, &grid, &h)?), true));
        }
        Command::Pseudojunta { action, input, collection } => {
            let f = load::<T>(inputs, &input.input, cap)?;
            let c = load_coll(inputs, collection, f.space())?;
            report.outputs = pseudojunta(*action, &f, &c)?;
        }
        Command::Construct { input, mode, epsilon, overrides } => {
            let mode = match mode {
                ModeArg::Pbiased => Mode::PBiased,
                ModeArg::General => Mode::General,
            };
            let overrides = Overrides::parse(overrides.iter().map(String::as_str))
                .map_err(|e| CliError::Usage(format!("--override: {e}")))?;
            let opts = ConstructOptions::new(mode, number(epsilon, "epsilon")?).with_overrides(overrides);
            let (schedule, outputs, pass) = run_construct(&load::<T>(inputs, &input.input, cap)?, &opts)?;
            report.schedule = Some(schedule);
            report.outputs = outputs;
            ok = pass;
        }
        Command::Boost { input, epsilon, max_size, method, collection } => {
            let eps = number(epsilon, "epsilon")?;
            let f = load::<T>(inputs, &input.input, cap)?;
            let c = match (method, collection) {
                (BoostArg::Brute, _) => None,
                (BoostArg::Atoms, Some(path)) => Some(load_coll(inputs, path, f.space())?),
                (BoostArg::Atoms, None) => {
                    return Err(CliError::Usage("--method atoms needs --collection".into()))
                }
            };
            report.outputs = boost(&f, &eps, *max_size, c.as_ref())?;
        }
        Command::Verify { suite, n, trials } => {
            let reports = if suite == "all" {
                run_all(*n, *trials, cli.seed)?
            } else if SUITES.contains(&suite.as_str()) {
                vec![run_suite(suite, *n, *trials, cli.seed)?]
            } else {
                return Err(CliError::Usage(format!(
                    "unknown suite `{suite}`; expected all or one of {}",
                    SUITES.join(", ")
                )));
            };
            ok = reports.iter().all(|r| r.all_passed());
            report.outputs =
                json!({"suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(), "pass": ok});
        }
        Command::Examples { name, n, p, param } => {
            let b = Builtin::parse(name, *param).map_err(|e| CliError::Usage(e.to_string()))?;
            let space = ProductSpace::p_biased(*n, T::from_rational(&number(p, "p")?))?;
            let f = FunctionRep::builtin(space, b)?;
            let text = serde_json::to_string_pretty(&function_to_json(&f)).expect("serializable") + "\n";
            return Ok((Output::Text(text), true));
        }
    }
    report.inputs_sha256 = inputs.digest();
    Ok((Output::Report(report), ok))
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Decompose(_) => "decompose",
            Command::Influence { .. } => "influence",
            Command::Sweep { .. } => "sweep",
            Command::Pseudojunta { action, .. } => match action {
                PjAction::Cost => "pseudojunta cost",
                PjAction::Atoms => "pseudojunta atoms",
                PjAction::Condexp => "pseudojunta condexp",
                PjAction::Check => "pseudojunta check",
            },
            Command::Construct { .. } => "construct",
            Command::Boost { .. } => "boost",
            Command::Verify { .. } => "verify",
            Command::Examples { .. } => "examples",
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let mut inputs = Inputs::new(std::env::args().skip(1));
    let result = match cli.arith {
        Arith::Exact => dispatch::<Rational>(&cli, &mut inputs),
        Arith::Float => dispatch::<f64>(&cli, &mut inputs),
    };
    let code = match result {
        Ok((output, ok)) => {
            let text = match output {
                Output::Report(r) => r.render(),
                Output::Text(t) => t,
            };
            match report::emit(cli.out.as_deref(), &text) {
                Ok(()) if ok => 0,
                Ok(()) => {
                    eprintln!("pjlab: some checks failed");
                    1
                }
                Err(e) => {
                    eprintln!("pjlab: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("pjlab: {e}");
            e.exit_code()
        }
    };
    eprintln!("pjlab: {} finished in {:.3}s", cli.command.name(), start.elapsed().as_secs_f64());
    ExitCode::from(code)
}
