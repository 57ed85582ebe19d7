use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dere_core::model::{random_model, ExtensionMode, RandomModelParams};
use dere_core::reproduce::{verify_paper, Fault, ReproOptions};
use dere_core::semantics::first_difference;
use dere_core::{
    close, decide_definability, fixture, parse_formula, satisfies, truth_set, Certificate, Fixture, Formula, Model,
    Signature, TruthSet, Verdict,
};

use dere_cli::Diagram;

const SIG_HELP: &str = "Signature as \"props;booleans;modalities\", each a comma list. \
Props may include true and false. Booleans: not, or. Modalities: @[n], R[n], D[n]. \
Example: \"p;not,or;R[Ann],@[Ann]\"";

#[derive(Debug, Parser)]
#[command(name = "dere", version, about = "Model checking for de re and de dicto knowledge with nonrigid names")]
struct Cli {
    /// Model file (JSON).
    #[arg(long, global = true, conflicts_with = "fixture")]
    model: Option<PathBuf>,

    /// Built-in model instead of a file: M_DR or M_RD.
    #[arg(long, global = true)]
    fixture: Option<Fixture>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a formula holds at one world and agent.
    Check {
        formula: String,
        #[arg(long)]
        world: String,
        #[arg(long)]
        agent: String,
    },
    /// Print the truth set of a formula.
    Truthset { formula: String },
    /// Compare two formulas on the model.
    Equiv { first: String, second: String },
    /// Close a signature on the model, optionally deciding a target.
    Closure {
        #[arg(long, help = SIG_HELP)]
        sig: Signature,
        #[arg(long)]
        target: Option<String>,
        /// Write the certificate here (requires --target).
        #[arg(long, requires = "target")]
        out: Option<PathBuf>,
    },
    /// Reproduce the definability results on fixtures and random models.
    VerifyPaper {
        #[arg(long)]
        json: bool,
        #[arg(long, hide = true, value_enum)]
        inject_fault: Option<FaultArg>,
    },
    /// Generate a random valid model.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FaultArg {
    CorruptMdr,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value_t = 2)]
    worlds: usize,
    #[arg(long, default_value_t = 2)]
    agents: usize,
    #[arg(long, default_value_t = 1)]
    names: usize,
    #[arg(long, default_value_t = 1)]
    props: usize,
    #[arg(long, default_value = "rigid")]
    mode: ExtensionMode,
    /// Add the `se` name (agent-specific mode only).
    #[arg(long)]
    with_se: bool,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure that maps to exit status 2.
#[derive(Debug)]
struct Failure(String);

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

macro_rules! fail {
    ($($t:tt)*) => { Failure(format!($($t)*)) };
}

fn to_failure<E: fmt::Display>(context: &str) -> impl Fn(E) -> Failure + '_ {
    move |e| fail!("{context}: {e}")
}

/// Exit status for an affirmative or negative verdict.
fn verdict(yes: bool) -> ExitCode {
    if yes {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn load_model(cli: &Cli) -> Result<Model, Failure> {
    match (&cli.model, cli.fixture) {
        (_, Some(which)) => Ok(fixture(which)),
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| fail!("cannot read {}: {e}", path.display()))?;
            Model::from_json(&text).map_err(|e| fail!("{}: {e}", path.display()))
        }
        (None, None) => Err(fail!("no model given; use --model PATH or --fixture ID")),
    }
}

fn formula_on(m: &Model, text: &str) -> Result<Formula, Failure> {
    let f = parse_formula(text).map_err(|e| fail!("cannot parse `{text}`: {e}"))?;
    dere_core::semantics::check_formula(m, &f).map_err(to_failure(text))?;
    Ok(f)
}

fn bits_json(m: &Model, t: &TruthSet) -> serde_json::Value {
    let order: Vec<String> = m.points().map(|q| m.point_label(q)).collect();
    json!({ "order": order, "bits": t.to_bit_string() })
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    match &cli.command {
        Command::Check { formula, world, agent } => {
            let m = load_model(cli)?;
            let f = formula_on(&m, formula)?;
            let q = m
                .query(world, agent)
                .ok_or_else(|| fail!("unknown point ({world},{agent})"))?;
            let holds = satisfies(&m, q, &f).map_err(to_failure(formula))?;
            match cli.format {
                Format::Text => println!("{holds}"),
                Format::Json => print_json(&json!({ "world": world, "agent": agent, "holds": holds })),
            }
            Ok(verdict(holds))
        }
        Command::Truthset { formula } => {
            let m = load_model(cli)?;
            let f = formula_on(&m, formula)?;
            let t = truth_set(&m, &f).map_err(to_failure(formula))?;
            match cli.format {
                Format::Text => print!("{}", Diagram::new(&m, &t).render()),
                Format::Json => print_json(&bits_json(&m, &t)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { first, second } => {
            let m = load_model(cli)?;
            let a = formula_on(&m, first)?;
            let b = formula_on(&m, second)?;
            let diff = first_difference(&m, &a, &b).map_err(to_failure("equiv"))?;
            match (cli.format, diff) {
                (Format::Text, None) => println!("equivalent"),
                (Format::Text, Some(q)) => println!("differ at ({},{})", m.worlds[q.world], m.agents[q.agent]),
                (Format::Json, d) => print_json(&json!({
                    "equivalent": d.is_none(),
                    "differ_at": d.map(|q| m.point_label(q)),
                })),
            }
            Ok(verdict(diff.is_none()))
        }
        Command::Closure { sig, target, out } => {
            let m = load_model(cli)?;
            match target {
                None => closure_listing(cli, &m, sig),
                Some(text) => {
                    let f = formula_on(&m, text)?;
                    let cert = decide_definability(&m, &f, sig).map_err(to_failure("closure"))?;
                    if let Some(path) = out {
                        fs::write(path, cert.to_json()).map_err(|e| fail!("cannot write {}: {e}", path.display()))?;
                    }
                    report_certificate(cli, &cert);
                    Ok(verdict(cert.is_definable()))
                }
            }
        }
        Command::VerifyPaper { json, inject_fault } => {
            let opts = ReproOptions {
                seed: cli.seed,
                fault: inject_fault.map(|FaultArg::CorruptMdr| Fault::CorruptMdr),
                ..ReproOptions::default()
            };
            let checks = verify_paper(&opts);
            if *json || cli.format == Format::Json {
                let rows: Vec<_> = checks
                    .iter()
                    .map(|c| {
                        json!({
                            "theorem": c.theorem,
                            "claim": c.claim,
                            "passed": c.passed,
                            "detail": c.detail,
                            "elapsed_ms": c.elapsed.as_secs_f64() * 1000.0,
                        })
                    })
                    .collect();
                print_json(&json!({ "seed": cli.seed, "checks": rows }));
            } else {
                for c in &checks {
                    let status = if c.passed { "PASS" } else { "FAIL" };
                    println!("{status} {}: {} ({})", c.theorem, c.claim, c.detail);
                }
            }
            Ok(verdict(checks.iter().all(|c| c.passed)))
        }
        Command::Gen(args) => {
            let params = RandomModelParams {
                n_worlds: args.worlds,
                n_agents: args.agents,
                n_names: args.names,
                n_props: args.props,
                mode: args.mode,
                with_se: args.with_se,
            };
            let m = random_model(&params, cli.seed).map_err(to_failure("gen"))?;
            let text = m.to_json();
            match &args.out {
                Some(path) => fs::write(path, text).map_err(|e| fail!("cannot write {}: {e}", path.display()))?,
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn closure_listing(cli: &Cli, m: &Model, sig: &Signature) -> Result<ExitCode, Failure> {
    let family = close(m, sig).map_err(to_failure("closure"))?;
    match cli.format {
        Format::Text => {
            println!("family size {}", family.len());
            for (set, witness) in &family.members {
                println!("{}  {witness}", set.to_bit_string());
            }
        }
        Format::Json => {
            let members: Vec<_> = family
                .members
                .iter()
                .map(|(set, w)| json!({ "bits": set.to_bit_string(), "witness": w.to_string() }))
                .collect();
            let order: Vec<String> = m.points().map(|q| m.point_label(q)).collect();
            print_json(&json!({ "signature": sig.to_string(), "order": order, "family": members }));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn report_certificate(cli: &Cli, cert: &Certificate) {
    match cli.format {
        Format::Text => match &cert.verdict {
            Verdict::Definable { witness } => println!("DEFINABLE; witness {witness}"),
            Verdict::Undefinable { family } => {
                println!("UNDEFINABLE; family size {}", family.len());
                for (set, witness) in &family.members {
                    println!("  {}  {witness}", set.to_bit_string());
                }
            }
        },
        Format::Json => println!("{}", cert.to_json()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
