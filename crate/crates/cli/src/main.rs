mod bench;
mod load;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use corpkit_core::automata::emit_hoa;
use corpkit_core::ltl::ltl_to_nba;
use corpkit_core::oracle::{verify_cause, BoundedUniverse, OracleVerdict};
use corpkit_core::synthesis::{check_cause, synthesize_cause, CheckVerdict, Diagnostics, Direction};
use corpkit_core::{Alphabet, Budget, Options};

pub(crate) const REPORT_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "corpkit",
    version,
    about = "Synthesize and check omega-regular causes on lasso traces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize the cause of an effect on a trace.
    Synthesize(SynthArgs),
    /// Compare a candidate cause with the synthesized one.
    Check(CheckArgs),
    /// Run the bounded oracle checks on a given or synthesized cause.
    Verify(VerifyArgs),
    /// Translate an LTL formula to a Büchi automaton in HOA format.
    Translate(TranslateArgs),
    /// Regenerate the arbiter experiments.
    Bench(bench::BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct Instance {
    /// System description in JSON.
    #[arg(long)]
    system: PathBuf,
    /// Trace as a lasso literal such as `{x};({x,e})^w`, or a file holding one.
    #[arg(long)]
    trace: String,
    /// Effect as an LTL formula, or a path to an HOA automaton.
    #[arg(long)]
    effect: String,
    /// Similarity relation: `subset`, `full` or `custom:<hoa path>`.
    #[arg(long, default_value = "subset")]
    relation: String,
    /// Allow contingencies: outputs may be reset to their value on the trace.
    #[arg(long)]
    contingencies: bool,
    /// Wall-clock budget in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[command(flatten)]
    instance: Instance,
    /// Write the cause automaton here instead of printing it.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    instance: Instance,
    /// Candidate cause as an LTL formula over the inputs, or an HOA path.
    #[arg(long)]
    candidate: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    instance: Instance,
    /// Cause to verify; synthesized when absent.
    #[arg(long)]
    candidate: Option<String>,
    #[arg(long, default_value_t = 3)]
    stem_bound: usize,
    #[arg(long, default_value_t = 2)]
    loop_bound: usize,
    /// Largest number of bounded words examined; larger universes are sampled.
    #[arg(long, default_value_t = 2000)]
    sample_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct TranslateArgs {
    /// LTL formula.
    #[arg(long)]
    formula: String,
    /// Comma-separated atomic propositions; defaults to the atoms of the formula.
    #[arg(long)]
    aps: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CORPKIT_LOG", "error")).init();
    // Usage errors share exit code 1 with other input errors; 2 means
    // "no cause".
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Synthesize(a) => cmd_synthesize(a),
        Command::Check(a) => cmd_check(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Translate(a) => cmd_translate(a),
        Command::Bench(a) => bench::cmd_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn options(i: &Instance) -> Result<Options> {
    let budget = match i.timeout {
        Some(s) if s.is_finite() && s > 0.0 => Budget::with_timeout(Duration::from_secs_f64(s)),
        Some(s) => anyhow::bail!("--timeout must be positive, got {s}"),
        None => Budget::unlimited(),
    };
    Ok(Options {
        contingencies: i.contingencies,
        budget,
    })
}

fn emit(format: Format, report: &Value, text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(report).expect("serializable")),
        Format::Text => write!(out, "{text}"),
    };
}

fn stage_summary(d: &Diagnostics) -> String {
    let parts: Vec<String> = d
        .stages
        .iter()
        .map(|s| format!("{} {} ({:.1} ms)", s.name, s.states, s.millis))
        .collect();
    format!("stages: {}\n", parts.join(", "))
}

fn no_cause_reason(d: &Diagnostics) -> &'static str {
    if d.effect_on_trace {
        "no cause exists: some system trace with the inputs of the trace avoids the effect"
    } else {
        "no cause exists: effect not present on trace"
    }
}

fn cmd_synthesize(a: SynthArgs) -> Result<u8> {
    let inst = load::instance(&a.instance)?;
    let r = synthesize_cause(
        &inst.system,
        &inst.trace,
        &inst.effect,
        &inst.relation,
        options(&a.instance)?,
    )?;
    let mut report = json!({
        "report_version": REPORT_VERSION,
        "command": "synthesize",
        "relation": inst.relation.name,
        "contingencies": a.instance.contingencies,
        "diagnostics": r.diagnostics,
        "total_millis": r.diagnostics.total_millis(),
    });
    let mut text = String::new();
    let code = match r.cause() {
        Some(cause) => {
            let hoa = emit_hoa(cause);
            report["verdict"] = json!("cause");
            report["cause_states"] = json!(cause.num_states());
            text += &format!("cause: {} states\n", cause.num_states());
            match &a.out {
                Some(path) => {
                    std::fs::write(path, &hoa).with_context(|| format!("writing {}", path.display()))?;
                    report["cause_path"] = json!(path.display().to_string());
                    text += &format!("written to {}\n", path.display());
                }
                None => {
                    report["hoa"] = json!(hoa);
                    text += &hoa;
                }
            }
            0
        }
        None => {
            let reason = no_cause_reason(&r.diagnostics);
            report["verdict"] = json!("no_cause");
            report["message"] = json!(reason);
            text += reason;
            text.push('\n');
            2
        }
    };
    text += &stage_summary(&r.diagnostics);
    emit(a.instance.format, &report, &text);
    Ok(code)
}

fn cmd_check(a: CheckArgs) -> Result<u8> {
    let inst = load::instance(&a.instance)?;
    let candidate = load::candidate(&a.candidate, &inst.system)?;
    let r = check_cause(
        &inst.system,
        &inst.trace,
        &inst.effect,
        &inst.relation,
        &candidate,
        options(&a.instance)?,
    )?;
    let inputs = Alphabet::new(inst.system.inputs().iter().cloned())?;
    let mut report = json!({
        "report_version": REPORT_VERSION,
        "command": "check",
        "relation": inst.relation.name,
        "contingencies": a.instance.contingencies,
        "diagnostics": r.synthesis.diagnostics,
    });
    let (code, text) = match &r.verdict {
        CheckVerdict::IsCause => {
            report["verdict"] = json!("is_cause");
            (0, "the candidate is the cause\n".to_string())
        }
        CheckVerdict::NotCause { direction, witness } => {
            let w = witness.display(&inputs);
            let why = match direction {
                Direction::TooLarge => "accepted by the candidate but not in the cause",
                Direction::TooSmall => "in the cause but rejected by the candidate",
            };
            report["verdict"] = json!("not_cause");
            report["direction"] = json!(direction);
            report["witness"] = json!(w);
            (3, format!("the candidate is not the cause: {w} is {why}\n"))
        }
        CheckVerdict::NoCauseExists => {
            let reason = no_cause_reason(&r.synthesis.diagnostics);
            report["verdict"] = json!("no_cause");
            report["message"] = json!(reason);
            (2, format!("{reason}\n"))
        }
    };
    emit(a.instance.format, &report, &text);
    Ok(code)
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let inst = load::instance(&a.instance)?;
    let inputs = Alphabet::new(inst.system.inputs().iter().cloned())?;
    let cause = match &a.candidate {
        Some(c) => load::candidate(c, &inst.system)?.to_nba(&inputs)?,
        None => {
            let r = synthesize_cause(
                &inst.system,
                &inst.trace,
                &inst.effect,
                &inst.relation,
                options(&a.instance)?,
            )?;
            match r.cause() {
                Some(c) => c.clone(),
                None => {
                    let reason = no_cause_reason(&r.diagnostics);
                    let report = json!({
                        "report_version": REPORT_VERSION,
                        "command": "verify",
                        "verdict": "no_cause",
                        "message": reason,
                    });
                    emit(a.instance.format, &report, &format!("{reason}\n"));
                    return Ok(2);
                }
            }
        }
    };
    let u = BoundedUniverse::new(inputs, a.stem_bound, a.loop_bound)?.with_sample_cap(a.sample_cap, a.seed);
    let report = verify_cause(
        &inst.system,
        &inst.trace,
        &cause,
        &inst.effect,
        &inst.relation,
        &u,
        a.instance.contingencies,
    )?;
    let code = if report.any_fail() {
        4
    } else if report.all_pass() {
        0
    } else {
        5
    };
    let mut text = String::new();
    for (name, v) in report.verdicts() {
        text += &format!("{name}: {v}\n");
    }
    let mut json_report = json!({
        "report_version": REPORT_VERSION,
        "command": "verify",
        "stem_bound": a.stem_bound,
        "loop_bound": a.loop_bound,
        "exhaustive_universe": u.is_exhaustive(),
    });
    for (name, v) in report.verdicts() {
        json_report[name] = serde_json::to_value::<&OracleVerdict>(v)?;
    }
    emit(a.instance.format, &json_report, &text);
    Ok(code)
}

fn cmd_translate(a: TranslateArgs) -> Result<u8> {
    let (formula, alphabet) = load::formula_with_aps(&a.formula, a.aps.as_deref())?;
    let nba = ltl_to_nba(&formula, &alphabet)?;
    let hoa = emit_hoa(&nba);
    let mut report = json!({
        "report_version": REPORT_VERSION,
        "command": "translate",
        "formula": formula.to_string(),
        "states": nba.num_states(),
    });
    let mut text = format!("{} states\n", nba.num_states());
    match &a.out {
        Some(path) => {
            std::fs::write(path, &hoa).with_context(|| format!("writing {}", path.display()))?;
            report["path"] = json!(path.display().to_string());
        }
        None => {
            report["hoa"] = json!(hoa);
            text += &hoa;
        }
    }
    emit(a.format, &report, &text);
    Ok(0)
}
