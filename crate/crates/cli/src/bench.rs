use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use serde_json::json;

use corpkit_core::instances::{arbiter_instances, Expected, Instance};
use corpkit_core::similarity::{full_relation, subset_relation};
use corpkit_core::synthesis::{check_cause, CheckVerdict};
use corpkit_core::{Budget, Error, Options, Property};

use crate::{Format, REPORT_VERSION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationChoice {
    Subset,
    Full,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Largest number of arbiter clients.
    #[arg(long, default_value_t = 4)]
    max_n: usize,
    /// Per-instance budget in seconds.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Relations to run; both by default.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [RelationChoice::Subset, RelationChoice::Full])]
    relation: Vec<RelationChoice>,
    /// Only rows whose name contains this text.
    #[arg(long)]
    only: Option<String>,
    #[arg(long)]
    contingencies: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// Outcome of one instance under one relation.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Cell {
    Done {
        seconds: f64,
        cause_states: Option<usize>,
        /// Whether the cause matches the expected language.
        matches_expected: Option<bool>,
    },
    Timeout {
        seconds: f64,
    },
    StateLimit {
        seconds: f64,
    },
    Error {
        message: String,
    },
}

impl Cell {
    fn time(&self) -> String {
        match self {
            Cell::Done { seconds, .. } => format!("{seconds:.2}"),
            Cell::Timeout { .. } => "TO".into(),
            Cell::StateLimit { .. } => "SL".into(),
            Cell::Error { .. } => "ERR".into(),
        }
    }

    fn size(&self) -> String {
        match self {
            Cell::Done {
                cause_states: Some(n), ..
            } => n.to_string(),
            _ => "-".into(),
        }
    }

    fn mark(&self) -> &'static str {
        match self {
            Cell::Done {
                matches_expected: Some(true),
                ..
            } => "",
            Cell::Done {
                matches_expected: Some(false),
                ..
            } => " (!)",
            _ => "",
        }
    }
}

fn run_one(inst: &Instance, rel: RelationChoice, timeout: Duration, contingencies: bool) -> Cell {
    let start = Instant::now();
    let relation = match rel {
        RelationChoice::Subset => subset_relation(inst.system.inputs()),
        RelationChoice::Full => full_relation(inst.system.inputs()),
    };
    let relation = match relation {
        Ok(r) => r,
        Err(e) => return Cell::Error { message: e.to_string() },
    };
    let opts = Options {
        contingencies,
        budget: Budget::with_timeout(timeout),
    };
    let expected = match &inst.expected {
        Expected::Cause(f) => Some(Property::Formula(f.clone())),
        _ => None,
    };
    let candidate = expected.clone().unwrap_or(Property::Formula(corpkit_core::Ltl::True));
    let outcome = check_cause(&inst.system, &inst.trace, &inst.effect, &relation, &candidate, opts);
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok(r) => Cell::Done {
            seconds: r.synthesis.diagnostics.total_millis() / 1000.0,
            cause_states: r.synthesis.cause().map(|c| c.num_states()),
            matches_expected: expected.map(|_| r.verdict == CheckVerdict::IsCause),
        },
        Err(Error::Timeout) => Cell::Timeout { seconds },
        Err(Error::StateLimit(_)) => Cell::StateLimit { seconds },
        Err(e) => Cell::Error { message: e.to_string() },
    }
}

pub fn cmd_bench(a: BenchArgs) -> Result<u8> {
    if !(a.timeout.is_finite() && a.timeout > 0.0) {
        bail!("--timeout must be positive, got {}", a.timeout);
    }
    if a.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let mut rows = arbiter_instances(a.max_n)?;
    if let Some(f) = &a.only {
        rows.retain(|r| r.name.contains(f.as_str()));
    }
    let tasks: Vec<(usize, RelationChoice)> = (0..rows.len())
        .flat_map(|i| a.relation.iter().map(move |&r| (i, r)))
        .collect();
    let results: Mutex<Vec<Option<Cell>>> = Mutex::new(vec![None; tasks.len()]);
    let next = AtomicUsize::new(0);
    let timeout = Duration::from_secs_f64(a.timeout);
    std::thread::scope(|s| {
        for _ in 0..a.jobs.min(tasks.len().max(1)) {
            s.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, rel)) = tasks.get(k) else { break };
                log::info!("bench: {} / {} under {:?}", rows[i].name, rows[i].effect_text, rel);
                let cell = run_one(&rows[i], rel, timeout, a.contingencies);
                results.lock().expect("no poisoned workers")[k] = Some(cell);
            });
        }
    });
    let results: Vec<Cell> = results
        .into_inner()
        .expect("no poisoned workers")
        .into_iter()
        .map(|c| c.expect("every task ran"))
        .collect();
    let cell =
        |i: usize, r: RelationChoice| -> Option<&Cell> { tasks.iter().position(|&t| t == (i, r)).map(|k| &results[k]) };

    let mut json_rows = Vec::new();
    let mut text = String::new();
    let rels = &a.relation;
    let _ = write!(text, "{:<12} {:>4}  {:<9}", "Instance", "|T|", "Effect");
    for r in rels {
        let _ = write!(text, " {:>10}", format!("t_{r:?}").to_lowercase());
    }
    for r in rels {
        let _ = write!(text, " {:>10}", format!("|A|_{r:?}").to_lowercase());
    }
    let _ = writeln!(text, "  Cause");
    for (i, inst) in rows.iter().enumerate() {
        let expected = match &inst.expected {
            Expected::Cause(f) => f.to_string(),
            Expected::NoCause => "none".into(),
            Expected::Unknown => "?".into(),
        };
        let _ = write!(
            text,
            "{:<12} {:>4}  {:<9}",
            inst.name,
            inst.system_size(),
            inst.effect_text
        );
        for &r in rels {
            let _ = write!(text, " {:>10}", cell(i, r).map_or("-".into(), Cell::time));
        }
        for &r in rels {
            let c = cell(i, r);
            let _ = write!(
                text,
                " {:>10}",
                c.map_or("-".into(), |c| format!("{}{}", c.size(), c.mark()))
            );
        }
        let _ = writeln!(text, "  {expected}");
        let mut cells = serde_json::Map::new();
        for &r in rels {
            if let Some(c) = cell(i, r) {
                cells.insert(format!("{r:?}").to_lowercase(), serde_json::to_value(c)?);
            }
        }
        json_rows.push(json!({
            "instance": inst.name,
            "system_states": inst.system_size(),
            "effect": inst.effect_text,
            "expected_cause": expected,
            "relations": cells,
        }));
    }
    let _ = writeln!(
        text,
        "TO: timeout of {}s, SL: state limit reached, (!): cause differs from the expected language",
        a.timeout
    );
    let report = json!({
        "report_version": REPORT_VERSION,
        "command": "bench",
        "timeout_seconds": a.timeout,
        "contingencies": a.contingencies,
        "rows": json_rows,
    });
    if let Some(path) = &a.out {
        std::fs::write(path, serde_json::to_string_pretty(&report)?)?;
    }
    crate::emit(a.format, &report, &text);
    let failed = results.iter().any(|c| {
        matches!(
            c,
            Cell::Error { .. }
                | Cell::Done {
                    matches_expected: Some(false),
                    ..
                }
        )
    });
    Ok(if failed { 1 } else { 0 })
}
