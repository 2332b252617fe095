use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use arrlink::{
    batch, check_family, compare_report, invariants, load_arrangement, load_wiring, probe_integral,
    rybnikov_report, union_report, MethodChoice,
};
use arrlink_core::dataset;
use arrlink_core::linking::DEFAULT_SEED;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

#[derive(Parser)]
#[command(name = "arrlink", version, about = "Loop linking numbers of complex line arrangements")]
struct Cli {
    /// Render reports as indented text instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// Seed of the projection frames.
    #[arg(long, global = true, env = "ARRLINK_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Cov,
    Wiring,
}

#[derive(Subcommand)]
enum Command {
    /// Combinatorics, automorphisms, tensor linking group and loop linking numbers.
    Invariants {
        /// Arrangement file or dataset name.
        arrangement: String,
        #[arg(long = "mod")]
        modulus: u64,
        /// Wiring diagram file or dataset name; both methods are then reported.
        #[arg(long)]
        wiring: Option<String>,
        #[arg(long, value_enum, default_value = "cov")]
        method: MethodArg,
    },
    /// Compares two arrangements through their loop linking numbers.
    Compare {
        first: String,
        second: String,
        #[arg(long = "mod")]
        modulus: u64,
    },
    /// Ordered union of two arrangements.
    Union {
        first: String,
        second: String,
        /// Length of the shared prefix (detected when omitted).
        #[arg(long)]
        r: Option<usize>,
        /// Check multiplicativity for the generators of both factors modulo this number.
        #[arg(long = "mod")]
        modulus: Option<u64>,
    },
    /// Builds the Rybnikov pair from the MacLane arrangements and reports its invariants.
    Rybnikov,
    /// Checks committed families: `appendixB` or a family name.
    Batch { set: String },
    /// Loop linking numbers of the integral tensors of an arrangement.
    ProbeIntegral { arrangement: String },
    /// Lists or emits committed data.
    Dataset {
        #[command(subcommand)]
        action: DatasetAction,
    },
}

#[derive(Subcommand)]
enum DatasetAction {
    /// Names of families, arrangements and wiring diagrams.
    List,
    /// Prints an arrangement (or, with `--wiring`, a wiring diagram) as JSON.
    Emit {
        name: String,
        #[arg(long)]
        wiring: bool,
    },
}

/// Whether the command met every expectation it checked.
enum Outcome {
    Pass,
    Mismatch,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    let outcome = |ok: bool| if ok { Outcome::Pass } else { Outcome::Mismatch };
    match &cli.command {
        Command::Invariants { arrangement, modulus, wiring, method } => {
            let a = load_arrangement(arrangement).with_context(|| format!("loading {arrangement}"))?;
            let choice = match method {
                MethodArg::Cov => MethodChoice::Cov,
                MethodArg::Wiring => MethodChoice::Wiring,
            };
            let wiring_spec = match (wiring, choice) {
                (Some(w), _) => Some(w.clone()),
                (None, MethodChoice::Wiring) => Some(a.name().to_string()),
                (None, MethodChoice::Cov) => None,
            };
            let w = wiring_spec.map(|s| load_wiring(&s).with_context(|| format!("loading wiring {s}"))).transpose()?;
            let report = invariants(&a, *modulus, w.as_ref(), choice, seed)?;
            emit(cli, &report)?;
            Ok(outcome(report.ok()))
        }
        Command::Compare { first, second, modulus } => {
            let a = load_arrangement(first).with_context(|| format!("loading {first}"))?;
            let b = load_arrangement(second).with_context(|| format!("loading {second}"))?;
            emit(cli, &compare_report(&a, &b, *modulus, seed)?)?;
            Ok(Outcome::Pass)
        }
        Command::Union { first, second, r, modulus } => {
            let a = load_arrangement(first).with_context(|| format!("loading {first}"))?;
            let b = load_arrangement(second).with_context(|| format!("loading {second}"))?;
            let report = union_report(&a, &b, *r, *modulus, seed)?;
            emit(cli, &report)?;
            Ok(outcome(report.ok()))
        }
        Command::Rybnikov => {
            emit(cli, &rybnikov_report(seed)?)?;
            Ok(Outcome::Pass)
        }
        Command::Batch { set } => {
            let report = if set == "appendixB" {
                batch(&dataset::appendix_family_names(), seed)?
            } else if dataset::family_names().contains(&set.as_str()) {
                let f = check_family(set, seed)?;
                let failed = if f.ok { vec![] } else { vec![f.family.clone()] };
                arrlink::BatchReport { passed: usize::from(f.ok), failed, families: vec![f] }
            } else {
                bail!("unknown batch '{set}' (expected appendixB or a family name)");
            };
            emit(cli, &report)?;
            Ok(outcome(report.failed.is_empty()))
        }
        Command::ProbeIntegral { arrangement } => {
            let a = load_arrangement(arrangement).with_context(|| format!("loading {arrangement}"))?;
            emit(cli, &probe_integral(&a, seed)?)?;
            Ok(Outcome::Pass)
        }
        Command::Dataset { action: DatasetAction::List } => {
            let list = serde_json::json!({
                "families": dataset::family_names(),
                "arrangements": dataset::arrangement_names()?,
                "wirings": dataset::wiring_names(),
            });
            emit(cli, &list)?;
            Ok(Outcome::Pass)
        }
        Command::Dataset { action: DatasetAction::Emit { name, wiring } } => {
            if *wiring {
                let doc = dataset::wiring(name).with_context(|| format!("unknown wiring diagram '{name}'"))?;
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!("{}", dataset::emit_arrangement(&dataset::arrangement(name)?));
            }
            Ok(Outcome::Pass)
        }
    }
}

fn emit<T: Serialize>(cli: &Cli, report: &T) -> Result<()> {
    let value = serde_json::to_value(report)?;
    if cli.human {
        let mut out = String::new();
        render(&value, 0, &mut out);
        print!("{out}");
    } else {
        println!("{}", serde_json::to_string_pretty(&value)?);
    }
    Ok(())
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        Value::Array(items) if items.iter().all(|x| x.as_array().is_some_and(|a| a.iter().all(|y| !y.is_object() && !y.is_array()))) => {
            Some(items.iter().filter_map(scalar).collect::<Vec<_>>().join(" "))
        }
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{}: {s}\n", k.replace('_', " "))),
                    None => {
                        out.push_str(&format!("{pad}{}:\n", k.replace('_', " ")));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}- #{}\n", i + 1));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
