use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cyclestab::designers::{auto_design_with, DesignMethod, DesignRequest};
use cyclestab::domains::{degree_lower_bound, s_n_boundary};
use cyclestab::io::{
    design_json, parse_complex, parse_map, parse_target, read_design, to_json_string, trajectory_summary,
    write_boundary_csv, write_trajectory_csv,
};
use cyclestab::simulator::{find_cycles_with, rate_check, run_plain_with, run_stabilized_with};
use cyclestab::duality::in_stability_domain_with;
use cyclestab::{Config, Error};

const EXIT_NOT_FOUND: u8 = 2;
const EXIT_CROSS_CHECK: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Delayed-feedback stabilization of repelling cycles.
#[derive(Parser)]
#[command(name = "cyclestab", version)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    command: Command,
}

/// Config sources in increasing priority: defaults, `CYCLESTAB_CONFIG`,
/// `--config`, then individual flags.
#[derive(Args)]
struct Overrides {
    /// key = value config file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set omission_max_samples=65536`
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    #[arg(long, global = true)]
    max_order: Option<usize>,
    #[arg(long, global = true)]
    strictness: Option<f64>,
    #[arg(long, global = true)]
    omission_tolerance: Option<f64>,
    #[arg(long, global = true)]
    convergence_tolerance: Option<f64>,
    #[arg(long, global = true)]
    escape_radius: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Find and verify a design for a multiplier set
    Design {
        /// point:MU | segment:MU_M | horocycle:MU_M | sector:MU_M,THETA
        #[arg(long)]
        target: String,
        #[arg(long = "T", default_value_t = 1)]
        t: usize,
        #[arg(long, default_value = "auto")]
        method: String,
        /// Write the design file here as well as to stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Both stability tests for a design at one multiplier
    Check {
        #[arg(long)]
        design: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        /// Overrides the cycle length stored in the design file
        #[arg(long = "T")]
        t: Option<usize>,
    },
    /// Sample the boundary curve of S_n as CSV
    Boundary {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 512)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the stabilized (or plain) orbit of a map
    Simulate {
        /// quadratic:C | logistic:LAMBDA | polynomial:C0,C1,...
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long)]
        design: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        z0: String,
        #[arg(long, default_value_t = 500)]
        steps: usize,
        /// Cycle length when no design is given
        #[arg(long = "T")]
        t: Option<usize>,
        /// Cycle to measure against: the one containing the point nearest this
        #[arg(long, allow_hyphen_values = true)]
        cycle_point: Option<String>,
        /// Uncontrolled orbit
        #[arg(long)]
        plain: bool,
        /// Trajectory CSV
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cycles of a map whose period divides T
    FindCycles {
        #[arg(long, allow_hyphen_values = true)]
        map: String,
        #[arg(long = "T", default_value_t = 1)]
        t: usize,
    },
    /// Necessary lower bound on the design order
    Bounds {
        #[arg(long)]
        target: String,
        #[arg(long = "T", default_value_t = 1)]
        t: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cyclestab: {e}");
            ExitCode::from(match e {
                Error::DesignNotFound(_) | Error::NotInStabilizationDomain { .. } => EXIT_NOT_FOUND,
                Error::MethodDisagreement(_) | Error::RootFinderFailed(_) => EXIT_CROSS_CHECK,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn load_config(o: &Overrides) -> Result<Config, Error> {
    let mut cfg = Config::default();
    if let Ok(path) = std::env::var("CYCLESTAB_CONFIG") {
        cfg = Config::load(path)?;
    }
    if let Some(path) = &o.config {
        cfg.merge_str(&std::fs::read_to_string(path)?)?;
    }
    for kv in &o.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected KEY=VALUE, got {kv:?}")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(v) = o.max_order {
        cfg.max_order = v;
    }
    if let Some(v) = o.strictness {
        cfg.strictness_tolerance = v;
    }
    if let Some(v) = o.omission_tolerance {
        cfg.omission_tolerance = v;
    }
    if let Some(v) = o.convergence_tolerance {
        cfg.convergence_tolerance = v;
    }
    if let Some(v) = o.escape_radius {
        cfg.escape_radius = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<(), Error> {
    let cfg = load_config(&cli.overrides)?;
    match cli.command {
        Command::Design { target, t, method, out } => {
            let req = DesignRequest {
                target: parse_target(&target)?,
                t,
                method: DesignMethod::parse(&method)?,
                max_order: cfg.max_order,
            };
            let result = auto_design_with(&req, &cfg)?;
            let text = to_json_string(&design_json(&result))?;
            if let Some(path) = out {
                std::fs::write(path, &text)?;
            }
            print!("{text}");
        }
        Command::Check { design, mu, t } => {
            let mut design = read_design(&std::fs::read_to_string(design)?)?;
            if let Some(t) = t {
                design = design.with_cycle_length(t)?;
            }
            let mu = parse_complex(&mu)?;
            let report = match in_stability_domain_with(&design, mu, &cfg) {
                Err(Error::MethodDisagreement(msg)) => {
                    eprintln!("{}", to_json_string(&json!({"design": design, "mu": mu, "disagreement": msg}))?);
                    return Err(Error::MethodDisagreement(msg));
                }
                other => other?,
            };
            print!("{}", to_json_string(&report)?);
        }
        Command::Boundary { n, resolution, out } => {
            let curve = s_n_boundary(n, resolution)?;
            write_boundary_csv(&curve, sink(&out)?)?;
        }
        Command::Simulate { map, design, z0, steps, t, cycle_point, plain, out } => {
            let map = parse_map(&map)?;
            let z0 = parse_complex(&z0)?;
            let design = design
                .map(|p| -> Result<_, Error> { read_design(&std::fs::read_to_string(p)?) })
                .transpose()?;
            let t = match (&design, t) {
                (Some(d), _) => d.cycle_length(),
                (None, Some(t)) => t,
                (None, None) => 1,
            };
            let near = cycle_point.as_deref().map(parse_complex).transpose()?.unwrap_or(z0);
            let cycle = find_cycles_with(&map, t, &cfg)?
                .into_iter()
                .filter(|c| c.period == t)
                .min_by(|a, b| a.distance(near).total_cmp(&b.distance(near)))
                .ok_or_else(|| Error::Precondition(format!("no cycle of period {t}")))?;
            let record = match (&design, plain) {
                (Some(d), false) => run_stabilized_with(&map, d, &cycle, z0, steps, &cfg)?,
                (None, false) => {
                    return Err(Error::Precondition("simulate needs --design or --plain".into()));
                }
                (_, true) => {
                    let mut r = run_plain_with(&map, z0, steps, &cfg)?;
                    r.measure(&cycle);
                    r
                }
            };
            if let Some(path) = &out {
                write_trajectory_csv(&record, sink(&Some(path.clone()))?)?;
            }
            let mut summary = trajectory_summary(&record);
            summary["rate_ok"] = json!(rate_check(&record).ok());
            summary["cycle"] = serde_json::to_value(&cycle)?;
            print!("{}", to_json_string(&summary)?);
        }
        Command::FindCycles { map, t } => {
            let cycles = find_cycles_with(&parse_map(&map)?, t, &cfg)?;
            print!("{}", to_json_string(&cycles)?);
        }
        Command::Bounds { target, t } => {
            let bound = degree_lower_bound(&parse_target(&target)?, t)?;
            print!("{}", to_json_string(&bound)?);
        }
    }
    Ok(())
}
