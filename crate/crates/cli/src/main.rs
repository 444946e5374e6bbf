//! Command-line front end: constants tables, norm evaluation, statement
//! verification, dimension sweeps, and oracle suites.
//!
//! Exit codes: 0 when every checked item passes, 1 when any check fails,
//! 2 on configuration errors. Reports go to standard output (or `--out`);
//! errors go to standard error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use dimsob_cli::oracle::run_suite;
use dimsob_cli::report::{constants_csv, sweep_csv, ReportEnvelope, ReportItem};
use dimsob_cli::specparse::{
    parse_family, parse_geometry, parse_n_range, parse_profile_csv, parse_space, parse_theorem,
};
use dimsob_cli::verify::{dimension_sweep, verify, ExperimentConfig, HarnessError};
use dimsob_core::iso::{geometry_constant, GeometryKind};
use dimsob_core::space::ri_norm;

#[derive(Parser)]
#[command(
    name = "dimsob",
    version,
    about = "Dimensionless Sobolev inequality verifier: geometry constants, \
             rearrangement-invariant norms, and one-sided statement checks."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format. CSV is available for `constants` and `sweep` (their
    /// default); everything else emits the JSON report envelope.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the report to a file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Cap the worker thread count for sweeps and verification matrices.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form geometry constants over a dimension range.
    Constants {
        /// Geometry kind: rn, ball, sphere, or manifold.
        #[arg(long)]
        kind: String,
        /// Dimension range `A..B` (inclusive) or a single dimension `A`.
        #[arg(long, value_name = "A..B")]
        n_range: String,
        /// Ricci lower bound; required for (and exclusive to) manifold.
        #[arg(long)]
        curvature: Option<f64>,
    },
    /// Evaluate a space norm on a staircase profile read from CSV.
    Norm {
        /// Space spec, e.g. lp:2, lorentz:2,1, marcinkiewicz:t^0.5.
        #[arg(long)]
        space: String,
        /// Two-column CSV file: breakpoint,value.
        #[arg(long, value_name = "FILE")]
        profile: PathBuf,
    },
    /// Verify one statement for one family, geometry, space, and dimension.
    Verify {
        /// Statement selector: main1, main2, teo01, ordenk, inclusion, esfera.
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        space: String,
        /// Geometry: rn, ball, sphere, or cube.
        #[arg(long)]
        geometry: String,
        #[arg(long)]
        n: u32,
        /// Family name, e.g. radial:linear, cap:height, tensor:coord.
        #[arg(long)]
        family: String,
        /// RNG seed; defaults to the DIMSOB_SEED environment variable, then 0.
        #[arg(long)]
        seed: Option<u64>,
        /// Monte Carlo sample count for cube families.
        #[arg(long)]
        samples: Option<u64>,
        /// Relative quadrature tolerance.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Run one verification across a dimension range and tabulate ratios.
    Sweep {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        space: String,
        #[arg(long)]
        geometry: String,
        #[arg(long, value_name = "A..B")]
        n_range: String,
        #[arg(long)]
        family: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Brute-force oracle suites: 1d, 2d, or norms.
    Oracle {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("dimsob: {e}");
            ExitCode::from(2)
        }
    }
}

fn default_seed() -> Result<u64, HarnessError> {
    match std::env::var("DIMSOB_SEED") {
        Ok(raw) => raw.trim().parse::<u64>().map_err(|_| {
            HarnessError::Config(format!("DIMSOB_SEED must be an unsigned integer, got '{raw}'"))
        }),
        Err(_) => Ok(0),
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, HarnessError> {
    match flag {
        Some(s) => Ok(s),
        None => default_seed(),
    }
}

fn parse_kind(kind: &str, curvature: Option<f64>) -> Result<GeometryKind, HarnessError> {
    match kind {
        "rn" => Ok(GeometryKind::Rn),
        "ball" => Ok(GeometryKind::Ball),
        "sphere" => Ok(GeometryKind::Sphere),
        "manifold" => {
            let k = curvature.ok_or_else(|| {
                HarnessError::Config("manifold constants need --curvature".to_owned())
            })?;
            Ok(GeometryKind::Manifold { curvature: k })
        }
        other => Err(HarnessError::Config(format!(
            "unknown geometry kind '{other}' (expected rn, ball, sphere, or manifold)"
        ))),
    }
    .and_then(|parsed| {
        if curvature.is_some() && kind != "manifold" {
            Err(HarnessError::Config(
                "--curvature applies to the manifold kind only".to_owned(),
            ))
        } else {
            Ok(parsed)
        }
    })
}

fn run(cli: Cli) -> Result<bool, HarnessError> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(HarnessError::Config("--jobs must be positive".to_owned()));
        }
        // A second build_global in one process is harmless: the pool is
        // already sized, so the cap simply stays where the first call put it.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }

    let tabular = matches!(
        cli.command,
        Command::Constants { .. } | Command::Sweep { .. }
    );
    let format = cli.format.unwrap_or(if tabular { Format::Csv } else { Format::Json });
    if format == Format::Csv && !tabular {
        return Err(HarnessError::Config(
            "csv output is available for constants and sweep only".to_owned(),
        ));
    }

    let started = Instant::now();
    let argv: Vec<String> = std::env::args().collect();

    let (envelope, csv) = match cli.command {
        Command::Constants {
            ref kind,
            ref n_range,
            curvature,
        } => {
            let parsed = parse_kind(kind, curvature)?;
            let (from, to) = parse_n_range(n_range)?;
            let mut envelope = ReportEnvelope::new(argv, 0);
            let mut rows = Vec::new();
            for n in from..=to {
                let value = geometry_constant(&parsed, n)?;
                rows.push((kind.clone(), n, value));
                envelope.items.push(ReportItem::Constant {
                    kind: kind.clone(),
                    n,
                    value,
                });
            }
            (envelope, Some(constants_csv(&rows)))
        }
        Command::Norm {
            ref space,
            ref profile,
        } => {
            let spec = parse_space(space)?;
            let stair = parse_profile_csv(profile)?;
            let value = ri_norm(&spec, &stair)?;
            let mut envelope = ReportEnvelope::new(argv, 0);
            envelope.items.push(ReportItem::Norm {
                space: format!("{spec}"),
                profile: profile.display().to_string(),
                value,
            });
            (envelope, None)
        }
        Command::Verify {
            ref theorem,
            ref space,
            ref geometry,
            n,
            ref family,
            seed,
            samples,
            tolerance,
        } => {
            let seed = resolve_seed(seed)?;
            let mut config = ExperimentConfig::new(
                parse_theorem(theorem)?,
                parse_geometry(geometry)?,
                n,
                parse_family(family)?,
                parse_space(space)?,
            );
            config.seed = seed;
            if let Some(s) = samples {
                config.samples = s;
            }
            if let Some(t) = tolerance {
                config.tolerance = t;
            }
            let reports = verify(&config)?;
            let mut envelope = ReportEnvelope::new(argv, seed);
            envelope
                .items
                .extend(reports.into_iter().map(ReportItem::Verification));
            (envelope, None)
        }
        Command::Sweep {
            ref theorem,
            ref space,
            ref geometry,
            ref n_range,
            ref family,
            seed,
            samples,
            tolerance,
        } => {
            let seed = resolve_seed(seed)?;
            let (from, to) = parse_n_range(n_range)?;
            let mut config = ExperimentConfig::new(
                parse_theorem(theorem)?,
                parse_geometry(geometry)?,
                from,
                parse_family(family)?,
                parse_space(space)?,
            );
            config.seed = seed;
            if let Some(s) = samples {
                config.samples = s;
            }
            if let Some(t) = tolerance {
                config.tolerance = t;
            }
            let rows = dimension_sweep(&config, from, to)?;
            let mut envelope = ReportEnvelope::new(argv, seed);
            let csv = sweep_csv(&rows);
            envelope.items.extend(rows.into_iter().map(ReportItem::Sweep));
            (envelope, Some(csv))
        }
        Command::Oracle {
            ref suite,
            trials,
            seed,
        } => {
            let seed = resolve_seed(seed)?;
            let summaries = run_suite(suite, trials, seed)?;
            let mut envelope = ReportEnvelope::new(argv, seed);
            envelope
                .items
                .extend(summaries.into_iter().map(ReportItem::Oracle));
            (envelope, None)
        }
    };

    let mut envelope = envelope;
    envelope.wall_ms = started.elapsed().as_millis() as u64;
    let body = match format {
        Format::Json => envelope.to_json(),
        Format::Csv => csv.expect("csv availability checked above"),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, &body).map_err(|e| {
            HarnessError::Config(format!("cannot write {}: {e}", path.display()))
        })?,
        None => print!("{body}"),
    }
    Ok(envelope.all_pass())
}
