//! Command-line front end: `quadcone <command> [input.json]`.
//!
//! Input is read from the given path, or from stdin when the path is
//! missing or `-`. Every command prints one JSON report on stdout.

pub mod commands;
pub mod report;
pub mod spec;

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::Settings;
use spec::ConeSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;
pub const EXIT_SCHEMA: i32 = 4;
pub const EXIT_NO_SLICE: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "quadcone", version, about = "Normal forms and one-sided extension for real quadratic cones")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Seed for every sampling step.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per disc, hyperplane or cone check.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Comma-separated ε values for the disc families.
    #[arg(long, default_value = "1e-3,1e-2,1e-1")]
    pub eps: String,
    /// Random slices tried after the structured cases (n ≥ 3).
    #[arg(long, default_value_t = 256)]
    pub budget: usize,
    /// Write sampled points (or the atlas table) as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Comma-separated `key=value` tolerance overrides
    /// (zero_eigen, det_zero, boundary, witness, sample_residual).
    #[arg(long)]
    pub tol_overrides: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form of an n = 2 cone (signatures and two-sided model form for n ≥ 3).
    Classify {
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// One-sided / two-sided verdict with its verification.
    Decide {
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Like `decide`, plus cone sampling and a CSV point dump.
    Verify {
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Searches a one-sided 2-plane slice of an n ≥ 3 cone.
    Slice {
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Checks the jump decomposition of (z₂³ − z₁³)/(z₁z₂) on the example cone.
    JumpDemo {
        #[command(flatten)]
        common: Common,
    },
    /// Sweeps a normal-form tag over a parameter grid and cross-checks the table.
    Atlas {
        /// One of M20, M11_1, M11_2, M11_3, M10_1, M10_2, M00_1.
        #[arg(long)]
        tag: String,
        /// First parameter: `start:stop:step` or a comma list.
        #[arg(long, default_value = "0.25:2:0.25")]
        grid: String,
        /// Second parameter (B, or Im A for M11_2); defaults to `--grid`.
        #[arg(long)]
        grid2: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

fn settings(common: &Common) -> Result<Settings, String> {
    let eps = commands::parse_grid(&common.eps)?;
    if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0)) {
        return Err("--eps values must be positive".into());
    }
    let mut s = Settings {
        seed: common.seed,
        samples: common.samples.max(1),
        eps,
        budget: common.budget,
        ..Settings::default()
    };
    if let Some(list) = &common.tol_overrides {
        for item in list.split(',').filter(|x| !x.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| format!("tolerance override `{item}` is not key=value"))?;
            let v: f64 = v.trim().parse().map_err(|e| format!("tolerance `{k}`: {e}"))?;
            if !(v > 0.0) {
                return Err(format!("tolerance `{k}` must be positive"));
            }
            if !s.tol.set(k.trim(), v) {
                return Err(format!("unknown tolerance `{k}`"));
            }
        }
    }
    Ok(s)
}

fn read_input(path: &Option<PathBuf>) -> Result<ConeSpec, String> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?
        }
        _ => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("cannot read stdin: {e}"))?;
            buf
        }
    };
    spec::parse_spec(&text).map_err(|e| e.to_string())
}

fn schema_failure(message: String) -> i32 {
    let report = json!({
        "tool": {"name": "quadcone", "version": crate::VERSION},
        "error": {"kind": "schema", "message": message},
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    EXIT_SCHEMA
}

/// Runs the CLI on `args` and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_SCHEMA } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let (common, outcome) = match &cli.command {
        Command::JumpDemo { common } => match settings(common) {
            Ok(s) => (common, commands::cmd_jump_demo(&s)),
            Err(m) => return schema_failure(m),
        },
        Command::Atlas {
            tag,
            grid,
            grid2,
            common,
        } => {
            let parsed = settings(common).and_then(|s| {
                let g = commands::parse_grid(grid)?;
                let g2 = match grid2 {
                    Some(t) => commands::parse_grid(t)?,
                    None => g.clone(),
                };
                Ok((s, g, g2))
            });
            match parsed {
                Ok((s, g, g2)) => (common, commands::cmd_atlas(tag, &g, &g2, &s)),
                Err(m) => return schema_failure(m),
            }
        }
        Command::Classify { input, common }
        | Command::Decide { input, common }
        | Command::Verify { input, common }
        | Command::Slice { input, common } => {
            let s = match settings(common) {
                Ok(s) => s,
                Err(m) => return schema_failure(m),
            };
            let spec = match read_input(input) {
                Ok(spec) => spec,
                Err(m) => return schema_failure(m),
            };
            let out = match &cli.command {
                Command::Classify { .. } => commands::cmd_classify(&spec, &s),
                Command::Decide { .. } => commands::cmd_decide(&spec, &s),
                Command::Verify { .. } => commands::cmd_verify(&spec, &s),
                _ => commands::cmd_slice(&spec, &s),
            };
            (common, out)
        }
    };
    let mut report = outcome.report;
    let mut code = outcome.code;
    if let Some(path) = &common.csv {
        let written = match &cli.command {
            Command::Atlas { .. } => commands::write_atlas_csv(path, &report),
            _ => commands::write_points_csv(path, &outcome.points),
        };
        if let Err(e) = written {
            report["csv_error"] = json!(e.to_string());
            code = code.max(EXIT_VERIFICATION);
        }
    }
    report["timings"] = json!({"elapsed_ms": start.elapsed().as_secs_f64() * 1e3});
    report["exit_code"] = json!(code);
    println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    code
}
