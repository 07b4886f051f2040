//! Command-line workbench: boundary-set generators, star-domain builds,
//! coefficient extraction, norm brackets, derivative-bound sweeps,
//! quadratic-function constants, and the config-driven experiment runner.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use lpmult::geometry::{StarDomain, DEFAULT_INSCRIBED_SAMPLES};
use lpmult::lacunary::{self, check_ratio_condition, ratio_report};
use lpmult::littlewood_paley::FrequencyPartition;
use lpmult::mikhlin::mikhlin_constant;
use lpmult::norms::multiplier_norm_estimate;
use lpmult::taylor::{dft_params_auto, taylor_dft, taylor_exact};
use lpmult::{AnalyticModel, ClosedCircleSet};
use lpmult_cli::config::{normalize_generator, ExperimentConfig, ModelSpec};
use lpmult_cli::report::{write_timings, EmitFormat, Report};
use lpmult_cli::runner;
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Environment variable selecting the default output directory for
/// experiment reports.
const OUT_DIR_ENV: &str = "LPMULT_OUT_DIR";

#[derive(Parser)]
#[command(
    name = "lpmult",
    version,
    about = "Numerical workbench for coefficient multipliers of analytic functions on the unit disk"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Boundary-set generators and ratio checks.
    Set {
        #[command(subcommand)]
        cmd: SetCmd,
    },
    /// Star-domain construction.
    Domain {
        #[command(subcommand)]
        cmd: DomainCmd,
    },
    /// Taylor coefficient extraction.
    Taylor(TaylorArgs),
    /// Truncated multiplier-norm bracket for one (p, N) cell.
    Norm(NormArgs),
    /// Derivative-distance sweep against the geometric bound.
    Mikhlin(MikhlinArgs),
    /// Quadratic-function constant bracket for one (p, N) cell.
    LpConstants(LpConstantsArgs),
    /// Config-driven experiment runner.
    Experiment {
        #[command(subcommand)]
        cmd: ExperimentCmd,
    },
    /// Report format conversion.
    Report {
        #[command(subcommand)]
        cmd: ReportCmd,
    },
}

#[derive(Subcommand)]
enum SetCmd {
    /// Generate a boundary set and emit it as JSON.
    Gen {
        /// Generator name: dyadic_gap or superlacunary.
        #[arg(long)]
        generator: String,
        /// Generator order K.
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Arc-length ratio report and threshold verdict.
    CheckRatio {
        #[command(flatten)]
        set: SetSource,
        /// First ratio index of the tail; defaults past the anchor arcs.
        #[arg(long)]
        tail_start: Option<usize>,
        /// Ratio threshold in (0, 1).
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DomainCmd {
    /// Build a star domain and report its geometry constants.
    Build {
        #[command(flatten)]
        set: SetSource,
        /// Angle between circle and triangle sides (radians).
        #[arg(long)]
        theta0: f64,
        /// Samples per arc for the inscribed-circle constant.
        #[arg(long, default_value_t = DEFAULT_INSCRIBED_SAMPLES)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    /// Run a JSON experiment config and emit report files.
    Run {
        config: PathBuf,
        /// Override the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (falls back to $LPMULT_OUT_DIR, then ".").
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ReportCmd {
    /// Convert a JSON report to another format.
    Convert {
        report: PathBuf,
        /// Target format: csv or svg.
        #[arg(long)]
        to: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Where a boundary set comes from: a named generator or a JSON file.
#[derive(Args)]
struct SetSource {
    /// Generator name: dyadic_gap or superlacunary.
    #[arg(long, conflicts_with = "set_file")]
    generator: Option<String>,
    /// Generator order K.
    #[arg(long, requires = "generator")]
    k: Option<u32>,
    /// JSON file with {"angles": [...], "accumulation": [...]}.
    #[arg(long)]
    set_file: Option<PathBuf>,
}

impl SetSource {
    fn build(&self) -> Result<ClosedCircleSet> {
        match (&self.generator, &self.set_file) {
            (Some(g), None) => {
                let k = self.k.context("--k is required with --generator")?;
                let set = match normalize_generator(g).as_str() {
                    "dyadic_gap" => lacunary::generate_dyadic_gap(k)?,
                    "superlacunary" => lacunary::generate_superlacunary(k)?,
                    other => bail!("unknown generator `{other}`"),
                };
                Ok(set)
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let set: ClosedCircleSet = serde_json::from_str(&text)
                    .with_context(|| format!("parsing boundary set from {}", path.display()))?;
                Ok(set)
            }
            _ => bail!("give exactly one of --generator or --set-file"),
        }
    }
}

/// Where a model comes from: a JSON spec file, inline JSON, or `auto`.
#[derive(Args)]
struct ModelSource {
    /// JSON model spec file.
    #[arg(long, conflicts_with_all = ["model_json", "model_auto"])]
    model_file: Option<PathBuf>,
    /// Inline JSON model spec.
    #[arg(long, conflicts_with = "model_auto")]
    model_json: Option<String>,
    /// Canonical bounded pole family built from the domain.
    #[arg(long)]
    model_auto: bool,
}

impl ModelSource {
    fn spec(&self) -> Result<ModelSpec> {
        if self.model_auto {
            return Ok(ModelSpec::auto());
        }
        let text = match (&self.model_file, &self.model_json) {
            (Some(path), None) => std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?,
            (None, Some(inline)) => inline.clone(),
            _ => bail!("give exactly one of --model-file, --model-json, or --model-auto"),
        };
        let spec: ModelSpec = serde_json::from_str(&text).context("parsing model spec")?;
        Ok(spec)
    }

    fn build_concrete(&self) -> Result<AnalyticModel> {
        let spec = self.spec()?;
        spec.validate("model", false)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        Ok(spec.build().map_err(|e| anyhow::anyhow!("{e}"))?.expect("not auto"))
    }
}

#[derive(Args)]
struct TaylorArgs {
    #[command(flatten)]
    model: ModelSource,
    /// Number of coefficients.
    #[arg(long)]
    n: usize,
    /// Extraction method: auto, exact, or dft.
    #[arg(long, default_value = "auto")]
    method: String,
    /// Sampling radius for the dft method (defaults chosen automatically).
    #[arg(long)]
    rho: Option<f64>,
    /// DFT grid size (power of two) for the dft method.
    #[arg(long)]
    grid_m: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NormArgs {
    #[command(flatten)]
    model: ModelSource,
    /// Exponent; accepts `inf` for the endpoint.
    #[arg(long, value_parser = parse_exponent)]
    p: f64,
    /// Truncation dimension.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MikhlinArgs {
    #[command(flatten)]
    set: SetSource,
    #[arg(long)]
    theta0: f64,
    #[command(flatten)]
    model: ModelSource,
    #[arg(long, default_value_t = 8192)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LpConstantsArgs {
    #[command(flatten)]
    set: SetSource,
    /// Frequency grid size (power of two).
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = parse_exponent)]
    p: f64,
    #[arg(long, default_value_t = 500)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_exponent(s: &str) -> std::result::Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "oo" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|e| format!("invalid exponent `{other}`: {e}")),
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => {
            lpmult_cli::report::write_file(path, text.as_bytes())?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct TriangleSummary {
    arc_start: f64,
    arc_length: f64,
    base_angle: f64,
    theta: f64,
    apex: [f64; 2],
}

#[derive(Serialize)]
struct DomainSummary {
    theta_min: f64,
    inscribed_constant: f64,
    samples_per_arc: usize,
    triangles: Vec<TriangleSummary>,
    set: ClosedCircleSet,
}

#[derive(Serialize)]
struct RatioVerdict {
    #[serde(flatten)]
    report: lpmult::RatioReport,
    beta: f64,
    passes: bool,
}

#[derive(Serialize)]
struct MikhlinSummary {
    #[serde(flatten)]
    report: lpmult::MikhlinReport,
    theta_min: f64,
    inscribed_constant: f64,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.cmd {
        Command::Set { cmd } => match cmd {
            SetCmd::Gen { generator, k, out } => {
                let set = match normalize_generator(&generator).as_str() {
                    "dyadic_gap" => lacunary::generate_dyadic_gap(k)?,
                    "superlacunary" => lacunary::generate_superlacunary(k)?,
                    other => bail!("unknown generator `{other}`"),
                };
                emit_json(&set, out.as_deref())
            }
            SetCmd::CheckRatio {
                set,
                tail_start,
                beta,
                out,
            } => {
                let set = set.build()?;
                let tail = tail_start.unwrap_or_else(|| lacunary::default_tail_start(&set));
                let report = ratio_report(&set, tail)?;
                let passes = check_ratio_condition(&report, beta)?;
                emit_json(
                    &RatioVerdict {
                        report,
                        beta,
                        passes,
                    },
                    out.as_deref(),
                )
            }
        },
        Command::Domain { cmd } => match cmd {
            DomainCmd::Build {
                set,
                theta0,
                samples,
                out,
            } => {
                let set = set.build()?;
                let domain = StarDomain::build(set, theta0)?;
                let c = domain.inscribed_constant(samples)?;
                let triangles = domain
                    .triangles()
                    .iter()
                    .map(|t| TriangleSummary {
                        arc_start: t.arc().start(),
                        arc_length: t.arc().length(),
                        base_angle: t.base_angle(),
                        theta: t.theta(),
                        apex: [t.apex().re, t.apex().im],
                    })
                    .collect();
                emit_json(
                    &DomainSummary {
                        theta_min: domain.theta_min(),
                        inscribed_constant: c,
                        samples_per_arc: samples,
                        triangles,
                        set: domain.set().clone(),
                    },
                    out.as_deref(),
                )
            }
        },
        Command::Taylor(args) => {
            let model = args.model.build_concrete()?;
            let seq = match args.method.as_str() {
                "exact" => taylor_exact(&model, args.n)?,
                "dft" => {
                    let (auto_rho, auto_m) = dft_params_auto(&model, args.n);
                    taylor_dft(
                        &model,
                        args.n,
                        args.rho.unwrap_or(auto_rho),
                        args.grid_m.unwrap_or(auto_m),
                    )?
                }
                "auto" => lpmult::norms::model_symbol(&model, args.n)?,
                other => bail!("unknown method `{other}` (expected auto, exact, or dft)"),
            };
            emit_json(&seq, args.out.as_deref())
        }
        Command::Norm(args) => {
            let model = args.model.build_concrete()?;
            let est = multiplier_norm_estimate(&model, args.p, args.n, args.seed)?;
            emit_json(&est, args.out.as_deref())
        }
        Command::Mikhlin(args) => {
            let set = args.set.build()?;
            let domain = StarDomain::build(set, args.theta0)?;
            let spec = args.model.spec()?;
            let model = match spec.build().map_err(|e| anyhow::anyhow!("{e}"))? {
                Some(m) => m,
                None => runner::auto_pole_model(&domain).map_err(|e| anyhow::anyhow!("{e}"))?,
            };
            let report = mikhlin_constant(&model, &domain, args.grid)?;
            let c = domain.inscribed_constant_cached()?;
            emit_json(
                &MikhlinSummary {
                    report,
                    theta_min: domain.theta_min(),
                    inscribed_constant: c,
                },
                args.out.as_deref(),
            )
        }
        Command::LpConstants(args) => {
            let set = args.set.build()?;
            let partition = FrequencyPartition::from_set(&set, args.n)?;
            let report = partition.lp_constants_estimate(args.p, args.trials, args.seed)?;
            emit_json(&report, args.out.as_deref())
        }
        Command::Experiment { cmd } => match cmd {
            ExperimentCmd::Run {
                config,
                seed,
                out_dir,
            } => {
                let text = std::fs::read_to_string(&config)
                    .with_context(|| format!("reading {}", config.display()))?;
                let mut cfg =
                    ExperimentConfig::from_json(&text).map_err(|e| anyhow::anyhow!("{e}"))?;
                if let Some(s) = seed {
                    cfg.seed = s;
                }
                let dir = out_dir
                    .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
                    .unwrap_or_else(|| PathBuf::from("."));
                let stem = config
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("experiment")
                    .to_string();
                let (report, timings) = runner::run(&cfg).map_err(|e| anyhow::anyhow!("{e}"))?;

                let json_path = dir.join(format!("{stem}.report.json"));
                report.emit(EmitFormat::Json, &json_path)?;
                let csv_path = dir.join(format!("{stem}.report.csv"));
                report.emit(EmitFormat::Csv, &csv_path)?;
                eprintln!("wrote {}", json_path.display());
                eprintln!("wrote {}", csv_path.display());
                match report.emit(EmitFormat::Svg, &dir.join(format!("{stem}.report.svg"))) {
                    Ok(()) => eprintln!("wrote {}", dir.join(format!("{stem}.report.svg")).display()),
                    Err(lpmult_cli::report::ReportError::NoCurves) => {}
                    Err(e) => return Err(e.into()),
                }
                let timings_path = dir.join(format!("{stem}.timings.json"));
                write_timings(&timings_path, &timings)?;
                for t in &timings {
                    eprintln!("  {}: {:.1} ms", t.key, t.wall_ms);
                }
                Ok(())
            }
        },
        Command::Report { cmd } => match cmd {
            ReportCmd::Convert { report, to, out } => {
                let text = std::fs::read_to_string(&report)
                    .with_context(|| format!("reading {}", report.display()))?;
                let parsed = Report::from_json(&text)?;
                let (format, ext) = match to.as_str() {
                    "csv" => (EmitFormat::Csv, "csv"),
                    "svg" => (EmitFormat::Svg, "svg"),
                    other => bail!("unknown target format `{other}` (expected csv or svg)"),
                };
                let out = out.unwrap_or_else(|| report.with_extension(ext));
                parsed.emit(format, &out)?;
                eprintln!("wrote {}", out.display());
                Ok(())
            }
        },
    }
}
