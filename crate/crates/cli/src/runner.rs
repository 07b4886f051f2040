//! Probe orchestration: builds domains and models from a validated config,
//! runs the appropriate sweeps, and assembles a deterministic report plus a
//! timing sidecar.

use crate::config::{ConfigError, ExperimentConfig, ExperimentKind};
use crate::report::{Cell, CellTiming, Report};
use lpmult::geometry::StarDomain;
use lpmult::littlewood_paley::FrequencyPartition;
use lpmult::mikhlin::mikhlin_constant;
use lpmult::norms::{model_symbol, truncation_norm_estimate, ToeplitzTruncation, WarmPair};
use lpmult::{AnalyticModel, Complex64};
use std::time::Instant;
use thiserror::Error;

/// Pole clearances used when a probe builds its own bounded family above
/// the accumulation-flagged set points; weights equal the clearances so the
/// sup norm stays moderate while singularities approach the set.
pub const AUTO_POLE_DELTAS: [f64; 3] = [0.05, 0.02, 0.01];

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("model is not bounded on the domain: pole at {0} lies inside or within clearance of the closure")]
    PoleViolation(Complex64),
    #[error(transparent)]
    Core(#[from] lpmult::Error),
}

/// Builds the canonical bounded pole family for a domain: for every
/// accumulation-flagged angle `s`, poles at `(1 + delta) e^{is}` with
/// weights `delta`. Radially outward points above set points lie outside
/// the domain closure because triangles only attach over complementary
/// arcs.
pub fn auto_pole_model(domain: &StarDomain) -> Result<AnalyticModel, RunError> {
    let flagged = domain.set().accumulation_angles();
    if flagged.is_empty() {
        return Err(ConfigError::invalid(
            "set.accumulation",
            "the auto model needs at least one accumulation-flagged point",
        )
        .into());
    }
    let mut poles = Vec::new();
    let mut weights = Vec::new();
    for s in flagged {
        for &delta in &AUTO_POLE_DELTAS {
            poles.push(Complex64::from_polar(1.0 + delta, s));
            weights.push(Complex64::new(delta, 0.0));
        }
    }
    Ok(AnalyticModel::pole_sum(poles, weights)?)
}

pub fn run(config: &ExperimentConfig) -> Result<(Report, Vec<CellTiming>), RunError> {
    config.validate()?;
    let mut cells = Vec::new();
    let mut timings = Vec::new();

    match config.kind {
        ExperimentKind::TheoremProbe => {
            let (domain, model) = build_domain_and_model(config)?;
            push_mikhlin_cell(config, &domain, &model, &mut cells, &mut timings)?;
            push_norm_curves(config, &model, &mut cells, &mut timings)?;
        }
        ExperimentKind::VerbitskiiProbe => {
            let model = AnalyticModel::singular_inner();
            push_norm_curves(config, &model, &mut cells, &mut timings)?;
        }
        ExperimentKind::MikhlinVerify => {
            let (domain, model) = build_domain_and_model(config)?;
            push_mikhlin_cell(config, &domain, &model, &mut cells, &mut timings)?;
        }
        ExperimentKind::LpConstants => {
            let set = config.set.as_ref().expect("validated").build()?;
            for &n in &config.n_list {
                let partition = FrequencyPartition::from_set(&set, n)?;
                for &p in &config.p_list {
                    let started = Instant::now();
                    let r = partition.lp_constants_estimate(p, config.trials, config.seed)?;
                    cells.push(Cell::LpConstants {
                        p: r.p,
                        n: r.n,
                        trials: r.trials,
                        ratio_min: r.ratio_min,
                        ratio_max: r.ratio_max,
                        seed: r.seed,
                    });
                    timings.push(timing(format!("lp_constants:p={p}:n={n}"), started));
                }
            }
        }
        ExperimentKind::NormTable => {
            let model = config
                .model
                .as_ref()
                .expect("validated")
                .build()?
                .expect("norm_table forbids auto");
            push_norm_curves(config, &model, &mut cells, &mut timings)?;
        }
    }

    Ok((Report::new(config.clone(), cells), timings))
}

fn build_domain_and_model(
    config: &ExperimentConfig,
) -> Result<(StarDomain, AnalyticModel), RunError> {
    let set = config.set.as_ref().expect("validated").build()?;
    let theta0 = config.theta0.expect("validated");
    let domain = StarDomain::build(set, theta0)?;
    let model = match config.model.as_ref().and_then(|m| m.build().transpose()) {
        Some(built) => built?,
        None => auto_pole_model(&domain)?,
    };
    if !model.is_bounded_on(&domain) {
        let pole = model
            .violating_pole(&domain)
            .unwrap_or_else(|| Complex64::new(f64::NAN, f64::NAN));
        return Err(RunError::PoleViolation(pole));
    }
    Ok((domain, model))
}

fn push_mikhlin_cell(
    config: &ExperimentConfig,
    domain: &StarDomain,
    model: &AnalyticModel,
    cells: &mut Vec<Cell>,
    timings: &mut Vec<CellTiming>,
) -> Result<(), RunError> {
    let started = Instant::now();
    let report = mikhlin_constant(model, domain, config.grid)?;
    let c = domain.inscribed_constant_cached()?;
    cells.push(Cell::Mikhlin {
        grid: report.grid,
        sup_product: report.sup_product,
        bound: report.bound,
        margin: report.margin,
        theta_min: domain.theta_min(),
        inscribed_constant: c,
        sup_norm: report.bound * c,
    });
    timings.push(timing(format!("mikhlin:grid={}", config.grid), started));
    Ok(())
}

fn push_norm_curves(
    config: &ExperimentConfig,
    model: &AnalyticModel,
    cells: &mut Vec<Cell>,
    timings: &mut Vec<CellTiming>,
) -> Result<(), RunError> {
    let mut n_sorted = config.n_list.clone();
    n_sorted.sort_unstable();
    n_sorted.dedup();
    let n_max = *n_sorted.last().expect("validated: n_list nonempty");
    // One symbol of the largest length, so every dimension is a leading
    // compression of the same operator; each maximizer pair warm-starts the
    // next dimension, keeping the lower-bound curve nondecreasing.
    let symbol_started = Instant::now();
    let symbol = model_symbol(model, n_max)?;
    timings.push(timing(format!("symbol:n={n_max}"), symbol_started));
    for &p in &config.p_list {
        let mut warm: Option<WarmPair> = None;
        for &n in &n_sorted {
            let started = Instant::now();
            let t = ToeplitzTruncation::from_coeffs(&symbol.coeffs, n)?;
            let (est, next_warm) = truncation_norm_estimate(&t, p, config.seed, warm.as_ref())?;
            warm = next_warm;
            cells.push(Cell::Norm {
                p: est.p,
                n: est.n,
                lower: est.lower,
                upper: est.upper,
                methods: est.methods,
                iterations: est.iterations,
                seed: est.seed,
            });
            timings.push(timing(format!("norm:p={p}:n={n}"), started));
        }
    }
    Ok(())
}

fn timing(key: String, started: Instant) -> CellTiming {
    CellTiming {
        key,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    }
}
