//! Reproducible simulation experiments for the streaming estimator.
//!
//! Every experiment derives one independent random stream per replicate from
//! `(seed, purpose, replicate index)`, so results are bitwise reproducible
//! regardless of how many worker threads execute the replicates: parallelism
//! only distributes the replicate loop, and outputs are aggregated in index
//! order.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandwidth::BandwidthPlan;
use crate::confidence::{build_band, calibrate_tail, coverage_check};
use crate::density::DensitySpec;
use crate::error::{Error, Result};
use crate::estimators::{pr_field, sup_deviation, GridEstimate, Sample};
use crate::gls::{nu, TailModel};
use crate::grid::Grid;
use crate::kernels::KernelSpec;

/// Independent stream families; streams with different purposes never
/// overlap even at the same replicate index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPurpose {
    RateSample = 1,
    TailCalibration = 2,
    TailHoldout = 3,
    CoverageCalibration = 4,
    CoverageHoldout = 5,
    Comparison = 6,
}

fn splitmix_step(z: u64) -> u64 {
    let z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    let z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the generator for one replicate of one experiment.
///
/// The three coordinates are absorbed through a nonlinear mix, then expanded
/// into a 256-bit ChaCha key.
#[must_use]
pub fn replicate_rng(seed: u64, purpose: StreamPurpose, index: u64) -> ChaCha12Rng {
    let mut state = seed;
    state = splitmix_step(state) ^ (purpose as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    state = splitmix_step(state) ^ index.wrapping_mul(0x94D0_49BB_1331_11EB);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix_step(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

/// Stream `n` observations from `density` through a fresh estimator.
fn stream_estimate(
    density: &DensitySpec,
    plan: &BandwidthPlan,
    kernel: &KernelSpec,
    grid: &Grid,
    n: u64,
    rng: &mut ChaCha12Rng,
) -> Result<GridEstimate> {
    let mut est = GridEstimate::new(grid.clone(), *plan, kernel.clone())?;
    let mut buf = vec![0.0; density.dim()];
    for _ in 0..n {
        density.sample_point(rng, &mut buf)?;
        est.update(&buf)?;
    }
    Ok(est)
}

fn check_shared_dims(density: &DensitySpec, plan: &BandwidthPlan, grid: &Grid) -> Result<()> {
    if density.dim() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: density.dim(),
            got: grid.dim(),
        });
    }
    if plan.dim() as usize != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: plan.dim() as usize,
        });
    }
    Ok(())
}

fn median(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptySample("median of an empty slice"));
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Ok(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

/// Least-squares slope of `ln error` against `ln(ln n / n)`.
///
/// Errors matching the bandwidth schedule `(ln n / n)^rho` exactly come back
/// with `slope = rho` to rounding. Returns `Ok(None)` when any error is zero
/// or negative (no log-log fit exists).
pub fn fit_rate_slope(ns: &[u64], errors: &[f64]) -> Result<Option<RateFit>> {
    if ns.len() != errors.len() {
        return Err(Error::GridMismatch(format!(
            "{} sample sizes vs {} errors",
            ns.len(),
            errors.len()
        )));
    }
    if ns.len() < 2 {
        return Err(Error::invalid("rate fit needs at least two sample sizes"));
    }
    for w in ns.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::invalid(
                "rate fit needs strictly increasing sample sizes",
            ));
        }
    }
    if ns[0] < 2 {
        return Err(Error::invalid("rate fit needs sample sizes >= 2"));
    }
    if errors.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
        return Ok(None);
    }
    let xs: Vec<f64> = ns
        .iter()
        .map(|&n| ((n as f64).ln() / n as f64).ln())
        .collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let xbar = xs.iter().sum::<f64>() / xs.len() as f64;
    let ybar = ys.iter().sum::<f64>() / ys.len() as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - xbar) * (y - ybar);
        sxx += (x - xbar) * (x - xbar);
    }
    Ok(Some(RateFit {
        slope: sxy / sxx,
        intercept: ybar - sxy / sxx * xbar,
    }))
}

/// Log-log regression summary for a rate table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    /// Exponent of the error against `ln n / n`.
    pub slope: f64,
    /// Offset of the regression line.
    pub intercept: f64,
}

/// Configuration of a convergence-rate experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateConfig {
    pub seed: u64,
    pub density: DensitySpec,
    pub plan: BandwidthPlan,
    pub kernel: KernelSpec,
    pub grid: Grid,
    /// Checkpoints, strictly increasing.
    pub n_list: Vec<u64>,
    pub replicates: usize,
}

/// Measured sup-norm errors per checkpoint with a fitted rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub n_list: Vec<u64>,
    /// `per_replicate[r][i]` = sup deviation of replicate `r` at `n_list[i]`.
    pub per_replicate: Vec<Vec<f64>>,
    /// Median over replicates per checkpoint.
    pub median_sup_dev: Vec<f64>,
    pub fit: Option<RateFit>,
    #[serde(skip)]
    pub runtime_seconds: f64,
}

impl RateReport {
    fn validate(&self) -> Result<()> {
        for w in self.n_list.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::invalid("rate table sample sizes must increase"));
            }
        }
        if self.median_sup_dev.len() != self.n_list.len() {
            return Err(Error::GridMismatch(
                "rate table medians misaligned with checkpoints".into(),
            ));
        }
        Ok(())
    }
}

/// Stream each replicate once to the largest checkpoint, recording the sup
/// deviation from the target density at every checkpoint along the way.
pub fn run_rate_experiment(cfg: &RateConfig) -> Result<RateReport> {
    let start = std::time::Instant::now();
    check_shared_dims(&cfg.density, &cfg.plan, &cfg.grid)?;
    if cfg.replicates == 0 {
        return Err(Error::invalid("rate experiment needs replicates >= 1"));
    }
    if cfg.n_list.is_empty() {
        return Err(Error::invalid("rate experiment needs checkpoints"));
    }
    for w in cfg.n_list.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::invalid(
                "rate experiment checkpoints must be strictly increasing",
            ));
        }
    }
    if cfg.n_list[0] == 0 {
        return Err(Error::invalid("rate experiment checkpoints start at n >= 1"));
    }
    let truth = cfg.density.field_on(&cfg.grid)?;
    let n_max = *cfg.n_list.last().expect("nonempty");

    let per_replicate: Vec<Vec<f64>> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| -> Result<Vec<f64>> {
            let mut rng = replicate_rng(cfg.seed, StreamPurpose::RateSample, r as u64);
            let mut est =
                GridEstimate::new(cfg.grid.clone(), cfg.plan, cfg.kernel.clone())?;
            let mut buf = vec![0.0; cfg.density.dim()];
            let mut out = Vec::with_capacity(cfg.n_list.len());
            let mut next = 0;
            for k in 1..=n_max {
                cfg.density.sample_point(&mut rng, &mut buf)?;
                est.update(&buf)?;
                if k == cfg.n_list[next] {
                    out.push(est.sup_deviation_from(&truth)?);
                    next += 1;
                    if next == cfg.n_list.len() {
                        break;
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut median_sup_dev = Vec::with_capacity(cfg.n_list.len());
    for i in 0..cfg.n_list.len() {
        let column: Vec<f64> = per_replicate.iter().map(|row| row[i]).collect();
        median_sup_dev.push(median(&column)?);
    }
    let fit = fit_rate_slope(&cfg.n_list, &median_sup_dev)?;
    let report = RateReport {
        n_list: cfg.n_list.clone(),
        per_replicate,
        median_sup_dev,
        fit,
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    report.validate()?;
    Ok(report)
}

/// Configuration of a normalized-deviation tail experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailConfig {
    pub seed: u64,
    pub density: DensitySpec,
    pub plan: BandwidthPlan,
    pub kernel: KernelSpec,
    pub grid: Grid,
    pub n: u64,
    pub calibration_replicates: usize,
    pub holdout_replicates: usize,
    /// Measure deviations from the estimator's pointwise mean instead of the
    /// target density.
    pub centered: bool,
}

/// One knot of an empirical survival curve with its envelope value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalKnot {
    /// Normalized deviation level.
    pub u: f64,
    /// Empirical survival of the calibration deviations at `u`.
    pub survival: f64,
    /// Calibrated envelope `C nu(u / s)` at `u` (`None` below the domain edge).
    pub bound: Option<f64>,
}

/// Calibrated envelope plus the raw material to audit it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub n: u64,
    pub centered: bool,
    pub model: TailModel,
    /// Normalized sup deviations of the calibration replicates.
    pub calibration_deviations: Vec<f64>,
    /// Normalized sup deviations of the holdout replicates.
    pub holdout_deviations: Vec<f64>,
    /// Empirical survival curve of the calibration set at distinct knots.
    pub survival_curve: Vec<SurvivalKnot>,
    /// Fraction of in-domain holdout knots dominated by the envelope.
    pub holdout_domination_fraction: f64,
    /// Number of holdout knots inside the envelope domain.
    pub holdout_in_domain: usize,
    #[serde(skip)]
    pub runtime_seconds: f64,
}

impl TailReport {
    fn validate(&self) -> Result<()> {
        for w in self.survival_curve.windows(2) {
            if !(w[1].u > w[0].u) || !(w[1].survival < w[0].survival) {
                return Err(Error::invalid(
                    "survival curve must strictly decrease along increasing knots",
                ));
            }
        }
        if !(0.0..=1.0).contains(&self.holdout_domination_fraction) {
            return Err(Error::invalid("domination fraction outside [0, 1]"));
        }
        Ok(())
    }
}

// The argument list mirrors the shared experiment config fields one-to-one.
#[allow(clippy::too_many_arguments)]
fn normalized_deviations(
    cfg_seed: u64,
    purpose: StreamPurpose,
    replicates: usize,
    density: &DensitySpec,
    plan: &BandwidthPlan,
    kernel: &KernelSpec,
    grid: &Grid,
    n: u64,
    reference: &[f64],
) -> Result<Vec<f64>> {
    let b_n = plan.normalizer(n)?;
    (0..replicates)
        .into_par_iter()
        .map(|r| -> Result<f64> {
            let mut rng = replicate_rng(cfg_seed, purpose, r as u64);
            let est = stream_estimate(density, plan, kernel, grid, n, &mut rng)?;
            Ok(b_n * est.sup_deviation_from(reference)?)
        })
        .collect()
}

/// Empirical survival knots at (up to) `max_knots` distinct order statistics.
fn survival_knots(sorted: &[f64], max_knots: usize, model: &TailModel) -> Vec<SurvivalKnot> {
    let n = sorted.len();
    let stride = n.div_ceil(max_knots).max(1);
    let mut knots: Vec<SurvivalKnot> = Vec::new();
    let mut j = if n.is_multiple_of(stride) { stride - 1 } else { n % stride - 1 };
    while j < n {
        let u = sorted[j];
        // Survival at the *value* (ties collapse onto the first occurrence).
        let first = sorted.partition_point(|v| *v < u);
        let survival = (n - first) as f64 / n as f64;
        let is_dup = knots.last().is_some_and(|k: &SurvivalKnot| k.u >= u);
        if !is_dup {
            knots.push(SurvivalKnot {
                u,
                survival,
                bound: if u >= model.domain_edge() {
                    model.bound(u).ok()
                } else {
                    None
                },
            });
        }
        j += stride;
    }
    knots
}

/// Calibrate the deviation envelope on fresh replicates and audit it on a
/// disjoint holdout family.
pub fn run_tail_experiment(cfg: &TailConfig) -> Result<TailReport> {
    let start = std::time::Instant::now();
    check_shared_dims(&cfg.density, &cfg.plan, &cfg.grid)?;
    if cfg.calibration_replicates < 8 {
        return Err(Error::invalid(
            "tail experiment needs at least 8 calibration replicates",
        ));
    }
    if cfg.holdout_replicates == 0 {
        return Err(Error::invalid("tail experiment needs holdout replicates"));
    }
    if cfg.n == 0 {
        return Err(Error::invalid("tail experiment needs n >= 1"));
    }
    let reference = if cfg.centered {
        crate::estimators::expected_field(&cfg.plan, &cfg.kernel, &cfg.density, cfg.n, &cfg.grid)?
    } else {
        cfg.density.field_on(&cfg.grid)?
    };

    let calibration_deviations = normalized_deviations(
        cfg.seed,
        StreamPurpose::TailCalibration,
        cfg.calibration_replicates,
        &cfg.density,
        &cfg.plan,
        &cfg.kernel,
        &cfg.grid,
        cfg.n,
        &reference,
    )?;
    let holdout_deviations = normalized_deviations(
        cfg.seed,
        StreamPurpose::TailHoldout,
        cfg.holdout_replicates,
        &cfg.density,
        &cfg.plan,
        &cfg.kernel,
        &cfg.grid,
        cfg.n,
        &reference,
    )?;

    let model = calibrate_tail(&calibration_deviations)?;

    let mut sorted_calib = calibration_deviations.clone();
    sorted_calib.sort_by(f64::total_cmp);
    let survival_curve = survival_knots(&sorted_calib, 40, &model);

    let mut sorted_hold = holdout_deviations.clone();
    sorted_hold.sort_by(f64::total_cmp);
    let m = sorted_hold.len();
    let edge = model.domain_edge();
    let mut in_domain = 0usize;
    let mut dominated = 0usize;
    for (j, u) in sorted_hold.iter().enumerate() {
        if *u < edge {
            continue;
        }
        in_domain += 1;
        let survival = (m - j) as f64 / m as f64;
        if model.bound(*u)? >= survival {
            dominated += 1;
        }
    }
    let holdout_domination_fraction = if in_domain == 0 {
        1.0
    } else {
        dominated as f64 / in_domain as f64
    };

    let report = TailReport {
        n: cfg.n,
        centered: cfg.centered,
        model,
        calibration_deviations,
        holdout_deviations,
        survival_curve,
        holdout_domination_fraction,
        holdout_in_domain: in_domain,
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    report.validate()?;
    Ok(report)
}

/// Configuration of a confidence-band coverage experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageConfig {
    pub seed: u64,
    pub density: DensitySpec,
    pub plan: BandwidthPlan,
    pub kernel: KernelSpec,
    pub grid: Grid,
    pub n: u64,
    pub calibration_replicates: usize,
    pub holdout_replicates: usize,
    /// Target miss level of the band.
    pub alpha: f64,
}

/// Coverage of calibrated bands over fresh replicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub n: u64,
    pub alpha: f64,
    pub model: TailModel,
    /// True when the calibrated constant had to be inflated to make `alpha`
    /// reachable inside the envelope domain.
    pub model_inflated: bool,
    /// Envelope quantile backing every band.
    pub u_alpha: f64,
    /// Fraction of holdout replicates whose band contains the truth
    /// everywhere on the grid.
    pub coverage: f64,
    /// Signed worst excursion per holdout replicate (negative = slack).
    pub worst_violations: Vec<f64>,
    #[serde(skip)]
    pub runtime_seconds: f64,
}

impl CoverageReport {
    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.coverage) {
            return Err(Error::invalid("coverage outside [0, 1]"));
        }
        Ok(())
    }
}

/// Calibrate an envelope, build per-replicate bands at level `alpha`, and
/// measure how often the truth stays inside.
pub fn run_coverage_experiment(cfg: &CoverageConfig) -> Result<CoverageReport> {
    let start = std::time::Instant::now();
    check_shared_dims(&cfg.density, &cfg.plan, &cfg.grid)?;
    if cfg.calibration_replicates < 8 {
        return Err(Error::invalid(
            "coverage experiment needs at least 8 calibration replicates",
        ));
    }
    if cfg.holdout_replicates == 0 {
        return Err(Error::invalid("coverage experiment needs holdout replicates"));
    }
    if !(cfg.alpha > 0.0) || !(cfg.alpha < 1.0) {
        return Err(Error::invalid(format!(
            "miss level must lie in (0, 1), got {}",
            cfg.alpha
        )));
    }
    if cfg.n == 0 {
        return Err(Error::invalid("coverage experiment needs n >= 1"));
    }
    let truth = cfg.density.field_on(&cfg.grid)?;

    let calibration_deviations = normalized_deviations(
        cfg.seed,
        StreamPurpose::CoverageCalibration,
        cfg.calibration_replicates,
        &cfg.density,
        &cfg.plan,
        &cfg.kernel,
        &cfg.grid,
        cfg.n,
        &truth,
    )?;
    let fitted = calibrate_tail(&calibration_deviations)?;

    // If the envelope cannot certify a level as coarse as alpha (its value at
    // the domain edge is already below alpha), inflate the constant just
    // enough; the resulting band is wider, i.e. conservative.
    let (model, model_inflated) = match fitted.quantile(cfg.alpha) {
        Ok(_) => (fitted, false),
        Err(Error::UnreachableAlpha { .. }) => {
            let c = 1.01 * cfg.alpha / nu(std::f64::consts::E)?;
            (TailModel::new(c, fitted.s)?, true)
        }
        Err(e) => return Err(e),
    };
    let u_alpha = model.quantile(cfg.alpha)?;

    let worst_violations: Vec<f64> = (0..cfg.holdout_replicates)
        .into_par_iter()
        .map(|r| -> Result<f64> {
            let mut rng = replicate_rng(cfg.seed, StreamPurpose::CoverageHoldout, r as u64);
            let est = stream_estimate(&cfg.density, &cfg.plan, &cfg.kernel, &cfg.grid, cfg.n, &mut rng)?;
            let band = build_band(&est, &model, cfg.alpha)?;
            Ok(coverage_check(&band, &truth)?.worst_violation)
        })
        .collect::<Result<_>>()?;
    let covered = worst_violations.iter().filter(|w| **w <= 0.0).count();
    let coverage = covered as f64 / cfg.holdout_replicates as f64;

    let report = CoverageReport {
        n: cfg.n,
        alpha: cfg.alpha,
        model,
        model_inflated,
        u_alpha,
        coverage,
        worst_violations,
        runtime_seconds: start.elapsed().as_secs_f64(),
    };
    report.validate()?;
    Ok(report)
}

/// Configuration of a paired streaming-vs-fixed-window comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonConfig {
    pub seed: u64,
    pub density: DensitySpec,
    pub plan: BandwidthPlan,
    pub kernel: KernelSpec,
    pub grid: Grid,
    pub n: u64,
    pub replicates: usize,
}

/// Per-replicate paired errors of the two estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedErrors {
    pub streaming_sup: f64,
    pub fixed_window_sup: f64,
    pub streaming_l2: f64,
    pub fixed_window_l2: f64,
}

/// Medians of the paired comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub n: u64,
    pub replicates: usize,
    pub per_replicate: Vec<PairedErrors>,
    pub median_streaming_sup: f64,
    pub median_fixed_window_sup: f64,
    /// Median over replicates of the per-replicate sup-error ratio
    /// streaming / fixed-window.
    pub median_sup_ratio: f64,
    pub median_streaming_l2: f64,
    pub median_fixed_window_l2: f64,
    pub median_l2_ratio: f64,
    #[serde(skip)]
    pub runtime_seconds: f64,
}

fn l2_error(field: &[f64], truth: &[f64], grid: &Grid) -> Result<f64> {
    let sq: Vec<f64> = field
        .iter()
        .zip(truth)
        .map(|(a, b)| (a - b) * (a - b))
        .collect();
    Ok(grid.integrate(&sq)?.sqrt())
}

/// Stream both estimators over the same observation sequences and compare
/// their sup and L2 errors replicate by replicate.
pub fn run_comparison_experiment(cfg: &ComparisonConfig) -> Result<ComparisonReport> {
    let start = std::time::Instant::now();
    check_shared_dims(&cfg.density, &cfg.plan, &cfg.grid)?;
    if cfg.replicates == 0 {
        return Err(Error::invalid("comparison needs replicates >= 1"));
    }
    if cfg.n < 2 {
        return Err(Error::invalid(
            "comparison needs n >= 2 (fixed-window bandwidth requirement)",
        ));
    }
    let truth = cfg.density.field_on(&cfg.grid)?;

    let per_replicate: Vec<PairedErrors> = (0..cfg.replicates)
        .into_par_iter()
        .map(|r| -> Result<PairedErrors> {
            let mut rng = replicate_rng(cfg.seed, StreamPurpose::Comparison, r as u64);
            let sample = Sample::draw(&cfg.density, cfg.n as usize, &mut rng)?;
            let mut streaming =
                GridEstimate::new(cfg.grid.clone(), cfg.plan, cfg.kernel.clone())?;
            streaming.update_all(&sample)?;
            let fixed = pr_field(&cfg.grid, &cfg.plan, &cfg.kernel, &sample)?;
            Ok(PairedErrors {
                streaming_sup: streaming.sup_deviation_from(&truth)?,
                fixed_window_sup: sup_deviation(&fixed, &truth)?,
                streaming_l2: l2_error(streaming.values(), &truth, &cfg.grid)?,
                fixed_window_l2: l2_error(&fixed, &truth, &cfg.grid)?,
            })
        })
        .collect::<Result<_>>()?;

    let col = |f: fn(&PairedErrors) -> f64| -> Vec<f64> { per_replicate.iter().map(f).collect() };
    let sup_ratios: Vec<f64> = per_replicate
        .iter()
        .map(|p| p.streaming_sup / p.fixed_window_sup)
        .collect();
    let l2_ratios: Vec<f64> = per_replicate
        .iter()
        .map(|p| p.streaming_l2 / p.fixed_window_l2)
        .collect();
    Ok(ComparisonReport {
        n: cfg.n,
        replicates: cfg.replicates,
        median_streaming_sup: median(&col(|p| p.streaming_sup))?,
        median_fixed_window_sup: median(&col(|p| p.fixed_window_sup))?,
        median_sup_ratio: median(&sup_ratios)?,
        median_streaming_l2: median(&col(|p| p.streaming_l2))?,
        median_fixed_window_l2: median(&col(|p| p.fixed_window_l2))?,
        median_l2_ratio: median(&l2_ratios)?,
        per_replicate,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}
