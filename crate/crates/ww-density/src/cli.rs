//! Command-line interface behind the `wwdensity` binary.
//!
//! Every command prints one deterministic summary line to stdout and reports
//! timing only on stderr, so repeated runs with the same inputs produce
//! byte-identical stdout and output files regardless of thread count.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bandwidth::BandwidthPlan;
use crate::confidence::{build_band, calibrate_tail};
use crate::density::DensitySpec;
use crate::error::{Error, Result};
use crate::estimators::GridEstimate;
use crate::gls::TailModel;
use crate::grid::{DomainBox, Grid};
use crate::io;
use crate::kernels::{build_higher_order, KernelSpec};
use crate::simulation::{
    run_comparison_experiment, run_coverage_experiment, run_rate_experiment, run_tail_experiment,
    ComparisonConfig, CoverageConfig, RateConfig, TailConfig,
};

/// Streaming kernel density estimation with calibrated confidence bands.
#[derive(Debug, Parser)]
#[command(name = "wwdensity", version, about)]
pub struct Cli {
    /// Worker threads (overrides the WW_DENSITY_THREADS environment
    /// variable; default: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stream observations from a CSV file into a density estimate.
    Estimate(EstimateArgs),
    /// Build a confidence band around a stored estimate.
    Band(BandArgs),
    /// Construct the polynomial-modified kernel for a smoothness level.
    KernelBuild(KernelBuildArgs),
    /// Measure how the sup-norm error shrinks along the schedule.
    Rate(RateArgs),
    /// Calibrate a tail envelope for normalized sup deviations.
    Tail(TailArgs),
    /// Measure confidence-band coverage on holdout replicates.
    Coverage(CoverageArgs),
    /// Compare the streaming estimator against the fixed-window one.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelChoice {
    Gaussian,
    Epanechnikov,
}

impl KernelChoice {
    fn base_spec(self) -> KernelSpec {
        match self {
            KernelChoice::Gaussian => KernelSpec::gaussian(),
            KernelChoice::Epanechnikov => KernelSpec::epanechnikov(),
        }
    }
}

#[derive(Debug, Args)]
struct ScheduleArgs {
    /// Smoothness exponent driving the bandwidth schedule and kernel order.
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    /// Scale constant multiplying the bandwidth schedule.
    #[arg(long, default_value_t = 1.0)]
    c1: f64,
    /// Base kernel family.
    #[arg(long, value_enum, default_value_t = KernelChoice::Gaussian)]
    kernel: KernelChoice,
}

impl ScheduleArgs {
    fn kernel(&self) -> Result<KernelSpec> {
        build_higher_order(&self.kernel.base_spec(), self.beta)
    }

    fn plan(&self, dim: usize) -> Result<BandwidthPlan> {
        BandwidthPlan::new(self.beta, dim as u32, self.c1)
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    /// Comma-separated lower domain corner; a single value is broadcast to
    /// every axis.
    #[arg(long, default_value = "-4", value_delimiter = ',', allow_hyphen_values = true)]
    lo: Vec<f64>,
    /// Comma-separated upper domain corner; a single value is broadcast.
    #[arg(long, default_value = "4", value_delimiter = ',', allow_hyphen_values = true)]
    hi: Vec<f64>,
    /// Node spacing along every axis.
    #[arg(long, default_value_t = 0.125)]
    step: f64,
}

impl GridArgs {
    fn build(&self, dim: usize) -> Result<Grid> {
        let expand = |v: &[f64]| -> Result<Vec<f64>> {
            if v.len() == dim {
                Ok(v.to_vec())
            } else if v.len() == 1 {
                Ok(vec![v[0]; dim])
            } else {
                Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.len(),
                })
            }
        };
        Grid::with_step(DomainBox::new(expand(&self.lo)?, expand(&self.hi)?)?, self.step)
    }
}

#[derive(Debug, Args)]
struct DensityArgs {
    /// Dimension of the experiment (ignored when --density is given).
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// JSON file describing the sampling density; defaults to the standard
    /// normal in --dim dimensions.
    #[arg(long)]
    density: Option<PathBuf>,
}

impl DensityArgs {
    fn resolve(&self) -> Result<DensitySpec> {
        match &self.density {
            Some(path) => io::read_json(path),
            None => DensitySpec::standard_normal(self.dim),
        }
    }
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// CSV of observations, one point per row (header optional).
    #[arg(long)]
    input: PathBuf,
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Output prefix; writes <out>.csv (node values) and <out>.json (metadata).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BandArgs {
    /// Prefix of a stored estimate (<estimate>.csv and <estimate>.json).
    #[arg(long)]
    estimate: PathBuf,
    /// One-column CSV of normalized sup deviations used to calibrate the
    /// envelope (conflicts with --model).
    #[arg(long, conflicts_with = "model")]
    deviations: Option<PathBuf>,
    /// JSON file with an already calibrated envelope.
    #[arg(long)]
    model: Option<PathBuf>,
    /// Target miss level of the band.
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Output prefix; writes <out>.csv and <out>.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct KernelBuildArgs {
    #[arg(long, default_value_t = 2.0)]
    beta: f64,
    #[arg(long, value_enum, default_value_t = KernelChoice::Gaussian)]
    kernel: KernelChoice,
    /// Write the constructed kernel as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RateArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    density: DensityArgs,
    /// Comma-separated checkpoints, strictly increasing.
    #[arg(long = "n-list", default_value = "1024,2048,4096,8192,16384", value_delimiter = ',')]
    n_list: Vec<u64>,
    #[arg(long, default_value_t = 50)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the full report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TailArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    density: DensityArgs,
    #[arg(long, default_value_t = 4096)]
    n: u64,
    #[arg(long = "calib-reps", default_value_t = 200)]
    calib_reps: usize,
    #[arg(long = "holdout-reps", default_value_t = 200)]
    holdout_reps: usize,
    /// Measure deviations from the estimator's pointwise mean instead of the
    /// sampling density.
    #[arg(long)]
    centered: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CoverageArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    density: DensityArgs,
    #[arg(long, default_value_t = 4096)]
    n: u64,
    #[arg(long = "calib-reps", default_value_t = 200)]
    calib_reps: usize,
    #[arg(long = "holdout-reps", default_value_t = 200)]
    holdout_reps: usize,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    density: DensityArgs,
    #[arg(long, default_value_t = 4096)]
    n: u64,
    #[arg(long, default_value_t = 50)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_os_string();
    s.push(suffix);
    PathBuf::from(s)
}

fn join_coords(x: &[f64]) -> String {
    x.iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn run_estimate(args: &EstimateArgs) -> Result<String> {
    let sample = io::read_sample_csv(&args.input)?;
    let grid = args.grid.build(sample.dim())?;
    let plan = args.schedule.plan(grid.dim())?;
    let kernel = args.schedule.kernel()?;
    let mut est = GridEstimate::new(grid, plan, kernel)?;
    est.update_all(&sample)?;
    let (peak_idx, peak) = est
        .values()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is nonempty");
    let peak_at = est.grid().node(peak_idx);
    if let Some(out) = &args.out {
        io::write_estimate_files(&est, &with_suffix(out, ".csv"), &with_suffix(out, ".json"))?;
    }
    Ok(format!(
        "estimate: n={}, {} nodes, peak {} at ({})",
        est.count(),
        est.grid().len(),
        peak,
        join_coords(&peak_at)
    ))
}

fn run_band(args: &BandArgs) -> Result<String> {
    let est = io::read_estimate_files(
        &with_suffix(&args.estimate, ".csv"),
        &with_suffix(&args.estimate, ".json"),
    )?;
    let model: TailModel = match (&args.deviations, &args.model) {
        (Some(devs), None) => {
            let table = io::read_sample_csv(devs)?;
            if table.dim() != 1 {
                return Err(Error::invalid(format!(
                    "deviation file must have one column, got {}",
                    table.dim()
                )));
            }
            calibrate_tail(table.as_flat())?
        }
        (None, Some(model)) => io::read_json(model)?,
        (None, None) => {
            return Err(Error::invalid(
                "band needs either --deviations or --model",
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects conflicting flags"),
    };
    let band = build_band(&est, &model, args.alpha)?;
    if let Some(out) = &args.out {
        io::write_band_files(
            est.grid(),
            &band,
            &with_suffix(out, ".csv"),
            &with_suffix(out, ".json"),
        )?;
    }
    Ok(format!(
        "band: alpha={}, u_alpha={}, half_width={}, C={}, s={}",
        band.alpha,
        band.u_alpha,
        band.half_width(),
        band.model.c,
        band.model.s
    ))
}

fn run_kernel_build(args: &KernelBuildArgs) -> Result<String> {
    let kernel = build_higher_order(&args.kernel.base_spec(), args.beta)?;
    if let Some(out) = &args.out {
        io::write_json(out, &kernel)?;
    }
    Ok(format!(
        "kernel: order={}, coefficients [{}]",
        kernel.order(),
        join_coords(kernel.poly_coeffs())
    ))
}

fn run_rate(args: &RateArgs) -> Result<String> {
    let density = args.density.resolve()?;
    let grid = args.grid.build(density.dim())?;
    let cfg = RateConfig {
        seed: args.seed,
        plan: args.schedule.plan(grid.dim())?,
        kernel: args.schedule.kernel()?,
        density,
        grid,
        n_list: args.n_list.clone(),
        replicates: args.reps,
    };
    let report = run_rate_experiment(&cfg)?;
    if let Some(out) = &args.out {
        io::write_json(out, &report)?;
    }
    let slope = match &report.fit {
        Some(fit) => fit.slope.to_string(),
        None => "degenerate".into(),
    };
    Ok(format!(
        "rate: slope={} over n={}..{} ({} checkpoints, {} replicates)",
        slope,
        report.n_list.first().expect("nonempty"),
        report.n_list.last().expect("nonempty"),
        report.n_list.len(),
        args.reps
    ))
}

fn run_tail(args: &TailArgs) -> Result<String> {
    let density = args.density.resolve()?;
    let grid = args.grid.build(density.dim())?;
    let cfg = TailConfig {
        seed: args.seed,
        plan: args.schedule.plan(grid.dim())?,
        kernel: args.schedule.kernel()?,
        density,
        grid,
        n: args.n,
        calibration_replicates: args.calib_reps,
        holdout_replicates: args.holdout_reps,
        centered: args.centered,
    };
    let report = run_tail_experiment(&cfg)?;
    if let Some(out) = &args.out {
        io::write_json(out, &report)?;
    }
    Ok(format!(
        "tail: C={}, s={}, edge={}, holdout domination {} over {} in-domain knots",
        report.model.c,
        report.model.s,
        report.model.domain_edge(),
        report.holdout_domination_fraction,
        report.holdout_in_domain
    ))
}

fn run_coverage(args: &CoverageArgs) -> Result<String> {
    let density = args.density.resolve()?;
    let grid = args.grid.build(density.dim())?;
    let cfg = CoverageConfig {
        seed: args.seed,
        plan: args.schedule.plan(grid.dim())?,
        kernel: args.schedule.kernel()?,
        density,
        grid,
        n: args.n,
        calibration_replicates: args.calib_reps,
        holdout_replicates: args.holdout_reps,
        alpha: args.alpha,
    };
    let report = run_coverage_experiment(&cfg)?;
    if let Some(out) = &args.out {
        io::write_json(out, &report)?;
    }
    Ok(format!(
        "coverage: {} at alpha={}, u_alpha={}, inflated={}",
        report.coverage, report.alpha, report.u_alpha, report.model_inflated
    ))
}

fn run_compare(args: &CompareArgs) -> Result<String> {
    let density = args.density.resolve()?;
    let grid = args.grid.build(density.dim())?;
    let cfg = ComparisonConfig {
        seed: args.seed,
        plan: args.schedule.plan(grid.dim())?,
        kernel: args.schedule.kernel()?,
        density,
        grid,
        n: args.n,
        replicates: args.reps,
    };
    let report = run_comparison_experiment(&cfg)?;
    if let Some(out) = &args.out {
        io::write_json(out, &report)?;
    }
    Ok(format!(
        "compare: median sup ratio {}, median l2 ratio {} (n={}, {} replicates)",
        report.median_sup_ratio, report.median_l2_ratio, report.n, report.replicates
    ))
}

fn dispatch(command: &Command) -> Result<String> {
    match command {
        Command::Estimate(a) => run_estimate(a),
        Command::Band(a) => run_band(a),
        Command::KernelBuild(a) => run_kernel_build(a),
        Command::Rate(a) => run_rate(a),
        Command::Tail(a) => run_tail(a),
        Command::Coverage(a) => run_coverage(a),
        Command::Compare(a) => run_compare(a),
    }
}

fn configure_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("WW_DENSITY_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(n) = n.filter(|n| *n > 0) {
        // Ignore failure: the global pool can only be set once per process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Entry point used by the `wwdensity` binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads(cli.threads);
    let start = std::time::Instant::now();
    match dispatch(&cli.command) {
        Ok(summary) => {
            println!("{summary}");
            eprintln!("done in {:.2}s", start.elapsed().as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(args).expect("arguments should parse")
    }

    #[test]
    fn estimate_arguments_parse_with_defaults() {
        let cli = parse(&["wwdensity", "estimate", "--input", "obs.csv"]);
        match cli.command {
            Command::Estimate(a) => {
                assert_eq!(a.input, PathBuf::from("obs.csv"));
                assert_eq!(a.schedule.beta, 2.0);
                assert_eq!(a.schedule.c1, 1.0);
                assert_eq!(a.grid.lo, vec![-4.0]);
                assert_eq!(a.grid.step, 0.125);
                assert!(a.out.is_none());
            }
            other => panic!("parsed {other:?}"),
        }
    }

    #[test]
    fn grid_arguments_broadcast_scalars() {
        let cli = parse(&["wwdensity", "estimate", "--input", "o.csv", "--lo", "-3", "--hi", "3"]);
        let Command::Estimate(a) = cli.command else {
            panic!()
        };
        let g = a.grid.build(2).unwrap();
        assert_eq!(g.dim(), 2);
        assert_eq!(g.axis(0)[0], -3.0);
        assert_eq!(g.axis(1)[0], -3.0);
        // Explicit per-axis corners are kept as given.
        let cli = parse(&[
            "wwdensity", "estimate", "--input", "o.csv", "--lo", "-1,-2", "--hi", "1,2",
        ]);
        let Command::Estimate(a) = cli.command else {
            panic!()
        };
        let g = a.grid.build(2).unwrap();
        assert_eq!(g.axis(1)[0], -2.0);
        assert!(a.grid.build(3).is_err(), "corner length must match dim");
    }

    #[test]
    fn band_rejects_both_sources() {
        let err = Cli::try_parse_from([
            "wwdensity",
            "band",
            "--estimate",
            "est",
            "--deviations",
            "d.csv",
            "--model",
            "m.json",
        ]);
        assert!(err.is_err(), "--deviations and --model conflict");
    }

    #[test]
    fn n_list_parses_comma_separated() {
        let cli = parse(&["wwdensity", "rate", "--n-list", "10,20,40"]);
        let Command::Rate(a) = cli.command else {
            panic!()
        };
        assert_eq!(a.n_list, vec![10, 20, 40]);
        assert_eq!(a.reps, 50);
    }

    #[test]
    fn suffix_helper_appends_extension() {
        assert_eq!(
            with_suffix(Path::new("out/run1"), ".csv"),
            PathBuf::from("out/run1.csv")
        );
    }

    #[test]
    fn schedule_builds_matched_kernel() {
        let cli = parse(&["wwdensity", "kernel-build", "--beta", "3.5"]);
        let Command::KernelBuild(a) = cli.command else {
            panic!()
        };
        let kernel = build_higher_order(&a.kernel.base_spec(), a.beta).unwrap();
        assert_eq!(kernel.order(), 4);
    }
}
