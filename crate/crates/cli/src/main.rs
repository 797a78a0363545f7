//! `mshep`: multinode Shepard DEM resampling and accuracy assessment.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::warn;

use mshep::accuracy::{default_levels, horizontal_discrepancy, vertical_accuracy};
use mshep::convergence::{convergence_csv, run_convergence, TestFunction, DEFAULT_SAMPLE_DENSITY};
use mshep::raster::{
    decimate, raster_model, read_asc_file, resample_model, write_asc_file, Raster,
};
use mshep::{order_threshold, EvalMode};

/// Environment variable selecting the number of worker threads.
const THREADS_ENV: &str = "MSHEP_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "mshep",
    version,
    about = "Multinode Shepard DEM resampling and accuracy assessment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Degrees {
    /// Local polynomial degree in x.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    r: u32,
    /// Local polynomial degree in y.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    s: u32,
    /// Shepard exponent.
    #[arg(long, default_value_t = 4.0, value_parser = parse_exponent)]
    u: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Resample a raster with the multinode Shepard interpolant.
    Resample {
        input: PathBuf,
        output: PathBuf,
        /// Target cell size.
        #[arg(long, conflicts_with = "factor", required_unless_present = "factor")]
        cellsize: Option<f64>,
        /// Refinement factor: target cell size is the source cell size divided by this.
        #[arg(long)]
        factor: Option<f64>,
        #[command(flatten)]
        degrees: Degrees,
        /// Skip blocks whose weight is provably negligible.
        #[arg(long)]
        pruned: bool,
    },
    /// Keep every n-th node (upscaling by subsampling).
    Decimate {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        factor: u32,
    },
    /// Vertical accuracy of a test raster against a reference.
    Vaccuracy {
        reference: PathBuf,
        test: PathBuf,
        /// Cells with |error| above this are flagged in the mask.
        #[arg(long, default_value_t = 3.0)]
        threshold: f64,
        /// CSV report path.
        #[arg(long)]
        report: PathBuf,
        /// Exceedance mask raster path.
        #[arg(long)]
        mask: Option<PathBuf>,
    },
    /// Horizontal discrepancy of a test raster against a reference.
    Haccuracy {
        reference: PathBuf,
        test: PathBuf,
        /// Comma-separated contour levels (default: 10 equispaced levels).
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<f64>>,
        /// CSV report path.
        #[arg(long)]
        report: PathBuf,
    },
    /// Measure the approximation order on refined uniform grids.
    Convergence {
        #[arg(long, default_value = "franke")]
        function: TestFunction,
        #[command(flatten)]
        degrees: Degrees,
        /// Comma-separated grid sizes (nodes per side).
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Nodes per side of the error sample lattice.
        #[arg(long, default_value_t = DEFAULT_SAMPLE_DENSITY)]
        samples: usize,
        /// CSV table path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_exponent(s: &str) -> std::result::Result<f64, String> {
    let u: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if u > 0.0 && u.is_finite() {
        Ok(u)
    } else {
        Err(format!("exponent must be positive, got {u}"))
    }
}

fn read(path: &Path) -> Result<Raster> {
    read_asc_file(path).with_context(|| format!("reading raster {}", path.display()))
}

fn write(r: &Raster, path: &Path) -> Result<()> {
    write_asc_file(r, path).with_context(|| format!("writing raster {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .with_context(|| format!("{THREADS_ENV} must be a positive integer, got '{value}'"))?;
    if threads == 0 {
        bail!("{THREADS_ENV} must be a positive integer, got 0");
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("configuring worker threads")?;
    Ok(())
}

fn report_model_stats(r: usize, s: usize, u: f64, model: &mshep::ShepardModel) {
    let cov = model.covering();
    let threshold = order_threshold(r, s);
    println!(
        "blocks: K = {}, L = {}, t = {}",
        cov.k_blocks,
        cov.l_blocks,
        cov.t()
    );
    println!("l_max: {:.3}", model.l_max());
    println!("u = {u}, threshold (3+r+s)/t = {threshold:.3}");
    if u <= threshold {
        println!(
            "warning: u is not above (3+r+s)/t; the approximation-order estimate does not apply"
        );
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Resample {
            input,
            output,
            cellsize,
            factor,
            degrees,
            pruned,
        } => {
            let src = read(&input)?;
            let target = match (cellsize, factor) {
                (Some(c), _) => c,
                (None, Some(f)) => src.cellsize / f,
                (None, None) => unreachable!("clap requires --cellsize or --factor"),
            };
            if target <= 0.0 || !target.is_finite() {
                bail!("--cellsize/--factor must give a positive target cell size, got {target}");
            }
            let (r, s) = (degrees.r as usize, degrees.s as usize);
            let (cropped, model) = raster_model(&src, r, s, degrees.u)
                .with_context(|| format!("building model from {}", input.display()))?;
            report_model_stats(r, s, degrees.u, &model);
            let mode = if pruned {
                EvalMode::Pruned
            } else {
                EvalMode::Exact
            };
            let out = resample_model(&cropped, &model.with_mode(mode), target)?;
            println!(
                "output: {} x {} cells of {}",
                out.ncols, out.nrows, out.cellsize
            );
            write(&out, &output)
        }
        Command::Decimate {
            input,
            output,
            factor,
        } => {
            let src = read(&input)?;
            let out = decimate(&src, factor as usize)
                .with_context(|| format!("decimating {} by --factor {factor}", input.display()))?;
            println!(
                "output: {} x {} cells of {}",
                out.ncols, out.nrows, out.cellsize
            );
            write(&out, &output)
        }
        Command::Vaccuracy {
            reference,
            test,
            threshold,
            report,
            mask,
        } => {
            let a = read(&reference)?;
            let b = read(&test)?;
            let rep = vertical_accuracy(&a, &b, threshold).with_context(|| {
                format!("comparing {} with {}", reference.display(), test.display())
            })?;
            print!("{}", rep.summary());
            write_text(&report, &rep.to_csv())?;
            if let Some(mask) = mask {
                write(&rep.mask_raster(&a, &b), &mask)?;
            }
            Ok(())
        }
        Command::Haccuracy {
            reference,
            test,
            levels,
            report,
        } => {
            let a = read(&reference)?;
            let b = read(&test)?;
            let levels = levels.unwrap_or_else(|| default_levels(&a));
            let rep = horizontal_discrepancy(&a, &b, &levels).with_context(|| {
                format!("comparing {} with {}", reference.display(), test.display())
            })?;
            println!("{}", rep.summary());
            write_text(&report, &rep.to_csv())
        }
        Command::Convergence {
            function,
            degrees,
            sizes,
            samples,
            out,
        } => {
            let (r, s) = (degrees.r as usize, degrees.s as usize);
            let threshold = order_threshold(r, s);
            if degrees.u <= threshold {
                warn!("u = {} is not above (3+r+s)/t = {threshold:.3}", degrees.u);
            }
            let rows =
                run_convergence(|x, y| function.eval(x, y), r, s, degrees.u, &sizes, samples)
                    .context("--sizes")?;
            let csv = convergence_csv(&rows);
            print!("{csv}");
            write_text(&out, &csv)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
