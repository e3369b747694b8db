//! Command-line entry point.
//!
//! ```text
//! idnls-lab --config lab.toml [--out DIR] <simulate|scatter|predict|compare-b|calibrate|region-scan|signmap>
//! ```
//!
//! Exit codes: 0 on pass, 2 when a configured tolerance check fails, 1 on
//! any other error (bad config, missing calibration, integration failure).

use clap::{Parser, Subcommand};
use idnls_lab::config::{CalibrationState, ExperimentConfig};
use idnls_lab::{experiments, report, LabError};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "idnls-lab", version, about = "Ablowitz-Ladik lattice asymptotics laboratory")]
struct Cli {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides the config's `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the configured initial data and write snapshot CSVs.
    Simulate,
    /// Direct scattering of the initial data: r(z) on the angle grid.
    Scatter,
    /// Painlevé front predictions along n = round(2t).
    Predict,
    /// Compare simulation against the front prediction (needs calibration).
    CompareB,
    /// Decide the Airy matching sign against direct simulation and persist it.
    Calibrate,
    /// Fit decay exponents along the rays n = t, round(2t), 3t.
    RegionScan,
    /// Export the sign map of Re phi on a grid around the unit circle.
    Signmap,
}

fn load_sigma(config_path: &Path) -> Result<CalibrationState, LabError> {
    let path = CalibrationState::path_beside(config_path);
    if !path.exists() {
        return Err(LabError::CalibrationRequired);
    }
    CalibrationState::load(&path)
}

/// Ok(true) = pass, Ok(false) = tolerance failure.
fn run(cli: &Cli) -> Result<bool, LabError> {
    let mut config = ExperimentConfig::load(&cli.config)?;
    if let Some(out) = &cli.out {
        config.output.dir = out.clone();
    }
    let hash = config.hash();
    let out_dir = config.output.dir.clone();
    std::fs::create_dir_all(&out_dir)?;
    let sigma_on_disk = |p: &Path| {
        CalibrationState::path_beside(p)
            .exists()
            .then(|| CalibrationState::load(&CalibrationState::path_beside(p)).map(|s| s.sigma))
            .transpose()
    };

    match cli.command {
        Command::Simulate => {
            let run = experiments::simulate(&config)?;
            let sigma = sigma_on_disk(&cli.config)?;
            let paths = report::write_snapshots(&run, &out_dir, &hash, sigma)?;
            for (path, rep) in paths.iter().zip(&run.reports) {
                println!(
                    "wrote {} (drift {:.3e}, {} steps)",
                    path.display(),
                    rep.drift,
                    rep.steps
                );
            }
            Ok(true)
        }
        Command::Scatter => {
            let initial = config.initial.build()?;
            let thetas = idnls_core::scattering::uniform_thetas(config.scattering.angle_grid);
            let samples = idnls_core::scattering::scatter(&initial, &thetas)?;
            let path = out_dir.join("reflection.csv");
            let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            report::comment_header(&mut file, &hash, sigma_on_disk(&cli.config)?)?;
            samples.write_csv(&mut file)?;
            println!(
                "wrote {} ({} angles, sup |r| = {:.6})",
                path.display(),
                samples.len(),
                samples.sup_abs()
            );
            Ok(true)
        }
        Command::Predict => {
            let state = load_sigma(&cli.config)?;
            let rows = experiments::predict_front(&config, state.sign()?)?;
            let path = out_dir.join("predictions.csv");
            let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            report::write_predictions(&rows, &hash, Some(state.sigma), file)?;
            println!("wrote {} ({} rows)", path.display(), rows.len());
            Ok(true)
        }
        Command::CompareB => {
            let state = load_sigma(&cli.config)?;
            let run = experiments::simulate(&config)?;
            let cmp = experiments::compare_region_b(&config, &run, state.sign()?)?;
            let path = out_dir.join("compare_b.csv");
            let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            report::write_comparison(&cmp, &hash, file)?;
            for check in &cmp.checks {
                println!(
                    "{}: {} = {:.6} ({})",
                    if check.passed { "pass" } else { "FAIL" },
                    check.name,
                    check.value,
                    check.target
                );
            }
            println!("wrote {}", path.display());
            Ok(cmp.passed)
        }
        Command::Calibrate => {
            let run = experiments::simulate(&config)?;
            let outcome = experiments::calibrate(&config, &run)?;
            let state = CalibrationState {
                sigma: outcome.sigma,
                kappa: outcome.kappa,
                residual_plus: outcome.residual_plus,
                residual_minus: outcome.residual_minus,
                config_hash: hash,
            };
            let path = CalibrationState::path_beside(&cli.config);
            state.save(&path)?;
            println!(
                "sigma = {:+} (residuals: +{:.3e} / -{:.3e}, separation {:.1}x); persisted to {}",
                outcome.sigma,
                outcome.residual_plus,
                outcome.residual_minus,
                outcome.ratio,
                path.display()
            );
            Ok(true)
        }
        Command::RegionScan => {
            let run = experiments::simulate(&config)?;
            let scan = experiments::region_scan(&config, &run)?;
            let path = out_dir.join("region_scan.csv");
            let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            report::write_scan(&scan, &hash, sigma_on_disk(&cli.config)?, file)?;
            for check in &scan.checks {
                println!(
                    "{}: {} = {:.6} ({})",
                    if check.passed { "pass" } else { "FAIL" },
                    check.name,
                    check.value,
                    check.target
                );
            }
            println!("wrote {}", path.display());
            Ok(scan.passed)
        }
        Command::Signmap => {
            let spec = &config.signmap;
            let grid = idnls_core::phase::GridSpec::centered(spec.half_width, spec.resolution);
            let map = idnls_core::phase::sign_map(spec.n, spec.t, &grid)?;
            let path = out_dir.join("signmap.csv");
            use std::io::Write as _;
            let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
            report::comment_header(&mut file, &hash, sigma_on_disk(&cli.config)?)?;
            writeln!(file, "# n={} t={}", spec.n, spec.t)?;
            map.write_csv(&mut file)?;
            println!("wrote {}", path.display());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("tolerance check failed");
            ExitCode::from(2)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}
