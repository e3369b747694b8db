//! CSV emission for experiment outputs. Every file opens with comment rows
//! recording the config hash and the calibration sign in effect.

use crate::experiments::{ComparisonReport, PredictionRow, ScanReport, SimulationRun};
use crate::LabError;
use std::io::Write;
use std::path::Path;

pub fn comment_header<W: Write>(
    mut w: W,
    config_hash: &str,
    sigma: Option<i8>,
) -> std::io::Result<()> {
    writeln!(w, "# config_hash={config_hash}")?;
    match sigma {
        Some(s) => writeln!(w, "# sigma={s:+}")?,
        None => writeln!(w, "# sigma=uncalibrated")?,
    }
    Ok(())
}

pub fn write_snapshots(
    run: &SimulationRun,
    dir: &Path,
    config_hash: &str,
    sigma: Option<i8>,
) -> Result<Vec<std::path::PathBuf>, LabError> {
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (k, snapshot) in run.snapshots.iter().enumerate() {
        let path = dir.join(format!("snapshot_{k:03}.csv"));
        let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        comment_header(&mut file, config_hash, sigma)?;
        snapshot.write_csv(&mut file)?;
        paths.push(path);
    }
    Ok(paths)
}

pub fn write_comparison<W: Write>(
    report: &ComparisonReport,
    config_hash: &str,
    mut w: W,
) -> std::io::Result<()> {
    comment_header(&mut w, config_hash, Some(report.sigma))?;
    writeln!(w, "# kappa={:.17e}", report.kappa)?;
    for check in &report.checks {
        writeln!(
            w,
            "# check: {} = {:.6} ({}) -> {}",
            check.name,
            check.value,
            check.target,
            if check.passed { "pass" } else { "FAIL" }
        )?;
    }
    writeln!(w, "n,t,region,re_sim,im_sim,re_pred,im_pred,abs_err,rel_err")?;
    for r in &report.rows {
        writeln!(
            w,
            "{},{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}",
            r.n, r.t, r.region, r.sim.re, r.sim.im, r.pred.re, r.pred.im, r.abs_err, r.rel_err
        )?;
    }
    Ok(())
}

pub fn write_scan<W: Write>(
    report: &ScanReport,
    config_hash: &str,
    sigma: Option<i8>,
    mut w: W,
) -> std::io::Result<()> {
    comment_header(&mut w, config_hash, sigma)?;
    for check in &report.checks {
        writeln!(
            w,
            "# check: {} = {:.6} ({}) -> {}",
            check.name,
            check.value,
            check.target,
            if check.passed { "pass" } else { "FAIL" }
        )?;
    }
    writeln!(w, "ray,t,n,region,abs_value")?;
    for (ray, rows) in [
        ("A", &report.a_rows),
        ("B", &report.b_rows),
        ("C", &report.c_rows),
    ] {
        for r in rows {
            writeln!(
                w,
                "{},{},{},{},{:.17e}",
                ray, r.t, r.n, r.region, r.value
            )?;
        }
    }
    Ok(())
}

pub fn write_predictions<W: Write>(
    rows: &[PredictionRow],
    config_hash: &str,
    sigma: Option<i8>,
    mut w: W,
) -> std::io::Result<()> {
    comment_header(&mut w, config_hash, sigma)?;
    writeln!(w, "n,t,region,re_pred,im_pred,abs_pred")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{:.17e},{:.17e},{:.17e}",
            r.n,
            r.t,
            r.region,
            r.value.re,
            r.value.im,
            r.value.norm()
        )?;
    }
    Ok(())
}
