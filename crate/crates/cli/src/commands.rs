//! Implementations of the CLI subcommands.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use cfc_tlm_core::study::{run_anisotropic_study, run_panel_study, StudyResult};
use cfc_tlm_core::{stack_s_params, SParams, SolveMethod};

use crate::report::{
    read_sparams_csv, write_angle_csv, write_combined_csv, write_sparams_csv, SE_CAP_DB,
};
use crate::scenario::{parse_scenario, Scenario};
use crate::validation;
use crate::{CliError, CliResult};

/// Shared overrides accepted by the run-style subcommands.
#[derive(Debug, Clone, Default)]
pub struct RunOverrides {
    pub out: Option<PathBuf>,
    pub n_terms: Option<usize>,
    pub band: Option<(f64, f64)>,
    pub solver: Option<SolveMethod>,
}

fn out_dir(scenario: &Scenario, overrides: &RunOverrides) -> PathBuf {
    overrides
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(&scenario.outputs.directory))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into())
}

fn report_run(label: &str, result: &StudyResult, steps: usize) {
    let stats = result.junction_stats;
    println!(
        "{label}: panel run {:.3} s over {steps} steps; solver iterations {} total \
         ({:.2}/step), max residual {:.3e}",
        result.panel_run_seconds,
        stats.solver_iterations,
        stats.mean_iterations(),
        stats.max_residual
    );
    if result.floor_truncated_bins > 0 {
        eprintln!(
            "warning: incident spectrum fell below the floor; truncated {} trailing bins",
            result.floor_truncated_bins
        );
    }
}

/// `simulate`: reference + panel runs, S-parameters and SE to CSV.
pub fn simulate(scenario_path: &Path, overrides: &RunOverrides) -> CliResult<Vec<PathBuf>> {
    let scenario = parse_scenario(scenario_path)?;
    let dir = out_dir(&scenario, &overrides);
    let band = overrides.band.unwrap_or_else(|| scenario.band());
    let geom = scenario.geometry();
    let source = scenario.source();
    let solver = scenario.solver_config(overrides.solver);
    let stem = stem(scenario_path);
    let mut written = Vec::new();

    if scenario.is_anisotropic() {
        let panel = scenario.anisotropic_panel(None, overrides.n_terms)?;
        let result = run_anisotropic_study(&geom, &source, &panel, &solver)?;
        for (tag, channel) in [("x", &result.x), ("y", &result.y)] {
            if let Some(study) = channel {
                let path = dir.join(format!("{stem}_{tag}_sim.csv"));
                write_sparams_csv(&path, &study.s_params, band)?;
                report_run(&format!("{stem} ({tag} channel)"), study, geom.steps);
                written.push(path);
            }
        }
        let path = dir.join(format!("{stem}_combined_sim.csv"));
        write_combined_csv(&path, &result.freqs, &result.s11_mag, &result.s21_mag, band)?;
        written.push(path);
    } else {
        let stack = scenario.stack(overrides.n_terms)?;
        let result = run_panel_study(&geom, &source, &stack, &solver)?;
        let path = dir.join(format!("{stem}_sim.csv"));
        write_sparams_csv(&path, &result.s_params, band)?;
        report_run(&stem, &result, geom.steps);
        written.push(path);
    }
    for p in &written {
        println!("wrote {}", p.display());
    }
    Ok(written)
}

/// Frequency grid of the scenario's discrete runs, restricted to the band.
fn simulation_grid(scenario: &Scenario, band: (f64, f64)) -> Vec<f64> {
    let dt = scenario.geometry().time_step_s();
    let steps = scenario.mesh.steps;
    let df = 1.0 / (steps as f64 * dt);
    (1..=steps / 2)
        .map(|k| k as f64 * df)
        .filter(|&f| f >= band.0 && f <= band.1)
        .collect()
}

/// `oracle`: analytic sweep on the scenario's simulation grid.
pub fn oracle(scenario_path: &Path, overrides: &RunOverrides) -> CliResult<Vec<PathBuf>> {
    let scenario = parse_scenario(scenario_path)?;
    let dir = out_dir(&scenario, overrides);
    let band = overrides.band.unwrap_or_else(|| scenario.band());
    let freqs = simulation_grid(&scenario, band);
    if freqs.is_empty() {
        return Err(CliError::Usage(format!(
            "no grid points inside the band {:.3e}..{:.3e} Hz",
            band.0, band.1
        )));
    }
    let stem = stem(scenario_path);
    let mut written = Vec::new();
    if scenario.is_anisotropic() {
        let panel = scenario.anisotropic_panel(None, overrides.n_terms)?;
        for (tag, stack) in [("x", &panel.stack_x), ("y", &panel.stack_y)] {
            let s = stack_s_params(stack, &freqs)?;
            let path = dir.join(format!("{stem}_{tag}_oracle.csv"));
            write_sparams_csv(&path, &s, band)?;
            written.push(path);
        }
    } else {
        let stack = scenario.stack(overrides.n_terms)?;
        let s = stack_s_params(&stack, &freqs)?;
        let path = dir.join(format!("{stem}_oracle.csv"));
        write_sparams_csv(&path, &s, band)?;
        written.push(path);
    }
    for p in &written {
        println!("wrote {}", p.display());
    }
    Ok(written)
}

fn max_band_deviation(sim: &SParams, oracle: &SParams, band: (f64, f64)) -> (f64, f64) {
    let mut dev11: f64 = 0.0;
    let mut dev21: f64 = 0.0;
    let mut oi = 0usize;
    for (i, &f) in sim.freqs.iter().enumerate() {
        if f < band.0 || f > band.1 {
            continue;
        }
        if oi >= oracle.len() {
            break;
        }
        dev11 = dev11.max((sim.s11[i] - oracle.s11[oi]).norm());
        dev21 = dev21.max((sim.s21[i] - oracle.s21[oi]).norm());
        oi += 1;
    }
    (dev11, dev21)
}

/// `sweep-n`: run the scenario at several truncation orders and report the
/// worst oracle deviation per order.
pub fn sweep_n(
    scenario_path: &Path,
    n_list: &[usize],
    overrides: &RunOverrides,
) -> CliResult<Vec<PathBuf>> {
    let scenario = parse_scenario(scenario_path)?;
    if scenario.is_anisotropic() {
        return Err(CliError::Usage(
            "sweep-n expects an isotropic scenario".into(),
        ));
    }
    if n_list.is_empty() {
        return Err(CliError::Usage("empty truncation list".into()));
    }
    let dir = out_dir(&scenario, overrides);
    let band = overrides.band.unwrap_or_else(|| scenario.band());
    let geom = scenario.geometry();
    let source = scenario.source();
    let solver = scenario.solver_config(overrides.solver);
    let stem = stem(scenario_path);

    let freqs = simulation_grid(&scenario, band);
    let oracle_s = stack_s_params(&scenario.stack(None)?, &freqs)?;
    let oracle_path = dir.join(format!("{stem}_oracle.csv"));
    write_sparams_csv(&oracle_path, &oracle_s, band)?;

    let runs: Vec<CliResult<(usize, StudyResult)>> = n_list
        .par_iter()
        .map(|&n| {
            let stack = scenario.stack(Some(n))?;
            let result = run_panel_study(&geom, &source, &stack, &solver)?;
            Ok((n, result))
        })
        .collect();

    let mut written = vec![oracle_path];
    println!("truncation sweep over the band {:.3e}..{:.3e} Hz:", band.0, band.1);
    for run in runs {
        let (n, result) = run?;
        let path = dir.join(format!("{stem}_n{n}_sim.csv"));
        write_sparams_csv(&path, &result.s_params, band)?;
        let (dev11, dev21) = max_band_deviation(&result.s_params, &oracle_s, band);
        println!(
            "  N = {n:>4}: max |dS11| = {dev11:.5}, max |dS21| = {dev21:.5}, \
             panel run {:.3} s",
            result.panel_run_seconds
        );
        written.push(path);
    }
    for p in &written {
        println!("wrote {}", p.display());
    }
    Ok(written)
}

/// `sweep-angle`: polarization sweep of an anisotropic scenario with a fixed
/// readout frequency.
pub fn sweep_angle(
    scenario_path: &Path,
    angles_deg: &[f64],
    readout_hz: f64,
    overrides: &RunOverrides,
) -> CliResult<Vec<PathBuf>> {
    let scenario = parse_scenario(scenario_path)?;
    if !scenario.is_anisotropic() {
        return Err(CliError::Usage(
            "sweep-angle expects an anisotropic scenario".into(),
        ));
    }
    if angles_deg.is_empty() {
        return Err(CliError::Usage("empty angle list".into()));
    }
    let dir = out_dir(&scenario, overrides);
    let geom = scenario.geometry();
    let source = scenario.source();
    let solver = scenario.solver_config(overrides.solver);
    let stem = stem(scenario_path);

    let rows: Vec<CliResult<(f64, f64, f64)>> = angles_deg
        .par_iter()
        .map(|&phi| {
            let panel = scenario.anisotropic_panel(Some(phi), overrides.n_terms)?;
            let result = run_anisotropic_study(&geom, &source, &panel, &solver)?;
            let bin = result
                .freqs
                .iter()
                .enumerate()
                .min_by(|a, b| {
                    (a.1 - readout_hz)
                        .abs()
                        .total_cmp(&(b.1 - readout_hz).abs())
                })
                .map(|(i, _)| i)
                .ok_or_else(|| CliError::Usage("empty spectrum".into()))?;
            Ok((phi, result.s11_mag[bin], result.s21_mag[bin]))
        })
        .collect();

    let mut table = Vec::with_capacity(rows.len());
    println!("polarization sweep, readout {readout_hz:.3e} Hz:");
    for row in rows {
        let (phi, s11, s21) = row?;
        println!("  phi = {phi:>5.1} deg: |refl| = {s11:.5}, |trans| = {s21:.5e}");
        table.push((phi, s11, s21));
    }
    let path = dir.join(format!("{stem}_angle_sweep.csv"));
    write_angle_csv(&path, &table)?;
    println!("wrote {}", path.display());
    Ok(vec![path])
}

/// Deviation summary produced by `compare`.
#[derive(Debug, Clone, Copy)]
pub struct Comparison {
    pub rows: usize,
    pub max_ds11: f64,
    pub mean_ds11: f64,
    pub max_ds21: f64,
    pub mean_ds21: f64,
    pub max_dse_db: f64,
}

/// `compare`: match two CSVs bin by bin over the band and check thresholds.
pub fn compare(
    sim_path: &Path,
    oracle_path: &Path,
    band: Option<(f64, f64)>,
    s_tol: f64,
    se_tol_db: f64,
) -> CliResult<Comparison> {
    let sim = read_sparams_csv(sim_path)?;
    let oracle = read_sparams_csv(oracle_path)?;
    if sim.is_empty() || oracle.is_empty() {
        return Err(CliError::Usage("empty comparison input".into()));
    }
    let band = band.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
    // bins match when within half the finer grid spacing
    let spacing = |f: &[f64]| {
        f.windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    };
    let gap = 0.5 * spacing(&sim.freqs).min(spacing(&oracle.freqs)).max(0.0);

    let mut oi = 0usize;
    let mut rows = 0usize;
    let (mut max11, mut sum11, mut max21, mut sum21, mut max_se) = (0.0f64, 0.0, 0.0f64, 0.0, 0.0f64);
    for i in 0..sim.len() {
        let f = sim.freqs[i];
        if f < band.0 || f > band.1 {
            continue;
        }
        while oi < oracle.len() && oracle.freqs[oi] < f - gap {
            oi += 1;
        }
        if oi >= oracle.len() {
            break;
        }
        if (oracle.freqs[oi] - f).abs() > gap {
            continue;
        }
        let d11 = (sim.s11[i] - oracle.s11[oi]).norm();
        let d21 = (sim.s21[i] - oracle.s21[oi]).norm();
        max11 = max11.max(d11);
        max21 = max21.max(d21);
        sum11 += d11;
        sum21 += d21;
        if sim.se_db[i] < SE_CAP_DB && oracle.se_db[oi] < SE_CAP_DB {
            max_se = max_se.max((sim.se_db[i] - oracle.se_db[oi]).abs());
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(CliError::Usage(
            "comparison grids do not overlap on the requested band".into(),
        ));
    }
    let report = Comparison {
        rows,
        max_ds11: max11,
        mean_ds11: sum11 / rows as f64,
        max_ds21: max21,
        mean_ds21: sum21 / rows as f64,
        max_dse_db: max_se,
    };
    println!(
        "compared {} bins: max|dS11| = {:.6}, mean|dS11| = {:.6}, max|dS21| = {:.6}, \
         mean|dS21| = {:.6}, max|dSE| = {:.4} dB",
        report.rows, report.max_ds11, report.mean_ds11, report.max_ds21, report.mean_ds21,
        report.max_dse_db
    );
    if report.max_ds11 > s_tol || report.max_ds21 > s_tol || report.max_dse_db > se_tol_db {
        return Err(CliError::Comparison(format!(
            "deviations exceed thresholds (s_tol {s_tol}, se_tol {se_tol_db} dB)"
        )));
    }
    Ok(report)
}

/// `validate`: run the acceptance criteria and print one line per criterion.
pub fn validate() -> CliResult<()> {
    let reports = validation::run_all();
    let mut failed = Vec::new();
    for r in &reports {
        println!("{r}");
        if !r.passed {
            failed.push(r.id);
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", reports.len());
        Ok(())
    } else {
        Err(CliError::Comparison(format!(
            "criteria failed: {failed:?}"
        )))
    }
}
