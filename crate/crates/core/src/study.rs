//! Paired reference/panel simulations producing S-parameters referenced to
//! the panel plane.
//!
//! The incident spectrum comes from a reference run of the identical mesh
//! with the panel removed, probed at the panel-side node; subtracting it
//! from the panel run isolates the reflected wave exactly (the mesh left of
//! the panel evolves bit-identically until the reflection returns). The
//! reflection probe sits on the node before the spliced link and the
//! transmission probe on the node after it, which puts both measured ratios
//! one sample away from the panel plane; those integer delays are de-embedded
//! during extraction.

use std::time::Instant;

use crate::constants::Y0;
use crate::error::{Error, Result};
use crate::material::PanelStack;
use crate::mesh::{run, Mesh1D, SourceSpec};
use crate::oracle::SParams;
use crate::panel::{build_junction, AnisotropicPanel, JunctionStats};
use crate::postproc::{
    extract_s_params, shielding_effectiveness, spectrum, Deembed, SEResult,
};
use crate::solver::SolverConfig;

/// Mesh layout of one study: the panel occupies the link between nodes
/// `panel_link` and `panel_link + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyGeometry {
    pub cell_size_m: f64,
    pub node_count: usize,
    pub panel_link: usize,
    pub steps: usize,
}

impl StudyGeometry {
    pub fn validate(&self, excitation: &SourceSpec) -> Result<()> {
        if self.panel_link + 1 >= self.node_count {
            return Err(Error::config(format!(
                "panel link {} does not fit a mesh of {} nodes",
                self.panel_link, self.node_count
            )));
        }
        if excitation.node >= self.panel_link {
            return Err(Error::config(format!(
                "source node {} must lie strictly before the panel link {}",
                excitation.node, self.panel_link
            )));
        }
        if self.steps < 2 {
            return Err(Error::config("study needs at least 2 steps"));
        }
        Ok(())
    }

    pub fn time_step_s(&self) -> f64 {
        self.cell_size_m / crate::constants::C0
    }
}

/// Everything one panel study produces.
#[derive(Debug, Clone)]
pub struct StudyResult {
    pub s_params: SParams,
    pub se: SEResult,
    /// Panel-run total voltage at the reflection-side node.
    pub reflection_series: Vec<f64>,
    /// Panel-run total voltage at the transmission-side node.
    pub transmission_series: Vec<f64>,
    /// Same probes from the reference run.
    pub reference_reflection_series: Vec<f64>,
    pub reference_transmission_series: Vec<f64>,
    pub junction_stats: JunctionStats,
    /// Wall-clock time of the panel run alone.
    pub panel_run_seconds: f64,
    pub floor_truncated_bins: usize,
}

/// Reference run (no panel): probe series at the two panel-adjacent nodes.
pub fn run_reference(geom: &StudyGeometry, excitation: &SourceSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    geom.validate(excitation)?;
    let mut mesh = Mesh1D::new(geom.cell_size_m, geom.node_count)?;
    let probes = [geom.panel_link, geom.panel_link + 1];
    let mut records = run(&mut mesh, excitation, None, &probes, geom.steps)?;
    let trans = records.pop().unwrap().samples;
    let refl = records.pop().unwrap().samples;
    Ok((refl, trans))
}

/// Run reference + panel simulations and extract S-parameters and shielding
/// effectiveness on the panel plane.
pub fn run_panel_study(
    geom: &StudyGeometry,
    excitation: &SourceSpec,
    stack: &PanelStack,
    solver: &SolverConfig,
) -> Result<StudyResult> {
    geom.validate(excitation)?;
    let (ref_refl, ref_trans) = run_reference(geom, excitation)?;

    let dt = geom.time_step_s();
    let mut junction = build_junction(stack, Y0, Y0, dt, solver.clone())?;
    let mut mesh = Mesh1D::new(geom.cell_size_m, geom.node_count)?;
    let probes = [geom.panel_link, geom.panel_link + 1];
    let started = Instant::now();
    let mut records = run(
        &mut mesh,
        excitation,
        Some((geom.panel_link, &mut junction)),
        &probes,
        geom.steps,
    )?;
    let panel_run_seconds = started.elapsed().as_secs_f64();
    let trans_series = records.pop().unwrap().samples;
    let refl_series = records.pop().unwrap().samples;

    let reflected_only: Vec<f64> = refl_series
        .iter()
        .zip(&ref_refl)
        .map(|(with, without)| with - without)
        .collect();

    let incident = spectrum(&ref_refl, dt)?;
    let reflected = spectrum(&reflected_only, dt)?;
    let transmitted = spectrum(&trans_series, dt)?;

    // Both probes sit one sample from the panel plane.
    let extraction = extract_s_params(
        &reflected,
        &transmitted,
        &incident,
        Deembed {
            reflection_delay_samples: 1,
            transmission_delay_samples: 1,
        },
    )?;
    let se = shielding_effectiveness(&incident, &transmitted)?;

    Ok(StudyResult {
        s_params: extraction.s_params,
        se,
        reflection_series: refl_series,
        transmission_series: trans_series,
        reference_reflection_series: ref_refl,
        reference_transmission_series: ref_trans,
        junction_stats: junction.stats(),
        panel_run_seconds,
        floor_truncated_bins: extraction.floor_truncated_bins,
    })
}

/// Results of the two principal-axis channels plus combined magnitudes.
/// A channel whose polarization component is exactly zero is not simulated.
#[derive(Debug, Clone)]
pub struct AnisotropicStudyResult {
    pub x: Option<StudyResult>,
    pub y: Option<StudyResult>,
    pub cos_phi: f64,
    pub sin_phi: f64,
    pub freqs: Vec<f64>,
    /// Vector-norm reflection magnitude relative to the incident field.
    pub s11_mag: Vec<f64>,
    /// Vector-norm transmission magnitude relative to the incident field.
    pub s21_mag: Vec<f64>,
    pub se_db: Vec<f64>,
}

/// Decompose the excitation onto the principal axes, run each non-degenerate
/// channel as an independent study, and combine the magnitudes.
pub fn run_anisotropic_study(
    geom: &StudyGeometry,
    excitation: &SourceSpec,
    panel: &AnisotropicPanel,
    solver: &SolverConfig,
) -> Result<AnisotropicStudyResult> {
    panel.validate()?;
    let (cos_phi, sin_phi) = panel.components();

    let channel = |component: f64, stack: &PanelStack| -> Result<Option<StudyResult>> {
        if component == 0.0 {
            return Ok(None);
        }
        let scaled = SourceSpec {
            kind: excitation.kind,
            node: excitation.node,
            amplitude: excitation.amplitude * component,
        };
        run_panel_study(geom, &scaled, stack, solver).map(Some)
    };

    let x = channel(cos_phi, &panel.stack_x)?;
    let y = channel(sin_phi, &panel.stack_y)?;

    let len = match (&x, &y) {
        (Some(a), Some(b)) => a.s_params.len().min(b.s_params.len()),
        (Some(a), None) => a.s_params.len(),
        (None, Some(b)) => b.s_params.len(),
        (None, None) => unreachable!("cos and sin cannot both vanish"),
    };
    let freqs: Vec<f64> = match (&x, &y) {
        (Some(a), _) => a.s_params.freqs[..len].to_vec(),
        (_, Some(b)) => b.s_params.freqs[..len].to_vec(),
        _ => unreachable!(),
    };

    let weight_sq = |result: &Option<StudyResult>, component: f64, i: usize, trans: bool| -> f64 {
        match result {
            Some(r) => {
                let v = if trans {
                    r.s_params.s21[i].norm()
                } else {
                    r.s_params.s11[i].norm()
                };
                component * component * v * v
            }
            None => 0.0,
        }
    };

    let mut s11_mag = Vec::with_capacity(len);
    let mut s21_mag = Vec::with_capacity(len);
    let mut se_db = Vec::with_capacity(len);
    for i in 0..len {
        let r = (weight_sq(&x, cos_phi, i, false) + weight_sq(&y, sin_phi, i, false)).sqrt();
        let t = (weight_sq(&x, cos_phi, i, true) + weight_sq(&y, sin_phi, i, true)).sqrt();
        s11_mag.push(r);
        s21_mag.push(t);
        se_db.push(if t == 0.0 {
            f64::INFINITY
        } else {
            -20.0 * t.log10()
        });
    }

    Ok(AnisotropicStudyResult {
        x,
        y,
        cos_phi,
        sin_phi,
        freqs,
        s11_mag,
        s21_mag,
        se_db,
    })
}
