//! The 1D background mesh: incident-voltage state, scatter/connect cycle,
//! sources, probes, and the step loop a panel junction can be spliced into.

use crate::constants::{C0, Y0};
use crate::error::{Error, Result};
use crate::panel::PanelJunction;

/// Total node voltage for equal port admittances.
#[inline]
pub fn total_voltage(vl_inc: f64, vr_inc: f64) -> f64 {
    vl_inc + vr_inc
}

/// Uniform free-space 1D mesh. Each node carries left/right incident voltages
/// and, between scatter and connect, the corresponding reflected voltages.
/// Both ends terminate into matched loads.
#[derive(Debug, Clone)]
pub struct Mesh1D {
    cell_size_m: f64,
    time_step_s: f64,
    link_admittance_s: f64,
    vl_inc: Vec<f64>,
    vr_inc: Vec<f64>,
    vl_refl: Vec<f64>,
    vr_refl: Vec<f64>,
}

impl Mesh1D {
    /// Free-space mesh with `time_step_s = cell_size_m / c0` exactly.
    pub fn new(cell_size_m: f64, node_count: usize) -> Result<Self> {
        if !(cell_size_m > 0.0) || !cell_size_m.is_finite() {
            return Err(Error::config(format!(
                "cell size must be positive, got {cell_size_m}"
            )));
        }
        if node_count < 3 {
            return Err(Error::config(format!(
                "mesh needs at least 3 nodes, got {node_count}"
            )));
        }
        Ok(Mesh1D {
            cell_size_m,
            time_step_s: cell_size_m / C0,
            link_admittance_s: Y0,
            vl_inc: vec![0.0; node_count],
            vr_inc: vec![0.0; node_count],
            vl_refl: vec![0.0; node_count],
            vr_refl: vec![0.0; node_count],
        })
    }

    pub fn node_count(&self) -> usize {
        self.vl_inc.len()
    }

    pub fn cell_size_m(&self) -> f64 {
        self.cell_size_m
    }

    pub fn time_step_s(&self) -> f64 {
        self.time_step_s
    }

    pub fn link_admittance_s(&self) -> f64 {
        self.link_admittance_s
    }

    /// Total voltage at node `n` from the current incident state.
    pub fn node_voltage(&self, n: usize) -> f64 {
        total_voltage(self.vl_inc[n], self.vr_inc[n])
    }

    /// Add `v` to both incident lines of `node` (soft source: passing waves
    /// are preserved).
    pub fn inject(&mut self, node: usize, v: f64) {
        self.vl_inc[node] += v;
        self.vr_inc[node] += v;
    }

    /// Compute reflected voltages at every node from the incident ones.
    pub fn scatter(&mut self) {
        for n in 0..self.node_count() {
            let v = total_voltage(self.vl_inc[n], self.vr_inc[n]);
            self.vl_refl[n] = v - self.vl_inc[n];
            self.vr_refl[n] = v - self.vr_inc[n];
        }
    }

    /// Exchange reflected voltages between neighbors to form the next step's
    /// incident voltages. Boundary links terminate matched (incoming incident
    /// voltage 0). The link `skip_link` (between nodes `skip_link` and
    /// `skip_link + 1`) is left untouched for a panel junction to fill in.
    pub fn connect(&mut self, skip_link: Option<usize>) {
        let n = self.node_count();
        for link in 0..n - 1 {
            if skip_link == Some(link) {
                continue;
            }
            self.vr_inc[link] = self.vl_refl[link + 1];
            self.vl_inc[link + 1] = self.vr_refl[link];
        }
        self.vl_inc[0] = 0.0;
        self.vr_inc[n - 1] = 0.0;
    }

    /// Reflected voltage leaving node `n` to the right (toward node `n + 1`).
    pub fn right_reflected(&self, n: usize) -> f64 {
        self.vr_refl[n]
    }

    /// Reflected voltage leaving node `n` to the left.
    pub fn left_reflected(&self, n: usize) -> f64 {
        self.vl_refl[n]
    }

    /// Install a junction's reflected voltages on the spliced link.
    fn apply_junction(&mut self, link: usize, toward_left: f64, toward_right: f64) {
        self.vr_inc[link] = toward_left;
        self.vl_inc[link + 1] = toward_right;
    }

    /// Sum of squared incident voltages; proportional to the pulse energy
    /// stored in the mesh.
    pub fn incident_energy(&self) -> f64 {
        self.vl_inc
            .iter()
            .zip(&self.vr_inc)
            .map(|(l, r)| l * l + r * r)
            .sum()
    }
}

/// Source waveform shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceKind {
    /// Single-sample impulse at step 0.
    Delta,
    /// Gaussian envelope in time.
    Gaussian { sigma_s: f64, delay_s: f64 },
}

/// Excitation applied additively to both incident lines of one node at every
/// step.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceSpec {
    pub kind: SourceKind,
    pub node: usize,
    pub amplitude: f64,
}

impl SourceSpec {
    pub fn delta(node: usize, amplitude: f64) -> Self {
        SourceSpec {
            kind: SourceKind::Delta,
            node,
            amplitude,
        }
    }

    pub fn gaussian(node: usize, amplitude: f64, sigma_s: f64, delay_s: f64) -> Self {
        SourceSpec {
            kind: SourceKind::Gaussian { sigma_s, delay_s },
            node,
            amplitude,
        }
    }

    pub fn validate(&self, node_count: usize) -> Result<()> {
        if self.node >= node_count {
            return Err(Error::config(format!(
                "source node {} outside mesh of {} nodes",
                self.node, node_count
            )));
        }
        if self.amplitude == 0.0 || !self.amplitude.is_finite() {
            return Err(Error::config(format!(
                "source amplitude must be nonzero, got {}",
                self.amplitude
            )));
        }
        if let SourceKind::Gaussian { sigma_s, .. } = self.kind {
            if !(sigma_s > 0.0) {
                return Err(Error::config(format!(
                    "gaussian sigma must be positive, got {sigma_s}"
                )));
            }
        }
        Ok(())
    }

    /// Waveform value added at time step `step`.
    pub fn value_at(&self, step: usize, dt_s: f64) -> f64 {
        match self.kind {
            SourceKind::Delta => {
                if step == 0 {
                    self.amplitude
                } else {
                    0.0
                }
            }
            SourceKind::Gaussian { sigma_s, delay_s } => {
                let t = step as f64 * dt_s - delay_s;
                self.amplitude * (-t * t / (2.0 * sigma_s * sigma_s)).exp()
            }
        }
    }
}

/// Time series of total voltage recorded at one node.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRecord {
    pub node: usize,
    pub samples: Vec<f64>,
}

/// Execute `steps` scatter/connect cycles, optionally with a panel junction
/// spliced into `link` (the connection between nodes `link` and `link + 1`).
/// Probes record the total node voltage at the start of each step, after the
/// source contribution.
pub fn run(
    mesh: &mut Mesh1D,
    source: &SourceSpec,
    junction: Option<(usize, &mut PanelJunction)>,
    probes: &[usize],
    steps: usize,
) -> Result<Vec<ProbeRecord>> {
    if steps == 0 {
        return Err(Error::config("step count must be >= 1"));
    }
    source.validate(mesh.node_count())?;
    for &p in probes {
        if p >= mesh.node_count() {
            return Err(Error::config(format!(
                "probe node {p} outside mesh of {} nodes",
                mesh.node_count()
            )));
        }
    }
    let mut junction = junction;
    if let Some((link, _)) = junction {
        if link + 1 >= mesh.node_count() {
            return Err(Error::config(format!(
                "junction link {link} outside mesh of {} nodes",
                mesh.node_count()
            )));
        }
    }

    let dt = mesh.time_step_s();
    let mut records: Vec<ProbeRecord> = probes
        .iter()
        .map(|&node| ProbeRecord {
            node,
            samples: Vec::with_capacity(steps),
        })
        .collect();

    for step in 0..steps {
        let v = source.value_at(step, dt);
        if v != 0.0 {
            mesh.inject(source.node, v);
        }
        for rec in &mut records {
            rec.samples.push(mesh.node_voltage(rec.node));
        }
        mesh.scatter();
        let spliced = match junction.as_mut() {
            Some((link, j)) => {
                let link = *link;
                let (r1, r2) =
                    j.junction_step(mesh.right_reflected(link), mesh.left_reflected(link + 1))?;
                Some((link, r1, r2))
            }
            None => None,
        };
        mesh.connect(spliced.map(|(link, _, _)| link));
        if let Some((link, r1, r2)) = spliced {
            mesh.apply_junction(link, r1, r2);
        }
    }
    Ok(records)
}
