//! The (n+1)-port embedded panel junction solved as a tridiagonal system.

use crate::error::{Error, Result};
use crate::filter::{synthesize_bank, AdmittanceFilterBank, BankKind};
use crate::material::PanelStack;
use crate::solver::{solve_instantaneous, SolverConfig, Tridiagonal};

/// Accumulated per-run solver statistics.
#[derive(Debug, Clone, Copy, Default)]
pub struct JunctionStats {
    pub steps: u64,
    pub solver_iterations: u64,
    pub max_residual: f64,
}

impl JunctionStats {
    pub fn mean_iterations(&self) -> f64 {
        if self.steps == 0 {
            0.0
        } else {
            self.solver_iterations as f64 / self.steps as f64
        }
    }
}

/// An n-layer panel embedded between two mesh nodes.
///
/// The n+1 unknowns are the total voltages at the layer interfaces. Row i
/// couples interface i to its neighbors: the diagonal carries the negated
/// cot banks of the adjacent layers (plus the port admittance on the end
/// rows), the off-diagonals carry the csc bank of the shared layer. Each
/// nonzero entry owns its own bank instance because each is driven by a
/// different interface voltage.
#[derive(Debug, Clone)]
pub struct PanelJunction {
    y1: f64,
    y2: f64,
    dt_s: f64,
    inst: Tridiagonal,
    diag_banks: Vec<Vec<AdmittanceFilterBank>>,
    upper_banks: Vec<AdmittanceFilterBank>,
    lower_banks: Vec<AdmittanceFilterBank>,
    node_voltages: Vec<f64>,
    rhs: Vec<f64>,
    cfg: SolverConfig,
    stats: JunctionStats,
}

/// Assemble the junction for `stack` between ports of admittance `y1`, `y2`
/// at sampling step `dt_s`.
pub fn build_junction(
    stack: &PanelStack,
    y1: f64,
    y2: f64,
    dt_s: f64,
    cfg: SolverConfig,
) -> Result<PanelJunction> {
    stack.validate()?;
    cfg.validate()?;
    if !(y1 > 0.0) || !(y2 > 0.0) {
        return Err(Error::config(format!(
            "port admittances must be positive, got {y1}, {y2}"
        )));
    }
    let n = stack.layer_count();
    let order = n + 1;

    let make = |i: usize, kind: BankKind| -> Result<AdmittanceFilterBank> {
        let layer = &stack.layers[i];
        synthesize_bank(
            &layer.line_params(),
            layer.thickness_m,
            stack.n_terms,
            dt_s,
            kind,
        )
    };

    let mut diag_banks: Vec<Vec<AdmittanceFilterBank>> = Vec::with_capacity(order);
    for row in 0..order {
        let mut banks = Vec::with_capacity(2);
        if row > 0 {
            banks.push(make(row - 1, BankKind::Cot)?);
        }
        if row < n {
            banks.push(make(row, BankKind::Cot)?);
        }
        diag_banks.push(banks);
    }
    let upper_banks: Vec<AdmittanceFilterBank> = (0..n)
        .map(|i| make(i, BankKind::Csc))
        .collect::<Result<_>>()?;
    let lower_banks: Vec<AdmittanceFilterBank> = (0..n)
        .map(|i| make(i, BankKind::Csc))
        .collect::<Result<_>>()?;

    let mut diag = vec![0.0; order];
    for (row, banks) in diag_banks.iter().enumerate() {
        let mut v = 0.0;
        if row == 0 {
            v += y1;
        }
        if row == order - 1 {
            v += y2;
        }
        // diagonal entries carry -cot banks
        v -= banks.iter().map(|b| b.inst_coeff()).sum::<f64>();
        diag[row] = v;
    }
    let off: Vec<f64> = upper_banks.iter().map(|b| b.inst_coeff()).collect();
    let inst = Tridiagonal::new(diag, off)?;

    let margin = inst.dominance_margin();
    if margin <= 0.0 {
        return Err(Error::config(format!(
            "instantaneous matrix not diagonally dominant (margin {margin:.3e}); \
             diag {:?}, off {:?}",
            inst.diag, inst.off
        )));
    }

    Ok(PanelJunction {
        y1,
        y2,
        dt_s,
        inst,
        diag_banks,
        upper_banks,
        lower_banks,
        node_voltages: vec![0.0; order],
        rhs: vec![0.0; order],
        cfg,
        stats: JunctionStats::default(),
    })
}

impl PanelJunction {
    /// Number of unknown interface voltages (layer count + 1).
    pub fn order(&self) -> usize {
        self.inst.order()
    }

    pub fn dt_s(&self) -> f64 {
        self.dt_s
    }

    pub fn port_admittances(&self) -> (f64, f64) {
        (self.y1, self.y2)
    }

    pub fn inst_matrix(&self) -> &Tridiagonal {
        &self.inst
    }

    /// Interface voltages from the most recent solve.
    pub fn node_voltages(&self) -> &[f64] {
        &self.node_voltages
    }

    pub fn stats(&self) -> JunctionStats {
        self.stats
    }

    pub fn solver_config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Clear all filter state and the warm-start vector.
    pub fn reset(&mut self) {
        for banks in &mut self.diag_banks {
            for b in banks {
                b.reset();
            }
        }
        for b in &mut self.upper_banks {
            b.reset();
        }
        for b in &mut self.lower_banks {
            b.reset();
        }
        self.node_voltages.fill(0.0);
        self.stats = JunctionStats::default();
    }

    /// Advance the junction one time step given the incident voltages on the
    /// two ports; returns the reflected voltages.
    pub fn junction_step(&mut self, v1_inc: f64, v2_inc: f64) -> Result<(f64, f64)> {
        if !v1_inc.is_finite() || !v2_inc.is_finite() {
            return Err(Error::non_finite(format!(
                "junction incident voltages ({v1_inc}, {v2_inc})"
            )));
        }
        let order = self.order();
        let last = order - 1;

        // rhs: Thevenin drive minus each row's accumulated history.
        // Diagonal banks enter with sign -1, so their history adds.
        for row in 0..order {
            let mut v = 0.0;
            if row == 0 {
                v += 2.0 * self.y1 * v1_inc;
            }
            if row == last {
                v += 2.0 * self.y2 * v2_inc;
            }
            v += self.diag_banks[row]
                .iter()
                .map(|b| b.history_output())
                .sum::<f64>();
            if row < last {
                v -= self.upper_banks[row].history_output();
            }
            if row > 0 {
                v -= self.lower_banks[row - 1].history_output();
            }
            self.rhs[row] = v;
        }

        let stats =
            solve_instantaneous(&self.inst, &self.rhs, &self.cfg, &mut self.node_voltages)?;
        if self.node_voltages.iter().any(|v| !v.is_finite()) {
            return Err(Error::non_finite("junction solve produced non-finite voltages"));
        }
        self.stats.steps += 1;
        self.stats.solver_iterations += stats.iterations as u64;
        self.stats.max_residual = self.stats.max_residual.max(stats.residual);

        // Commit the solved voltages as this sample's filter inputs.
        for (row, banks) in self.diag_banks.iter_mut().enumerate() {
            let v = self.node_voltages[row];
            for b in banks {
                b.filter_step(v)?;
            }
        }
        for (i, b) in self.upper_banks.iter_mut().enumerate() {
            b.filter_step(self.node_voltages[i + 1])?;
        }
        for (i, b) in self.lower_banks.iter_mut().enumerate() {
            b.filter_step(self.node_voltages[i])?;
        }

        Ok((
            self.node_voltages[0] - v1_inc,
            self.node_voltages[last] - v2_inc,
        ))
    }
}
