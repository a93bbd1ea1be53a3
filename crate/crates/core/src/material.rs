//! Panel materials and their transmission-line analogs.

use crate::constants::{EPS0, MU0};
use crate::error::{Error, Result};

/// One homogeneous layer of a panel: thickness plus bulk electrical
/// properties.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialLayer {
    /// Layer thickness (m).
    pub thickness_m: f64,
    /// Relative permittivity.
    pub eps_r: f64,
    /// Bulk conductivity (S/m).
    pub sigma_s_per_m: f64,
    /// Relative permeability.
    pub mu_r: f64,
}

impl MaterialLayer {
    /// Non-magnetic layer (`mu_r` = 1).
    pub fn new(thickness_m: f64, eps_r: f64, sigma_s_per_m: f64) -> Result<Self> {
        Self::with_mu_r(thickness_m, eps_r, sigma_s_per_m, 1.0)
    }

    pub fn with_mu_r(thickness_m: f64, eps_r: f64, sigma_s_per_m: f64, mu_r: f64) -> Result<Self> {
        let layer = MaterialLayer {
            thickness_m,
            eps_r,
            sigma_s_per_m,
            mu_r,
        };
        layer.validate()?;
        Ok(layer)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.thickness_m > 0.0) || !self.thickness_m.is_finite() {
            return Err(Error::config(format!(
                "layer thickness must be positive, got {}",
                self.thickness_m
            )));
        }
        if !(self.eps_r >= 1.0) || !self.eps_r.is_finite() {
            return Err(Error::config(format!(
                "relative permittivity must be >= 1, got {}",
                self.eps_r
            )));
        }
        if !(self.sigma_s_per_m >= 0.0) || !self.sigma_s_per_m.is_finite() {
            return Err(Error::config(format!(
                "conductivity must be >= 0, got {}",
                self.sigma_s_per_m
            )));
        }
        if !(self.mu_r >= 1.0) || !self.mu_r.is_finite() {
            return Err(Error::config(format!(
                "relative permeability must be >= 1, got {}",
                self.mu_r
            )));
        }
        Ok(())
    }

    /// Per-unit-length line analog of the layer: L = mu0*mu_r, C = eps0*eps_r,
    /// G = sigma. Losses enter as shunt conductance, i.e. the effective shunt
    /// capacitance is C + G/s.
    pub fn line_params(&self) -> LineParams {
        LineParams {
            l_per_m: MU0 * self.mu_r,
            c_per_m: EPS0 * self.eps_r,
            g_per_m: self.sigma_s_per_m,
        }
    }
}

/// Per-unit-length transmission-line analog of a layer material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineParams {
    /// Series inductance analog (H/m).
    pub l_per_m: f64,
    /// Shunt capacitance analog (F/m).
    pub c_per_m: f64,
    /// Shunt conductance analog (S/m).
    pub g_per_m: f64,
}

/// Ordered multilayer panel description, source side first, plus the shared
/// series truncation order used when the stack is embedded in a mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelStack {
    pub layers: Vec<MaterialLayer>,
    /// Number of series terms kept per admittance expansion.
    pub n_terms: usize,
}

impl PanelStack {
    pub fn new(layers: Vec<MaterialLayer>, n_terms: usize) -> Result<Self> {
        let stack = PanelStack { layers, n_terms };
        stack.validate()?;
        Ok(stack)
    }

    pub fn single(layer: MaterialLayer, n_terms: usize) -> Result<Self> {
        Self::new(vec![layer], n_terms)
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::config("panel stack needs at least one layer"));
        }
        if self.n_terms == 0 {
            return Err(Error::config("truncation order must be >= 1"));
        }
        for layer in &self.layers {
            layer.validate()?;
        }
        Ok(())
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn total_thickness_m(&self) -> f64 {
        self.layers.iter().map(|l| l.thickness_m).sum()
    }

    /// Same stack traversed from the far side.
    pub fn reversed(&self) -> PanelStack {
        let mut layers = self.layers.clone();
        layers.reverse();
        PanelStack {
            layers,
            n_terms: self.n_terms,
        }
    }
}
