//! Polarization decomposition for in-plane anisotropic panels.
//!
//! The principal axes are orthogonal and aligned with x and y. An incident
//! field polarized at angle `phi` from the x axis splits into `cos(phi)` and
//! `sin(phi)` components, each driving an independent junction built from
//! that axis's material stack; reported scalar magnitudes are vector norms
//! of the (x, y) component pairs.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::material::PanelStack;
use crate::solver::SolverConfig;

use super::junction::{build_junction, PanelJunction};

/// Principal-axis material stacks plus the polarization angle.
#[derive(Debug, Clone, PartialEq)]
pub struct AnisotropicPanel {
    pub stack_x: PanelStack,
    pub stack_y: PanelStack,
    /// Angle between the incident electric field and the x axis (rad).
    pub phi_rad: f64,
}

impl AnisotropicPanel {
    pub fn new(stack_x: PanelStack, stack_y: PanelStack, phi_rad: f64) -> Result<Self> {
        let panel = AnisotropicPanel {
            stack_x,
            stack_y,
            phi_rad,
        };
        panel.validate()?;
        Ok(panel)
    }

    /// `phi` given in degrees; 0 and 90 map to exact axis alignment.
    pub fn from_degrees(stack_x: PanelStack, stack_y: PanelStack, phi_deg: f64) -> Result<Self> {
        let phi_rad = if phi_deg == 90.0 {
            FRAC_PI_2
        } else {
            phi_deg.to_radians()
        };
        Self::new(stack_x, stack_y, phi_rad)
    }

    pub fn validate(&self) -> Result<()> {
        self.stack_x.validate()?;
        self.stack_y.validate()?;
        if self.stack_x.n_terms != self.stack_y.n_terms {
            return Err(Error::config(format!(
                "principal-axis stacks must share the truncation order, got {} and {}",
                self.stack_x.n_terms, self.stack_y.n_terms
            )));
        }
        if !self.phi_rad.is_finite() {
            return Err(Error::config("polarization angle must be finite"));
        }
        Ok(())
    }

    /// (cos phi, sin phi) with the axis-aligned endpoints exact, so that a
    /// 0-degree run degenerates bit-for-bit to the x stack and a 90-degree
    /// run to the y stack.
    pub fn components(&self) -> (f64, f64) {
        if self.phi_rad == 0.0 {
            (1.0, 0.0)
        } else if self.phi_rad == FRAC_PI_2 {
            (0.0, 1.0)
        } else {
            (self.phi_rad.cos(), self.phi_rad.sin())
        }
    }
}

/// Component outputs of one anisotropic junction step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisotropicStep {
    pub e_refl_x: f64,
    pub e_refl_y: f64,
    pub e_trans_x: f64,
    pub e_trans_y: f64,
}

impl AnisotropicStep {
    pub fn reflected_magnitude(&self) -> f64 {
        self.e_refl_x.hypot(self.e_refl_y)
    }

    pub fn transmitted_magnitude(&self) -> f64 {
        self.e_trans_x.hypot(self.e_trans_y)
    }
}

/// Two independent principal-axis junctions advanced in lockstep.
#[derive(Debug)]
pub struct AnisotropicJunction {
    jx: PanelJunction,
    jy: PanelJunction,
    cos_phi: f64,
    sin_phi: f64,
}

impl AnisotropicJunction {
    pub fn build(
        panel: &AnisotropicPanel,
        y1: f64,
        y2: f64,
        dt_s: f64,
        cfg: SolverConfig,
    ) -> Result<Self> {
        panel.validate()?;
        let jx = build_junction(&panel.stack_x, y1, y2, dt_s, cfg.clone())?;
        let jy = build_junction(&panel.stack_y, y1, y2, dt_s, cfg)?;
        Self::from_junctions(jx, jy, panel.components())
    }

    /// Pair prebuilt junctions; they must share the sampling step.
    pub fn from_junctions(
        jx: PanelJunction,
        jy: PanelJunction,
        (cos_phi, sin_phi): (f64, f64),
    ) -> Result<Self> {
        if jx.dt_s() != jy.dt_s() {
            return Err(Error::config(format!(
                "principal-axis junctions disagree on the time step: {} vs {}",
                jx.dt_s(),
                jy.dt_s()
            )));
        }
        Ok(AnisotropicJunction {
            jx,
            jy,
            cos_phi,
            sin_phi,
        })
    }

    /// Decompose the port-1 incident field onto the principal axes and step
    /// both junctions (port 2 unexcited).
    pub fn anisotropic_step(&mut self, e_inc: f64) -> Result<AnisotropicStep> {
        let (rx, tx) = self.jx.junction_step(self.cos_phi * e_inc, 0.0)?;
        let (ry, ty) = self.jy.junction_step(self.sin_phi * e_inc, 0.0)?;
        Ok(AnisotropicStep {
            e_refl_x: rx,
            e_refl_y: ry,
            e_trans_x: tx,
            e_trans_y: ty,
        })
    }
}
