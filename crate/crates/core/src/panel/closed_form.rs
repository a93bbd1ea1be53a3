//! Single-layer junction stepped through the eliminated scalar operator.
//!
//! For one layer the two coupled port equations can be eliminated into a
//! scalar operator `y1*y2 + (Fcot^2 - Fcsc^2) - (y1 + y2) Fcot` acting on
//! each face voltage, with the right-hand side formed by feedforward
//! filtering of the known Thevenin drives. This is an independent
//! realization of the same discrete dynamics as the tridiagonal path and is
//! kept as a cross-check of that machinery.
//!
//! The square term is realized in its truncation-consistent product form.
//! With `u_k` the k-th series term and `I` the integrator,
//!
//! ```text
//! Fcot^2 - Fcsc^2 = 4 * (sum over odd k of u_k) * (I + sum over even k of u_k)
//! ```
//!
//! holds exactly at every truncation order, so the two paths agree to
//! rounding. (The infinite-series limit of the product is `C_eff / L`;
//! substituting that first-order form directly would reintroduce a
//! truncation-scale mismatch between the paths.)

use crate::error::{Error, Result};
use crate::filter::{integrator_section, series_term_section, BankKind, SectionBank};
use crate::material::PanelStack;

fn full_bank(
    stack: &PanelStack,
    dt_s: f64,
    kind: BankKind,
) -> Result<SectionBank> {
    let layer = &stack.layers[0];
    let params = layer.line_params();
    let d = layer.thickness_m;
    let mut sections = Vec::with_capacity(stack.n_terms + 1);
    sections.push(integrator_section(&params, d, dt_s, -1.0)?);
    for k in 1..=stack.n_terms {
        let sign = match kind {
            BankKind::Cot => -1.0,
            BankKind::Csc => {
                if k % 2 == 0 {
                    -1.0
                } else {
                    1.0
                }
            }
        };
        sections.push(series_term_section(&params, d, k, dt_s, sign)?);
    }
    Ok(SectionBank::new(sections))
}

/// Cascade of two parallel banks with a scalar gain; realizes the product of
/// their transfer functions.
#[derive(Debug, Clone)]
struct CascadeBank {
    first: SectionBank,
    second: SectionBank,
    gain: f64,
}

impl CascadeBank {
    fn inst(&self) -> f64 {
        self.gain * self.first.inst() * self.second.inst()
    }

    fn history(&self) -> f64 {
        self.gain * (self.second.inst() * self.first.history() + self.second.history())
    }

    fn commit(&mut self, x: f64) {
        let mid = self.first.step(x);
        self.second.step(mid);
    }
}

fn square_term(stack: &PanelStack, dt_s: f64) -> Result<CascadeBank> {
    let layer = &stack.layers[0];
    let params = layer.line_params();
    let d = layer.thickness_m;
    let mut odd = Vec::new();
    let mut even = vec![integrator_section(&params, d, dt_s, 1.0)?];
    for k in 1..=stack.n_terms {
        let section = series_term_section(&params, d, k, dt_s, 1.0)?;
        if k % 2 == 1 {
            odd.push(section);
        } else {
            even.push(section);
        }
    }
    Ok(CascadeBank {
        first: SectionBank::new(odd),
        second: SectionBank::new(even),
        gain: 4.0,
    })
}

/// One face voltage's worth of closed-form state.
#[derive(Debug, Clone)]
struct FaceState {
    cot: SectionBank,
    square: CascadeBank,
}

/// Single-layer panel junction solved by scalar division per step instead of
/// a coupled linear solve.
#[derive(Debug, Clone)]
pub struct ClosedFormJunction {
    y1: f64,
    y2: f64,
    dt_s: f64,
    // feedforward banks on the Thevenin drives
    cot_b1: SectionBank,
    cot_b2: SectionBank,
    csc_b1: SectionBank,
    csc_b2: SectionBank,
    face1: FaceState,
    face2: FaceState,
    inst_lhs: f64,
}

impl ClosedFormJunction {
    pub fn build(stack: &PanelStack, y1: f64, y2: f64, dt_s: f64) -> Result<Self> {
        stack.validate()?;
        if stack.layer_count() != 1 {
            return Err(Error::config(format!(
                "closed-form junction handles exactly one layer, got {}",
                stack.layer_count()
            )));
        }
        if !(y1 > 0.0) || !(y2 > 0.0) {
            return Err(Error::config("port admittances must be positive"));
        }
        let face1 = FaceState {
            cot: full_bank(stack, dt_s, BankKind::Cot)?,
            square: square_term(stack, dt_s)?,
        };
        let face2 = face1.clone();
        let inst_lhs =
            y1 * y2 + face1.square.inst() - (y1 + y2) * face1.cot.inst();
        if inst_lhs == 0.0 || !inst_lhs.is_finite() {
            return Err(Error::config(format!(
                "degenerate closed-form operator ({inst_lhs})"
            )));
        }
        Ok(ClosedFormJunction {
            y1,
            y2,
            dt_s,
            cot_b1: full_bank(stack, dt_s, BankKind::Cot)?,
            cot_b2: full_bank(stack, dt_s, BankKind::Cot)?,
            csc_b1: full_bank(stack, dt_s, BankKind::Csc)?,
            csc_b2: full_bank(stack, dt_s, BankKind::Csc)?,
            face1,
            face2,
            inst_lhs,
        })
    }

    pub fn dt_s(&self) -> f64 {
        self.dt_s
    }

    /// Advance one step; mirrors `PanelJunction::junction_step`.
    pub fn junction_step(&mut self, v1_inc: f64, v2_inc: f64) -> Result<(f64, f64)> {
        if !v1_inc.is_finite() || !v2_inc.is_finite() {
            return Err(Error::non_finite(format!(
                "junction incident voltages ({v1_inc}, {v2_inc})"
            )));
        }
        let b1 = 2.0 * self.y1 * v1_inc;
        let b2 = 2.0 * self.y2 * v2_inc;

        // rhs rows: (y2 - Fcot) b1 - Fcsc b2 and (y1 - Fcot) b2 - Fcsc b1
        let w1 = self.y2 * b1 - self.cot_b1.step(b1) - self.csc_b2.step(b2);
        let w2 = self.y1 * b2 - self.cot_b2.step(b2) - self.csc_b1.step(b1);

        let hist1 = self.face1.square.history() - (self.y1 + self.y2) * self.face1.cot.history();
        let hist2 = self.face2.square.history() - (self.y1 + self.y2) * self.face2.cot.history();

        let v1 = (w1 - hist1) / self.inst_lhs;
        let v2 = (w2 - hist2) / self.inst_lhs;
        if !v1.is_finite() || !v2.is_finite() {
            return Err(Error::non_finite("closed-form solve produced non-finite voltages"));
        }

        self.face1.cot.step(v1);
        self.face1.square.commit(v1);
        self.face2.cot.step(v2);
        self.face2.square.commit(v2);

        Ok((v1 - v1_inc, v2 - v2_inc))
    }
}
