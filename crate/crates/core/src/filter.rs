//! Digital-filter banks realizing the admittance terms of a thin lossy layer.
//!
//! A layer of thickness `d` behaves as a transmission-line section. Its
//! two-port admittance description needs two frequency-domain functions, a
//! cot-type self term and a csc-type coupling term. With shunt losses the
//! effective capacitance is `C_eff(s) = C + G/s` and both functions expand
//! into an integrator plus a series of second-order resonances:
//!
//! ```text
//! jY cot(theta) = -1/(s d L) - sum_k        2 d (s C + G) / D_k(s)
//! jY csc(theta) = -1/(s d L) - sum_k (-1)^k 2 d (s C + G) / D_k(s)
//! D_k(s) = s^2 d^2 L C + s d^2 L G + (k pi)^2
//! ```
//!
//! with `theta = w d sqrt(L C_eff)` and `Y = sqrt(C_eff / L)`. The two kinds
//! share every denominator; only the alternating numerator sign differs.
//! Truncating at `N` terms and applying the bilinear substitution
//! `s -> (2/dt)(1 - z^-1)/(1 + z^-1)` (no prewarping) turns each term into a
//! first- or second-order digital section. The z = 1 pole of the integrator
//! is kept exact.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::material::LineParams;

/// Which admittance function a bank realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BankKind {
    /// Self term, `jY cot(theta)`.
    Cot,
    /// Coupling term, `jY csc(theta)`.
    Csc,
}

/// One second-order rational section in z^-1 with direct-form-II-transposed
/// state. Coefficients are normalized at construction so the stored `a0` is
/// exactly 1; first-order sections are biquads with `b2 = a2 = 0`.
#[derive(Debug, Clone)]
pub struct BiquadSection {
    b0: f64,
    b1: f64,
    b2: f64,
    a0: f64,
    a1: f64,
    a2: f64,
    s1: f64,
    s2: f64,
}

impl BiquadSection {
    pub fn new(b: [f64; 3], a: [f64; 3]) -> Result<Self> {
        if a[0] == 0.0 || !a[0].is_finite() {
            return Err(Error::config(format!(
                "section denominator leading coefficient must be nonzero, got {}",
                a[0]
            )));
        }
        Ok(BiquadSection {
            b0: b[0] / a[0],
            b1: b[1] / a[0],
            b2: b[2] / a[0],
            a0: 1.0,
            a1: a[1] / a[0],
            a2: a[2] / a[0],
            s1: 0.0,
            s2: 0.0,
        })
    }

    /// Advance one sample, returning this section's output.
    #[inline]
    pub fn step(&mut self, x: f64) -> f64 {
        let y = self.b0 * x + self.s1;
        self.s1 = self.b1 * x - self.a1 * y + self.s2;
        self.s2 = self.b2 * x - self.a2 * y;
        y
    }

    /// Output this section would produce right now for input 0; does not
    /// mutate state.
    #[inline]
    pub fn history(&self) -> f64 {
        self.s1
    }

    /// Portion of the output proportional to the current input.
    #[inline]
    pub fn inst(&self) -> f64 {
        self.b0
    }

    /// Transfer function evaluated at the given `z^-1`.
    pub fn response(&self, z_inv: Complex64) -> Complex64 {
        let num = Complex64::from(self.b0) + z_inv * (self.b1 + z_inv * self.b2);
        let den = Complex64::from(self.a0) + z_inv * (self.a1 + z_inv * self.a2);
        num / den
    }

    pub fn reset(&mut self) {
        self.s1 = 0.0;
        self.s2 = 0.0;
    }

    pub fn coefficients(&self) -> ([f64; 3], [f64; 3]) {
        ([self.b0, self.b1, self.b2], [self.a0, self.a1, self.a2])
    }
}

/// Parallel stack of sections: output is the sum of section outputs.
/// Shared by the admittance banks and the closed-form junction path.
#[derive(Debug, Clone)]
pub(crate) struct SectionBank {
    sections: Vec<BiquadSection>,
    inst: f64,
}

impl SectionBank {
    pub(crate) fn new(sections: Vec<BiquadSection>) -> Self {
        let inst = sections.iter().map(|s| s.inst()).sum();
        SectionBank { sections, inst }
    }

    /// Advance one sample. The returned value is exactly
    /// `inst() * x + history()`; the state commit feeds `x` to every section.
    #[inline]
    pub(crate) fn step(&mut self, x: f64) -> f64 {
        let out = self.inst * x + self.history();
        for s in &mut self.sections {
            s.step(x);
        }
        out
    }

    #[inline]
    pub(crate) fn history(&self) -> f64 {
        self.sections.iter().map(|s| s.history()).sum()
    }

    #[inline]
    pub(crate) fn inst(&self) -> f64 {
        self.inst
    }

    pub(crate) fn response(&self, z_inv: Complex64) -> Complex64 {
        self.sections.iter().map(|s| s.response(z_inv)).sum()
    }

    pub(crate) fn reset(&mut self) {
        for s in &mut self.sections {
            s.reset();
        }
    }

    pub(crate) fn sections(&self) -> &[BiquadSection] {
        &self.sections
    }
}

/// The integrator section `sign / (s d L)` under the bilinear transform.
/// Retains its pole at z = 1 exactly.
pub(crate) fn integrator_section(
    params: &LineParams,
    thickness_m: f64,
    dt_s: f64,
    sign: f64,
) -> Result<BiquadSection> {
    let g = sign * dt_s / (2.0 * thickness_m * params.l_per_m);
    BiquadSection::new([g, g, 0.0], [1.0, -1.0, 0.0])
}

/// The k-th series term `sign * 2 d (s C + G) / D_k(s)` under the bilinear
/// transform. Lossless layers put the poles of these resonators on the unit
/// circle; any `G > 0` pulls them strictly inside.
pub(crate) fn series_term_section(
    params: &LineParams,
    thickness_m: f64,
    k: usize,
    dt_s: f64,
    sign: f64,
) -> Result<BiquadSection> {
    let d = thickness_m;
    let (l, c, g) = (params.l_per_m, params.c_per_m, params.g_per_m);
    let kb = 2.0 / dt_s;
    let d2l = d * d * l;
    let kpi2 = (k as f64 * PI) * (k as f64 * PI);

    let a0 = d2l * c * kb * kb + d2l * g * kb + kpi2;
    let a1 = 2.0 * (kpi2 - d2l * c * kb * kb);
    let a2 = d2l * c * kb * kb - d2l * g * kb + kpi2;

    let n0 = sign * 2.0 * d * (c * kb + g);
    let n1 = sign * 4.0 * d * g;
    let n2 = sign * 2.0 * d * (g - c * kb);

    BiquadSection::new([n0, n1, n2], [a0, a1, a2])
}

fn admittance_sections(
    params: &LineParams,
    thickness_m: f64,
    n_terms: usize,
    dt_s: f64,
    kind: BankKind,
) -> Result<Vec<BiquadSection>> {
    let mut sections = Vec::with_capacity(n_terms + 1);
    sections.push(integrator_section(params, thickness_m, dt_s, -1.0)?);
    for k in 1..=n_terms {
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
        sections.push(series_term_section(params, thickness_m, k, dt_s, sign)?);
    }
    Ok(sections)
}

/// Time-domain realization of one truncated admittance expansion: an
/// integrator-derived first-order section plus `n_terms` resonant biquads.
#[derive(Debug, Clone)]
pub struct AdmittanceFilterBank {
    kind: BankKind,
    dt_s: f64,
    bank: SectionBank,
}

/// Synthesize the filter bank approximating `jY cot(theta)` or
/// `jY csc(theta)` for one layer at sampling step `dt_s`.
pub fn synthesize_bank(
    params: &LineParams,
    thickness_m: f64,
    n_terms: usize,
    dt_s: f64,
    kind: BankKind,
) -> Result<AdmittanceFilterBank> {
    if n_terms == 0 {
        return Err(Error::config("truncation order must be >= 1"));
    }
    if !(dt_s > 0.0) || !dt_s.is_finite() {
        return Err(Error::config(format!(
            "time step must be positive, got {dt_s}"
        )));
    }
    if !(thickness_m > 0.0) {
        return Err(Error::config("layer thickness must be positive"));
    }
    let sections = admittance_sections(params, thickness_m, n_terms, dt_s, kind)?;
    Ok(AdmittanceFilterBank {
        kind,
        dt_s,
        bank: SectionBank::new(sections),
    })
}

impl AdmittanceFilterBank {
    pub fn kind(&self) -> BankKind {
        self.kind
    }

    pub fn dt_s(&self) -> f64 {
        self.dt_s
    }

    pub fn sections(&self) -> &[BiquadSection] {
        self.bank.sections()
    }

    /// Sum of leading-coefficient ratios over the sections: the admittance
    /// seen by the current sample.
    pub fn inst_coeff(&self) -> f64 {
        self.bank.inst()
    }

    /// Contribution of stored state alone, i.e. the bank output for a current
    /// input of 0. Does not mutate state.
    pub fn history_output(&self) -> f64 {
        self.bank.history()
    }

    /// Advance every section one sample with input `x` and return the summed
    /// output. The return value satisfies
    /// `filter_step(x) == inst_coeff() * x + history_output()` exactly.
    pub fn filter_step(&mut self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::non_finite(format!("filter input {x}")));
        }
        Ok(self.bank.step(x))
    }

    /// z-domain transfer function evaluated at `z = exp(j 2 pi f dt)`.
    /// `f_hz` must lie strictly inside (0, Nyquist).
    pub fn response(&self, f_hz: f64) -> Result<Complex64> {
        let nyquist = 0.5 / self.dt_s;
        if !(f_hz > 0.0 && f_hz < nyquist) {
            return Err(Error::domain(format!(
                "frequency {f_hz} Hz outside (0, {nyquist} Hz)"
            )));
        }
        let omega = 2.0 * PI * f_hz * self.dt_s;
        let z_inv = Complex64::from_polar(1.0, -omega);
        Ok(self.bank.response(z_inv))
    }

    pub fn reset(&mut self) {
        self.bank.reset();
    }
}

/// Closed-form admittance the banks approximate, evaluated directly with
/// complex electrical length (principal square roots). This is the reference
/// the synthesized banks are validated against.
pub fn exact_admittance(
    params: &LineParams,
    thickness_m: f64,
    f_hz: f64,
    kind: BankKind,
) -> Complex64 {
    let w = 2.0 * PI * f_hz;
    let c_eff = Complex64::new(params.c_per_m, -params.g_per_m / w);
    let theta = (c_eff * params.l_per_m).sqrt() * w * thickness_m;
    let y = (c_eff / params.l_per_m).sqrt();
    let trig = match kind {
        BankKind::Cot => theta.cos() / theta.sin(),
        BankKind::Csc => Complex64::from(1.0) / theta.sin(),
    };
    Complex64::i() * y * trig
}
