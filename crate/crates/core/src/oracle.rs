//! Frequency-domain reference solution for layered lossy slabs.
//!
//! Each layer is an ABCD (transmission) two-port with complex propagation
//! constant and wave impedance; layers cascade by matrix multiplication and
//! convert to S-parameters against the free-space wave impedance on both
//! sides. Everything here is a pure function of its inputs and is used to
//! validate the time-domain path.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::constants::{EPS0, ETA0, MU0};
use crate::error::{Error, Result};
use crate::material::{MaterialLayer, PanelStack};

/// Complex two-port transmission matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    /// Port reference impedance used for the S-parameter conversion (ohms).
    pub reference_impedance_ohm: f64,
}

impl TwoPortMatrix {
    pub fn identity() -> Self {
        TwoPortMatrix {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
            reference_impedance_ohm: ETA0,
        }
    }

    /// `self` followed by `next` (matrix product).
    pub fn cascade(&self, next: &TwoPortMatrix) -> TwoPortMatrix {
        TwoPortMatrix {
            a: self.a * next.a + self.b * next.c,
            b: self.a * next.b + self.b * next.d,
            c: self.c * next.a + self.d * next.c,
            d: self.c * next.b + self.d * next.d,
            reference_impedance_ohm: self.reference_impedance_ohm,
        }
    }

    /// `a d - b c`; 1 for any reciprocal two-port.
    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// (S11, S21) with the same reference impedance on both ports.
    pub fn s_params(&self) -> (Complex64, Complex64) {
        let z0 = self.reference_impedance_ohm;
        let den = self.a + self.b / z0 + self.c * z0 + self.d;
        let s11 = (self.a + self.b / z0 - self.c * z0 - self.d) / den;
        let s21 = Complex64::new(2.0, 0.0) / den;
        (s11, s21)
    }
}

/// ABCD matrix of one layer at frequency `f_hz`. The principal complex
/// square-root branch keeps `Re(gamma) >= 0`, i.e. the decaying wave.
pub fn layer_abcd(layer: &MaterialLayer, f_hz: f64) -> TwoPortMatrix {
    let w = 2.0 * PI * f_hz;
    let eps_eff = Complex64::new(EPS0 * layer.eps_r, -layer.sigma_s_per_m / w);
    let mu = MU0 * layer.mu_r;
    let gamma = Complex64::i() * w * (eps_eff * mu).sqrt();
    let eta = (Complex64::from(mu) / eps_eff).sqrt();
    let gd = gamma * layer.thickness_m;
    let cosh = gd.cosh();
    let sinh = gd.sinh();
    TwoPortMatrix {
        a: cosh,
        b: eta * sinh,
        c: sinh / eta,
        d: cosh,
        reference_impedance_ohm: ETA0,
    }
}

/// Frequency-domain S-parameter sweep of the stack on the free-space wave
/// impedance.
#[derive(Debug, Clone, PartialEq)]
pub struct SParams {
    pub freqs: Vec<f64>,
    pub s11: Vec<Complex64>,
    pub s21: Vec<Complex64>,
}

impl SParams {
    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }
}

/// Exact cascade solution for the stack over an ascending positive frequency
/// grid.
pub fn stack_s_params(stack: &PanelStack, freqs: &[f64]) -> Result<SParams> {
    stack.validate()?;
    if freqs.windows(2).any(|w| w[1] <= w[0]) || freqs.first().is_some_and(|&f| f <= 0.0) {
        return Err(Error::domain(
            "frequency grid must be positive and strictly ascending",
        ));
    }
    let mut s11 = Vec::with_capacity(freqs.len());
    let mut s21 = Vec::with_capacity(freqs.len());
    for &f in freqs {
        let mut m = TwoPortMatrix::identity();
        for layer in &stack.layers {
            m = m.cascade(&layer_abcd(layer, f));
        }
        let (r, t) = m.s_params();
        s11.push(r);
        s21.push(t);
    }
    Ok(SParams {
        freqs: freqs.to_vec(),
        s11,
        s21,
    })
}

/// Electrically thin conductive sheet shielding estimate,
/// `20 log10 |1 + eta0 sigma d / 2|`. Valid where the sheet is much thinner
/// than both the wavelength and the skin depth scale of interest; the
/// estimate itself is frequency-independent.
pub fn thin_sheet_se(layer: &MaterialLayer, _f_hz: f64) -> f64 {
    20.0 * (1.0 + ETA0 * layer.sigma_s_per_m * layer.thickness_m / 2.0).log10()
}
