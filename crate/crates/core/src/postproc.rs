//! Probe post-processing: spectra, S-parameter extraction against a
//! reference run, and shielding effectiveness.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::oracle::SParams;

/// Positive-frequency half of a real sequence's discrete Fourier transform,
/// DC through Nyquist, grid spacing `1 / (steps * dt)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub freqs: Vec<f64>,
    pub values: Vec<Complex64>,
    dt_s: f64,
}

impl Spectrum {
    pub fn dt_s(&self) -> f64 {
        self.dt_s
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn peak_magnitude(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Forward DFT of a real sequence; no window is applied.
pub fn spectrum(samples: &[f64], dt_s: f64) -> Result<Spectrum> {
    if samples.is_empty() {
        return Err(Error::config("cannot transform an empty sequence"));
    }
    if !(dt_s > 0.0) {
        return Err(Error::config("time step must be positive"));
    }
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let half = n / 2;
    let df = 1.0 / (n as f64 * dt_s);
    let freqs = (0..=half).map(|k| k as f64 * df).collect();
    buf.truncate(half + 1);
    Ok(Spectrum {
        freqs,
        values: buf,
        dt_s,
    })
}

/// Integer-sample propagation delays removed from the extracted ratios, so
/// the S-parameters are referenced to the panel plane rather than the probe
/// positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Deembed {
    /// Samples between the incident wave passing the reference probe and the
    /// panel reflection returning to it.
    pub reflection_delay_samples: i64,
    /// Samples between the incident wave passing the reference probe and the
    /// transmitted wave reaching the transmission probe, minus the same path
    /// in the reference run.
    pub transmission_delay_samples: i64,
}

/// Extraction output: S-parameters plus how many trailing bins were dropped
/// because the incident spectrum fell below the floor.
#[derive(Debug, Clone, PartialEq)]
pub struct SParamExtraction {
    pub s_params: SParams,
    pub floor_truncated_bins: usize,
}

const INCIDENT_FLOOR_REL: f64 = 1e-12;

fn check_same_grid(a: &Spectrum, b: &Spectrum) -> Result<()> {
    if a.len() != b.len() || a.dt_s != b.dt_s {
        return Err(Error::config("spectra are on different frequency grids"));
    }
    Ok(())
}

/// Bin-wise `S11 = reflected/incident`, `S21 = transmitted/incident` with
/// integer-sample phase de-embedding. Trailing bins where the incident
/// spectrum drops below 1e-12 of its peak are truncated.
pub fn extract_s_params(
    reflected: &Spectrum,
    transmitted: &Spectrum,
    incident: &Spectrum,
    delays: Deembed,
) -> Result<SParamExtraction> {
    check_same_grid(reflected, incident)?;
    check_same_grid(transmitted, incident)?;
    let floor = INCIDENT_FLOOR_REL * incident.peak_magnitude();
    if floor == 0.0 {
        return Err(Error::config("incident spectrum is identically zero"));
    }
    let mut valid = incident.len();
    for (i, v) in incident.values.iter().enumerate() {
        if v.norm() < floor {
            valid = i;
            break;
        }
    }
    let dt = incident.dt_s;
    let mut s11 = Vec::with_capacity(valid);
    let mut s21 = Vec::with_capacity(valid);
    for i in 0..valid {
        let w_dt = 2.0 * PI * incident.freqs[i] * dt;
        let refl_shift = Complex64::from_polar(1.0, w_dt * delays.reflection_delay_samples as f64);
        let trans_shift =
            Complex64::from_polar(1.0, w_dt * delays.transmission_delay_samples as f64);
        s11.push(reflected.values[i] / incident.values[i] * refl_shift);
        s21.push(transmitted.values[i] / incident.values[i] * trans_shift);
    }
    Ok(SParamExtraction {
        s_params: SParams {
            freqs: incident.freqs[..valid].to_vec(),
            s11,
            s21,
        },
        floor_truncated_bins: incident.len() - valid,
    })
}

/// Shielding effectiveness spectrum in dB.
#[derive(Debug, Clone, PartialEq)]
pub struct SEResult {
    pub freqs: Vec<f64>,
    pub se_db: Vec<f64>,
}

/// `SE(f) = 20 log10(|E_incident| / |E_transmitted|)`. Bins with zero
/// transmitted field report positive infinity (capped only at serialization
/// time).
pub fn shielding_effectiveness(e_i: &Spectrum, e_t: &Spectrum) -> Result<SEResult> {
    check_same_grid(e_i, e_t)?;
    let se_db = e_i
        .values
        .iter()
        .zip(&e_t.values)
        .map(|(i, t)| {
            let ti = t.norm();
            if ti == 0.0 {
                f64::INFINITY
            } else {
                20.0 * (i.norm() / ti).log10()
            }
        })
        .collect();
    Ok(SEResult {
        freqs: e_i.freqs.clone(),
        se_db,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const DT: f64 = 1e-9;

    #[test]
    fn impulse_is_flat() {
        let mut x = vec![0.0; 64];
        x[0] = 1.0;
        let s = spectrum(&x, DT).unwrap();
        assert_eq!(s.len(), 33);
        for v in &s.values {
            assert!((v.norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(s.freqs[0], 0.0);
        let df = 1.0 / (64.0 * DT);
        assert!((s.freqs[1] - df).abs() < 1e-3);
    }

    #[test]
    fn pure_delay_has_linear_phase() {
        let k = 7;
        let mut x = vec![0.0; 128];
        x[k] = 1.0;
        let s = spectrum(&x, DT).unwrap();
        for (i, v) in s.values.iter().enumerate().skip(1).take(40) {
            assert!((v.norm() - 1.0).abs() < 1e-12);
            let expect = -2.0 * PI * s.freqs[i] * k as f64 * DT;
            let diff = (v.arg() - expect).rem_euclid(2.0 * PI);
            let diff = diff.min(2.0 * PI - diff);
            assert!(diff < 1e-9, "phase off at bin {i}: {diff}");
        }
    }

    #[test]
    fn transform_is_linear() {
        let a: Vec<f64> = (0..32).map(|k| (k as f64 * 0.3).sin()).collect();
        let b: Vec<f64> = (0..32).map(|k| (k as f64 * 1.1).cos()).collect();
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let sa = spectrum(&a, DT).unwrap();
        let sb = spectrum(&b, DT).unwrap();
        let ss = spectrum(&sum, DT).unwrap();
        for i in 0..sa.len() {
            assert!((sa.values[i] + sb.values[i] - ss.values[i]).norm() < 1e-10);
        }
    }

    #[test]
    fn sinusoid_peaks_at_its_bin() {
        let n = 256;
        let bin = 19;
        let f = bin as f64 / (n as f64 * DT);
        let x: Vec<f64> = (0..n)
            .map(|k| (2.0 * PI * f * k as f64 * DT).sin())
            .collect();
        let s = spectrum(&x, DT).unwrap();
        let peak = s
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap()
            .0;
        assert!((peak as i64 - bin as i64).abs() <= 1);
    }

    fn delta_spectrum(at: usize, n: usize) -> Spectrum {
        let mut x = vec![0.0; n];
        x[at] = 1.0;
        spectrum(&x, DT).unwrap()
    }

    #[test]
    fn no_panel_extraction() {
        let n = 128;
        let incident = delta_spectrum(10, n);
        let transmitted = delta_spectrum(10, n);
        let reflected = spectrum(&vec![0.0; n], DT);
        // zero reflected sequence has zero spectrum but extraction still works
        let reflected = reflected.unwrap();
        let out = extract_s_params(
            &reflected,
            &transmitted,
            &incident,
            Deembed {
                reflection_delay_samples: 1,
                transmission_delay_samples: 0,
            },
        )
        .unwrap();
        assert_eq!(out.floor_truncated_bins, 0);
        for i in 0..out.s_params.len() {
            assert!(out.s_params.s11[i].norm() < 1e-12);
            assert!((out.s_params.s21[i] - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn perfect_reflector_extraction() {
        // reflection arrives 3 samples after the incident passes, inverted
        let n = 128;
        let incident = delta_spectrum(10, n);
        let mut r = vec![0.0; n];
        r[13] = -1.0;
        let reflected = spectrum(&r, DT).unwrap();
        let transmitted = spectrum(&vec![0.0; n], DT).unwrap();
        let out = extract_s_params(
            &reflected,
            &transmitted,
            &incident,
            Deembed {
                reflection_delay_samples: 3,
                transmission_delay_samples: 0,
            },
        )
        .unwrap();
        for i in 1..out.s_params.len() {
            let s11 = out.s_params.s11[i];
            assert!((s11.norm() - 1.0).abs() < 1e-9);
            assert!((s11 - Complex64::new(-1.0, 0.0)).norm() < 1e-9, "bin {i}: {s11}");
        }
    }

    #[test]
    fn se_values() {
        let n = 64;
        let e_i = delta_spectrum(0, n);
        let mut t = vec![0.0; n];
        t[0] = 1e-3;
        let e_t = spectrum(&t, DT).unwrap();
        let se = shielding_effectiveness(&e_i, &e_t).unwrap();
        for v in &se.se_db {
            assert!((v - 60.0).abs() < 1e-9);
        }

        let same = shielding_effectiveness(&e_i, &e_i).unwrap();
        for v in &same.se_db {
            assert!(v.abs() < 1e-12);
        }

        let zero = spectrum(&vec![0.0; n], DT).unwrap();
        let inf = shielding_effectiveness(&e_i, &zero).unwrap();
        assert!(inf.se_db.iter().all(|v| v.is_infinite()));
    }

    #[test]
    fn mismatched_grids_rejected() {
        let a = delta_spectrum(0, 64);
        let b = delta_spectrum(0, 128);
        assert!(shielding_effectiveness(&a, &b).is_err());
        assert!(extract_s_params(
            &a,
            &b,
            &a,
            Deembed {
                reflection_delay_samples: 0,
                transmission_delay_samples: 0
            }
        )
        .is_err());
    }

    #[test]
    fn gaussian_incident_truncates_floor_bins() {
        // well-centered pulse so the spectrum genuinely decays below the floor
        let n = 256;
        let sigma = 12.0 * DT;
        let x: Vec<f64> = (0..n)
            .map(|k| {
                let t = (k as f64 - 128.0) * DT;
                (-t * t / (2.0 * sigma * sigma)).exp()
            })
            .collect();
        let incident = spectrum(&x, DT).unwrap();
        let zero = spectrum(&vec![0.0; n], DT).unwrap();
        let out = extract_s_params(
            &zero,
            &zero,
            &incident,
            Deembed {
                reflection_delay_samples: 0,
                transmission_delay_samples: 0,
            },
        )
        .unwrap();
        assert!(out.floor_truncated_bins > 0);
        assert!(out.s_params.len() + out.floor_truncated_bins == incident.len());
    }
}
