//! Filter-bank accuracy against the closed-form admittances, plus the
//! impulse-response / transfer-function consistency check.

use cfc_tlm_core::constants::C0;
use cfc_tlm_core::{exact_admittance, spectrum, synthesize_bank, BankKind, MaterialLayer};
use num_complex::Complex64;

const DT: f64 = 0.01 / C0;

#[test]
fn impulse_response_transform_equals_response() {
    // The integrator keeps its pole at z = 1, so its impulse response is a
    // step (-g, then -2g forever) that a finite window cannot capture: over N
    // samples its DFT at every nonzero bin is exactly +g while the transfer
    // function there is -g (1 + z^-1)/(1 - z^-1). Correct for that window
    // identity; the damped sections must then match the direct evaluation.
    let layer = MaterialLayer::new(1e-3, 4.56, 8000.0).unwrap();
    let params = layer.line_params();
    let g = DT / (2.0 * 1e-3 * params.l_per_m);
    for kind in [BankKind::Cot, BankKind::Csc] {
        let mut bank = synthesize_bank(&params, 1e-3, 15, DT, kind).unwrap();
        let n = 4096;
        let mut impulse = Vec::with_capacity(n);
        for k in 0..n {
            let x = if k == 0 { 1.0 } else { 0.0 };
            impulse.push(bank.filter_step(x).unwrap());
        }
        let spec = spectrum(&impulse, DT).unwrap();
        for i in (1..spec.len() - 1).step_by(47) {
            let f = spec.freqs[i];
            let omega = 2.0 * std::f64::consts::PI * f * DT;
            let z_inv = Complex64::from_polar(1.0, -omega);
            let integrator = -g * (Complex64::new(1.0, 0.0) + z_inv)
                / (Complex64::new(1.0, 0.0) - z_inv);
            let expected_fft = bank.response(f).unwrap() - integrator + g;
            let via_fft = spec.values[i];
            let rel = (expected_fft - via_fft).norm() / expected_fft.norm().max(1e-30);
            assert!(
                rel < 1e-7,
                "kind {kind:?}, f = {f:.3e}: fft {via_fft} vs expected {expected_fft} (rel {rel:.2e})"
            );
        }
    }
}

#[test]
fn bank_tracks_exact_admittance_over_band() {
    // conductive layer, both kinds, across the low-warp band
    let layer = MaterialLayer::new(2e-4, 2.0, 1e4).unwrap();
    let params = layer.line_params();
    let n_terms = 60;
    for kind in [BankKind::Cot, BankKind::Csc] {
        let bank = synthesize_bank(&params, 2e-4, n_terms, DT, kind).unwrap();
        for i in 1..=40 {
            let f = i as f64 * 2.5e7; // 25 MHz .. 1 GHz
            let got = bank.response(f).unwrap();
            let want = exact_admittance(&params, 2e-4, f, kind);
            let rel = (got - want).norm() / want.norm();
            assert!(
                rel <= 0.02,
                "{kind:?} off by {rel:.4} at {f:.3e} Hz ({got} vs {want})"
            );
        }
    }
}

#[test]
fn exact_admittance_lossless_values() {
    // vacuum-filled section: jY cot(theta) with theta = w d / c0
    let layer = MaterialLayer::new(0.05, 1.0, 0.0).unwrap();
    let params = layer.line_params();
    let f = 1e9;
    let theta = 2.0 * std::f64::consts::PI * f * 0.05 / C0;
    let y = (cfc_tlm_core::constants::EPS0 / cfc_tlm_core::constants::MU0).sqrt();
    let want = Complex64::new(0.0, y / theta.tan());
    let got = exact_admittance(&params, 0.05, f, BankKind::Cot);
    assert!((got - want).norm() < 1e-12 * want.norm());
    let want_csc = Complex64::new(0.0, y / theta.sin());
    let got_csc = exact_admittance(&params, 0.05, f, BankKind::Csc);
    assert!((got_csc - want_csc).norm() < 1e-12 * want_csc.norm());
}
