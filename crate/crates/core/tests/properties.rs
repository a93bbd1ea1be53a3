//! Property tests over the solver and oracle invariants.

use cfc_tlm_core::constants::C0;
use cfc_tlm_core::{
    solve_instantaneous, spectrum, stack_s_params, synthesize_bank, thomas, BankKind,
    MaterialLayer, PanelStack, SolveMethod, SolverConfig, Tridiagonal,
};
use proptest::prelude::*;

fn dominant_tridiagonal(n: usize) -> impl Strategy<Value = (Tridiagonal, Vec<f64>)> {
    let offs = prop::collection::vec(-1.0f64..1.0, n - 1);
    let slack = prop::collection::vec(0.1f64..3.0, n);
    let rhs = prop::collection::vec(-5.0f64..5.0, n);
    (offs, slack, rhs).prop_map(move |(off, slack, rhs)| {
        let diag: Vec<f64> = (0..n)
            .map(|i| {
                let mut row = slack[i];
                if i > 0 {
                    row += off[i - 1].abs();
                }
                if i + 1 < n {
                    row += off[i].abs();
                }
                row
            })
            .collect();
        (Tridiagonal::new(diag, off).unwrap(), rhs)
    })
}

proptest! {
    #[test]
    fn gauss_seidel_agrees_with_direct((a, b) in (2usize..12).prop_flat_map(dominant_tridiagonal)) {
        let direct = thomas(&a, &b).unwrap();
        let mut x = vec![0.0; a.order()];
        let cfg = SolverConfig { method: SolveMethod::GaussSeidel, tol: 1e-12, max_iter: 20_000 };
        solve_instantaneous(&a, &b, &cfg, &mut x).unwrap();
        for (u, v) in direct.iter().zip(&x) {
            prop_assert!((u - v).abs() <= 1e-8, "direct {u} vs iterative {v}");
        }
    }

    #[test]
    fn direct_solve_satisfies_the_system((a, b) in (2usize..12).prop_flat_map(dominant_tridiagonal)) {
        let x = thomas(&a, &b).unwrap();
        let mut ax = vec![0.0; a.order()];
        a.multiply(&x, &mut ax);
        for (l, r) in ax.iter().zip(&b) {
            prop_assert!((l - r).abs() <= 1e-9 * r.abs().max(1.0));
        }
    }

    #[test]
    fn bank_decomposition_identity(
        eps_r in 1.0f64..10.0,
        log_sigma in -1.0f64..4.0,
        thickness_um in 100.0f64..2000.0,
        drive in prop::collection::vec(-2.0f64..2.0, 40),
    ) {
        let layer = MaterialLayer::new(thickness_um * 1e-6, eps_r, 10f64.powf(log_sigma)).unwrap();
        let params = layer.line_params();
        let dt = 0.01 / C0;
        let mut bank = synthesize_bank(&params, layer.thickness_m, 8, dt, BankKind::Csc).unwrap();
        for x in drive {
            let inst = bank.inst_coeff();
            let hist = bank.history_output();
            let out = bank.filter_step(x).unwrap();
            prop_assert_eq!(out, inst * x + hist);
        }
    }

    #[test]
    fn oracle_is_passive_and_reciprocal(
        layer_specs in prop::collection::vec((1.0f64..10.0, 0.0f64..4.0, 100.0f64..1500.0), 1..5),
        f_mhz in 1.0f64..2000.0,
    ) {
        let layers: Vec<MaterialLayer> = layer_specs
            .iter()
            .map(|&(eps_r, log_sigma, d_um)| {
                MaterialLayer::new(d_um * 1e-6, eps_r, 10f64.powf(log_sigma) - 1.0).unwrap()
            })
            .collect();
        let stack = PanelStack::new(layers, 1).unwrap();
        let freqs = [f_mhz * 1e6];
        let fwd = stack_s_params(&stack, &freqs).unwrap();
        let rev = stack_s_params(&stack.reversed(), &freqs).unwrap();
        let power = fwd.s11[0].norm_sqr() + fwd.s21[0].norm_sqr();
        prop_assert!(power <= 1.0 + 1e-9, "power {power}");
        prop_assert!(fwd.s11[0].norm() <= 1.0 + 1e-9);
        prop_assert!(fwd.s21[0].norm() <= 1.0 + 1e-9);
        prop_assert!((fwd.s21[0] - rev.s21[0]).norm() <= 1e-10);
    }

    #[test]
    fn lossless_oracle_conserves_power(
        eps_r in 1.0f64..10.0,
        d_um in 100.0f64..2000.0,
        f_mhz in 1.0f64..2000.0,
    ) {
        let stack = PanelStack::single(
            MaterialLayer::new(d_um * 1e-6, eps_r, 0.0).unwrap(),
            1,
        ).unwrap();
        let s = stack_s_params(&stack, &[f_mhz * 1e6]).unwrap();
        let power = s.s11[0].norm_sqr() + s.s21[0].norm_sqr();
        prop_assert!((power - 1.0).abs() <= 1e-9, "power {power}");
    }

    #[test]
    fn spectrum_is_linear(
        a in prop::collection::vec(-1.0f64..1.0, 64),
        b in prop::collection::vec(-1.0f64..1.0, 64),
    ) {
        let dt = 1e-9;
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let sa = spectrum(&a, dt).unwrap();
        let sb = spectrum(&b, dt).unwrap();
        let ss = spectrum(&sum, dt).unwrap();
        for i in 0..sa.len() {
            prop_assert!((sa.values[i] + sb.values[i] - ss.values[i]).norm() <= 1e-9);
        }
    }
}
