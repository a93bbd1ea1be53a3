//! End-to-end validation of embedded panels against the analytic cascade.

use cfc_tlm_core::constants::Y0;
use cfc_tlm_core::mesh::{run, Mesh1D, SourceSpec};
use cfc_tlm_core::study::{run_panel_study, StudyGeometry};
use cfc_tlm_core::{
    build_junction, stack_s_params, MaterialLayer, PanelStack, SolveMethod, SolverConfig,
};

fn geometry(steps: usize) -> StudyGeometry {
    StudyGeometry {
        cell_size_m: 0.01,
        node_count: 24,
        panel_link: 12,
        steps,
    }
}

fn source() -> SourceSpec {
    SourceSpec::delta(4, 1.0)
}

fn max_deviation(
    stack: &PanelStack,
    solver: &SolverConfig,
    steps: usize,
    band: (f64, f64),
) -> (f64, f64) {
    let geom = geometry(steps);
    let sim = run_panel_study(&geom, &source(), stack, solver).unwrap();
    let freqs: Vec<f64> = sim
        .s_params
        .freqs
        .iter()
        .copied()
        .filter(|&f| f >= band.0 && f <= band.1)
        .collect();
    let oracle = stack_s_params(stack, &freqs).unwrap();
    let mut dev11: f64 = 0.0;
    let mut dev21: f64 = 0.0;
    let mut oi = 0;
    for (i, &f) in sim.s_params.freqs.iter().enumerate() {
        if f < band.0 || f > band.1 {
            continue;
        }
        dev11 = dev11.max((sim.s_params.s11[i] - oracle.s11[oi]).norm());
        dev21 = dev21.max((sim.s_params.s21[i] - oracle.s21[oi]).norm());
        oi += 1;
    }
    (dev11, dev21)
}

#[test]
fn single_layer_matches_oracle() {
    let stack = PanelStack::single(MaterialLayer::new(1e-3, 4.56, 8000.0).unwrap(), 100).unwrap();
    let (dev11, dev21) = max_deviation(&stack, &SolverConfig::direct(), 1 << 14, (1e7, 2e9));
    assert!(dev11 <= 0.02, "S11 deviation {dev11}");
    assert!(dev21 <= 0.02, "S21 deviation {dev21}");
}

#[test]
fn three_layer_matches_oracle() {
    let layers = vec![
        MaterialLayer::new(1e-3, 4.56, 8e3).unwrap(),
        MaterialLayer::new(1e-3, 2.0, 1e4).unwrap(),
        MaterialLayer::new(1e-3, 4.56, 8e3).unwrap(),
    ];
    let stack = PanelStack::new(layers, 50).unwrap();
    let (dev11, dev21) = max_deviation(&stack, &SolverConfig::gauss_seidel(), 1 << 14, (1e7, 2e9));
    assert!(dev11 <= 0.02, "S11 deviation {dev11}");
    assert!(dev21 <= 0.02, "S21 deviation {dev21}");
}

#[test]
fn vacuum_panel_is_transparent_to_a_sinusoid() {
    // steady sinusoid, d much smaller than the wavelength: reflection below 1e-3
    let stack = PanelStack::single(MaterialLayer::new(1e-3, 1.0, 0.0).unwrap(), 20).unwrap();
    let dt = 0.01 / cfc_tlm_core::constants::C0;
    let mut junction = build_junction(&stack, Y0, Y0, dt, SolverConfig::direct()).unwrap();
    let f = 1e8;
    let steps = 4000;
    let mut worst_tail_refl: f64 = 0.0;
    for k in 0..steps {
        let v1 = (2.0 * std::f64::consts::PI * f * k as f64 * dt).sin();
        let (r1, _) = junction.junction_step(v1, 0.0).unwrap();
        if k > steps / 2 {
            worst_tail_refl = worst_tail_refl.max(r1.abs());
        }
    }
    assert!(
        worst_tail_refl <= 1e-3,
        "vacuum panel reflected {worst_tail_refl}"
    );
}

#[test]
fn lossless_panel_is_unitary() {
    let stack = PanelStack::single(MaterialLayer::new(1e-3, 4.56, 0.0).unwrap(), 100).unwrap();
    let geom = geometry(1 << 14);
    let sim = run_panel_study(&geom, &source(), &stack, &SolverConfig::direct()).unwrap();
    for (i, &f) in sim.s_params.freqs.iter().enumerate() {
        if !(1e7..=2e9).contains(&f) {
            continue;
        }
        let power = sim.s_params.s11[i].norm_sqr() + sim.s_params.s21[i].norm_sqr();
        assert!(
            (power - 1.0).abs() <= 0.01,
            "|S11|^2 + |S21|^2 = {power} at {f:.3e} Hz"
        );
    }
}

#[test]
fn gauss_seidel_and_direct_spectra_agree() {
    let layers = vec![
        MaterialLayer::new(1e-3, 4.56, 8e3).unwrap(),
        MaterialLayer::new(1e-3, 2.0, 1e4).unwrap(),
        MaterialLayer::new(1e-3, 4.56, 8e3).unwrap(),
    ];
    let stack = PanelStack::new(layers, 30).unwrap();
    let geom = geometry(1 << 13);
    let gs = SolverConfig {
        method: SolveMethod::GaussSeidel,
        tol: 1e-12,
        max_iter: 2000,
    };
    let a = run_panel_study(&geom, &source(), &stack, &gs).unwrap();
    let b = run_panel_study(&geom, &source(), &stack, &SolverConfig::direct()).unwrap();
    for i in 0..a.s_params.len() {
        let f = a.s_params.freqs[i];
        if !(1e7..=2e9).contains(&f) {
            continue;
        }
        let d11 = (a.s_params.s11[i] - b.s_params.s11[i]).norm() / b.s_params.s11[i].norm().max(1e-9);
        let d21 = (a.s_params.s21[i] - b.s_params.s21[i]).norm() / b.s_params.s21[i].norm().max(1e-9);
        assert!(d11 <= 1e-6, "S11 methods differ by {d11} at {f:.3e}");
        assert!(d21 <= 1e-6, "S21 methods differ by {d21} at {f:.3e}");
    }
}

#[test]
fn adjacent_identical_layers_merge() {
    let split = PanelStack::new(
        vec![
            MaterialLayer::new(5e-4, 4.56, 8000.0).unwrap(),
            MaterialLayer::new(5e-4, 4.56, 8000.0).unwrap(),
        ],
        100,
    )
    .unwrap();
    let merged = PanelStack::single(MaterialLayer::new(1e-3, 4.56, 8000.0).unwrap(), 100).unwrap();
    let geom = geometry(1 << 14);
    let a = run_panel_study(&geom, &source(), &split, &SolverConfig::direct()).unwrap();
    let b = run_panel_study(&geom, &source(), &merged, &SolverConfig::direct()).unwrap();
    for i in 0..a.s_params.len() {
        let f = a.s_params.freqs[i];
        if !(1e7..=2e9).contains(&f) {
            continue;
        }
        let d11 = (a.s_params.s11[i] - b.s_params.s11[i]).norm();
        let d21 = (a.s_params.s21[i] - b.s_params.s21[i]).norm();
        assert!(d11 <= 0.01 && d21 <= 0.01, "merge mismatch at {f:.3e}");
    }
}

#[test]
fn simulated_transmission_is_reciprocal() {
    let layers = vec![
        MaterialLayer::new(6e-4, 2.0, 1e4).unwrap(),
        MaterialLayer::new(6e-4, 4.0, 50.0).unwrap(),
        MaterialLayer::new(6e-4, 3.0, 1e3).unwrap(),
    ];
    let stack = PanelStack::new(layers, 40).unwrap();
    let geom = geometry(1 << 13);
    let fwd = run_panel_study(&geom, &source(), &stack, &SolverConfig::gauss_seidel()).unwrap();
    let rev = run_panel_study(
        &geom,
        &source(),
        &stack.reversed(),
        &SolverConfig::gauss_seidel(),
    )
    .unwrap();
    for i in 0..fwd.s_params.len() {
        let f = fwd.s_params.freqs[i];
        if !(1e7..=1e9).contains(&f) {
            continue;
        }
        let diff = (fwd.s_params.s21[i].norm() - rev.s_params.s21[i].norm()).abs();
        assert!(diff <= 0.01, "|S21| not reciprocal at {f:.3e}: {diff}");
    }
}

#[test]
fn junction_splice_preserves_free_space_elsewhere() {
    // a panel on one link must not affect causality on the source side
    let stack = PanelStack::single(MaterialLayer::new(1e-3, 2.0, 1e4).unwrap(), 10).unwrap();
    let dt_link = 12;
    let mut mesh = Mesh1D::new(0.01, 24).unwrap();
    let mut junction =
        build_junction(&stack, Y0, Y0, mesh.time_step_s(), SolverConfig::direct()).unwrap();
    let records = run(
        &mut mesh,
        &SourceSpec::delta(4, 1.0),
        Some((dt_link, &mut junction)),
        &[8],
        9,
    )
    .unwrap();
    // probe at node 8 sees the outgoing pulse at step 4, nothing else yet
    for (k, &v) in records[0].samples.iter().enumerate() {
        if k == 4 {
            assert_eq!(v, 1.0);
        } else {
            assert_eq!(v, 0.0);
        }
    }
}
