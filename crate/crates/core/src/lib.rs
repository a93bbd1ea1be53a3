//! Time-domain transmission-line (TLM) solver for thin single-layer,
//! multilayer, and anisotropic conductive panels.
//!
//! The mesh is a 1D chain of free-space link lines stepped by a
//! scatter/connect cycle. A thin panel is not meshed: it is spliced between
//! two adjacent nodes as a bank of digital IIR filters synthesized from the
//! layer admittance functions, and an implicit tridiagonal port system is
//! solved once per time step. An independent frequency-domain cascade
//! solution ([`oracle`]) provides the reference every time-domain result is
//! validated against.
//!
//! Module map:
//! - [`mesh`] — background 1D mesh, sources, probes, step loop
//! - [`filter`] — admittance filter banks (bilinear-transformed expansions)
//! - [`panel`] — embedded panel junctions (matrix path, closed-form path,
//!   anisotropic decomposition)
//! - [`solver`] — tridiagonal direct and Gauss-Seidel solvers
//! - [`oracle`] — analytic layered-slab reference (ABCD cascade)
//! - [`postproc`] — spectra, S-parameter extraction, shielding effectiveness
//! - [`study`] — paired reference/panel runs producing calibrated S-parameters

pub mod constants;
pub mod error;
pub mod filter;
pub mod material;
pub mod mesh;
pub mod oracle;
pub mod panel;
pub mod postproc;
pub mod solver;
pub mod study;

pub use error::{Error, Result};
pub use filter::{exact_admittance, synthesize_bank, AdmittanceFilterBank, BankKind, BiquadSection};
pub use material::{LineParams, MaterialLayer, PanelStack};
pub use mesh::{Mesh1D, ProbeRecord, SourceKind, SourceSpec};
pub use oracle::{layer_abcd, stack_s_params, thin_sheet_se, SParams, TwoPortMatrix};
pub use panel::{
    build_junction, AnisotropicJunction, AnisotropicPanel, ClosedFormJunction, JunctionStats,
    PanelJunction,
};
pub use postproc::{
    extract_s_params, shielding_effectiveness, spectrum, Deembed, SEResult, SParamExtraction,
    Spectrum,
};
pub use solver::{solve_instantaneous, thomas, SolveMethod, SolveStats, SolverConfig, Tridiagonal};
pub use study::{
    run_anisotropic_study, run_panel_study, AnisotropicStudyResult, StudyGeometry, StudyResult,
};
