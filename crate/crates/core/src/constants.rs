//! Physical constants used throughout the solver.

/// Speed of light in vacuum (m/s).
pub const C0: f64 = 299_792_458.0;

/// Vacuum permeability (H/m).
pub const MU0: f64 = 4.0e-7 * std::f64::consts::PI;

/// Vacuum permittivity (F/m).
pub const EPS0: f64 = 1.0 / (MU0 * C0 * C0);

/// Free-space wave impedance (ohms), ~376.730.
pub const ETA0: f64 = MU0 * C0;

/// Admittance of the free-space link lines (siemens), 1/ETA0.
pub const Y0: f64 = 1.0 / ETA0;
