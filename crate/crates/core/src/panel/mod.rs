//! Embedded thin-panel junctions.
//!
//! A panel occupies no mesh length: it replaces the connect exchange on one
//! link. Per time step the junction assembles the instantaneous tridiagonal
//! port system from its filter banks, solves it, commits the solved face
//! voltages through every bank, and hands reflected voltages back to the
//! mesh.

mod anisotropic;
mod closed_form;
mod junction;

pub use anisotropic::{AnisotropicJunction, AnisotropicPanel, AnisotropicStep};
pub use closed_form::ClosedFormJunction;
pub use junction::{build_junction, JunctionStats, PanelJunction};
