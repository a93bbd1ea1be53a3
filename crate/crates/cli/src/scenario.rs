//! Scenario files: JSON schema, eager validation with field-path
//! diagnostics, and conversion into solver types.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use cfc_tlm_core::study::StudyGeometry;
use cfc_tlm_core::{
    AnisotropicPanel, MaterialLayer, PanelStack, SolveMethod, SolverConfig, SourceSpec,
};

use crate::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub mesh: MeshSection,
    pub panel: PanelSection,
    pub excitation: ExcitationSection,
    pub solver: SolverSection,
    pub outputs: OutputsSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    pub cell_size_m: f64,
    pub node_count: usize,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<LayerSection>>,
    pub n_terms: usize,
    /// The panel occupies the link between this node and the next one.
    pub position_node: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anisotropic: Option<AnisotropicSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSection {
    pub thickness_m: f64,
    pub eps_r: f64,
    pub sigma_s_per_m: f64,
    #[serde(default = "default_mu_r")]
    pub mu_r: f64,
}

fn default_mu_r() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnisotropicSection {
    pub x_layers: Vec<LayerSection>,
    pub y_layers: Vec<LayerSection>,
    /// Polarization angle between the incident field and the x axis, degrees.
    pub phi_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcitationSection {
    pub kind: ExcitationKind,
    pub node: usize,
    pub amplitude: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaussian_sigma_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gaussian_delay_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExcitationKind {
    Delta,
    Gaussian,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub method: MethodSection,
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodSection {
    GaussSeidel,
    DirectTridiagonal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    pub directory: String,
    /// Reported band, [min_hz, max_hz].
    pub band_hz: [f64; 2],
}

/// Read and validate a scenario file.
pub fn parse_scenario(path: &Path) -> CliResult<Scenario> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let scenario: Scenario = serde_json::from_str(&text).map_err(|e| {
        CliError::Usage(format!(
            "{}:{}:{}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })?;
    scenario
        .validate()
        .map_err(|field| CliError::Usage(format!("{}: invalid {field}", path.display())))?;
    Ok(scenario)
}

fn check_layer(layer: &LayerSection, path: &str) -> Result<(), String> {
    MaterialLayer::with_mu_r(layer.thickness_m, layer.eps_r, layer.sigma_s_per_m, layer.mu_r)
        .map(|_| ())
        .map_err(|e| format!("{path}: {e}"))
}

impl Scenario {
    /// Check every invariant eagerly; the error names the offending field.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.mesh.cell_size_m > 0.0) {
            return Err("mesh.cell_size_m: must be positive".into());
        }
        if self.mesh.node_count < 3 {
            return Err("mesh.node_count: must be at least 3".into());
        }
        if self.mesh.steps < 2 {
            return Err("mesh.steps: must be at least 2".into());
        }

        match (&self.panel.layers, &self.panel.anisotropic) {
            (None, None) => return Err("panel.layers: required for isotropic panels".into()),
            (Some(layers), None) => {
                if layers.is_empty() {
                    return Err("panel.layers: must not be empty".into());
                }
                for (i, layer) in layers.iter().enumerate() {
                    check_layer(layer, &format!("panel.layers[{i}]"))?;
                }
            }
            (None, Some(aniso)) => {
                if aniso.x_layers.is_empty() {
                    return Err("panel.anisotropic.x_layers: must not be empty".into());
                }
                if aniso.y_layers.is_empty() {
                    return Err("panel.anisotropic.y_layers: must not be empty".into());
                }
                for (i, layer) in aniso.x_layers.iter().enumerate() {
                    check_layer(layer, &format!("panel.anisotropic.x_layers[{i}]"))?;
                }
                for (i, layer) in aniso.y_layers.iter().enumerate() {
                    check_layer(layer, &format!("panel.anisotropic.y_layers[{i}]"))?;
                }
                if !(0.0..=90.0).contains(&aniso.phi_deg) {
                    return Err("panel.anisotropic.phi_deg: must lie in [0, 90]".into());
                }
            }
            (Some(_), Some(_)) => {
                return Err(
                    "panel.layers: must be omitted when panel.anisotropic is present".into(),
                )
            }
        }
        if self.panel.n_terms == 0 {
            return Err("panel.n_terms: must be at least 1".into());
        }
        if self.panel.position_node + 1 >= self.mesh.node_count {
            return Err(
                "panel.position_node: panel link must fit strictly inside the mesh".into(),
            );
        }
        if self.excitation.node >= self.panel.position_node {
            return Err(
                "panel.position_node: must lie strictly between the source and the \
                 transmission probe"
                    .into(),
            );
        }

        if self.excitation.amplitude == 0.0 || !self.excitation.amplitude.is_finite() {
            return Err("excitation.amplitude: must be nonzero".into());
        }
        if self.excitation.node >= self.mesh.node_count {
            return Err("excitation.node: outside the mesh".into());
        }
        match self.excitation.kind {
            ExcitationKind::Gaussian => {
                let sigma = self
                    .excitation
                    .gaussian_sigma_s
                    .ok_or("excitation.gaussian_sigma_s: required for gaussian excitation")?;
                if !(sigma > 0.0) {
                    return Err("excitation.gaussian_sigma_s: must be positive".into());
                }
            }
            ExcitationKind::Delta => {}
        }

        if !(self.solver.tol > 0.0) {
            return Err("solver.tol: must be positive".into());
        }
        if self.solver.max_iter == 0 {
            return Err("solver.max_iter: must be at least 1".into());
        }

        let nyquist = 0.5 * cfc_tlm_core::constants::C0 / self.mesh.cell_size_m;
        let [lo, hi] = self.outputs.band_hz;
        if !(lo > 0.0 && lo < hi && hi < nyquist) {
            return Err(format!(
                "outputs.band_hz: need 0 < min < max < Nyquist ({nyquist:.3e} Hz)"
            ));
        }
        if self.outputs.directory.is_empty() {
            return Err("outputs.directory: must not be empty".into());
        }
        Ok(())
    }

    pub fn is_anisotropic(&self) -> bool {
        self.panel.anisotropic.is_some()
    }

    pub fn geometry(&self) -> StudyGeometry {
        StudyGeometry {
            cell_size_m: self.mesh.cell_size_m,
            node_count: self.mesh.node_count,
            panel_link: self.panel.position_node,
            steps: self.mesh.steps,
        }
    }

    pub fn source(&self) -> SourceSpec {
        match self.excitation.kind {
            ExcitationKind::Delta => {
                SourceSpec::delta(self.excitation.node, self.excitation.amplitude)
            }
            ExcitationKind::Gaussian => SourceSpec::gaussian(
                self.excitation.node,
                self.excitation.amplitude,
                self.excitation.gaussian_sigma_s.unwrap_or(0.0),
                self.excitation.gaussian_delay_s.unwrap_or(0.0),
            ),
        }
    }

    pub fn solver_config(&self, method_override: Option<SolveMethod>) -> SolverConfig {
        let method = method_override.unwrap_or(match self.solver.method {
            MethodSection::GaussSeidel => SolveMethod::GaussSeidel,
            MethodSection::DirectTridiagonal => SolveMethod::DirectTridiagonal,
        });
        SolverConfig {
            method,
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
        }
    }

    fn layers_to_core(layers: &[LayerSection]) -> Vec<MaterialLayer> {
        layers
            .iter()
            .map(|l| MaterialLayer {
                thickness_m: l.thickness_m,
                eps_r: l.eps_r,
                sigma_s_per_m: l.sigma_s_per_m,
                mu_r: l.mu_r,
            })
            .collect()
    }

    /// Isotropic stack with an optional truncation override.
    pub fn stack(&self, n_terms_override: Option<usize>) -> CliResult<PanelStack> {
        let layers = self
            .panel
            .layers
            .as_ref()
            .ok_or_else(|| CliError::Usage("scenario is anisotropic; no single stack".into()))?;
        let n_terms = n_terms_override.unwrap_or(self.panel.n_terms);
        PanelStack::new(Self::layers_to_core(layers), n_terms).map_err(Into::into)
    }

    /// Anisotropic panel description at the given polarization angle
    /// (defaults to the file's phi_deg).
    pub fn anisotropic_panel(
        &self,
        phi_deg_override: Option<f64>,
        n_terms_override: Option<usize>,
    ) -> CliResult<AnisotropicPanel> {
        let aniso = self
            .panel
            .anisotropic
            .as_ref()
            .ok_or_else(|| CliError::Usage("scenario is isotropic; no anisotropic panel".into()))?;
        let n_terms = n_terms_override.unwrap_or(self.panel.n_terms);
        let x = PanelStack::new(Self::layers_to_core(&aniso.x_layers), n_terms)?;
        let y = PanelStack::new(Self::layers_to_core(&aniso.y_layers), n_terms)?;
        AnisotropicPanel::from_degrees(x, y, phi_deg_override.unwrap_or(aniso.phi_deg))
            .map_err(Into::into)
    }

    pub fn band(&self) -> (f64, f64) {
        (self.outputs.band_hz[0], self.outputs.band_hz[1])
    }
}
