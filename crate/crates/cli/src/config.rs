//! Scan configuration: JSON on disk, defaults for every field, unknown keys
//! rejected.

use std::path::Path;

use e2e_core::amplitudes::{McConfig, Model};
use e2e_core::kinematics::{build_coplanar, ev_to_hartree, Kinematics};
use e2e_core::spin::PolarizationVector;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    #[default]
    Pwba,
    C3,
}

impl From<ModelName> for Model {
    fn from(m: ModelName) -> Model {
        match m {
            ModelName::Pwba => Model::Pwba,
            ModelName::C3 => Model::C3,
        }
    }
}

impl std::str::FromStr for ModelName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "pwba" => Ok(ModelName::Pwba),
            "c3" => Ok(ModelName::C3),
            _ => Err(format!("unknown model '{s}' (expected pwba or c3)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomPolarization {
    pub p1: [f64; 3],
    pub p2: [f64; 3],
}

/// Initial spin preparation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Fully polarized, P₁ = ẑ ⊥ P₂ = x̂.
    Perp,
    /// P₁ = ẑ, P₂ = −ẑ.
    Antiparallel,
    /// P₁ = ẑ, electron 2 unpolarized.
    OneUnpolarized,
    #[default]
    Unpolarized,
    Custom(CustomPolarization),
}

impl Scenario {
    pub fn polarizations(&self) -> Result<(PolarizationVector, PolarizationVector), CliError> {
        let z = PolarizationVector::Z;
        Ok(match self {
            Scenario::Perp => (z, PolarizationVector::X),
            Scenario::Antiparallel => (z, -z),
            Scenario::OneUnpolarized => (z, PolarizationVector::ZERO),
            Scenario::Unpolarized => (PolarizationVector::ZERO, PolarizationVector::ZERO),
            Scenario::Custom(c) => {
                let v = |p: [f64; 3], name: &str| {
                    PolarizationVector::new(p[0], p[1], p[2])
                        .map_err(|e| CliError::Config(format!("scenario.custom.{name}: {e}")))
                };
                (v(c.p1, "p1")?, v(c.p2, "p2")?)
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Perp => "perp",
            Scenario::Antiparallel => "antiparallel",
            Scenario::OneUnpolarized => "one_unpolarized",
            Scenario::Unpolarized => "unpolarized",
            Scenario::Custom(_) => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grid {
    pub theta_min_deg: f64,
    pub theta_max_deg: f64,
    pub step_deg: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { theta_min_deg: -180.0, theta_max_deg: 180.0, step_deg: 2.0 }
    }
}

impl Grid {
    /// Number of steps between the endpoints.
    fn steps(&self) -> Result<usize, CliError> {
        let bad = |m: &str| CliError::Config(format!("grid: {m}"));
        for (name, v) in [
            ("theta_min_deg", self.theta_min_deg),
            ("theta_max_deg", self.theta_max_deg),
            ("step_deg", self.step_deg),
        ] {
            if !v.is_finite() {
                return Err(bad(&format!("{name} is not finite")));
            }
        }
        if !(self.step_deg > 0.0) {
            return Err(bad("step_deg must be positive"));
        }
        if self.theta_max_deg < self.theta_min_deg {
            return Err(bad("theta_max_deg is below theta_min_deg"));
        }
        let n = (self.theta_max_deg - self.theta_min_deg) / self.step_deg;
        if (n - n.round()).abs() > 1e-9 * n.max(1.0) {
            return Err(bad("step_deg does not divide the angular range"));
        }
        Ok(n.round() as usize)
    }

    /// Angles from min to max inclusive.
    pub fn angles(&self) -> Result<Vec<f64>, CliError> {
        let n = self.steps()?;
        Ok((0..=n).map(|i| self.theta_min_deg + i as f64 * self.step_deg).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct McSection {
    pub samples: u64,
    pub seed: u64,
    pub lambda1: f64,
    pub r_max: f64,
    pub debug_free_limit: bool,
}

impl Default for McSection {
    fn default() -> Self {
        let d = McConfig::default();
        McSection {
            samples: d.samples,
            seed: d.seed,
            lambda1: d.lambda1,
            r_max: d.r_max,
            debug_free_limit: d.debug_free_limit,
        }
    }
}

impl From<McSection> for McConfig {
    fn from(m: McSection) -> McConfig {
        McConfig {
            samples: m.samples,
            seed: m.seed,
            lambda1: m.lambda1,
            r_max: m.r_max,
            debug_free_limit: m.debug_free_limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub csv: String,
    /// Images are written as `<prefix>_<field>.pgm`.
    pub pgm_prefix: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { csv: "scan.csv".into(), pgm_prefix: "scan".into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub model: ModelName,
    pub e0_ev: f64,
    /// Split the excess energy equally. Mutually exclusive with `eb_ev`.
    pub equal_sharing: Option<bool>,
    pub eb_ev: Option<f64>,
    pub et_ev: f64,
    pub scenario: Scenario,
    pub grid: Grid,
    pub threshold_frac: f64,
    pub mc: McSection,
    pub output: OutputSection,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            model: ModelName::Pwba,
            e0_ev: 54.4,
            equal_sharing: None,
            eb_ev: None,
            et_ev: -13.605693,
            scenario: Scenario::Unpolarized,
            grid: Grid::default(),
            threshold_frac: 0.05,
            mc: McSection::default(),
            output: OutputSection::default(),
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let field = |name: &str, msg: &str| Err(CliError::Config(format!("{name}: {msg}")));
        if !(self.e0_ev.is_finite() && self.e0_ev > 0.0) {
            return field("e0_ev", "must be a positive energy");
        }
        if !self.et_ev.is_finite() {
            return field("et_ev", "must be finite");
        }
        match (self.equal_sharing, self.eb_ev) {
            (Some(true), Some(_)) => return field("eb_ev", "cannot be combined with equal_sharing = true"),
            (Some(false), None) => return field("eb_ev", "required when equal_sharing = false"),
            (_, Some(eb)) if !(eb.is_finite() && eb > 0.0) => return field("eb_ev", "must be a positive energy"),
            _ => {}
        }
        if !(0.0..=1.0).contains(&self.threshold_frac) {
            return field("threshold_frac", "must lie in [0, 1]");
        }
        self.grid.angles()?;
        self.scenario.polarizations()?;
        McConfig::from(self.mc).validate().map_err(|e| CliError::Config(format!("mc: {e}")))?;
        if self.output.csv.is_empty() {
            return field("output.csv", "must not be empty");
        }
        self.energies_hartree()?;
        Ok(())
    }

    /// (e0, eB, eT) in hartree.
    pub fn energies_hartree(&self) -> Result<(f64, f64, f64), CliError> {
        let e0 = ev_to_hartree(self.e0_ev);
        let et = ev_to_hartree(self.et_ev);
        let eb = match self.eb_ev {
            Some(eb) => ev_to_hartree(eb),
            None => 0.5 * (e0 + et),
        };
        if e0 + et - eb <= 0.0 || eb <= 0.0 {
            return Err(CliError::Config(format!(
                "eb_ev: channel closed, {} eV available to the two electrons",
                self.e0_ev + self.et_ev
            )));
        }
        Ok((e0, eb, et))
    }

    pub fn kinematics(&self, theta_a_deg: f64, theta_b_deg: f64) -> Result<Kinematics, CliError> {
        let (e0, eb, et) = self.energies_hartree()?;
        build_coplanar(e0, eb, theta_a_deg.to_radians(), theta_b_deg.to_radians(), et).map_err(CliError::Numeric)
    }
}

pub fn parse_config(text: &str) -> Result<ScanConfig, CliError> {
    let cfg: ScanConfig = serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ScanConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| match e {
        CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}
