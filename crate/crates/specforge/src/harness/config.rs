//! Experiment configuration: a single JSON document with unknown keys
//! rejected, validated against all downstream parameter constraints at
//! parse time.

use crate::models::{GridSpec, PotentialSpec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot parse config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    VerifyLemmas,
    Spectrum,
    Sweep,
    Bgk,
    Symbol,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::VerifyLemmas => "verify_lemmas",
            Self::Spectrum => "spectrum",
            Self::Sweep => "sweep",
            Self::Bgk => "bgk",
            Self::Symbol => "symbol",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbstractModelConfig {
    pub count: usize,
    pub dim: usize,
    pub spectral_radius_m: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchrodingerConfig {
    pub grid: GridSpec,
    pub potential: PotentialSpec,
    pub p: f64,
    pub tau: f64,
    /// Cutoff epsilon of the restricted sums.
    pub eps: f64,
    /// Potential scalings t for the V -> tV study.
    pub scales: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    pub p: f64,
    pub alpha: f64,
    pub delta: f64,
    pub nu: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridsConfig {
    /// Points of the upper-half-plane mu grid.
    pub mu_count: usize,
    pub mu_re: (f64, f64),
    pub mu_im: (f64, f64),
    /// Sample count of the scalar property sweeps.
    pub sweep_count: usize,
}

impl Default for GridsConfig {
    fn default() -> Self {
        Self {
            mu_count: 100,
            mu_re: (-2.0, 2.0),
            mu_im: (0.05, 2.0),
            sweep_count: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    pub quadrature: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { quadrature: 1e-10 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BgkConfig {
    pub zero_count: usize,
    pub alpha: f64,
    pub beta_plus: f64,
    pub beta_minus: f64,
    pub tau: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolConfig {
    pub p: f64,
    pub d_values: Vec<u32>,
    pub grid_count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub seed: u64,
    #[serde(default)]
    pub abstract_model: Option<AbstractModelConfig>,
    #[serde(default)]
    pub schrodinger: Option<SchrodingerConfig>,
    #[serde(default)]
    pub profile: Option<ProfileConfig>,
    #[serde(default)]
    pub grids: Option<GridsConfig>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default)]
    pub bgk: Option<BgkConfig>,
    #[serde(default)]
    pub symbol: Option<SymbolConfig>,
    /// Class-(iii) separation of the tail sums.
    #[serde(default)]
    pub separation: Option<f64>,
    #[serde(default)]
    pub output: Option<String>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self, ConfigError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn grids(&self) -> GridsConfig {
        self.grids.clone().unwrap_or_default()
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.unwrap_or_default()
    }

    pub fn separation(&self) -> f64 {
        self.separation.unwrap_or(0.1)
    }

    /// Canonical serialized form used for the digest.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |msg: String| Err(ConfigError::Invalid(msg));
        if let Some(am) = &self.abstract_model {
            if am.count == 0 || am.dim == 0 {
                return fail("abstract_model.count and .dim must be positive".into());
            }
            if !(am.spectral_radius_m >= 0.0) {
                return fail("abstract_model.spectral_radius_m must be >= 0".into());
            }
        }
        if let Some(sc) = &self.schrodinger {
            sc.grid
                .validate()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
            if !(sc.tau > 0.0 && sc.tau < 1.0) {
                return fail(format!("schrodinger.tau = {} must lie in (0,1)", sc.tau));
            }
            let d = f64::from(sc.grid.d);
            if !(sc.p >= 2.0 && sc.p > d / 2.0) {
                return fail(format!(
                    "schrodinger.p = {} requires p >= 2 and p > d/2 = {}",
                    sc.p,
                    d / 2.0
                ));
            }
            if !(sc.eps > 0.0) {
                return fail("schrodinger.eps must be positive".into());
            }
            if sc.scales.is_empty() || sc.scales.iter().any(|t| !(*t > 0.0)) {
                return fail("schrodinger.scales must be nonempty and positive".into());
            }
        }
        if let Some(p) = &self.profile {
            crate::functionals::ExponentProfile::new(p.p, p.alpha, p.delta, p.nu, p.tau)
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if let Some(g) = &self.grids {
            if g.mu_count == 0 || g.sweep_count == 0 {
                return fail("grids.mu_count and grids.sweep_count must be positive".into());
            }
            if !(g.mu_im.0 > 0.0 && g.mu_im.1 > g.mu_im.0) {
                return fail("grids.mu_im must be an increasing range with positive lower end".into());
            }
            if !(g.mu_re.1 > g.mu_re.0) {
                return fail("grids.mu_re must be an increasing range".into());
            }
        }
        if let Some(t) = &self.tolerances {
            if !(t.quadrature > 0.0) {
                return fail("tolerances.quadrature must be positive".into());
            }
        }
        if let Some(b) = &self.bgk {
            if b.zero_count == 0 {
                return fail("bgk.zero_count must be positive".into());
            }
            if !(b.alpha >= 0.0 && b.beta_plus >= 0.0 && b.beta_minus >= 0.0) {
                return fail("bgk exponents must be nonnegative".into());
            }
            if !(b.tau > 0.0) {
                return fail("bgk.tau must be positive".into());
            }
        }
        if let Some(s) = &self.symbol {
            if s.grid_count == 0 {
                return fail("symbol.grid_count must be positive".into());
            }
            for &d in &s.d_values {
                if d < 2 || !(s.p >= 2.0 && s.p > f64::from(d) / 2.0) {
                    return fail(format!(
                        "symbol: d = {d}, p = {} violate d >= 2, p >= 2, p > d/2",
                        s.p
                    ));
                }
            }
        }
        if let Some(sep) = self.separation {
            if !(sep > 0.0) {
                return fail("separation must be positive".into());
            }
        }
        // Kind-specific required sections.
        match self.experiment {
            ExperimentKind::Spectrum => {
                if self.abstract_model.is_none() && self.schrodinger.is_none() {
                    return fail(
                        "spectrum experiment needs abstract_model or schrodinger".into(),
                    );
                }
            }
            ExperimentKind::Sweep => {
                if self.abstract_model.is_none() {
                    return fail("sweep experiment needs abstract_model".into());
                }
                if self.profile.is_none() {
                    return fail("sweep experiment needs profile".into());
                }
            }
            ExperimentKind::Bgk => {
                if self.bgk.is_none() {
                    return fail("bgk experiment needs the bgk section".into());
                }
            }
            ExperimentKind::Symbol => {
                if self.symbol.is_none() {
                    return fail("symbol experiment needs the symbol section".into());
                }
            }
            ExperimentKind::VerifyLemmas => {}
        }
        Ok(())
    }
}
