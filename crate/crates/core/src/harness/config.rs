use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::integrators::IntegratorId;
use crate::problems::{Boundary, Problem, ProblemId, ProblemParams};
use crate::space::{FluxId, NumericalFlux};

/// What `presets run` does with a config.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Study {
    #[default]
    Run,
    Convergence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    pub id: ProblemId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_grav: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub buckley_standard: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub amplitude: Option<f64>,
}

impl ProblemSection {
    pub fn params(&self) -> ProblemParams {
        ProblemParams {
            u1: self.u1,
            u2: self.u2,
            a: self.a,
            g_grav: self.g_grav,
            buckley_standard: self.buckley_standard,
            mean: self.mean,
            amplitude: self.amplitude,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    pub flux: FluxId,
    pub integrator: IntegratorId,
    /// Run every Patankar weight at one, i.e. the underlying explicit method.
    #[serde(default)]
    pub frozen_weights: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshSection {
    /// Cell counts, strictly increasing.
    pub n: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<Boundary>,
}

fn default_max_steps() -> usize {
    10_000_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSection {
    pub t_end: f64,
    pub cfl: f64,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

fn default_out_dir() -> String {
    "out".into()
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_out_dir")]
    pub out_dir: String,
    /// Keep the full space-time state array in memory.
    #[serde(default)]
    pub keep_fields: bool,
    /// Write `field.csv`; needs `keep_fields`.
    #[serde(default)]
    pub dump_fields: bool,
    /// Keep every `field_every`-th time level in `field.csv` (the final one is always kept).
    #[serde(default = "one")]
    pub field_every: usize,
    /// Keep the stage records of every step in memory.
    #[serde(default)]
    pub keep_stages: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { out_dir: default_out_dir(), keep_fields: false, dump_fields: false, field_every: 1, keep_stages: false }
    }
}

fn default_radius() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsSection {
    /// Cells on each side of a detected shock left out of the weight deviation.
    #[serde(default = "default_radius")]
    pub exclusion_radius: usize,
    /// Evaluate the weak-form residuals; needs `output.keep_fields`.
    #[serde(default)]
    pub weak_form: bool,
    /// Interfaces searched for the numerical shock; defaults to a window
    /// derived from the exact solution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shock_window: Option<[f64; 2]>,
    /// Sample the exact solution at every time level for its time variation.
    #[serde(default)]
    pub exact_ttv: bool,
}

impl Default for DiagnosticsSection {
    fn default() -> Self {
        Self { exclusion_radius: default_radius(), weak_form: false, shock_window: None, exact_ttv: false }
    }
}

/// A flux and integrator that vary together in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemePair {
    pub flux: FluxId,
    pub integrator: IntegratorId,
}

/// Lists expanded into one run per combination. `scheme` and `integrator`
/// are alternatives; `scheme` sets the flux as well.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cfl: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub integrator: Vec<IntegratorId>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scheme: Vec<SchemePair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub study: Study,
    #[serde(default)]
    pub seed: u64,
    pub problem: ProblemSection,
    pub scheme: SchemeSection,
    pub mesh: MeshSection,
    pub time: TimeSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub diagnostics: DiagnosticsSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.mesh.n.is_empty() {
            return bad("mesh.n must list at least one cell count".into());
        }
        if self.mesh.n.windows(2).any(|w| w[1] <= w[0]) {
            return bad(format!("mesh.n must be strictly increasing, got {:?}", self.mesh.n));
        }
        if let Some(&n) = self.mesh.n.iter().find(|&&n| n < 3) {
            return bad(format!("mesh.n entries must be at least 3, got {n}"));
        }
        let cfls = self.cfl_values();
        if let Some(c) = cfls.iter().find(|c| !(**c > 0.0 && c.is_finite())) {
            return bad(format!("cfl must be positive and finite, got {c}"));
        }
        if !(self.time.t_end > 0.0 && self.time.t_end.is_finite()) {
            return bad(format!("time.t_end must be positive and finite, got {}", self.time.t_end));
        }
        if self.time.max_steps == 0 {
            return bad("time.max_steps must be positive".into());
        }
        if self.output.dump_fields && !self.output.keep_fields {
            return bad("output.dump_fields needs output.keep_fields = true".into());
        }
        if self.diagnostics.weak_form && !self.output.keep_fields {
            return bad("diagnostics.weak_form needs output.keep_fields = true".into());
        }
        if self.output.field_every == 0 {
            return bad("output.field_every must be positive".into());
        }
        if let Some([lo, hi]) = self.diagnostics.shock_window {
            if !(lo < hi) {
                return bad(format!("diagnostics.shock_window must satisfy lo < hi, got [{lo}, {hi}]"));
            }
        }
        if let Some(s) = &self.sweep {
            if !s.scheme.is_empty() && !s.integrator.is_empty() {
                return bad("sweep.scheme and sweep.integrator cannot both be given".into());
            }
        }
        let problem = self.build_problem().map_err(|e| Error::Config(e.to_string()))?;
        for pair in self.scheme_values() {
            pair.integrator.validate().map_err(|e| Error::Config(e.to_string()))?;
            NumericalFlux::new(pair.flux, problem.law).map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }

    pub fn build_problem(&self) -> Result<Problem> {
        let mut problem = Problem::new(self.problem.id, &self.problem.params())?;
        if let Some(b) = self.mesh.boundary {
            problem.boundary = b;
        }
        Ok(problem)
    }

    fn cfl_values(&self) -> Vec<f64> {
        match &self.sweep {
            Some(s) if !s.cfl.is_empty() => s.cfl.clone(),
            _ => vec![self.time.cfl],
        }
    }

    fn scheme_values(&self) -> Vec<SchemePair> {
        let flux = self.scheme.flux;
        match &self.sweep {
            Some(s) if !s.scheme.is_empty() => s.scheme.clone(),
            Some(s) if !s.integrator.is_empty() => {
                s.integrator.iter().map(|&integrator| SchemePair { flux, integrator }).collect()
            }
            _ => vec![SchemePair { flux, integrator: self.scheme.integrator }],
        }
    }

    /// One config per sweep combination (schemes outer, CFL inner), without a sweep section.
    pub fn expand(&self) -> Vec<RunConfig> {
        let mut out = Vec::new();
        for pair in self.scheme_values() {
            for cfl in self.cfl_values() {
                let mut c = self.clone();
                c.sweep = None;
                c.scheme.flux = pair.flux;
                c.scheme.integrator = pair.integrator;
                c.time.cfl = cfl;
                out.push(c);
            }
        }
        out
    }

    /// This config restricted to a single cell count.
    pub fn with_n(&self, n: usize) -> RunConfig {
        let mut c = self.clone();
        c.mesh.n = vec![n];
        c
    }

    /// Stable identifier built from the scheme, CFL and the first cell count.
    pub fn run_id(&self) -> String {
        let raw = format!(
            "{}_{}_{}_{}_cfl{}_n{}",
            self.name.as_deref().unwrap_or("run"),
            self.problem.id.as_str(),
            serde_plain(&self.scheme.flux),
            self.scheme.integrator,
            self.time.cfl,
            self.mesh.n[0]
        );
        raw.chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' || c == '_' { c } else { '_' })
            .collect::<String>()
            .replace("__", "_")
            .trim_end_matches('_')
            .to_string()
    }

    /// SHA-256 over the canonical TOML form, hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_toml().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub(crate) fn serde_plain<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[problem]
id = "burgers"
u1 = 2.0
u2 = 1e-13

[scheme]
flux = "upwind"
integrator = "mpe"

[mesh]
n = [100, 200]

[time]
t_end = 0.5
cfl = 0.9
"#;

    #[test]
    fn parses_minimal_config_with_defaults() {
        let c = RunConfig::from_toml(BASE).unwrap();
        assert_eq!(c.mesh.n, vec![100, 200]);
        assert_eq!(c.output, OutputSection::default());
        assert_eq!(c.diagnostics.exclusion_radius, 5);
        assert_eq!(c.study, Study::Run);
        assert_eq!(RunConfig::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn rejects_invalid_configs() {
        let cases = [
            BASE.replace("n = [100, 200]", "n = [200, 100]"),
            BASE.replace("n = [100, 200]", "n = []"),
            BASE.replace("cfl = 0.9", "cfl = -1.0"),
            BASE.replace("t_end = 0.5", "t_end = 0.0"),
            BASE.replace("\"mpe\"", "\"mprk22(alpha=0.3)\""),
            BASE.replace("\"mpe\"", "\"rk4\""),
            BASE.replace("\"burgers\"", "\"sw_dam_break\""),
            BASE.replace("u1 = 2.0", "u1 = 2.0\nbogus = 1"),
            BASE.replace("u2 = 1e-13", "u2 = -1.0"),
            format!("{BASE}\n[diagnostics]\nweak_form = true\n"),
            format!("{BASE}\n[output]\ndump_fields = true\n"),
            format!("{BASE}\n[sweep]\nintegrator = [\"mpe\"]\nscheme = [{{ flux = \"rusanov\", integrator = \"mpe\" }}]\n"),
        ];
        for text in &cases {
            let err = RunConfig::from_toml(text).unwrap_err();
            assert!(err.is_config_error(), "{text}: {err}");
        }
    }

    #[test]
    fn sweep_expands_every_combination() {
        let text = format!("{BASE}\n[sweep]\ncfl = [0.5, 1.0, 2.0]\nintegrator = [\"mpe\", \"mpdec3\"]\n");
        let c = RunConfig::from_toml(&text).unwrap();
        let runs = c.expand();
        assert_eq!(runs.len(), 6);
        assert!(runs.iter().all(|r| r.sweep.is_none()));
        assert_eq!(runs[4].scheme.integrator, IntegratorId::Mpdec { order: 3 });
        assert_eq!(runs[4].time.cfl, 1.0);
        let ids: std::collections::HashSet<String> = runs.iter().map(|r| r.with_n(100).run_id()).collect();
        assert_eq!(ids.len(), 6);
    }

    #[test]
    fn scheme_sweep_pairs_flux_with_integrator() {
        let text = format!(
            "{BASE}\n[sweep]\nscheme = [{{ flux = \"weno2\", integrator = \"mpdec2\" }}, {{ flux = \"weno5\", integrator = \"mpdec5\" }}]\n"
        );
        let runs = RunConfig::from_toml(&text).unwrap().expand();
        assert_eq!(runs.len(), 2);
        assert_eq!((runs[1].scheme.flux, runs[1].scheme.integrator), (FluxId::Weno5, IntegratorId::Mpdec { order: 5 }));
    }

    #[test]
    fn run_id_and_hash_are_stable() {
        let c = RunConfig::from_toml(&BASE.replace("\"mpe\"", "\"mprk22(alpha=0.5)\"")).unwrap().with_n(100);
        assert_eq!(c.run_id(), "run_burgers_upwind_mprk22_alpha_0.5_cfl0.9_n100");
        assert_eq!(c.hash(), c.clone().hash());
        assert_eq!(c.hash().len(), 64);
        assert_ne!(c.hash(), c.with_n(200).hash());
    }
}
