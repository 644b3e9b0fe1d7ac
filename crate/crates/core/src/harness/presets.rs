use super::config::RunConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub source: &'static str,
}

macro_rules! preset {
    ($name:literal) => {
        Preset { name: $name, source: include_str!(concat!("../../presets/", $name, ".toml")) }
    };
}

pub const PRESETS: &[Preset] = &[
    preset!("burgers_mpe_cfl1"),
    preset!("burgers_mpe_cfl2_1"),
    preset!("buckley_mpe"),
    preset!("tvd_sharpness"),
    preset!("ttv_study"),
    preset!("sw_dam_break"),
    preset!("weight_convergence"),
];

impl Preset {
    /// First comment line of the file.
    pub fn description(&self) -> &'static str {
        self.source.lines().next().and_then(|l| l.strip_prefix("# ")).unwrap_or("")
    }

    pub fn config(&self) -> Result<RunConfig> {
        RunConfig::from_toml(self.source)
    }
}

pub fn find_preset(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let known: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        Error::Config(format!("unknown preset '{name}', known: {}", known.join(", ")))
    })
}
