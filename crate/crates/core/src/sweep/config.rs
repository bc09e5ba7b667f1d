use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::presets::preset;
use super::SweepError;

pub const FLAGS_PLACEHOLDER: &str = "{FLAGS}";
pub const DEFAULT_TIMEOUT_SECONDS: f64 = 900.0;
pub const DEFAULT_GRID_CAP: usize = 10_000;
/// Overrides `toolchain.compiler_path` when set.
pub const CC_ENV: &str = "INLINESCOPE_CC";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AxisKind {
    IntegerSequence { start: i64, step: i64, count: usize },
    BooleanFlip { default: bool },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PassVia {
    Frontend,
    /// Wrapped as `-mllvm <name>=<value>`.
    #[default]
    MiddleEnd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagAxis {
    pub name: String,
    pub kind: AxisKind,
    #[serde(default)]
    pub pass_via: PassVia,
}

impl FlagAxis {
    /// Option name without leading dashes, e.g. `inline-threshold`.
    pub fn bare_name(&self) -> &str {
        self.name.trim_start_matches('-')
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Toolchain {
    #[serde(default = "default_compiler")]
    pub compiler_path: String,
    #[serde(default)]
    pub extra_env: BTreeMap<String, String>,
}

fn default_compiler() -> String {
    "clang".into()
}

impl Default for Toolchain {
    fn default() -> Self {
        Toolchain {
            compiler_path: default_compiler(),
            extra_env: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Project {
    pub name: String,
    pub source_dir: PathBuf,
    /// Shell command run inside a private copy of `source_dir`. `{FLAGS}`
    /// must appear exactly once; `{CC}` is optional.
    pub build_command_template: String,
    /// Relative to the work directory.
    pub artifact_glob: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioAggregation {
    /// Pooled counts over all binaries, i.e. a mean weighted by function count.
    #[default]
    SizeWeighted,
    Plain,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub toolchain: Toolchain,
    pub projects: Vec<Project>,
    #[serde(default)]
    pub axes: Vec<FlagAxis>,
    /// Each entry may hold several whitespace-separated flags.
    #[serde(default)]
    pub base_flags: Vec<String>,
    #[serde(default = "default_timeout")]
    pub per_build_timeout: f64,
    #[serde(default = "one")]
    pub parallelism: usize,
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default = "default_cap")]
    pub grid_cap: usize,
    #[serde(default = "yes")]
    pub force_debug_info: bool,
    #[serde(default)]
    pub ratio_aggregation: RatioAggregation,
}

fn default_timeout() -> f64 {
    DEFAULT_TIMEOUT_SECONDS
}
fn one() -> usize {
    1
}
fn default_cap() -> usize {
    DEFAULT_GRID_CAP
}
fn yes() -> bool {
    true
}

impl SweepConfig {
    /// Parses YAML; relative `source_dir`s resolve against `base_dir`.
    pub fn from_yaml_str(text: &str, base_dir: &Path) -> Result<Self, SweepError> {
        let mut config: SweepConfig = serde_yaml::from_str(text).map_err(|e| SweepError::Config(e.to_string()))?;
        for p in &mut config.projects {
            if p.source_dir.is_relative() {
                p.source_dir = base_dir.join(&p.source_dir);
            }
        }
        if let Ok(cc) = std::env::var(CC_ENV) {
            if !cc.is_empty() {
                config.toolchain.compiler_path = cc;
            }
        }
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, SweepError> {
        let text = std::fs::read_to_string(path).map_err(|e| SweepError::Io(format!("{}: {e}", path.display())))?;
        Self::from_yaml_str(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn to_yaml(&self) -> String {
        serde_yaml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let bad = |m: String| Err(SweepError::Config(m));
        if self.projects.is_empty() {
            return bad("no projects".into());
        }
        for p in &self.projects {
            let n = p.build_command_template.matches(FLAGS_PLACEHOLDER).count();
            if n != 1 {
                return bad(format!(
                    "project '{}': {FLAGS_PLACEHOLDER} appears {n} times, expected once",
                    p.name
                ));
            }
            if p.artifact_glob.trim().is_empty() {
                return bad(format!("project '{}': empty artifact_glob", p.name));
            }
        }
        if self.per_build_timeout.is_nan() || self.per_build_timeout <= 0.0 {
            return bad(format!(
                "per_build_timeout must be positive, got {}",
                self.per_build_timeout
            ));
        }
        if self.parallelism == 0 {
            return bad("parallelism must be at least 1".into());
        }
        for a in &self.axes {
            if let AxisKind::IntegerSequence { step, count, .. } = a.kind {
                if count == 0 {
                    return bad(format!("axis '{}': count must be at least 1", a.name));
                }
                if step == 0 {
                    return bad(format!("axis '{}': step must be nonzero", a.name));
                }
            }
        }
        if let Some(name) = &self.preset {
            if preset(name).is_none() {
                return Err(SweepError::UnknownPreset(name.clone()));
            }
        }
        Ok(())
    }

    pub fn timeout(&self) -> std::time::Duration {
        std::time::Duration::from_secs_f64(self.per_build_timeout)
    }
}
