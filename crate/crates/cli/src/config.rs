//! Configuration schemas and their lowering into library types.
//!
//! Configs are JSON with unknown keys rejected, so a typo fails fast instead
//! of silently running a different experiment.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use quditfuse::fusion::AncillaInput;
use quditfuse::graphstate::{QuditDim, QuditGraph};
use quditfuse::optimize::{HaarSampler, Objective, ObjectiveMode, OptimizeConfig};
use quditfuse::scenario::{preset_unitary, ClusterSpec, Scenario};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphConfig {
    /// Optional per-graph dimension; must match the scenario's `d`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterConfig {
    pub graph: GraphConfig,
    pub leg: String,
}

/// Complex amplitudes as (re, im) pairs.
pub type ComplexVec = Vec<(f64, f64)>;

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AncillaeConfig {
    #[serde(default)]
    pub count: usize,
    /// Optional per-ancilla single-photon states; defaults to |0⟩.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<ComplexVec>>,
}

/// Where the interferometer matrix comes from: exactly one of a named
/// preset (e.g. "qubit-type2-eq8"), a Haar seed, or a plain-text file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitarySource {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub haar_seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
}

impl UnitarySource {
    fn validate(&self) -> anyhow::Result<()> {
        let given = self.preset.is_some() as u8
            + self.haar_seed.is_some() as u8
            + self.file.is_some() as u8;
        if given != 1 {
            bail!("unitary source must set exactly one of preset, haar_seed, file");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub d: usize,
    /// Defaults to two maximally entangled pairs when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clusters: Option<Vec<ClusterConfig>>,
    #[serde(default)]
    pub ancillae: AncillaeConfig,
    #[serde(default)]
    pub vacuum_pads: usize,
    pub unitary: UnitarySource,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text)
            .with_context(|| format!("invalid scenario config {}", path.display()))?;
        cfg.unitary.validate()?;
        Ok(cfg)
    }

    pub fn to_scenario(&self) -> anyhow::Result<Scenario> {
        let dim = QuditDim::new(self.d)?;
        let clusters = match &self.clusters {
            Some(list) => {
                let mut out = Vec::with_capacity(list.len());
                for c in list {
                    if let Some(gd) = c.graph.d {
                        if gd != self.d {
                            bail!(
                                "cluster graph declares d = {gd}, scenario has d = {}",
                                self.d
                            );
                        }
                    }
                    let graph = QuditGraph::new(dim, &c.graph.vertices, &c.graph.edges)?;
                    out.push(ClusterSpec {
                        graph,
                        leg: c.leg.clone(),
                    });
                }
                out
            }
            None => Scenario::bell_pairs(self.d, 0, 0)?.clusters,
        };
        let mut ancillae = Vec::with_capacity(self.ancillae.count);
        for i in 0..self.ancillae.count {
            let state = match &self.ancillae.states {
                Some(states) => {
                    let raw = states
                        .get(i)
                        .ok_or_else(|| anyhow!("ancilla {} has no configured state", i + 1))?;
                    if raw.len() != self.d {
                        bail!(
                            "ancilla {} state has {} modes, expected {}",
                            i + 1,
                            raw.len(),
                            self.d
                        );
                    }
                    let v: Array1<C64> =
                        Array1::from_iter(raw.iter().map(|&(re, im)| C64::new(re, im)));
                    AncillaInput::new(v)?
                }
                None => AncillaInput::ground(self.d),
            };
            ancillae.push(state);
        }
        Ok(Scenario {
            dim,
            clusters,
            ancillae,
            vacuum_pads: self.vacuum_pads,
        })
    }

    /// Resolve the configured unitary for a scenario with `modes` channels.
    pub fn resolve_unitary(&self, modes: usize, base_dir: &Path) -> anyhow::Result<Array2<C64>> {
        self.unitary.validate()?;
        let u = if let Some(name) = &self.unitary.preset {
            preset_unitary(name).ok_or_else(|| anyhow!("unknown preset '{name}'"))?
        } else if let Some(seed) = self.unitary.haar_seed {
            HaarSampler::new(seed).sample(modes)
        } else {
            let file = self.unitary.file.as_ref().unwrap();
            read_unitary_text(&base_dir.join(file))?
        };
        if u.nrows() != modes {
            bail!(
                "unitary is {}×{} but the scenario needs {modes} modes",
                u.nrows(),
                u.ncols()
            );
        }
        Ok(u)
    }
}

fn objective_default_residual() -> f64 {
    quditfuse::tol::MAX_ENT_RESIDUAL
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveConfig {
    /// One of: max-success-at-full-entanglement,
    /// max-success-above-entropy-threshold, max-min-entropy-at-fixed-success.
    pub mode: String,
    #[serde(default)]
    pub entropy_threshold: f64,
    #[serde(default = "objective_default_residual")]
    pub residual_threshold: f64,
    #[serde(default)]
    pub success_target: f64,
}

impl ObjectiveConfig {
    pub fn to_objective(&self) -> anyhow::Result<Objective> {
        let mode = match self.mode.as_str() {
            "max-success-at-full-entanglement" => ObjectiveMode::MaxSuccessFullEntanglement,
            "max-success-above-entropy-threshold" => ObjectiveMode::MaxSuccessAboveEntropyThreshold,
            "max-min-entropy-at-fixed-success" => ObjectiveMode::MaxMinEntropyAtFixedSuccess,
            other => bail!("unknown objective mode '{other}'"),
        };
        Ok(Objective {
            mode,
            entropy_threshold: self.entropy_threshold,
            residual_threshold: self.residual_threshold,
            success_target: self.success_target,
        })
    }
}

fn default_restarts() -> usize {
    8
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeRunConfig {
    /// Inline scenario; its `unitary` source doubles as the warm start of the
    /// first restart lane when present as a preset or file.
    pub scenario: ScenarioConfig,
    pub objective: ObjectiveConfig,
    pub budget: usize,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default)]
    pub seed: u64,
    /// Ascending entropy thresholds; present means a trade-off curve run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<Vec<f64>>,
}

impl OptimizeRunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text)
            .with_context(|| format!("invalid optimize config {}", path.display()))?;
        cfg.scenario.unitary.validate()?;
        Ok(cfg)
    }

    pub fn optimize_config(&self, base_dir: &Path, modes: usize) -> anyhow::Result<OptimizeConfig> {
        self.scenario.unitary.validate()?;
        // A preset or file source doubles as the warm start of the first
        // restart lane; a Haar source means purely random restarts.
        let warm_start = if let Some(name) = &self.scenario.unitary.preset {
            Some(preset_unitary(name).ok_or_else(|| anyhow!("unknown preset '{name}'"))?)
        } else if let Some(file) = &self.scenario.unitary.file {
            Some(read_unitary_text(&base_dir.join(file))?)
        } else {
            None
        };
        if let Some(u) = &warm_start {
            if u.nrows() != modes {
                bail!(
                    "warm-start unitary is {}×{} but the scenario needs {modes} modes",
                    u.nrows(),
                    u.ncols()
                );
            }
        }
        Ok(OptimizeConfig {
            budget: self.budget,
            restarts: self.restarts,
            seed: self.seed,
            warm_start,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub d: Vec<usize>,
    pub ancillae: Vec<usize>,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

impl VerifyConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text)
            .with_context(|| format!("invalid verify config {}", path.display()))?;
        Ok(cfg)
    }
}

/// Plain-text unitary: the dimension K on the first line, then K rows of K
/// whitespace-separated `re im` pairs. Values are printed with Rust's
/// shortest round-trip float formatting, so write → read → write is exact.
pub fn read_unitary_text(path: &Path) -> anyhow::Result<Array2<C64>> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read unitary {}", path.display()))?;
    parse_unitary_text(&text).with_context(|| format!("invalid unitary file {}", path.display()))
}

pub fn parse_unitary_text(text: &str) -> anyhow::Result<Array2<C64>> {
    let mut tokens = text.split_whitespace();
    let k: usize = tokens
        .next()
        .ok_or_else(|| anyhow!("empty unitary file"))?
        .parse()
        .context("first token must be the dimension K")?;
    let mut m = Array2::<C64>::zeros((k, k));
    for r in 0..k {
        for c in 0..k {
            let re: f64 = tokens
                .next()
                .ok_or_else(|| anyhow!("missing entry ({r},{c})"))?
                .parse()?;
            let im: f64 = tokens
                .next()
                .ok_or_else(|| anyhow!("missing entry ({r},{c})"))?
                .parse()?;
            m[[r, c]] = C64::new(re, im);
        }
    }
    if tokens.next().is_some() {
        bail!("trailing data after {k}×{k} entries");
    }
    Ok(m)
}

pub fn format_unitary_text(u: &Array2<C64>) -> String {
    let k = u.nrows();
    let mut out = String::new();
    out.push_str(&k.to_string());
    out.push('\n');
    for r in 0..k {
        let row: Vec<String> = (0..k)
            .map(|c| format!("{} {}", u[[r, c]].re, u[[r, c]].im))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_unitary_text(path: &Path, u: &Array2<C64>) -> anyhow::Result<()> {
    fs::write(path, format_unitary_text(u))
        .with_context(|| format!("cannot write unitary {}", path.display()))?;
    Ok(())
}
