//! Plain-text experiment configuration.
//!
//! One `key = value` pair per line; `#` starts a comment. Lists are comma
//! separated and matrix rows are separated by `;`. Lines with the key
//! `output` are skipped so a run manifest can be fed back as a config.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{usage, HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AlgorithmKind {
    /// Two-timescale aggregate fictitious play.
    AggFp2t,
    /// Two-timescale fictitious play with a joint-profile Q-table.
    Fp2t,
    /// Independent Q-learning with Boltzmann play.
    IndQ,
    /// Fictitious play with known rewards.
    Fp,
    /// Aggregate fictitious play with known rewards.
    AggFp,
}

impl AlgorithmKind {
    pub const ALL: [Self; 5] = [Self::AggFp2t, Self::Fp2t, Self::IndQ, Self::Fp, Self::AggFp];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::AggFp2t => "aggfp2t",
            Self::Fp2t => "fp2t",
            Self::IndQ => "indq",
            Self::Fp => "fp",
            Self::AggFp => "aggfp",
        }
    }

    /// Whether the learner keeps a Q-table with a well-defined error.
    pub fn has_q_error(self) -> bool {
        matches!(self, Self::AggFp2t | Self::Fp2t)
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| {
                HarnessError::Usage(format!(
                    "algorithms: unknown algorithm '{s}' (expected one of aggfp2t, fp2t, indq, fp, aggfp)"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GameSpec {
    Rps4,
    /// Every agent uses `matrix` against every opponent and draws its
    /// additive payoff noise from (`support`, `probs`).
    Inline {
        agents: usize,
        actions: usize,
        matrix: Vec<Vec<f64>>,
        support: Vec<f64>,
        probs: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum NeTarget {
    None,
    Uniform,
    /// The same mixed strategy for every agent.
    Symmetric(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub game: GameSpec,
    pub algorithms: Vec<AlgorithmKind>,
    pub steps: usize,
    pub seeds: Vec<u64>,
    pub delta: f64,
    pub alpha_exponent: f64,
    pub beta_exponent: f64,
    pub snapshot_stride: usize,
    pub output_dir: PathBuf,
    pub ne_target: NeTarget,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: "rps4".into(),
            game: GameSpec::Rps4,
            algorithms: vec![AlgorithmKind::AggFp2t, AlgorithmKind::Fp2t, AlgorithmKind::IndQ],
            steps: 200_000,
            seeds: vec![0],
            delta: 0.1,
            alpha_exponent: 0.7,
            beta_exponent: 0.6,
            snapshot_stride: 100,
            output_dir: PathBuf::from("out"),
            ne_target: NeTarget::Uniform,
        }
    }
}

fn parse_list<T: FromStr>(field: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| HarnessError::Usage(format!("{field}: cannot parse '{s}'")))
        })
        .collect()
}

fn parse_one<T: FromStr>(field: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| HarnessError::Usage(format!("{field}: cannot parse '{value}'")))
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

/// Inline game fields collected before the game is assembled.
#[derive(Default)]
struct InlineParts {
    agents: Option<usize>,
    actions: Option<usize>,
    matrix: Option<Vec<Vec<f64>>>,
    support: Option<Vec<f64>>,
    probs: Option<Vec<f64>>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        text.parse()
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return usage("name: must not be empty");
        }
        if self.steps == 0 {
            return usage("steps: must be at least 1");
        }
        if self.snapshot_stride == 0 {
            return usage("snapshot_stride: must be at least 1");
        }
        if !(0.0..1.0).contains(&self.delta) {
            return usage(format!("delta: {} is outside [0, 1)", self.delta));
        }
        if self.seeds.is_empty() {
            return usage("seeds: at least one seed is required");
        }
        if self.algorithms.is_empty() {
            return usage("algorithms: at least one algorithm is required");
        }
        if !(self.alpha_exponent > 0.5 && self.alpha_exponent <= 1.0) {
            return usage(format!("alpha_exponent: {} is outside (0.5, 1]", self.alpha_exponent));
        }
        if !(self.beta_exponent > 0.5 && self.beta_exponent <= 1.0) {
            return usage(format!("beta_exponent: {} is outside (0.5, 1]", self.beta_exponent));
        }
        if self.delta == 0.0 && self.algorithms.contains(&AlgorithmKind::IndQ) {
            return usage("delta: indq uses delta as its temperature, which must be positive");
        }
        let needs_two_timescales = self
            .algorithms
            .iter()
            .any(|a| matches!(a, AlgorithmKind::AggFp2t | AlgorithmKind::Fp2t));
        if needs_two_timescales && self.alpha_exponent <= self.beta_exponent {
            return usage("alpha_exponent: must exceed beta_exponent for two-timescale learners");
        }
        if let GameSpec::Inline {
            agents,
            actions,
            matrix,
            support,
            probs,
        } = &self.game
        {
            if *agents < 2 {
                return usage("agents: need at least 2");
            }
            if *actions < 1 {
                return usage("actions: need at least 1");
            }
            if matrix.len() != *actions || matrix.iter().any(|r| r.len() != *actions) {
                return usage(format!("matrix: expected {actions} rows of {actions} entries"));
            }
            if support.len() != probs.len() {
                return usage("perturbation_probs: length differs from perturbation_support");
            }
        }
        if let NeTarget::Symmetric(p) = &self.ne_target {
            let n = match &self.game {
                GameSpec::Rps4 => 3,
                GameSpec::Inline { actions, .. } => *actions,
            };
            if p.len() != n {
                return usage(format!("ne_target: expected {n} probabilities"));
            }
        }
        Ok(())
    }

    /// `key = value` text that parses back to this configuration.
    pub fn echo(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("name", self.name.clone());
        match &self.game {
            GameSpec::Rps4 => line("game", "rps4".into()),
            GameSpec::Inline {
                agents,
                actions,
                matrix,
                support,
                probs,
            } => {
                line("game", "inline".into());
                line("agents", agents.to_string());
                line("actions", actions.to_string());
                line(
                    "matrix",
                    matrix.iter().map(|r| join(r, ",")).collect::<Vec<_>>().join(";"),
                );
                line("perturbation_support", join(support, ","));
                line("perturbation_probs", join(probs, ","));
            }
        }
        line("algorithms", join(&self.algorithms, ","));
        line("steps", self.steps.to_string());
        line("seeds", join(&self.seeds, ","));
        line("delta", self.delta.to_string());
        line("alpha_exponent", self.alpha_exponent.to_string());
        line("beta_exponent", self.beta_exponent.to_string());
        line("snapshot_stride", self.snapshot_stride.to_string());
        line("output_dir", self.output_dir.display().to_string());
        line(
            "ne_target",
            match &self.ne_target {
                NeTarget::None => "none".into(),
                NeTarget::Uniform => "uniform".into(),
                NeTarget::Symmetric(p) => join(p, ","),
            },
        );
        out
    }
}

impl FromStr for ExperimentConfig {
    type Err = HarnessError;

    fn from_str(text: &str) -> Result<Self> {
        let mut config = Self::default();
        let mut inline = InlineParts::default();
        let mut game_kind: Option<String> = None;
        let mut target_given = false;
        for (number, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return usage(format!("line {}: expected 'key = value'", number + 1));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "output" => {}
                "name" => config.name = value.to_string(),
                "game" => game_kind = Some(value.to_string()),
                "agents" => inline.agents = Some(parse_one(key, value)?),
                "actions" => inline.actions = Some(parse_one(key, value)?),
                "matrix" => {
                    inline.matrix = Some(
                        value
                            .split(';')
                            .map(|row| parse_list(key, row))
                            .collect::<Result<_>>()?,
                    )
                }
                "perturbation_support" => inline.support = Some(parse_list(key, value)?),
                "perturbation_probs" => inline.probs = Some(parse_list(key, value)?),
                "algorithms" => config.algorithms = parse_list(key, value)?,
                "steps" => config.steps = parse_one(key, value)?,
                "seeds" => config.seeds = parse_list(key, value)?,
                "delta" => config.delta = parse_one(key, value)?,
                "alpha_exponent" => config.alpha_exponent = parse_one(key, value)?,
                "beta_exponent" => config.beta_exponent = parse_one(key, value)?,
                "snapshot_stride" => config.snapshot_stride = parse_one(key, value)?,
                "output_dir" => config.output_dir = PathBuf::from(value),
                "ne_target" => {
                    target_given = true;
                    config.ne_target = match value {
                        "none" => NeTarget::None,
                        "uniform" => NeTarget::Uniform,
                        list => NeTarget::Symmetric(parse_list(key, list)?),
                    }
                }
                other => return usage(format!("{other}: unknown configuration key")),
            }
        }
        match game_kind.as_deref() {
            None | Some("rps4") => {
                if inline.matrix.is_some() || inline.agents.is_some() {
                    return usage("game: inline game fields given but game is rps4");
                }
            }
            Some("inline") => {
                let actions = inline
                    .actions
                    .ok_or_else(|| HarnessError::Usage("actions: required for an inline game".into()))?;
                config.game = GameSpec::Inline {
                    agents: inline
                        .agents
                        .ok_or_else(|| HarnessError::Usage("agents: required for an inline game".into()))?,
                    actions,
                    matrix: inline
                        .matrix
                        .ok_or_else(|| HarnessError::Usage("matrix: required for an inline game".into()))?,
                    support: inline.support.unwrap_or_else(|| vec![0.0]),
                    probs: inline.probs.unwrap_or_else(|| vec![1.0]),
                };
                if !target_given {
                    config.ne_target = NeTarget::None;
                }
            }
            Some(other) => return usage(format!("game: unknown game '{other}' (expected rps4 or inline)")),
        }
        config.validate()?;
        Ok(config)
    }
}
