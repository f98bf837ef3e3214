use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use aggfp::discrete::{run_repeated_play, Algorithm, ExplorationConfig, PlayConfig};
use aggfp::model_free::{
    run_individual_q, run_two_timescale_aggfp, run_two_timescale_fp, IndividualQConfig,
    MetricSnapshot, TwoTimescaleConfig,
};
use aggfp::{Mixed, RandomGame, StepSizeSchedule, TwoTimescaleSchedule};
use rayon::prelude::*;

use crate::config::{AlgorithmKind, ExperimentConfig, NeTarget};
use crate::csv::emit_csv;
use crate::error::{HarnessError, Result};
use crate::games::build_game;

pub const MANIFEST_NAME: &str = "manifest.txt";

/// Metric series of one (algorithm, seed) run, keyed by file stem suffix.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSeries {
    pub algorithm: AlgorithmKind,
    pub seed: u64,
    pub series: Vec<(String, Vec<(usize, f64)>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WrittenFile {
    pub name: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub output_dir: PathBuf,
    pub files: Vec<WrittenFile>,
    pub manifest: PathBuf,
}

fn ne_target(config: &ExperimentConfig, game: &RandomGame) -> Result<Option<Mixed>> {
    let dims = game.dims();
    Ok(match &config.ne_target {
        NeTarget::None => None,
        NeTarget::Uniform => Some(Mixed::uniform(&dims)),
        NeTarget::Symmetric(p) => Some(Mixed::new(&dims, vec![p.clone(); dims.agents()])?),
    })
}

fn metric_series(snapshots: &[MetricSnapshot<f64>], agents: usize, actions: usize) -> Vec<(String, Vec<(usize, f64)>)> {
    let mut out = Vec::new();
    for i in 0..agents {
        for a in 0..actions {
            out.push((
                format!("gamma_agent{i}_action{a}"),
                snapshots.iter().map(|s| (s.k, s.gamma[i][a])).collect(),
            ));
        }
    }
    if snapshots.first().is_some_and(|s| s.q_error.is_some()) {
        out.push((
            "q_error".into(),
            snapshots.iter().map(|s| (s.k, s.q_error.unwrap_or(f64::NAN))).collect(),
        ));
    }
    if snapshots.first().is_some_and(|s| s.ne_distance.is_some()) {
        out.push((
            "ne_distance".into(),
            snapshots.iter().map(|s| (s.k, s.ne_distance.unwrap_or(f64::NAN))).collect(),
        ));
    }
    out
}

/// Runs one learner on one seed and collects its snapshot series.
pub fn run_one(
    config: &ExperimentConfig,
    game: &RandomGame,
    algorithm: AlgorithmKind,
    seed: u64,
) -> Result<RunSeries> {
    let dims = game.dims();
    let target = ne_target(config, game)?;
    let alpha = StepSizeSchedule::power(config.alpha_exponent)?;
    let beta = StepSizeSchedule::power(config.beta_exponent)?;
    let snapshots = match algorithm {
        AlgorithmKind::AggFp2t | AlgorithmKind::Fp2t => {
            let learner = TwoTimescaleConfig {
                schedule: TwoTimescaleSchedule::power(config.alpha_exponent, config.beta_exponent)?,
                delta: config.delta,
                snapshot_stride: config.snapshot_stride,
                ne_target: target,
                ..TwoTimescaleConfig::default()
            };
            let run = if algorithm == AlgorithmKind::AggFp2t {
                run_two_timescale_aggfp(game, config.steps, seed, &learner)?
            } else {
                run_two_timescale_fp(game, config.steps, seed, &learner)?
            };
            run.snapshots
        }
        AlgorithmKind::IndQ => {
            // the exploration rate doubles as the Boltzmann temperature
            let learner = IndividualQConfig {
                alpha,
                beta,
                temperature: config.delta,
                snapshot_stride: config.snapshot_stride,
                ne_target: target,
                ..IndividualQConfig::default()
            };
            run_individual_q(game, config.steps, seed, &learner)?.snapshots
        }
        AlgorithmKind::Fp | AlgorithmKind::AggFp => {
            let play = PlayConfig {
                schedule: alpha,
                exploration: ExplorationConfig::collective(config.delta)?,
                snapshot_stride: config.snapshot_stride,
                ..PlayConfig::default()
            };
            let tag = if algorithm == AlgorithmKind::Fp { Algorithm::Fp } else { Algorithm::AggFp };
            let run = run_repeated_play::<f64, _>(tag, game.base(), config.steps, seed, &play)?;
            run.snapshots
                .into_iter()
                .map(|s| {
                    let ne_distance = target
                        .as_ref()
                        .map(|t| aggfp::model_free::ne_distance(&s.individual, t))
                        .transpose()?;
                    Ok(MetricSnapshot {
                        k: s.k,
                        gamma: s.individual,
                        q_error: None,
                        ne_distance,
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(RunSeries {
        algorithm,
        seed,
        series: metric_series(&snapshots, dims.agents(), dims.actions()),
    })
}

pub fn file_name(algorithm: AlgorithmKind, seed: u64, metric: &str) -> String {
    format!("{algorithm}_seed{seed}_{metric}.csv")
}

fn write_run(dir: &Path, run: &RunSeries) -> Result<Vec<WrittenFile>> {
    run.series
        .iter()
        .map(|(metric, series)| {
            let name = file_name(run.algorithm, run.seed, metric);
            let rows = emit_csv(series, &dir.join(&name))?;
            Ok(WrittenFile { name, rows })
        })
        .collect()
}

/// Runs every (algorithm, seed) pair of `config` in parallel, writes one CSV
/// per metric series into the output directory and then the manifest.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let game = build_game(&config.game)?;
    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    let jobs: Vec<(AlgorithmKind, u64)> = config
        .algorithms
        .iter()
        .flat_map(|&a| config.seeds.iter().map(move |&s| (a, s)))
        .collect();
    let written: Vec<Vec<WrittenFile>> = jobs
        .par_iter()
        .map(|&(algorithm, seed)| {
            let run = run_one(config, &game, algorithm, seed)?;
            write_run(dir, &run)
        })
        .collect::<Result<_>>()?;
    let files: Vec<WrittenFile> = written.into_iter().flatten().collect();

    let mut manifest = String::from("# experiment manifest; feed back with --config to rerun\n");
    manifest.push_str(&config.echo());
    for f in &files {
        let _ = writeln!(manifest, "output = {} rows={}", f.name, f.rows);
    }
    let manifest_path = dir.join(MANIFEST_NAME);
    fs::write(&manifest_path, manifest).map_err(|e| HarnessError::io(&manifest_path, e))?;
    Ok(ExperimentReport {
        output_dir: dir.clone(),
        files,
        manifest: manifest_path,
    })
}
