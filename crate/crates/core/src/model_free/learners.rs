use crate::count::{sigma_ranks, ActionProfile, GameDims};
use crate::discrete::{draw_initial_profile, relax_toward, ExplorationConfig, Explorer};
use crate::error::{invalid, Result};
use crate::reward::{argmax, point_mass, row_expectation, MixedProfile, TieBreak};
use crate::rng::{self, Stream, StreamRng};
use crate::scalar::Scalar;
use crate::schedule::{StepSizeSchedule, TwoTimescaleSchedule};

use super::metrics::{expected_q_values, l1_distance, ne_distance};
use super::perturbation::RandomPayoffGame;
use super::qtable::{opponent_index, QTable};

#[derive(Debug, Clone, PartialEq)]
pub struct TwoTimescaleConfig<T> {
    pub schedule: TwoTimescaleSchedule,
    /// Probability that all agents explore together at a step.
    pub delta: f64,
    pub tie_break: TieBreak,
    pub snapshot_stride: usize,
    /// `a_0`; drawn from the initial-action stream when absent.
    pub initial: Option<ActionProfile>,
    /// Starting Q-table; zeros when absent.
    pub initial_q: Option<QTable<T>>,
    /// Equilibrium used for the distance series, if any.
    pub ne_target: Option<MixedProfile<T>>,
    pub record_actions: bool,
}

impl<T> Default for TwoTimescaleConfig<T> {
    fn default() -> Self {
        Self {
            schedule: TwoTimescaleSchedule::default(),
            delta: 0.1,
            tie_break: TieBreak::SmallestIndex,
            snapshot_stride: 100,
            initial: None,
            initial_q: None,
            ne_target: None,
            record_actions: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndividualQConfig<T> {
    /// Step sizes of the empirical action frequencies.
    pub alpha: StepSizeSchedule,
    /// Q-value step sizes, indexed by per-action visit count.
    pub beta: StepSizeSchedule,
    pub temperature: f64,
    pub snapshot_stride: usize,
    pub initial: Option<ActionProfile>,
    pub ne_target: Option<MixedProfile<T>>,
    pub record_actions: bool,
}

impl<T> Default for IndividualQConfig<T> {
    fn default() -> Self {
        let schedule = TwoTimescaleSchedule::default();
        Self {
            alpha: schedule.alpha,
            beta: schedule.beta,
            temperature: 0.1,
            snapshot_stride: 100,
            initial: None,
            ne_target: None,
            record_actions: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSnapshot<T> {
    pub k: usize,
    /// Empirical action frequencies of every agent.
    pub gamma: Vec<Vec<T>>,
    pub q_error: Option<T>,
    pub ne_distance: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFreeTrajectory<T> {
    /// Metrics at every `k` with `k % stride == 0`.
    pub snapshots: Vec<MetricSnapshot<T>>,
    /// Metrics after the last step.
    pub final_metrics: MetricSnapshot<T>,
    /// `a_0 .. a_{K-1}` when recording was requested.
    pub actions: Vec<ActionProfile>,
    pub q: QTable<T>,
}

/// What each agent believes about its opponents.
enum Tracker<T> {
    /// `mu_hat^i` over opponent counts.
    Aggregate { mu: Vec<Vec<T>> },
    /// Shared `pi_hat^j` over each agent's actions.
    Individual { pi: Vec<Vec<T>> },
}

impl<T: Scalar> Tracker<T> {
    /// Q-table column each agent visits under `profile`.
    fn columns(&self, dims: &GameDims, profile: &ActionProfile) -> Vec<usize> {
        match self {
            Self::Aggregate { .. } => sigma_ranks(dims, profile),
            Self::Individual { .. } => (0..dims.agents())
                .map(|i| opponent_index(dims, profile, i))
                .collect(),
        }
    }

    fn reset(&mut self, dims: &GameDims, profile: &ActionProfile, columns: &[usize]) {
        match self {
            Self::Aggregate { mu } => {
                *mu = columns
                    .iter()
                    .map(|&x| point_mass(dims.count_space_size(), x))
                    .collect();
            }
            Self::Individual { pi } => {
                *pi = profile
                    .actions()
                    .iter()
                    .map(|&a| point_mass(dims.actions(), a))
                    .collect();
            }
        }
    }

    fn observe(&mut self, profile: &ActionProfile, columns: &[usize], alpha: T) {
        match self {
            Self::Aggregate { mu } => {
                for (m, &x) in mu.iter_mut().zip(columns) {
                    relax_toward(m, x, alpha);
                }
            }
            Self::Individual { pi } => {
                for (p, &a) in pi.iter_mut().zip(profile.actions()) {
                    relax_toward(p, a, alpha);
                }
            }
        }
    }

    /// Belief-weighted Q-value of every own action of `agent`.
    fn expected_row(&self, q: &QTable<T>, agent: usize) -> Vec<T> {
        let n = q.dims().actions();
        match self {
            Self::Aggregate { mu } => (0..n)
                .map(|a| row_expectation(q.row(agent, a), &mu[agent]))
                .collect(),
            Self::Individual { pi } => {
                // product weights over opponent profiles, same digit order as opponent_index
                let mut weights = vec![T::one()];
                for (_, belief) in pi.iter().enumerate().filter(|(j, _)| *j != agent) {
                    weights = weights
                        .iter()
                        .flat_map(|&w| belief.iter().map(move |&p| w * p))
                        .collect();
                }
                (0..n).map(|a| row_expectation(q.row(agent, a), &weights)).collect()
            }
        }
    }
}

fn check_common(steps: usize, stride: usize) -> Result<()> {
    if steps == 0 {
        return invalid("need at least one step");
    }
    if stride == 0 {
        return invalid("snapshot stride must be positive");
    }
    Ok(())
}

fn initial_profile(dims: &GameDims, given: &Option<ActionProfile>, seed: u64) -> Result<ActionProfile> {
    match given {
        Some(a) => ActionProfile::new(dims, a.actions().to_vec()),
        None => Ok(draw_initial_profile(dims, seed)),
    }
}

fn snapshot<T: Scalar>(
    k: usize,
    gamma: &[Vec<T>],
    q: Option<(&QTable<T>, &[T])>,
    target: &Option<MixedProfile<T>>,
) -> Result<MetricSnapshot<T>> {
    Ok(MetricSnapshot {
        k,
        gamma: gamma.to_vec(),
        q_error: q.map(|(q, expected)| l1_distance(q.values(), expected)),
        ne_distance: target.as_ref().map(|t| ne_distance(gamma, t)).transpose()?,
    })
}

fn run_two_timescale<T: Scalar>(
    game: &RandomPayoffGame<T>,
    steps: usize,
    seed: u64,
    config: &TwoTimescaleConfig<T>,
    mut q: QTable<T>,
    mut tracker: Tracker<T>,
) -> Result<ModelFreeTrajectory<T>> {
    check_common(steps, config.snapshot_stride)?;
    let dims = game.dims();
    if let Some(initial) = &config.initial_q {
        if initial.dims() != dims || initial.layout() != q.layout() {
            return invalid("initial Q-table does not match the learner's layout");
        }
        q = initial.clone();
    }
    let expected = expected_q_values(game, q.layout())?;
    let mut perturbations = rng::stream(seed, Stream::Perturbation);
    let mut explorer = Explorer::from_seed(ExplorationConfig::collective(config.delta)?, seed);
    let (alpha, beta) = (config.schedule.alpha, config.schedule.beta);

    let mut current = initial_profile(&dims, &config.initial, seed)?;
    let mut gamma: Vec<Vec<T>> = Vec::new();
    let mut snapshots = Vec::with_capacity(steps.div_ceil(config.snapshot_stride));
    let mut actions = Vec::new();
    let mut rewards = vec![T::zero(); dims.agents()];

    for k in 0..steps {
        for (i, r) in rewards.iter_mut().enumerate() {
            *r = game.sample_reward_unchecked(current.actions(), i, &mut perturbations);
        }
        let columns = tracker.columns(&dims, &current);
        for (i, (&col, &r)) in columns.iter().zip(&rewards).enumerate() {
            q.update(i, current.get(i), col, r, &beta);
        }
        if k == 0 {
            tracker.reset(&dims, &current, &columns);
            gamma = current
                .actions()
                .iter()
                .map(|&a| point_mass(dims.actions(), a))
                .collect();
        } else {
            let step: T = alpha.at(k);
            tracker.observe(&current, &columns, step);
            for (g, &a) in gamma.iter_mut().zip(current.actions()) {
                relax_toward(g, a, step);
            }
        }
        if config.record_actions {
            actions.push(current.clone());
        }
        if k % config.snapshot_stride == 0 {
            snapshots.push(snapshot(k, &gamma, Some((&q, &expected)), &config.ne_target)?);
        }
        if k + 1 == steps {
            break;
        }
        let forced = explorer.draw(&dims);
        current = ActionProfile::from_vec_unchecked(
            forced
                .into_iter()
                .enumerate()
                .map(|(i, f)| f.unwrap_or_else(|| argmax(&tracker.expected_row(&q, i), config.tie_break)))
                .collect(),
        );
    }
    let final_metrics = snapshot(steps - 1, &gamma, Some((&q, &expected)), &config.ne_target)?;
    Ok(ModelFreeTrajectory {
        snapshots,
        final_metrics,
        actions,
        q,
    })
}

/// Two-timescale aggregate fictitious play.
///
/// Each step executes the current joint action, samples every agent's
/// perturbed reward, updates the visited (own action, opponent count) Q-cell,
/// moves `mu_hat` and `gamma_hat` with `alpha_k` (point masses at `k = 0`),
/// then draws one shared coin: below `delta` every agent explores uniformly,
/// otherwise agent `i` plays `argmax_a sum_x mu_hat^i(x) Q^i(a, x)`.
pub fn run_two_timescale_aggfp<T: Scalar>(
    game: &RandomPayoffGame<T>,
    steps: usize,
    seed: u64,
    config: &TwoTimescaleConfig<T>,
) -> Result<ModelFreeTrajectory<T>> {
    let dims = game.dims();
    run_two_timescale(
        game,
        steps,
        seed,
        config,
        QTable::aggregate(dims),
        Tracker::Aggregate { mu: Vec::new() },
    )
}

/// Two-timescale fictitious play baseline: the same loop with Q indexed by
/// the full opponent profile and individual beliefs. Fails with a capacity
/// error when the opponent profiles are too many to enumerate.
pub fn run_two_timescale_fp<T: Scalar>(
    game: &RandomPayoffGame<T>,
    steps: usize,
    seed: u64,
    config: &TwoTimescaleConfig<T>,
) -> Result<ModelFreeTrajectory<T>> {
    let dims = game.dims();
    run_two_timescale(
        game,
        steps,
        seed,
        config,
        QTable::joint(dims)?,
        Tracker::Individual { pi: Vec::new() },
    )
}

/// `softmax(q / temperature)`, shifted by the maximum for stability.
pub fn boltzmann<T: Scalar>(q: &[T], temperature: T) -> Vec<T> {
    let max = q.iter().copied().fold(T::neg_infinity(), T::max);
    let weights: Vec<T> = q.iter().map(|&v| ((v - max) / temperature).exp()).collect();
    let total: T = weights.iter().copied().sum();
    weights.into_iter().map(|w| w / total).collect()
}

fn sample_index<T: Scalar>(probs: &[T], rng: &mut StreamRng) -> usize {
    let u = T::cast(rng::uniform01(rng));
    let mut acc = T::zero();
    for (a, &p) in probs.iter().enumerate() {
        acc = acc + p;
        if u < acc {
            return a;
        }
    }
    probs.len() - 1
}

/// Individual Q-learning baseline: one Q-value per own action, updated with
/// per-action visit counts, and Boltzmann play at the given temperature.
/// Each agent draws one uniform per step, in agent order, from the
/// exploration stream.
pub fn run_individual_q<T: Scalar>(
    game: &RandomPayoffGame<T>,
    steps: usize,
    seed: u64,
    config: &IndividualQConfig<T>,
) -> Result<ModelFreeTrajectory<T>> {
    check_common(steps, config.snapshot_stride)?;
    if !(config.temperature > 0.0) {
        return invalid(format!("temperature {} must be positive", config.temperature));
    }
    let dims = game.dims();
    let temperature = T::cast(config.temperature);
    let mut perturbations = rng::stream(seed, Stream::Perturbation);
    let mut choices = rng::stream(seed, Stream::Exploration);
    let mut q = QTable::own_action(dims);
    let mut current = initial_profile(&dims, &config.initial, seed)?;
    let mut gamma: Vec<Vec<T>> = Vec::new();
    let mut snapshots = Vec::with_capacity(steps.div_ceil(config.snapshot_stride));
    let mut actions = Vec::new();
    let mut rewards = vec![T::zero(); dims.agents()];

    for k in 0..steps {
        for (i, r) in rewards.iter_mut().enumerate() {
            *r = game.sample_reward_unchecked(current.actions(), i, &mut perturbations);
        }
        for (i, &r) in rewards.iter().enumerate() {
            q.update(i, current.get(i), 0, r, &config.beta);
        }
        if k == 0 {
            gamma = current
                .actions()
                .iter()
                .map(|&a| point_mass(dims.actions(), a))
                .collect();
        } else {
            let step: T = config.alpha.at(k);
            for (g, &a) in gamma.iter_mut().zip(current.actions()) {
                relax_toward(g, a, step);
            }
        }
        if config.record_actions {
            actions.push(current.clone());
        }
        if k % config.snapshot_stride == 0 {
            snapshots.push(snapshot(k, &gamma, None, &config.ne_target)?);
        }
        if k + 1 == steps {
            break;
        }
        current = ActionProfile::from_vec_unchecked(
            (0..dims.agents())
                .map(|i| {
                    let values: Vec<T> = (0..dims.actions()).map(|a| q.get(i, a, 0)).collect();
                    sample_index(&boltzmann(&values, temperature), &mut choices)
                })
                .collect(),
        );
    }
    let final_metrics = snapshot(steps - 1, &gamma, None, &config.ne_target)?;
    Ok(ModelFreeTrajectory {
        snapshots,
        final_metrics,
        actions,
        q,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boltzmann_limits() {
        let p = boltzmann(&[1.0f64, 1.0, 1.0], 0.1);
        assert!(p.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-15));
        let hot = boltzmann(&[5.0f64, -3.0, 0.0], 1e12);
        assert!(hot.iter().all(|&v| (v - 1.0 / 3.0).abs() < 1e-9));
        let cold = boltzmann(&[5.0f64, -3.0, 0.0], 1e-3);
        assert!((cold[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn layout_mismatch_is_rejected() {
        use crate::game::{AnonymousPolymatrixGame, PayoffMatrix};
        let dims = GameDims::new(3, 2).unwrap();
        let base = AnonymousPolymatrixGame::symmetric(dims, PayoffMatrix::<f64>::zeros(2)).unwrap();
        let game = RandomPayoffGame::deterministic(base);
        let config = TwoTimescaleConfig {
            initial_q: Some(QTable::joint(dims).unwrap()),
            ..TwoTimescaleConfig::default()
        };
        assert!(run_two_timescale_aggfp(&game, 10, 1, &config).is_err());
    }
}
