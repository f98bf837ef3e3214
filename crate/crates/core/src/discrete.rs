//! Repeated play of a known game: classical fictitious play (FP), aggregate
//! fictitious play (agg-FP), empirical action frequencies and delta-greedy
//! exploration.
//!
//! Step convention: at step `k` the joint action `a_k` is observed, every
//! belief is moved toward it with step size `alpha_k`, and only then is
//! `a_{k+1}` chosen. Step 0 initializes beliefs to point masses on `a_0`.

use std::fmt;
use std::str::FromStr;

use crate::count::{sigma_ranks, ActionProfile, GameDims};
use crate::error::{invalid, Error, Result};
use crate::game::{RewardModel, SuccinctReward};
use crate::reward::{argmax, point_mass, simplex_drift, TieBreak};
use crate::rng::{self, Stream, StreamRng};
use crate::scalar::Scalar;
use crate::schedule::StepSizeSchedule;

/// `v <- v + alpha * (e_at - v)`.
#[inline]
pub(crate) fn relax_toward<T: Scalar>(v: &mut [T], at: usize, alpha: T) {
    for (b, p) in v.iter_mut().enumerate() {
        let target = if b == at { T::one() } else { T::zero() };
        *p = *p + alpha * (target - *p);
    }
}

fn checked_relax<T: Scalar>(v: &mut [T], at: usize, alpha: T, what: &str) -> Result<()> {
    if !(alpha > T::zero() && alpha <= T::one()) {
        return invalid(format!("step size {alpha} outside (0, 1]"));
    }
    if at >= v.len() {
        return invalid(format!("{what} {at} out of range for a vector of length {}", v.len()));
    }
    relax_toward(v, at, alpha);
    Ok(())
}

/// Moves a belief about one opponent toward the action it was seen playing.
pub fn fp_belief_update<T: Scalar>(belief: &mut [T], action: usize, alpha: T) -> Result<()> {
    checked_relax(belief, action, alpha, "action")
}

/// Moves an aggregate belief toward the observed opponent count (given by rank).
pub fn aggfp_belief_update<T: Scalar>(mu: &mut [T], count_rank: usize, alpha: T) -> Result<()> {
    checked_relax(mu, count_rank, alpha, "count rank")
}

/// Moves an agent's own empirical action frequencies toward its latest action.
pub fn empirical_update<T: Scalar>(gamma: &mut [T], action: usize, alpha: T) -> Result<()> {
    checked_relax(gamma, action, alpha, "action")
}

/// Beliefs shared by all agents after observing the same history.
///
/// Individual beliefs `pi_hat^j` are stored once, since every agent sees
/// every action and uses the same step sizes. They double as the empirical
/// action frequencies `gamma_hat^j`, which obey the identical recurrence.
/// Aggregate beliefs `mu_hat^i` differ per agent and are stored separately.
#[derive(Debug, Clone, PartialEq)]
pub struct BeliefState<T> {
    dims: GameDims,
    individual: Vec<Vec<T>>,
    aggregate: Vec<Vec<T>>,
}

impl<T: Scalar> BeliefState<T> {
    /// Point masses on `a_0` and on each agent's opponent count in `a_0`.
    pub fn from_initial(dims: GameDims, a0: &ActionProfile) -> Result<Self> {
        let a0 = ActionProfile::new(&dims, a0.actions().to_vec())?;
        let individual = a0
            .actions()
            .iter()
            .map(|&a| point_mass(dims.actions(), a))
            .collect();
        let aggregate = sigma_ranks(&dims, &a0)
            .into_iter()
            .map(|x| point_mass(dims.count_space_size(), x))
            .collect();
        Ok(Self {
            dims,
            individual,
            aggregate,
        })
    }

    pub fn dims(&self) -> GameDims {
        self.dims
    }

    /// Updates every individual and aggregate belief with one observed profile.
    pub fn observe(&mut self, profile: &ActionProfile, alpha: T) {
        for (belief, &a) in self.individual.iter_mut().zip(profile.actions()) {
            relax_toward(belief, a, alpha);
        }
        for (mu, x) in self.aggregate.iter_mut().zip(sigma_ranks(&self.dims, profile)) {
            relax_toward(mu, x, alpha);
        }
    }

    pub fn individual(&self, agent: usize) -> &[T] {
        &self.individual[agent]
    }

    pub fn individual_all(&self) -> &[Vec<T>] {
        &self.individual
    }

    pub fn aggregate(&self, agent: usize) -> &[T] {
        &self.aggregate[agent]
    }

    pub fn aggregate_all(&self) -> &[Vec<T>] {
        &self.aggregate
    }

    pub fn empirical(&self, agent: usize) -> &[T] {
        &self.individual[agent]
    }

    /// Worst distance from the simplex over all stored vectors.
    pub fn max_drift(&self) -> f64 {
        self.individual
            .iter()
            .chain(&self.aggregate)
            .map(|v| simplex_drift(v))
            .fold(0.0, f64::max)
    }
}

/// Delta-greedy exploration: with probability `delta` an agent plays a
/// uniformly random action instead of its best response. With a shared coin
/// all agents explore together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExplorationConfig {
    delta: f64,
    shared_coin: bool,
}

impl ExplorationConfig {
    pub fn greedy() -> Self {
        Self {
            delta: 0.0,
            shared_coin: true,
        }
    }

    pub fn collective(delta: f64) -> Result<Self> {
        Self::new(delta, true)
    }

    pub fn independent(delta: f64) -> Result<Self> {
        Self::new(delta, false)
    }

    /// `delta` may be 1 (pure exploration); the harness restricts it further.
    pub fn new(delta: f64, shared_coin: bool) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return invalid(format!("exploration probability {delta} outside [0, 1]"));
        }
        Ok(Self { delta, shared_coin })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn shared_coin(&self) -> bool {
        self.shared_coin
    }
}

impl Default for ExplorationConfig {
    fn default() -> Self {
        Self::greedy()
    }
}

/// Exploration decisions drawn from one random stream.
///
/// Shared coin: one uniform draw per step; if it falls below `delta`, every
/// agent draws its action in agent order. Independent: each agent in turn
/// draws its own coin and, if exploring, its action. Nothing is drawn when
/// `delta = 0`.
#[derive(Debug, Clone)]
pub struct Explorer {
    config: ExplorationConfig,
    rng: StreamRng,
}

impl Explorer {
    pub fn new(config: ExplorationConfig, rng: StreamRng) -> Self {
        Self { config, rng }
    }

    /// Uses the exploration stream of `seed`.
    pub fn from_seed(config: ExplorationConfig, seed: u64) -> Self {
        Self::new(config, rng::stream(seed, Stream::Exploration))
    }

    pub fn config(&self) -> ExplorationConfig {
        self.config
    }

    /// Per-agent forced actions for the next step (`None` = act greedily).
    pub fn draw(&mut self, dims: &GameDims) -> Vec<Option<usize>> {
        let delta = self.config.delta;
        if delta == 0.0 {
            return vec![None; dims.agents()];
        }
        if self.config.shared_coin {
            if rng::uniform01(&mut self.rng) < delta {
                (0..dims.agents())
                    .map(|_| Some(rng::uniform_index(&mut self.rng, dims.actions())))
                    .collect()
            } else {
                vec![None; dims.agents()]
            }
        } else {
            (0..dims.agents())
                .map(|_| {
                    (rng::uniform01(&mut self.rng) < delta)
                        .then(|| rng::uniform_index(&mut self.rng, dims.actions()))
                })
                .collect()
        }
    }
}

/// Uniformly random initial profile from the initial-action stream of `seed`.
pub fn draw_initial_profile(dims: &GameDims, seed: u64) -> ActionProfile {
    let mut rng = rng::stream(seed, Stream::InitialActions);
    ActionProfile::from_vec_unchecked(
        (0..dims.agents())
            .map(|_| rng::uniform_index(&mut rng, dims.actions()))
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Fp,
    AggFp,
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fp" => Ok(Self::Fp),
            "aggfp" => Ok(Self::AggFp),
            other => Err(Error::InvalidArgument(format!("unknown algorithm tag '{other}'"))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Fp => "fp",
            Self::AggFp => "aggfp",
        })
    }
}

/// State of one repeated-play run after observing `a_0 ..= a_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayState<T> {
    pub beliefs: BeliefState<T>,
    pub k: usize,
    pub current: ActionProfile,
}

impl<T: Scalar> PlayState<T> {
    pub fn new(dims: GameDims, a0: ActionProfile) -> Result<Self> {
        Ok(Self {
            beliefs: BeliefState::from_initial(dims, &a0)?,
            k: 0,
            current: a0,
        })
    }
}

fn advance<T: Scalar>(
    state: &mut PlayState<T>,
    explorer: &mut Explorer,
    schedule: &StepSizeSchedule,
    mut greedy: impl FnMut(usize, &BeliefState<T>) -> usize,
) -> ActionProfile {
    let dims = state.beliefs.dims();
    let forced = explorer.draw(&dims);
    let next = ActionProfile::from_vec_unchecked(
        forced
            .into_iter()
            .enumerate()
            .map(|(i, f)| f.unwrap_or_else(|| greedy(i, &state.beliefs)))
            .collect(),
    );
    state.k += 1;
    state.beliefs.observe(&next, schedule.at(state.k));
    state.current = next.clone();
    next
}

/// Chooses `a_{k+1}` by best responding to the individual beliefs, then observes it.
pub fn fp_step<T: Scalar, G: RewardModel<T> + ?Sized>(
    state: &mut PlayState<T>,
    game: &G,
    explorer: &mut Explorer,
    schedule: &StepSizeSchedule,
    tie: TieBreak,
) -> ActionProfile {
    advance(state, explorer, schedule, |i, beliefs| {
        argmax(&game.individual_rewards(i, beliefs.individual_all()), tie)
    })
}

/// Chooses `a_{k+1}` by best responding to the aggregate beliefs, then observes it.
pub fn aggfp_step<T: Scalar>(
    state: &mut PlayState<T>,
    tables: &[SuccinctReward<T>],
    explorer: &mut Explorer,
    schedule: &StepSizeSchedule,
    tie: TieBreak,
) -> ActionProfile {
    advance(state, explorer, schedule, |i, beliefs| {
        argmax(&tables[i].expected_rewards(beliefs.aggregate(i)), tie)
    })
}

/// `max_{i,a} |R^i(a, pi_hat^{-i}) - Rbar^i(a, mu_hat^i)|` for the current beliefs.
pub fn belief_reward_gap<T: Scalar, G: RewardModel<T> + ?Sized>(
    beliefs: &BeliefState<T>,
    game: &G,
    tables: &[SuccinctReward<T>],
) -> T {
    let mut gap = T::zero();
    for (i, table) in tables.iter().enumerate() {
        let individual = game.individual_rewards(i, beliefs.individual_all());
        let aggregate = table.expected_rewards(beliefs.aggregate(i));
        for (r, rbar) in individual.iter().zip(&aggregate) {
            gap = gap.max((*r - *rbar).abs());
        }
    }
    gap
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlayConfig {
    pub schedule: StepSizeSchedule,
    pub exploration: ExplorationConfig,
    pub tie_break: TieBreak,
    pub snapshot_stride: usize,
    /// `a_0`; drawn from the initial-action stream when absent.
    pub initial: Option<ActionProfile>,
}

impl Default for PlayConfig {
    fn default() -> Self {
        Self {
            schedule: StepSizeSchedule::harmonic(),
            exploration: ExplorationConfig::greedy(),
            tie_break: TieBreak::SmallestIndex,
            snapshot_stride: 100,
            initial: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    pub k: usize,
    pub individual: Vec<Vec<T>>,
    pub aggregate: Vec<Vec<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub algorithm: Algorithm,
    /// `a_0 .. a_{K-1}`.
    pub actions: Vec<ActionProfile>,
    /// Beliefs at every step `k` with `k % stride == 0`.
    pub snapshots: Vec<Snapshot<T>>,
    pub final_beliefs: BeliefState<T>,
}

/// Runs `steps` stages (`a_0` through `a_{steps-1}`) of FP or agg-FP.
///
/// For a fixed seed the run is bit-reproducible. FP and agg-FP runs with the
/// same seed consume the exploration stream identically, so their
/// exploration is coupled.
pub fn run_repeated_play<T: Scalar, G: RewardModel<T> + ?Sized>(
    algorithm: Algorithm,
    game: &G,
    steps: usize,
    seed: u64,
    config: &PlayConfig,
) -> Result<Trajectory<T>> {
    if steps == 0 {
        return invalid("need at least one step");
    }
    if config.snapshot_stride == 0 {
        return invalid("snapshot stride must be positive");
    }
    let dims = game.dims();
    let a0 = match &config.initial {
        Some(a) => ActionProfile::new(&dims, a.actions().to_vec())?,
        None => draw_initial_profile(&dims, seed),
    };
    let tables: Vec<SuccinctReward<T>> = match algorithm {
        Algorithm::AggFp => (0..dims.agents()).map(|i| game.succinct(i)).collect(),
        Algorithm::Fp => Vec::new(),
    };
    let mut explorer = Explorer::from_seed(config.exploration, seed);
    let mut state = PlayState::new(dims, a0)?;
    let mut actions = Vec::with_capacity(steps);
    let mut snapshots = Vec::with_capacity(steps.div_ceil(config.snapshot_stride));

    for k in 0..steps {
        if k > 0 {
            match algorithm {
                Algorithm::Fp => fp_step(&mut state, game, &mut explorer, &config.schedule, config.tie_break),
                Algorithm::AggFp => {
                    aggfp_step(&mut state, &tables, &mut explorer, &config.schedule, config.tie_break)
                }
            };
        }
        actions.push(state.current.clone());
        if k % config.snapshot_stride == 0 {
            snapshots.push(Snapshot {
                k,
                individual: state.beliefs.individual_all().to_vec(),
                aggregate: state.beliefs.aggregate_all().to_vec(),
            });
        }
    }
    Ok(Trajectory {
        algorithm,
        actions,
        snapshots,
        final_beliefs: state.beliefs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::rank_count;
    use crate::game::{AnonymousPolymatrixGame, PayoffMatrix};

    fn dims(n_agents: usize, n_actions: usize) -> GameDims {
        GameDims::new(n_agents, n_actions).unwrap()
    }

    #[test]
    fn full_step_gives_point_mass() {
        let mut v: Vec<f64> = vec![0.2, 0.3, 0.5];
        fp_belief_update(&mut v, 1, 1.0).unwrap();
        assert!((v[0]).abs() < 1e-15 && (v[1] - 1.0).abs() < 1e-15 && v[2].abs() < 1e-15);
        let mut mu = vec![0.5, 0.5, 0.0];
        aggfp_belief_update(&mut mu, 2, 1.0).unwrap();
        assert_eq!(mu, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn midpoint_step() {
        let mut v = vec![1.0, 0.0];
        fp_belief_update(&mut v, 1, 0.5).unwrap();
        assert_eq!(v, vec![0.5, 0.5]);
    }

    #[test]
    fn constant_action_is_a_fixed_point() {
        let mut g = vec![0.0, 1.0, 0.0];
        for k in 1..1000 {
            empirical_update(&mut g, 1, StepSizeSchedule::harmonic().at::<f64>(k)).unwrap();
        }
        assert_eq!(g, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn update_rejects_bad_arguments() {
        let mut v = vec![1.0, 0.0];
        assert!(fp_belief_update(&mut v, 0, 0.0).is_err());
        assert!(fp_belief_update(&mut v, 0, 1.5).is_err());
        assert!(fp_belief_update(&mut v, 2, 0.5).is_err());
    }

    #[test]
    fn initial_aggregate_belief_is_point_mass_on_opponent_count() {
        let d = dims(4, 3);
        let a0 = ActionProfile::new(&d, vec![0, 2, 2, 1]).unwrap();
        let beliefs = BeliefState::<f64>::from_initial(d, &a0).unwrap();
        let x = rank_count(&d, &[0, 1, 2]).unwrap();
        for (r, &p) in beliefs.aggregate(0).iter().enumerate() {
            assert_eq!(p, if r == x { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn algorithm_tags() {
        assert_eq!("fp".parse::<Algorithm>().unwrap(), Algorithm::Fp);
        assert_eq!("aggfp".parse::<Algorithm>().unwrap(), Algorithm::AggFp);
        assert!(matches!("sfp".parse::<Algorithm>(), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn greedy_run_consumes_no_randomness() {
        let d = dims(3, 2);
        let mut e = Explorer::from_seed(ExplorationConfig::greedy(), 3);
        let before = e.clone();
        assert_eq!(e.draw(&d), vec![None, None, None]);
        assert_eq!(e.rng, before.rng);
    }

    #[test]
    fn full_exploration_always_forces() {
        let d = dims(3, 4);
        let mut shared = Explorer::from_seed(ExplorationConfig::collective(1.0).unwrap(), 3);
        let mut indep = Explorer::from_seed(ExplorationConfig::independent(1.0).unwrap(), 3);
        for _ in 0..100 {
            assert!(shared.draw(&d).iter().all(Option::is_some));
            assert!(indep.draw(&d).iter().all(Option::is_some));
        }
    }

    #[test]
    fn snapshot_rows_follow_stride() {
        let d = dims(3, 2);
        let m = PayoffMatrix::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let game = AnonymousPolymatrixGame::symmetric(d, m).unwrap();
        for (steps, stride, rows) in [(10, 3, 4), (9, 3, 3), (1, 5, 1), (100, 1, 100)] {
            let config = PlayConfig {
                snapshot_stride: stride,
                ..PlayConfig::default()
            };
            let t: Trajectory<f64> = run_repeated_play(Algorithm::Fp, &game, steps, 1, &config).unwrap();
            assert_eq!(t.snapshots.len(), rows);
            assert_eq!(t.actions.len(), steps);
        }
    }
}
