use std::fmt;

use aggfp::discrete::{aggfp_step, belief_reward_gap, fp_step, ExplorationConfig, Explorer, PlayState};
use aggfp::rng::{self, Stream, StreamRng};
use aggfp::{
    aggregate_distribution_excluding, expected_reward_aggregate, ActionProfile, FullTable, GameDims,
    Matrix, Mixed, PolymatrixGame, StepSizeSchedule, Succinct, TieBreak,
};
use rayon::prelude::*;

use crate::error::{usage, Result};

/// Largest deviation allowed for the reward identities.
pub const REWARD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub instances: usize,
    pub steps: usize,
    pub max_agents: usize,
    pub max_actions: usize,
    pub deltas: Vec<f64>,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            instances: 100,
            steps: 1000,
            max_agents: 5,
            max_actions: 3,
            deltas: vec![0.0, 0.1],
            seed: 0,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.instances == 0 {
            return usage("instances: must be at least 1");
        }
        if self.steps == 0 {
            return usage("steps: must be at least 1");
        }
        if !(2..=8).contains(&self.max_agents) {
            return usage("max-agents: must be between 2 and 8");
        }
        if !(2..=4).contains(&self.max_actions) {
            return usage("max-actions: must be between 2 and 4");
        }
        if self.deltas.iter().any(|d| !(0.0..1.0).contains(d)) {
            return usage("delta: every exploration rate must lie in [0, 1)");
        }
        Ok(())
    }
}

/// Random game with entries uniform in `[-1, 1]` and one matrix per agent.
pub fn random_instance(rng: &mut StreamRng, max_agents: usize, max_actions: usize) -> PolymatrixGame {
    let agents = 2 + rng::uniform_index(rng, max_agents - 1);
    let actions = 2 + rng::uniform_index(rng, max_actions - 1);
    let dims = GameDims::new(agents, actions).expect("bounded dims");
    let pairwise = (0..agents)
        .map(|_| {
            let rows = (0..actions)
                .map(|_| (0..actions).map(|_| 2.0 * rng::uniform01(rng) - 1.0).collect())
                .collect();
            Matrix::from_rows(rows).expect("square")
        })
        .collect();
    PolymatrixGame::new(dims, pairwise).expect("matching dims")
}

fn random_mixed(rng: &mut StreamRng, dims: GameDims) -> Mixed {
    let strategies = (0..dims.agents())
        .map(|_| {
            let raw: Vec<f64> = (0..dims.actions()).map(|_| rng::uniform01(rng) + 1e-3).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / total).collect()
        })
        .collect();
    Mixed::new(&dims, strategies).expect("normalized")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledOutcome {
    /// First step at which the two runs chose different joint actions.
    pub mismatch: Option<usize>,
    /// Largest individual-versus-aggregate reward gap along the FP run.
    pub max_reward_gap: f64,
}

/// Runs FP and agg-FP side by side from the same initial profile with
/// identically seeded exploration, comparing actions at every step.
pub fn coupled_run(
    game: &PolymatrixGame,
    a0: &ActionProfile,
    steps: usize,
    seed: u64,
    delta: f64,
    aggregate_tie: TieBreak,
) -> Result<CoupledOutcome> {
    let dims = game.dims();
    let tables = (0..dims.agents())
        .map(|i| game.expand_polymatrix(i))
        .collect::<aggfp::Result<Vec<Succinct>>>()?;
    let schedule = StepSizeSchedule::harmonic();
    let exploration = ExplorationConfig::collective(delta)?;
    let mut fp = PlayState::new(dims, a0.clone())?;
    let mut agg = PlayState::new(dims, a0.clone())?;
    let mut fp_explorer = Explorer::from_seed(exploration, seed);
    let mut agg_explorer = Explorer::from_seed(exploration, seed);
    let mut outcome = CoupledOutcome {
        mismatch: None,
        max_reward_gap: belief_reward_gap(&fp.beliefs, game, &tables),
    };
    for k in 1..steps {
        let a = fp_step(&mut fp, game, &mut fp_explorer, &schedule, TieBreak::SmallestIndex);
        let b = aggfp_step(&mut agg, &tables, &mut agg_explorer, &schedule, aggregate_tie);
        outcome.max_reward_gap = outcome.max_reward_gap.max(belief_reward_gap(&fp.beliefs, game, &tables));
        if a != b {
            outcome.mismatch = Some(k);
            break;
        }
    }
    Ok(outcome)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub instance: usize,
    pub delta: f64,
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub instances: usize,
    pub runs: usize,
    pub steps: usize,
    /// Largest gap between brute-force individual expected rewards and
    /// aggregate expected rewards at random mixed profiles.
    pub max_profile_gap: f64,
    /// Largest belief reward gap along the coupled trajectories.
    pub max_trajectory_gap: f64,
    pub mismatches: Vec<Mismatch>,
    /// Step at which the control run with a flipped tie-break diverged.
    pub control_mismatch: Option<usize>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
            && self.max_profile_gap <= REWARD_TOLERANCE
            && self.max_trajectory_gap <= REWARD_TOLERANCE
            && self.control_mismatch.is_some()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        writeln!(f, "instances: {}  coupled runs: {}  steps: {}", self.instances, self.runs, self.steps)?;
        writeln!(
            f,
            "[{}] trajectory match: {} mismatching runs",
            verdict(self.mismatches.is_empty()),
            self.mismatches.len()
        )?;
        for m in &self.mismatches {
            writeln!(f, "       instance {} delta {}: first mismatch at step {}", m.instance, m.delta, m.step)?;
        }
        writeln!(
            f,
            "[{}] expected rewards at random profiles: max gap {:.3e}",
            verdict(self.max_profile_gap <= REWARD_TOLERANCE),
            self.max_profile_gap
        )?;
        writeln!(
            f,
            "[{}] expected rewards along trajectories: max gap {:.3e}",
            verdict(self.max_trajectory_gap <= REWARD_TOLERANCE),
            self.max_trajectory_gap
        )?;
        match self.control_mismatch {
            Some(step) => writeln!(f, "[PASS] negative control: flipped tie-break detected at step {step}"),
            None => writeln!(f, "[FAIL] negative control: flipped tie-break went undetected"),
        }
    }
}

/// Randomized check that FP and agg-FP are interchangeable on anonymous
/// polymatrix games.
pub fn equivalence_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    config.validate()?;
    let mut rng = rng::stream(config.seed, Stream::Instances);
    let instances: Vec<(PolymatrixGame, ActionProfile, Mixed)> = (0..config.instances)
        .map(|_| {
            let game = random_instance(&mut rng, config.max_agents, config.max_actions);
            let dims = game.dims();
            let a0 = ActionProfile::new(
                &dims,
                (0..dims.agents()).map(|_| rng::uniform_index(&mut rng, dims.actions())).collect(),
            )
            .expect("in range");
            let profile = random_mixed(&mut rng, dims);
            (game, a0, profile)
        })
        .collect();

    let profile_gaps: Vec<f64> = instances
        .par_iter()
        .map(|(game, _, pi)| {
            let dims = game.dims();
            let full: FullTable = game.expand_full()?;
            let mut gap: f64 = 0.0;
            for i in 0..dims.agents() {
                let brute = full.expected_rewards(i, pi.strategies())?;
                let mu = aggregate_distribution_excluding(&dims, pi.strategies(), i)?;
                let aggregate = expected_reward_aggregate(&game.expand_polymatrix(i)?, &mu)?;
                for (x, y) in brute.iter().zip(&aggregate) {
                    gap = gap.max((x - y).abs());
                }
            }
            Ok(gap)
        })
        .collect::<Result<_>>()?;

    let jobs: Vec<(usize, f64)> = (0..config.instances)
        .flat_map(|i| config.deltas.iter().map(move |&d| (i, d)))
        .collect();
    let outcomes: Vec<(usize, f64, CoupledOutcome)> = jobs
        .par_iter()
        .map(|&(i, delta)| {
            let (game, a0, _) = &instances[i];
            let seed = config.seed.wrapping_add(i as u64);
            Ok((i, delta, coupled_run(game, a0, config.steps, seed, delta, TieBreak::SmallestIndex)?))
        })
        .collect::<Result<_>>()?;

    // every action ties in a zero game, so the tie-break alone decides play
    let dims = GameDims::new(3, 3).expect("valid dims");
    let control_game = PolymatrixGame::symmetric(dims, Matrix::zeros(3))?;
    let control = coupled_run(
        &control_game,
        &ActionProfile::new(&dims, vec![0, 1, 2])?,
        config.steps.max(2),
        config.seed,
        0.0,
        TieBreak::LargestIndex,
    )?;

    Ok(SuiteReport {
        instances: config.instances,
        runs: outcomes.len(),
        steps: config.steps,
        max_profile_gap: profile_gaps.into_iter().fold(0.0, f64::max),
        max_trajectory_gap: outcomes.iter().map(|o| o.2.max_reward_gap).fold(0.0, f64::max),
        mismatches: outcomes
            .iter()
            .filter_map(|&(instance, delta, o)| o.mismatch.map(|step| Mismatch { instance, delta, step }))
            .collect(),
        control_mismatch: control.mismatch,
    })
}
