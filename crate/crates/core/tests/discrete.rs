mod common;

use aggfp::discrete::{
    aggfp_belief_update, aggfp_step, belief_reward_gap, empirical_update, fp_belief_update,
    fp_step, run_repeated_play, Algorithm, ExplorationConfig, Explorer, PlayConfig, PlayState,
};
use aggfp::rng::{self, Stream};
use aggfp::{
    aggregate_distribution_excluding, rank_count, ActionProfile, Beliefs, GameDims, Matrix,
    PolymatrixGame, RewardModel, StepSizeSchedule, Succinct, TieBreak,
};
use common::*;
use proptest::prelude::*;

fn random_profile(r: &mut aggfp::rng::StreamRng, d: &GameDims) -> ActionProfile {
    ActionProfile::new(
        d,
        (0..d.agents()).map(|_| rng::uniform_index(r, d.actions())).collect(),
    )
    .unwrap()
}

#[test]
fn update_examples() {
    let mut v = vec![1.0, 0.0];
    fp_belief_update(&mut v, 1, 0.5).unwrap();
    assert_eq!(v, vec![0.5, 0.5]);
    let mut mu = vec![0.2, 0.3, 0.5];
    aggfp_belief_update(&mut mu, 2, 1.0).unwrap();
    assert_eq!(mu, vec![0.0, 0.0, 1.0]);
    let mut g = vec![0.0, 1.0];
    for k in 1..100 {
        empirical_update(&mut g, 1, 1.0 / (k as f64 + 1.0)).unwrap();
    }
    assert_eq!(g, vec![0.0, 1.0]);
    assert!(fp_belief_update(&mut v, 0, 0.0).is_err());
    assert!(fp_belief_update(&mut v, 0, 1.5).is_err());
    assert!(fp_belief_update(&mut v, 2, 0.5).is_err());
}

#[test]
fn harmonic_updates_are_running_averages() {
    let mut r = rng(41);
    let n = 4;
    let actions: Vec<usize> = (0..500).map(|_| rng::uniform_index(&mut r, n)).collect();
    let mut belief = vec![0.0; n];
    belief[actions[0]] = 1.0;
    let mut counts = vec![0usize; n];
    counts[actions[0]] += 1;
    for (k, &a) in actions.iter().enumerate().skip(1) {
        fp_belief_update(&mut belief, a, StepSizeSchedule::harmonic().at(k)).unwrap();
        counts[a] += 1;
        for b in 0..n {
            assert!((belief[b] - counts[b] as f64 / (k + 1) as f64).abs() < 1e-12);
        }
    }
    // alternating actions average to one half each
    let mut g = vec![1.0, 0.0];
    for k in 1..10_000 {
        empirical_update(&mut g, k % 2, 1.0 / (k as f64 + 1.0)).unwrap();
    }
    assert!((g[0] - 0.5).abs() < 1e-3);
}

#[test]
fn aggregate_belief_matches_closed_form_weights() {
    let d = GameDims::new(4, 3).unwrap();
    let schedule = StepSizeSchedule::power(0.7).unwrap();
    let mut r = rng(43);
    let history: Vec<ActionProfile> = (0..300).map(|_| random_profile(&mut r, &d)).collect();
    let mut beliefs = Beliefs::from_initial(d, &history[0]).unwrap();
    let alpha = |l: usize| if l == 0 { 1.0 } else { schedule.at::<f64>(l) };
    for k in 1..history.len() {
        beliefs.observe(&history[k], schedule.at(k));
        for i in 0..d.agents() {
            // weight of step l: alpha_l * prod_{m=l+1}^{k} (1 - alpha_m), alpha_0 = 1
            let mut expected = vec![0.0; d.count_space_size()];
            for (l, profile) in history.iter().enumerate().take(k + 1) {
                let w = alpha(l) * (l + 1..=k).map(|m| 1.0 - alpha(m)).product::<f64>();
                let x = aggfp::sigma(&d, profile, i).unwrap().rank();
                expected[x] += w;
            }
            assert!(max_abs_diff(beliefs.aggregate(i), &expected) < 1e-12);
        }
    }
}

#[test]
fn initial_aggregate_belief_is_point_mass() {
    let d = GameDims::new(4, 3).unwrap();
    let a0 = ActionProfile::new(&d, vec![0, 0, 2, 2]).unwrap();
    let beliefs = Beliefs::from_initial(d, &a0).unwrap();
    let x = rank_count(&d, &[1, 0, 2]).unwrap();
    for (rank, &p) in beliefs.aggregate(0).iter().enumerate() {
        assert_eq!(p, if rank == x { 1.0 } else { 0.0 });
    }
}

#[test]
fn reward_gap_vanishes_along_arbitrary_histories() {
    let mut r = rng(47);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let d = random_dims(&mut r, 5, 3);
        let game = random_game(&mut r, d);
        let tables: Vec<Succinct> = (0..d.agents()).map(|i| game.succinct(i)).collect();
        let mut beliefs = Beliefs::from_initial(d, &random_profile(&mut r, &d)).unwrap();
        for k in 1..200 {
            beliefs.observe(&random_profile(&mut r, &d), StepSizeSchedule::power(0.8).unwrap().at(k));
            worst = worst.max(belief_reward_gap(&beliefs, &game, &tables));
        }
    }
    assert!(worst <= 1e-9, "largest gap {worst:e}");
}

#[test]
fn aggregate_belief_differs_from_product_of_individual_beliefs() {
    let d = GameDims::new(3, 2).unwrap();
    let mut beliefs = Beliefs::from_initial(d, &ActionProfile::new(&d, vec![0, 0, 0]).unwrap()).unwrap();
    beliefs.observe(&ActionProfile::new(&d, vec![1, 1, 1]).unwrap(), 0.5);
    let product = aggregate_distribution_excluding(&d, beliefs.individual_all(), 0).unwrap();
    let mu = beliefs.aggregate(0);
    let mixed = rank_count(&d, &[1, 1]).unwrap();
    assert_eq!(mu[mixed], 0.0);
    assert!((product[mixed] - 0.5).abs() < 1e-15);
}

fn coupled_runs(seed: u64, delta: f64, tie: TieBreak) -> (usize, f64) {
    let mut r = rng(seed);
    let d = random_dims(&mut r, 5, 3);
    let game = random_game(&mut r, d);
    let tables: Vec<Succinct> = (0..d.agents()).map(|i| game.succinct(i)).collect();
    let a0 = random_profile(&mut r, &d);
    let schedule = StepSizeSchedule::harmonic();
    let exploration = ExplorationConfig::collective(delta).unwrap();
    let mut fp = PlayState::new(d, a0.clone()).unwrap();
    let mut agg = PlayState::new(d, a0).unwrap();
    let mut fp_explorer = Explorer::from_seed(exploration, seed);
    let mut agg_explorer = Explorer::from_seed(exploration, seed);
    let mut gap: f64 = 0.0;
    for k in 1..1000 {
        let a = fp_step(&mut fp, &game, &mut fp_explorer, &schedule, TieBreak::SmallestIndex);
        let b = aggfp_step(&mut agg, &tables, &mut agg_explorer, &schedule, tie);
        gap = gap.max(belief_reward_gap(&fp.beliefs, &game, &tables));
        if a != b {
            return (k, gap);
        }
    }
    (usize::MAX, gap)
}

#[test]
fn fp_and_aggfp_trajectories_coincide() {
    for delta in [0.0, 0.1] {
        for seed in 0..40 {
            let (mismatch, gap) = coupled_runs(seed, delta, TieBreak::SmallestIndex);
            assert_eq!(mismatch, usize::MAX, "seed {seed} delta {delta}: first mismatch at step {mismatch}");
            assert!(gap <= 1e-9);
        }
    }
}

#[test]
fn run_repeated_play_couples_fp_and_aggfp() {
    let mut r = rng(53);
    let d = GameDims::new(5, 3).unwrap();
    let game = random_game(&mut r, d);
    let config = PlayConfig {
        exploration: ExplorationConfig::collective(0.1).unwrap(),
        ..PlayConfig::default()
    };
    let fp = run_repeated_play::<f64, _>(Algorithm::Fp, &game, 2000, 9, &config).unwrap();
    let agg = run_repeated_play::<f64, _>(Algorithm::AggFp, &game, 2000, 9, &config).unwrap();
    assert_eq!(fp.actions, agg.actions);
    assert_eq!(fp.snapshots.len(), 20);
    let again = run_repeated_play::<f64, _>(Algorithm::Fp, &game, 2000, 9, &config).unwrap();
    assert_eq!(fp, again);
    let strided = PlayConfig { snapshot_stride: 7, ..config.clone() };
    let t = run_repeated_play::<f64, _>(Algorithm::AggFp, &game, 100, 9, &strided).unwrap();
    assert_eq!(t.snapshots.len(), 100usize.div_ceil(7));
    assert_eq!(t.actions.len(), 100);
    assert!(run_repeated_play::<f64, _>(Algorithm::Fp, &game, 0, 9, &config).is_err());
    assert!("aggfp".parse::<Algorithm>().is_ok());
    assert!("bogus".parse::<Algorithm>().is_err());
}

#[test]
fn greedy_play_consumes_no_randomness() {
    let d = GameDims::new(4, 3).unwrap();
    let mut explorer = Explorer::from_seed(ExplorationConfig::greedy(), 3);
    for _ in 0..10 {
        assert_eq!(explorer.draw(&d), vec![None; 4]);
    }
    let mut untouched = rng::stream(3, Stream::Exploration);
    let mut probe = Explorer::new(ExplorationConfig::collective(1.0).unwrap(), rng::stream(3, Stream::Exploration));
    // a fully exploring draw reads the coin then one index per agent
    let coin = rng::uniform01(&mut untouched);
    assert!(coin < 1.0);
    let expected: Vec<Option<usize>> = (0..4).map(|_| Some(rng::uniform_index(&mut untouched, 3))).collect();
    assert_eq!(probe.draw(&d), expected);
}

#[test]
fn two_agent_fp_and_aggfp_are_identical() {
    let mut r = rng(59);
    let d = GameDims::new(2, 3).unwrap();
    for seed in 0..10 {
        let game = random_game(&mut r, d);
        let config = PlayConfig::default();
        let fp = run_repeated_play::<f64, _>(Algorithm::Fp, &game, 500, seed, &config).unwrap();
        let agg = run_repeated_play::<f64, _>(Algorithm::AggFp, &game, 500, seed, &config).unwrap();
        assert_eq!(fp.actions, agg.actions);
    }
}

#[test]
fn matching_pennies_frequencies_approach_one_half() {
    let d = GameDims::new(2, 2).unwrap();
    let m = Matrix::from_rows(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
    let neg = Matrix::from_rows(vec![vec![-1.0, 1.0], vec![1.0, -1.0]]).unwrap();
    let game = PolymatrixGame::new(d, vec![m, neg]).unwrap();
    let config = PlayConfig {
        initial: Some(ActionProfile::new(&d, vec![0, 1]).unwrap()),
        ..PlayConfig::default()
    };
    let t = run_repeated_play::<f64, _>(Algorithm::Fp, &game, 10_000, 0, &config).unwrap();
    for i in 0..2 {
        for &p in t.final_beliefs.empirical(i) {
            assert!((p - 0.5).abs() < 0.05, "agent {i}: {:?}", t.final_beliefs.empirical(i));
        }
    }
}

#[test]
fn full_exploration_beliefs_approach_multinomial_counts() {
    let d = GameDims::new(3, 2).unwrap();
    let game = PolymatrixGame::symmetric(d, Matrix::zeros(2)).unwrap();
    let config = PlayConfig {
        exploration: ExplorationConfig::collective(1.0).unwrap(),
        ..PlayConfig::default()
    };
    let t = run_repeated_play::<f64, _>(Algorithm::AggFp, &game, 40_000, 1, &config).unwrap();
    for i in 0..3 {
        let mu = t.final_beliefs.aggregate(i);
        assert!(max_abs_diff(mu, &[0.25, 0.5, 0.25]) < 0.02, "{mu:?}");
    }
}

#[test]
fn beliefs_stay_on_simplex_over_a_million_updates() {
    let d = GameDims::new(4, 3).unwrap();
    let mut r = rng(61);
    let schedule = StepSizeSchedule::power(0.7).unwrap();
    let mut beliefs = Beliefs::from_initial(d, &random_profile(&mut r, &d)).unwrap();
    let mut worst: f64 = 0.0;
    for k in 1..=1_000_000 {
        beliefs.observe(&random_profile(&mut r, &d), schedule.at(k));
        if k % 1000 == 0 {
            worst = worst.max(beliefs.max_drift());
        }
    }
    assert!(worst.max(beliefs.max_drift()) <= 1e-9, "drift {worst:e}");
}

proptest! {
    #[test]
    fn updates_preserve_the_simplex(
        seed in any::<u64>(),
        steps in 1usize..300,
        exponent in 0.51f64..=1.0,
    ) {
        let mut r = rng(seed);
        let d = random_dims(&mut r, 6, 4);
        let schedule = StepSizeSchedule::power(exponent).unwrap();
        let mut beliefs = Beliefs::from_initial(d, &random_profile(&mut r, &d)).unwrap();
        for k in 1..=steps {
            beliefs.observe(&random_profile(&mut r, &d), schedule.at(k));
        }
        prop_assert!(beliefs.max_drift() <= 1e-9);
    }
}
