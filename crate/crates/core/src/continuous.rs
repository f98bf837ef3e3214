//! Delta-greedy best-response (BR) and aggregate best-response (agg-BR) flows.
//!
//! Both vector fields are piecewise constant in the best response, so a
//! forward Euler integrator is used. With step `h <= 1` an Euler step is a
//! convex combination of the current point and a simplex vertex mixture,
//! hence stays on the simplex.

use crate::count::{sigma_ranks, ActionProfile, GameDims};
use crate::error::{invalid, Error, Result};
use crate::game::{RewardModel, SuccinctReward};
use crate::reward::{aggregate_distribution_unchecked, argmax, MixedProfile, TieBreak};
use crate::scalar::Scalar;

/// Joint state of both flows: `pi` for BR, `mu` and `gamma` for agg-BR.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousState<T> {
    pub pi: Vec<Vec<T>>,
    pub mu: Vec<Vec<T>>,
    pub gamma: Vec<Vec<T>>,
    pub t: T,
}

/// `(1 - delta) e_target + delta / len - v`.
fn relaxation<T: Scalar>(v: &[T], target: usize, delta: T) -> Vec<T> {
    let floor = delta / T::from_count(v.len());
    v.iter()
        .enumerate()
        .map(|(b, &p)| {
            let hit = if b == target { T::one() - delta } else { T::zero() };
            hit + floor - p
        })
        .collect()
}

fn check_delta<T: Scalar>(delta: T) -> Result<()> {
    if !(delta >= T::zero() && delta <= T::one()) {
        return invalid(format!("exploration rate {delta} outside [0, 1]"));
    }
    Ok(())
}

/// `d pi^i / dt = (1 - delta) e_{BR^i(pi^{-i})} + delta/n - pi^i` for every agent.
pub fn br_field<T: Scalar, G: RewardModel<T> + ?Sized>(
    pi: &[Vec<T>],
    game: &G,
    delta: T,
    tie: TieBreak,
) -> Result<Vec<Vec<T>>> {
    check_delta(delta)?;
    let dims = game.dims();
    MixedProfile::new(&dims, pi.to_vec())?;
    Ok(br_field_unchecked(pi, game, delta, tie).0)
}

/// Field plus the individual reward vectors it was computed from.
fn br_field_unchecked<T: Scalar, G: RewardModel<T> + ?Sized>(
    pi: &[Vec<T>],
    game: &G,
    delta: T,
    tie: TieBreak,
) -> (Vec<Vec<T>>, Vec<Vec<T>>) {
    let rewards: Vec<Vec<T>> = (0..pi.len()).map(|i| game.individual_rewards(i, pi)).collect();
    let field = pi
        .iter()
        .zip(&rewards)
        .map(|(p, r)| relaxation(p, argmax(r, tie), delta))
        .collect();
    (field, rewards)
}

/// Agg-BR field. Every agent best responds to its own aggregate belief;
/// `mu^i` relaxes toward the count of the others' best responses and
/// `gamma^i` toward agent `i`'s own best response.
pub fn aggbr_field<T: Scalar>(
    mu: &[Vec<T>],
    gamma: &[Vec<T>],
    tables: &[SuccinctReward<T>],
    dims: &GameDims,
    delta: T,
    tie: TieBreak,
) -> Result<(Vec<Vec<T>>, Vec<Vec<T>>)> {
    check_delta(delta)?;
    if mu.len() != dims.agents() || gamma.len() != dims.agents() || tables.len() != dims.agents() {
        return invalid("agg-BR state needs one mu, gamma and table per agent");
    }
    for i in 0..dims.agents() {
        crate::reward::check_simplex(&mu[i], dims.count_space_size(), &format!("mu of agent {i}"))?;
        crate::reward::check_simplex(&gamma[i], dims.actions(), &format!("gamma of agent {i}"))?;
    }
    let (dmu, dgamma, _) = aggbr_field_unchecked(mu, gamma, tables, dims, delta, tie);
    Ok((dmu, dgamma))
}

#[allow(clippy::type_complexity)]
fn aggbr_field_unchecked<T: Scalar>(
    mu: &[Vec<T>],
    gamma: &[Vec<T>],
    tables: &[SuccinctReward<T>],
    dims: &GameDims,
    delta: T,
    tie: TieBreak,
) -> (Vec<Vec<T>>, Vec<Vec<T>>, Vec<Vec<T>>) {
    let rewards: Vec<Vec<T>> = tables
        .iter()
        .zip(mu)
        .map(|(t, m)| t.expected_rewards(m))
        .collect();
    let best = ActionProfile::from_vec_unchecked(rewards.iter().map(|r| argmax(r, tie)).collect());
    let ranks = sigma_ranks(dims, &best);
    let dmu = mu
        .iter()
        .zip(&ranks)
        .map(|(m, &x)| relaxation(m, x, delta))
        .collect();
    let dgamma = gamma
        .iter()
        .zip(best.actions())
        .map(|(g, &a)| relaxation(g, a, delta))
        .collect();
    (dmu, dgamma, rewards)
}

/// `gamma_0 = pi_0` and `mu^i_0` = distribution of the opponent count under `pi_0^{-i}`.
pub fn consistent_init<T: Scalar>(dims: &GameDims, pi0: &MixedProfile<T>) -> Result<ContinuousState<T>> {
    let pi = MixedProfile::new(dims, pi0.strategies().to_vec())?.into_inner();
    let mu = (0..dims.agents())
        .map(|i| {
            let opponents: Vec<&[T]> = pi
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| p.as_slice())
                .collect();
            aggregate_distribution_unchecked(dims.actions(), &opponents)
        })
        .collect();
    Ok(ContinuousState {
        gamma: pi.clone(),
        pi,
        mu,
        t: T::zero(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerOptions<T> {
    pub step: T,
    pub horizon: T,
    /// Record every `stride`-th state (plus the first and last).
    pub stride: usize,
}

impl<T: Scalar> EulerOptions<T> {
    pub fn new(step: T, horizon: T) -> Self {
        Self {
            step,
            horizon,
            stride: 100,
        }
    }

    fn steps(&self) -> Result<usize> {
        if !(self.step > T::zero()) || !self.step.is_finite() {
            return invalid(format!("integration step {} must be positive", self.step));
        }
        if !(self.horizon >= self.step) {
            return invalid(format!("horizon {} shorter than step {}", self.horizon, self.step));
        }
        if self.stride == 0 {
            return invalid("sampling stride must be positive");
        }
        let steps = (self.horizon / self.step).round();
        steps
            .to_usize()
            .filter(|&s| s >= 1)
            .ok_or_else(|| Error::InvalidArgument("too many integration steps".into()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sampled<T> {
    pub times: Vec<T>,
    pub states: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> Sampled<T> {
    pub fn last(&self) -> &[Vec<T>] {
        self.states.last().expect("at least the initial state is recorded")
    }
}

/// `state <- state + h * derivative`, block by block.
pub fn euler_step<T: Scalar>(state: &mut [Vec<T>], derivative: &[Vec<T>], h: T) {
    for (block, d) in state.iter_mut().zip(derivative) {
        for (x, &dx) in block.iter_mut().zip(d) {
            *x = *x + h * dx;
        }
    }
}

fn check_finite<T: Scalar>(derivative: &[Vec<T>], t: T) -> Result<()> {
    if derivative.iter().flatten().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { time: t.as_f64() })
    }
}

/// Explicit Euler over a block-structured state. `field(t, state)` returns
/// the derivative with the same block layout. The final time is
/// `round(horizon / step) * step`, within one step of the horizon.
pub fn euler_integrate<T: Scalar>(
    mut field: impl FnMut(T, &[Vec<T>]) -> Vec<Vec<T>>,
    state0: Vec<Vec<T>>,
    options: &EulerOptions<T>,
) -> Result<Sampled<T>> {
    let steps = options.steps()?;
    let mut state = state0;
    let mut times = vec![T::zero()];
    let mut states = vec![state.clone()];
    for k in 0..steps {
        let t = T::from_count(k) * options.step;
        let d = field(t, &state);
        check_finite(&d, t)?;
        euler_step(&mut state, &d, options.step);
        if (k + 1) % options.stride == 0 || k + 1 == steps {
            times.push(T::from_count(k + 1) * options.step);
            states.push(state.clone());
        }
    }
    Ok(Sampled { times, states })
}

/// Largest deviations seen while integrating BR and agg-BR side by side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowGaps<T> {
    /// `max_{t,i,a} |R^i(a, pi^{-i}_t) - Rbar^i(a, mu^i_t)|`
    pub reward_gap: T,
    /// `max_{t,i} ||pi^i_t - gamma^i_t||_inf`
    pub strategy_gap: T,
}

/// Integrates BR and agg-BR from consistent initial values with a shared
/// tie-break and reports how far their reward and strategy paths drift
/// apart. For anonymous polymatrix games both gaps stay at rounding level.
pub fn compare_br_aggbr<T: Scalar, G: RewardModel<T> + ?Sized>(
    game: &G,
    pi0: &MixedProfile<T>,
    delta: T,
    options: &EulerOptions<T>,
    tie: TieBreak,
) -> Result<FlowGaps<T>> {
    check_delta(delta)?;
    let dims = game.dims();
    let steps = options.steps()?;
    let tables: Vec<SuccinctReward<T>> = (0..dims.agents()).map(|i| game.succinct(i)).collect();
    let mut state = consistent_init(&dims, pi0)?;
    let mut gaps = FlowGaps {
        reward_gap: T::zero(),
        strategy_gap: T::zero(),
    };
    for k in 0..=steps {
        let t = T::from_count(k) * options.step;
        let (dpi, individual) = br_field_unchecked(&state.pi, game, delta, tie);
        let (dmu, dgamma, aggregate) =
            aggbr_field_unchecked(&state.mu, &state.gamma, &tables, &dims, delta, tie);
        for (r, rbar) in individual.iter().flatten().zip(aggregate.iter().flatten()) {
            gaps.reward_gap = gaps.reward_gap.max((*r - *rbar).abs());
        }
        for (p, g) in state.pi.iter().flatten().zip(state.gamma.iter().flatten()) {
            gaps.strategy_gap = gaps.strategy_gap.max((*p - *g).abs());
        }
        if k == steps {
            break;
        }
        for d in [&dpi, &dmu, &dgamma] {
            check_finite(d, t)?;
        }
        euler_step(&mut state.pi, &dpi, options.step);
        euler_step(&mut state.mu, &dmu, options.step);
        euler_step(&mut state.gamma, &dgamma, options.step);
        state.t = T::from_count(k + 1) * options.step;
    }
    Ok(gaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{AnonymousPolymatrixGame, PayoffMatrix};

    fn rps_game(agents: usize) -> AnonymousPolymatrixGame<f64> {
        let m = PayoffMatrix::from_rows(vec![
            vec![0.0, -1.0, 1.0],
            vec![1.0, 0.0, -1.0],
            vec![-1.0, 1.0, 0.0],
        ])
        .unwrap();
        AnonymousPolymatrixGame::symmetric(GameDims::new(agents, 3).unwrap(), m).unwrap()
    }

    #[test]
    fn uniform_profile_gives_binomial_counts() {
        let d = GameDims::new(3, 2).unwrap();
        let s: ContinuousState<f64> = consistent_init(&d, &MixedProfile::uniform(&d)).unwrap();
        for mu in &s.mu {
            assert_eq!(mu, &vec![0.25, 0.5, 0.25]);
        }
        assert_eq!(s.gamma, s.pi);
    }

    #[test]
    fn point_masses_give_point_mass_counts() {
        let d = GameDims::new(4, 3).unwrap();
        let a0 = [2, 0, 1, 1];
        let s = consistent_init(&d, &MixedProfile::point_masses(&d, &a0).unwrap()).unwrap();
        let profile = ActionProfile::new(&d, a0.to_vec()).unwrap();
        for (i, x) in sigma_ranks(&d, &profile).into_iter().enumerate() {
            assert_eq!(s.mu[i][x], 1.0);
            assert_eq!(s.mu[i].iter().sum::<f64>(), 1.0);
        }
    }

    #[test]
    fn full_exploration_field_pulls_to_uniform() {
        let game = rps_game(3);
        let pi = vec![vec![1.0, 0.0, 0.0], vec![0.2, 0.3, 0.5], vec![0.0, 0.5, 0.5]];
        let field = br_field(&pi, &game, 1.0, TieBreak::SmallestIndex).unwrap();
        for (p, d) in pi.iter().zip(&field) {
            for (x, dx) in p.iter().zip(d) {
                assert!((dx - (1.0 / 3.0 - x)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn strict_pure_equilibrium_is_a_rest_point() {
        // coordination game: everyone on action 0 is a strict equilibrium
        let d = GameDims::new(3, 2).unwrap();
        let m = PayoffMatrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let game = AnonymousPolymatrixGame::symmetric(d, m).unwrap();
        let pi = vec![vec![1.0, 0.0]; 3];
        let field = br_field(&pi, &game, 0.0, TieBreak::SmallestIndex).unwrap();
        assert!(field.iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn zero_field_keeps_state() {
        let s0 = vec![vec![0.3, 0.7], vec![1.0]];
        let zero = |_: f64, s: &[Vec<f64>]| s.iter().map(|b| vec![0.0; b.len()]).collect();
        let out = euler_integrate(zero, s0.clone(), &EulerOptions::new(0.1, 1.0)).unwrap();
        assert!(out.states.iter().all(|s| s == &s0));
        assert!((out.times.last().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_finite_derivative_is_reported_with_time() {
        let blowup = |t: f64, s: &[Vec<f64>]| {
            s.iter()
                .map(|b| vec![if t >= 0.25 { f64::NAN } else { 0.0 }; b.len()])
                .collect()
        };
        match euler_integrate(blowup, vec![vec![1.0]], &EulerOptions::new(0.1, 1.0)) {
            Err(Error::NonFinite { time }) => assert!((time - 0.3).abs() < 1e-12),
            other => panic!("expected NonFinite, got {other:?}"),
        }
    }

    #[test]
    fn bad_integration_options() {
        let id = |_: f64, s: &[Vec<f64>]| s.to_vec();
        assert!(euler_integrate(id, vec![vec![1.0]], &EulerOptions::new(0.0, 1.0)).is_err());
        assert!(euler_integrate(id, vec![vec![1.0]], &EulerOptions::new(0.5, 0.1)).is_err());
    }

    #[test]
    fn flows_agree_at_time_zero() {
        let game = rps_game(4);
        let d = game.dims();
        let pi0 = MixedProfile::new(&d, vec![
            vec![0.2, 0.3, 0.5],
            vec![0.6, 0.2, 0.2],
            vec![0.1, 0.1, 0.8],
            vec![1.0, 0.0, 0.0],
        ])
        .unwrap();
        let opts = EulerOptions::new(1e-3, 1e-3);
        let gaps = compare_br_aggbr(&game, &pi0, 0.1, &opts, TieBreak::SmallestIndex).unwrap();
        assert!(gaps.reward_gap < 1e-15);
        assert_eq!(gaps.strategy_gap, 0.0);
    }
}
