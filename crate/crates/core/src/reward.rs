//! Mixed strategies, expected rewards, aggregate distributions and best responses.

use crate::count::{next_composition, rank_unchecked, GameDims};
use crate::error::{invalid, Result};
use crate::game::{RewardModel, SuccinctReward};
use crate::scalar::Scalar;

/// Fails unless `v` has `len` finite nonnegative entries summing to one,
/// all within `T::SIMPLEX_TOL`. The vector is never renormalized.
pub fn check_simplex<T: Scalar>(v: &[T], len: usize, what: &str) -> Result<()> {
    if v.len() != len {
        return invalid(format!("{what}: length {} but expected {len}", v.len()));
    }
    let tol = T::SIMPLEX_TOL;
    let mut sum = 0.0;
    for (b, &p) in v.iter().enumerate() {
        let p = p.as_f64();
        if !p.is_finite() || p < -tol {
            return invalid(format!("{what}: entry {b} = {p} is not a probability"));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > tol {
        return invalid(format!("{what}: entries sum to {sum}"));
    }
    Ok(())
}

/// Distance from the simplex: the larger of the worst negative entry and `|sum - 1|`.
pub fn simplex_drift<T: Scalar>(v: &[T]) -> f64 {
    let mut sum = 0.0;
    let mut worst: f64 = 0.0;
    for &p in v {
        let p = p.as_f64();
        sum += p;
        worst = worst.max(-p);
    }
    worst.max((sum - 1.0).abs())
}

pub(crate) fn point_mass<T: Scalar>(len: usize, at: usize) -> Vec<T> {
    let mut v = vec![T::zero(); len];
    v[at] = T::one();
    v
}

pub(crate) fn uniform<T: Scalar>(len: usize) -> Vec<T> {
    vec![T::one() / T::from_count(len); len]
}

/// One probability vector over actions per agent.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedProfile<T> {
    strategies: Vec<Vec<T>>,
}

impl<T: Scalar> MixedProfile<T> {
    pub fn new(dims: &GameDims, strategies: Vec<Vec<T>>) -> Result<Self> {
        if strategies.len() != dims.agents() {
            return invalid(format!(
                "mixed profile has {} strategies, expected {}",
                strategies.len(),
                dims.agents()
            ));
        }
        for (i, s) in strategies.iter().enumerate() {
            check_simplex(s, dims.actions(), &format!("strategy of agent {i}"))?;
        }
        Ok(Self { strategies })
    }

    pub fn uniform(dims: &GameDims) -> Self {
        Self {
            strategies: vec![uniform(dims.actions()); dims.agents()],
        }
    }

    pub fn point_masses(dims: &GameDims, actions: &[usize]) -> Result<Self> {
        let strategies = actions
            .iter()
            .map(|&a| {
                dims.check_action(a)?;
                Ok(point_mass(dims.actions(), a))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(dims, strategies)
    }

    pub fn strategies(&self) -> &[Vec<T>] {
        &self.strategies
    }

    pub fn into_inner(self) -> Vec<Vec<T>> {
        self.strategies
    }
}

/// `R^i(a, pi^{-i})` for every own action `a`.
///
/// `beliefs` holds one strategy per agent; the entry of `agent` itself is ignored.
pub fn expected_reward_individual<T: Scalar, G: RewardModel<T> + ?Sized>(
    game: &G,
    agent: usize,
    beliefs: &[Vec<T>],
) -> Result<Vec<T>> {
    let dims = game.dims();
    dims.check_agent(agent)?;
    if beliefs.len() != dims.agents() {
        return invalid("beliefs must hold one vector per agent");
    }
    for (j, b) in beliefs.iter().enumerate().filter(|(j, _)| *j != agent) {
        check_simplex(b, dims.actions(), &format!("belief about agent {j}"))?;
    }
    Ok(game.individual_rewards(agent, beliefs))
}

/// `sum_x mu(x) * rbar(a, x)` for every own action `a`.
pub fn expected_reward_aggregate<T: Scalar>(
    succinct: &SuccinctReward<T>,
    mu: &[T],
) -> Result<Vec<T>> {
    check_simplex(mu, succinct.dims().count_space_size(), "aggregate belief")?;
    Ok(succinct.expected_rewards(mu))
}

/// `sum_k row[k] * weights[k]`, accumulated left to right.
///
/// Every expectation of a reward or Q row goes through here so that equal
/// inputs give bit-identical outputs regardless of the caller.
#[inline]
pub(crate) fn row_expectation<T: Scalar>(row: &[T], weights: &[T]) -> T {
    row.iter()
        .zip(weights)
        .fold(T::zero(), |acc, (&r, &w)| acc + r * w)
}

/// Exact distribution of the opponent counts when opponent `j` plays
/// `opponents[j]` independently. Built by adding one opponent at a time to
/// the count distribution.
pub fn aggregate_distribution<T: Scalar>(dims: &GameDims, opponents: &[&[T]]) -> Result<Vec<T>> {
    if opponents.len() != dims.agents() - 1 {
        return invalid(format!(
            "expected {} opponent beliefs, got {}",
            dims.agents() - 1,
            opponents.len()
        ));
    }
    for (j, b) in opponents.iter().enumerate() {
        check_simplex(b, dims.actions(), &format!("opponent belief {j}"))?;
    }
    Ok(aggregate_distribution_unchecked(dims.actions(), opponents))
}

/// Distribution over counts for the opponents of `agent` given one belief per agent.
pub fn aggregate_distribution_excluding<T: Scalar>(
    dims: &GameDims,
    beliefs: &[Vec<T>],
    agent: usize,
) -> Result<Vec<T>> {
    dims.check_agent(agent)?;
    if beliefs.len() != dims.agents() {
        return invalid("beliefs must hold one vector per agent");
    }
    let opponents: Vec<&[T]> = beliefs
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != agent)
        .map(|(_, b)| b.as_slice())
        .collect();
    aggregate_distribution(dims, &opponents)
}

pub(crate) fn aggregate_distribution_unchecked<T: Scalar>(
    actions: usize,
    opponents: &[&[T]],
) -> Vec<T> {
    // dist[r] is the probability of the composition of `added` with rank r
    let mut dist = vec![T::one()];
    for (added, belief) in opponents.iter().enumerate() {
        let next_total = added + 1;
        let next_len = crate::count::binomial(next_total + actions - 1, actions - 1)
            .expect("bounded by the full count space");
        let mut next = vec![T::zero(); next_len];
        let mut counts = vec![0; actions];
        counts[actions - 1] = added;
        let mut r = 0;
        loop {
            let p = dist[r];
            if p != T::zero() {
                for (b, &q) in belief.iter().enumerate() {
                    if q == T::zero() {
                        continue;
                    }
                    counts[b] += 1;
                    let slot = rank_unchecked(&counts, next_total);
                    next[slot] = next[slot] + p * q;
                    counts[b] -= 1;
                }
            }
            r += 1;
            if !next_composition(&mut counts) {
                break;
            }
        }
        dist = next;
    }
    dist
}

/// Deterministic rule for choosing among tied maximizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    SmallestIndex,
    LargestIndex,
}

/// Smallest index attaining the maximum.
pub fn best_response<T: Scalar>(rewards: &[T]) -> Result<usize> {
    best_response_with(rewards, TieBreak::SmallestIndex)
}

/// Maximizer under `tie`. Entries within `T::TIE_TOL` (relative, floor 1)
/// of the maximum count as maximizers, so two rewards that are equal in
/// exact arithmetic but were summed in a different order still tie.
pub fn best_response_with<T: Scalar>(rewards: &[T], tie: TieBreak) -> Result<usize> {
    if rewards.is_empty() {
        return invalid("best response of an empty reward vector");
    }
    Ok(argmax(rewards, tie))
}

pub(crate) fn argmax<T: Scalar>(rewards: &[T], tie: TieBreak) -> usize {
    let max = rewards
        .iter()
        .copied()
        .fold(T::neg_infinity(), |m, r| if r > m { r } else { m });
    let slack = T::cast(T::TIE_TOL) * max.abs().max(T::one());
    let mut winners = rewards.iter().enumerate().filter(|(_, &r)| r >= max - slack);
    let pick = match tie {
        TieBreak::SmallestIndex => winners.next(),
        TieBreak::LargestIndex => winners.last(),
    };
    pick.map(|(a, _)| a).unwrap_or(0)
}
