use rand_chacha::rand_core::RngCore;

use crate::count::{ActionProfile, GameDims};
use crate::error::{invalid, Result};
use crate::game::{AnonymousPolymatrixGame, SuccinctReward};
use crate::reward::check_simplex;
use crate::rng;
use crate::scalar::Scalar;

/// Finite additive reward noise: value `support[k]` with probability `probs[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffPerturbation<T> {
    support: Vec<T>,
    probs: Vec<T>,
    cumulative: Vec<f64>,
}

impl<T: Scalar> PayoffPerturbation<T> {
    pub fn new(support: Vec<T>, probs: Vec<T>) -> Result<Self> {
        if support.is_empty() {
            return invalid("perturbation support is empty");
        }
        if support.iter().any(|v| !v.is_finite()) {
            return invalid("perturbation support must be finite");
        }
        check_simplex(&probs, support.len(), "perturbation probabilities")?;
        let mut acc = 0.0;
        let cumulative = probs
            .iter()
            .map(|p| {
                acc += p.as_f64();
                acc
            })
            .collect();
        Ok(Self {
            support,
            probs,
            cumulative,
        })
    }

    /// Always zero.
    pub fn none() -> Self {
        Self {
            support: vec![T::zero()],
            probs: vec![T::one()],
            cumulative: vec![1.0],
        }
    }

    pub fn support(&self) -> &[T] {
        &self.support
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    /// Inverse-CDF draw from one uniform real.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> T {
        let u = rng::uniform01(rng);
        let k = self
            .cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.support.len() - 1);
        self.support[k]
    }

    pub fn mean(&self) -> T {
        self.support
            .iter()
            .zip(&self.probs)
            .fold(T::zero(), |acc, (&v, &p)| acc + v * p)
    }

    pub fn max_abs(&self) -> T {
        self.support.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Anonymous polymatrix game whose agent `i` receives `r^i(a) + theta^i`
/// with `theta^i` drawn afresh each stage. Adding a constant keeps both the
/// anonymous and the polymatrix structure of every realization.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomPayoffGame<T> {
    base: AnonymousPolymatrixGame<T>,
    perturbations: Vec<PayoffPerturbation<T>>,
}

impl<T: Scalar> RandomPayoffGame<T> {
    pub fn new(base: AnonymousPolymatrixGame<T>, perturbations: Vec<PayoffPerturbation<T>>) -> Result<Self> {
        if perturbations.len() != base.dims().agents() {
            return invalid(format!(
                "{} perturbations for {} agents",
                perturbations.len(),
                base.dims().agents()
            ));
        }
        Ok(Self { base, perturbations })
    }

    /// Every agent gets the same perturbation distribution.
    pub fn with_common(base: AnonymousPolymatrixGame<T>, perturbation: PayoffPerturbation<T>) -> Self {
        let perturbations = vec![perturbation; base.dims().agents()];
        Self { base, perturbations }
    }

    pub fn deterministic(base: AnonymousPolymatrixGame<T>) -> Self {
        Self::with_common(base, PayoffPerturbation::none())
    }

    pub fn base(&self) -> &AnonymousPolymatrixGame<T> {
        &self.base
    }

    pub fn perturbation(&self, agent: usize) -> &PayoffPerturbation<T> {
        &self.perturbations[agent]
    }

    pub fn dims(&self) -> GameDims {
        self.base.dims()
    }

    pub(crate) fn sample_reward_unchecked<R: RngCore + ?Sized>(
        &self,
        actions: &[usize],
        agent: usize,
        rng: &mut R,
    ) -> T {
        self.base.reward_unchecked(agent, actions) + self.perturbations[agent].sample(rng)
    }

    /// `E[rbar^i_theta] = rbar^i + E[theta^i]`.
    pub fn expected_succinct(&self, agent: usize) -> Result<SuccinctReward<T>> {
        let table = self.base.expand_polymatrix(agent)?;
        let shift = self.perturbations[agent].mean();
        SuccinctReward::new(self.dims(), table.values().iter().map(|&v| v + shift).collect())
    }

    /// `E[r^i_theta(a)]` for one joint profile.
    pub fn expected_reward(&self, agent: usize, actions: &[usize]) -> T {
        self.base.reward_unchecked(agent, actions) + self.perturbations[agent].mean()
    }

    /// Largest possible `|r^i_theta|` over agents, profiles and realizations.
    pub fn reward_bound(&self) -> T {
        let opponents = T::from_count(self.dims().agents() - 1);
        (0..self.dims().agents())
            .map(|i| opponents * self.base.pairwise(i).max_abs() + self.perturbations[i].max_abs())
            .fold(T::zero(), T::max)
    }
}

/// One stage reward `sum_{j != i} M^i[a^i][a^j] + theta^i`, drawing `theta^i` from `rng`.
pub fn sample_reward<T: Scalar, R: RngCore + ?Sized>(
    game: &RandomPayoffGame<T>,
    profile: &ActionProfile,
    agent: usize,
    rng: &mut R,
) -> Result<T> {
    game.dims().check_agent(agent)?;
    let profile = ActionProfile::new(&game.dims(), profile.actions().to_vec())?;
    Ok(game.sample_reward_unchecked(profile.actions(), agent, rng))
}
