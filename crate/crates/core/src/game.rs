//! Reward representations: pairwise matrices, full joint tables and succinct
//! (own action, aggregate count) tables.

use crate::count::{enumerate_counts, rank_unchecked, sigma_ranks, ActionProfile, GameDims};
use crate::error::{invalid, Error, Result};
use crate::reward::{aggregate_distribution_unchecked, row_expectation};
use crate::scalar::Scalar;

/// Largest joint table (entries per agent) that will be materialized.
pub const MAX_FULL_ENTRIES: usize = 1 << 24;

/// Square `n x n` payoff matrix, row = own action, column = opponent action.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> PayoffMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return invalid("payoff matrix has no rows");
        }
        let mut data = Vec::with_capacity(n * n);
        for (a, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return invalid(format!("payoff matrix row {a} has {} entries, expected {n}", row.len()));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return invalid(format!("payoff matrix row {a} has a non-finite entry"));
            }
            data.extend(row);
        }
        Ok(Self { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, own: usize, other: usize) -> T {
        self.data[own * self.n + other]
    }

    pub fn row(&self, own: usize) -> &[T] {
        &self.data[own * self.n..(own + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n).map(<[T]>::to_vec).collect()
    }

    /// `M = -M^T`, exactly.
    pub fn is_antisymmetric(&self) -> bool {
        (0..self.n).all(|a| (0..self.n).all(|b| self.get(a, b) == -self.get(b, a)))
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Anything that can evaluate individual expected rewards and hand out
/// succinct tables.
pub trait RewardModel<T: Scalar> {
    fn dims(&self) -> GameDims;

    /// `R^i(a, pi^{-i})` for every own action. Beliefs hold one vector per
    /// agent (the entry of `agent` is ignored) and are not validated.
    fn individual_rewards(&self, agent: usize, beliefs: &[Vec<T>]) -> Vec<T>;

    /// The table `rbar^i(a, x)`.
    fn succinct(&self, agent: usize) -> SuccinctReward<T>;
}

/// Polymatrix game where agent `i` applies the same pairwise matrix `M^i`
/// against every opponent: `r^i(a) = sum_{j != i} M^i[a^i][a^j]`.
///
/// Using one matrix per agent for all opponents makes the game anonymous by
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AnonymousPolymatrixGame<T> {
    dims: GameDims,
    pairwise: Vec<PayoffMatrix<T>>,
}

impl<T: Scalar> AnonymousPolymatrixGame<T> {
    pub fn new(dims: GameDims, pairwise: Vec<PayoffMatrix<T>>) -> Result<Self> {
        if pairwise.len() != dims.agents() {
            return invalid(format!(
                "{} pairwise matrices for {} agents",
                pairwise.len(),
                dims.agents()
            ));
        }
        if let Some(i) = pairwise.iter().position(|m| m.size() != dims.actions()) {
            return invalid(format!("matrix of agent {i} is not {0}x{0}", dims.actions()));
        }
        Ok(Self { dims, pairwise })
    }

    /// Every agent uses `matrix`.
    pub fn symmetric(dims: GameDims, matrix: PayoffMatrix<T>) -> Result<Self> {
        Self::new(dims, vec![matrix; dims.agents()])
    }

    pub fn dims(&self) -> GameDims {
        self.dims
    }

    pub fn pairwise(&self, agent: usize) -> &PayoffMatrix<T> {
        &self.pairwise[agent]
    }

    pub fn reward(&self, agent: usize, profile: &ActionProfile) -> Result<T> {
        self.dims.check_agent(agent)?;
        if profile.len() != self.dims.agents() {
            return invalid("profile length does not match the number of agents");
        }
        Ok(self.reward_unchecked(agent, profile.actions()))
    }

    /// Summed over opponent counts rather than opponents, so that permuting
    /// opponents leaves the value bit-identical and equal to the succinct entry.
    pub(crate) fn reward_unchecked(&self, agent: usize, actions: &[usize]) -> T {
        let m = &self.pairwise[agent];
        let own = actions[agent];
        (0..self.dims.actions()).fold(T::zero(), |acc, b| {
            let c = actions
                .iter()
                .enumerate()
                .filter(|&(j, &a)| j != agent && a == b)
                .count();
            acc + T::from_count(c) * m.get(own, b)
        })
    }

    /// Materializes `r^i` over all `n^N` profiles.
    pub fn expand_full(&self) -> Result<FullRewardTable<T>> {
        FullRewardTable::from_fn(self.dims, |agent, actions| self.reward_unchecked(agent, actions))
    }

    /// `rbar^i(a, x) = sum_b x[b] * M^i[a][b]`.
    pub fn expand_polymatrix(&self, agent: usize) -> Result<SuccinctReward<T>> {
        self.dims.check_agent(agent)?;
        let m = &self.pairwise[agent];
        Ok(SuccinctReward::from_fn(self.dims, |a, counts| {
            counts
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (b, &c)| acc + T::from_count(c) * m.get(a, b))
        }))
    }
}

impl<T: Scalar> RewardModel<T> for AnonymousPolymatrixGame<T> {
    fn dims(&self) -> GameDims {
        self.dims
    }

    fn individual_rewards(&self, agent: usize, beliefs: &[Vec<T>]) -> Vec<T> {
        // linear in each opponent: sum the opponent marginals first
        let n = self.dims.actions();
        let mut marginal = vec![T::zero(); n];
        for (_, belief) in beliefs.iter().enumerate().filter(|(j, _)| *j != agent) {
            for (m, &p) in marginal.iter_mut().zip(belief) {
                *m = *m + p;
            }
        }
        let m = &self.pairwise[agent];
        (0..n).map(|a| row_expectation(m.row(a), &marginal)).collect()
    }

    fn succinct(&self, agent: usize) -> SuccinctReward<T> {
        self.expand_polymatrix(agent).expect("agent in range")
    }
}

/// Per-agent rewards over every joint profile. Profiles are indexed in
/// mixed radix with agent 0 as the most significant digit.
#[derive(Debug, Clone, PartialEq)]
pub struct FullRewardTable<T> {
    dims: GameDims,
    values: Vec<Vec<T>>,
}

impl<T: Scalar> FullRewardTable<T> {
    pub fn new(dims: GameDims, values: Vec<Vec<T>>) -> Result<Self> {
        let size = dims.power_checked(dims.agents(), MAX_FULL_ENTRIES)?;
        if values.len() != dims.agents() {
            return invalid("full table needs one value vector per agent");
        }
        if let Some(i) = values.iter().position(|v| v.len() != size) {
            return invalid(format!("full table of agent {i} is incomplete (expected {size} entries)"));
        }
        Ok(Self { dims, values })
    }

    pub fn from_fn(dims: GameDims, mut f: impl FnMut(usize, &[usize]) -> T) -> Result<Self> {
        let size = dims.power_checked(dims.agents(), MAX_FULL_ENTRIES)?;
        let mut values = vec![Vec::with_capacity(size); dims.agents()];
        let mut actions = vec![0; dims.agents()];
        for _ in 0..size {
            for (i, v) in values.iter_mut().enumerate() {
                v.push(f(i, &actions));
            }
            advance_profile(&mut actions, dims.actions());
        }
        Ok(Self { dims, values })
    }

    pub fn dims(&self) -> GameDims {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.values[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index_of(&self, actions: &[usize]) -> usize {
        actions
            .iter()
            .fold(0, |idx, &a| idx * self.dims.actions() + a)
    }

    pub fn profile_at(&self, index: usize) -> Vec<usize> {
        let n = self.dims.actions();
        let mut actions = vec![0; self.dims.agents()];
        let mut rest = index;
        for slot in actions.iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        actions
    }

    pub fn get(&self, agent: usize, actions: &[usize]) -> T {
        self.values[agent][self.index_of(actions)]
    }

    pub fn set(&mut self, agent: usize, actions: &[usize], value: T) {
        let idx = self.index_of(actions);
        self.values[agent][idx] = value;
    }

    pub fn values(&self, agent: usize) -> &[T] {
        &self.values[agent]
    }

    /// Brute-force `R^i(a, pi^{-i})`: sums the table over every opponent
    /// profile weighted by the product of opponent probabilities.
    pub fn expected_rewards(&self, agent: usize, beliefs: &[Vec<T>]) -> Result<Vec<T>> {
        self.dims.check_agent(agent)?;
        if beliefs.len() != self.dims.agents() {
            return invalid("beliefs must hold one vector per agent");
        }
        for (j, b) in beliefs.iter().enumerate().filter(|(j, _)| *j != agent) {
            crate::reward::check_simplex(b, self.dims.actions(), &format!("belief about agent {j}"))?;
        }
        let mut out = vec![T::zero(); self.dims.actions()];
        for (idx, &r) in self.values[agent].iter().enumerate() {
            let actions = self.profile_at(idx);
            let weight = actions
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != agent)
                .fold(T::one(), |w, (j, &a)| w * beliefs[j][a]);
            out[actions[agent]] = out[actions[agent]] + weight * r;
        }
        Ok(out)
    }
}

fn advance_profile(actions: &mut [usize], n: usize) {
    for slot in actions.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return;
        }
        *slot = 0;
    }
}

/// How `succinct_from_full` compares rewards inside a permutation class.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum AnonymityCheck {
    #[default]
    Exact,
    /// Absolute tolerance, for tables produced by noisy estimation.
    Tolerance(f64),
}

/// One agent's succinct table `rbar^i`, shape `n x |X|`, row-major by own action.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccinctReward<T> {
    dims: GameDims,
    values: Vec<T>,
}

impl<T: Scalar> SuccinctReward<T> {
    pub fn new(dims: GameDims, values: Vec<T>) -> Result<Self> {
        let size = crate::count::succinct_size(&dims);
        if values.len() != size {
            return invalid(format!("succinct table has {} entries, expected {size}", values.len()));
        }
        Ok(Self { dims, values })
    }

    pub fn zeros(dims: GameDims) -> Self {
        Self {
            dims,
            values: vec![T::zero(); crate::count::succinct_size(&dims)],
        }
    }

    /// Fills `rbar(a, x)` from a function of the own action and the count vector.
    pub fn from_fn(dims: GameDims, mut f: impl FnMut(usize, &[usize]) -> T) -> Self {
        let all = enumerate_counts(&dims);
        let mut values = Vec::with_capacity(crate::count::succinct_size(&dims));
        for a in 0..dims.actions() {
            values.extend(all.iter().map(|c| f(a, c)));
        }
        Self { dims, values }
    }

    pub fn dims(&self) -> GameDims {
        self.dims
    }

    pub fn get(&self, own: usize, rank: usize) -> T {
        self.values[own * self.dims.count_space_size() + rank]
    }

    pub fn row(&self, own: usize) -> &[T] {
        let w = self.dims.count_space_size();
        &self.values[own * w..(own + 1) * w]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub(crate) fn expected_rewards(&self, mu: &[T]) -> Vec<T> {
        (0..self.dims.actions())
            .map(|a| row_expectation(self.row(a), mu))
            .collect()
    }

    /// Recovers `rbar^i` from a full table, checking that every permutation
    /// class of opponent profiles carries a single reward.
    pub fn from_full(full: &FullRewardTable<T>, agent: usize, check: AnonymityCheck) -> Result<Self> {
        let dims = full.dims();
        dims.check_agent(agent)?;
        let width = dims.count_space_size();
        // representative (profile index) of each (own action, count) cell
        let mut seen: Vec<Option<usize>> = vec![None; dims.actions() * width];
        let mut values = vec![T::zero(); dims.actions() * width];
        let mut actions = vec![0; dims.agents()];
        let mut counts = vec![0; dims.actions()];
        for idx in 0..full.len() {
            counts.iter_mut().for_each(|c| *c = 0);
            for (j, &a) in actions.iter().enumerate() {
                if j != agent {
                    counts[a] += 1;
                }
            }
            let cell = actions[agent] * width + rank_unchecked(&counts, dims.agents() - 1);
            let value = full.values(agent)[idx];
            match seen[cell] {
                None => {
                    seen[cell] = Some(idx);
                    values[cell] = value;
                }
                Some(first) => {
                    let stored = values[cell];
                    let equal = match check {
                        AnonymityCheck::Exact => stored == value,
                        AnonymityCheck::Tolerance(tol) => (stored - value).abs().as_f64() <= tol,
                    };
                    if !equal {
                        return Err(Error::NotAnonymous {
                            agent,
                            first: full.profile_at(first),
                            second: actions.clone(),
                            first_value: stored.as_f64(),
                            second_value: value.as_f64(),
                        });
                    }
                }
            }
            advance_profile(&mut actions, dims.actions());
        }
        Ok(Self { dims, values })
    }
}

pub fn succinct_from_full<T: Scalar>(full: &FullRewardTable<T>, agent: usize) -> Result<SuccinctReward<T>> {
    SuccinctReward::from_full(full, agent, AnonymityCheck::Exact)
}

/// General anonymous game given directly by its succinct tables; need not be polymatrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccinctGame<T> {
    dims: GameDims,
    tables: Vec<SuccinctReward<T>>,
}

impl<T: Scalar> SuccinctGame<T> {
    pub fn new(tables: Vec<SuccinctReward<T>>) -> Result<Self> {
        let dims = match tables.first() {
            Some(t) => t.dims(),
            None => return invalid("no succinct tables"),
        };
        if tables.len() != dims.agents() || tables.iter().any(|t| t.dims() != dims) {
            return invalid("need one succinct table per agent with matching dimensions");
        }
        Ok(Self { dims, tables })
    }

    pub fn table(&self, agent: usize) -> &SuccinctReward<T> {
        &self.tables[agent]
    }

    pub fn reward(&self, agent: usize, profile: &ActionProfile) -> Result<T> {
        self.dims.check_agent(agent)?;
        let ranks = sigma_ranks(&self.dims, profile);
        Ok(self.tables[agent].get(profile.get(agent), ranks[agent]))
    }
}

impl<T: Scalar> RewardModel<T> for SuccinctGame<T> {
    fn dims(&self) -> GameDims {
        self.dims
    }

    fn individual_rewards(&self, agent: usize, beliefs: &[Vec<T>]) -> Vec<T> {
        let opponents: Vec<&[T]> = beliefs
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != agent)
            .map(|(_, b)| b.as_slice())
            .collect();
        let mu = aggregate_distribution_unchecked(self.dims.actions(), &opponents);
        self.tables[agent].expected_rewards(&mu)
    }

    fn succinct(&self, agent: usize) -> SuccinctReward<T> {
        self.tables[agent].clone()
    }
}
