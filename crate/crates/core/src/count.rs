//! Game dimensions, joint action profiles and the space of aggregate counts.
//!
//! An aggregate count is the vector holding, for each action, how many of an
//! agent's opponents play it. With `N` agents and `n` actions the counts are
//! the `n`-part compositions of `N - 1`. They are indexed in lexicographic
//! order of the count vector, so `(0, .., 0, N-1)` has rank 0 and
//! `(N-1, 0, .., 0)` has the last rank.

use crate::error::{invalid, Error, Result};

/// Binomial coefficient, `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // exact at every step: acc * (n - k + i) is divisible by i
        acc = acc.checked_mul((n - k + i) as u128)? / i as u128;
    }
    usize::try_from(acc).ok()
}

/// Number of `parts`-part compositions of `total` (zero parts allowed).
fn compositions(total: usize, parts: usize) -> usize {
    if parts == 0 {
        return usize::from(total == 0);
    }
    binomial(total + parts - 1, parts - 1).expect("validated by GameDims")
}

/// Number of agents and the size of the shared action set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameDims {
    agents: usize,
    actions: usize,
    count_space: usize,
}

impl GameDims {
    pub fn new(agents: usize, actions: usize) -> Result<Self> {
        if agents < 2 {
            return invalid(format!("need at least 2 agents, got {agents}"));
        }
        if actions < 1 {
            return invalid("need at least 1 action");
        }
        let count_space = binomial(agents + actions - 2, actions - 1)
            .filter(|s| s.checked_mul(actions).is_some())
            .ok_or_else(|| {
                Error::Capacity(format!(
                    "aggregate count space for N={agents}, n={actions} does not fit in usize"
                ))
            })?;
        Ok(Self {
            agents,
            actions,
            count_space,
        })
    }

    pub fn agents(&self) -> usize {
        self.agents
    }

    pub fn actions(&self) -> usize {
        self.actions
    }

    /// `|X| = C(N + n - 2, n - 1)`.
    pub fn count_space_size(&self) -> usize {
        self.count_space
    }

    /// `n^k`, or a capacity error when it exceeds `limit`.
    pub(crate) fn power_checked(&self, exponent: usize, limit: usize) -> Result<usize> {
        let mut size: usize = 1;
        for _ in 0..exponent {
            size = size
                .checked_mul(self.actions)
                .filter(|&s| s <= limit)
                .ok_or_else(|| {
                    Error::Capacity(format!(
                        "{}^{} entries exceed the enumeration limit {limit}",
                        self.actions, exponent
                    ))
                })?;
        }
        Ok(size)
    }

    pub(crate) fn check_agent(&self, agent: usize) -> Result<()> {
        if agent >= self.agents {
            return invalid(format!("agent index {agent} out of range for N={}", self.agents));
        }
        Ok(())
    }

    pub(crate) fn check_action(&self, action: usize) -> Result<()> {
        if action >= self.actions {
            return invalid(format!("action {action} out of range for n={}", self.actions));
        }
        Ok(())
    }
}

/// Entries in one agent's succinct reward table: `n * C(N + n - 2, n - 1)`.
pub fn succinct_size(dims: &GameDims) -> usize {
    dims.actions() * dims.count_space_size()
}

/// Joint action: one action index per agent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionProfile(Vec<usize>);

impl ActionProfile {
    pub fn new(dims: &GameDims, actions: Vec<usize>) -> Result<Self> {
        if actions.len() != dims.agents() {
            return invalid(format!(
                "profile has {} entries, expected {}",
                actions.len(),
                dims.agents()
            ));
        }
        for &a in &actions {
            dims.check_action(a)?;
        }
        Ok(Self(actions))
    }

    pub(crate) fn from_vec_unchecked(actions: Vec<usize>) -> Self {
        Self(actions)
    }

    pub fn actions(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, agent: usize) -> usize {
        self.0[agent]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Action counts over all agents (no exclusion).
    pub fn counts(&self, actions: usize) -> Vec<usize> {
        let mut counts = vec![0; actions];
        for &a in &self.0 {
            counts[a] += 1;
        }
        counts
    }
}

/// Opponent action counts together with their rank in the count space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AggregateCount {
    counts: Vec<usize>,
    rank: usize,
}

impl AggregateCount {
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

/// Counts of the opponents of `excluded` playing each action.
pub fn sigma(dims: &GameDims, profile: &ActionProfile, excluded: usize) -> Result<AggregateCount> {
    dims.check_agent(excluded)?;
    if profile.len() != dims.agents() {
        return invalid("profile length does not match the number of agents");
    }
    let mut counts = vec![0; dims.actions()];
    for (j, &a) in profile.actions().iter().enumerate() {
        dims.check_action(a)?;
        if j != excluded {
            counts[a] += 1;
        }
    }
    let rank = rank_unchecked(&counts, dims.agents() - 1);
    Ok(AggregateCount { counts, rank })
}

/// Ranks of `sigma(profile, i)` for every agent `i`, in agent order.
pub(crate) fn sigma_ranks(dims: &GameDims, profile: &ActionProfile) -> Vec<usize> {
    let mut counts = profile.counts(dims.actions());
    let total = dims.agents() - 1;
    profile
        .actions()
        .iter()
        .map(|&a| {
            counts[a] -= 1;
            let r = rank_unchecked(&counts, total);
            counts[a] += 1;
            r
        })
        .collect()
}

pub fn rank_count(dims: &GameDims, counts: &[usize]) -> Result<usize> {
    if counts.len() != dims.actions() {
        return invalid(format!(
            "count vector has {} entries, expected {}",
            counts.len(),
            dims.actions()
        ));
    }
    let sum: usize = counts.iter().sum();
    if sum != dims.agents() - 1 {
        return invalid(format!(
            "count vector sums to {sum}, expected {}",
            dims.agents() - 1
        ));
    }
    Ok(rank_unchecked(counts, sum))
}

pub fn unrank_count(rank: usize, dims: &GameDims) -> Result<AggregateCount> {
    if rank >= dims.count_space_size() {
        return invalid(format!(
            "rank {rank} out of range for |X| = {}",
            dims.count_space_size()
        ));
    }
    let counts = unrank_unchecked(rank, dims.agents() - 1, dims.actions());
    Ok(AggregateCount { counts, rank })
}

/// Lexicographic rank of a composition of `total`.
///
/// The compositions skipped by fixing position `p` to `c` instead of any
/// smaller value are summed in closed form with the hockey-stick identity.
pub(crate) fn rank_unchecked(counts: &[usize], total: usize) -> usize {
    let n = counts.len();
    let mut rank = 0;
    let mut remaining = total;
    for (p, &c) in counts.iter().enumerate().take(n.saturating_sub(1)) {
        let k = n - p - 1;
        if c > 0 {
            rank += binomial(remaining + k, k).expect("validated")
                - binomial(remaining - c + k, k).expect("validated");
        }
        remaining -= c;
    }
    rank
}

pub(crate) fn unrank_unchecked(mut rank: usize, total: usize, parts: usize) -> Vec<usize> {
    let mut counts = vec![0; parts];
    let mut remaining = total;
    for p in 0..parts.saturating_sub(1) {
        let rest = parts - p - 1;
        let mut v = 0;
        loop {
            let block = compositions(remaining - v, rest);
            if rank < block {
                break;
            }
            rank -= block;
            v += 1;
        }
        counts[p] = v;
        remaining -= v;
    }
    if parts > 0 {
        counts[parts - 1] = remaining;
    }
    counts
}

/// Advances `counts` to the next composition in lexicographic order.
/// Returns `false` after the last one.
pub(crate) fn next_composition(counts: &mut [usize]) -> bool {
    let n = counts.len();
    if n < 2 {
        return false;
    }
    // find the rightmost position (excluding the last) that can grow
    let mut p = n - 1;
    let mut tail = counts[n - 1];
    loop {
        if p == 0 {
            return false;
        }
        p -= 1;
        if tail > 0 {
            counts[p] += 1;
            for c in counts.iter_mut().skip(p + 1) {
                *c = 0;
            }
            counts[n - 1] = tail - 1;
            return true;
        }
        tail += counts[p];
    }
}

/// All count vectors of `dims` in rank order.
pub fn enumerate_counts(dims: &GameDims) -> Vec<Vec<usize>> {
    let n = dims.actions();
    let mut current = vec![0; n];
    current[n - 1] = dims.agents() - 1;
    let mut out = Vec::with_capacity(dims.count_space_size());
    loop {
        out.push(current.clone());
        if !next_composition(&mut current) {
            break;
        }
    }
    out
}
