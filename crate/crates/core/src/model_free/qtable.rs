use crate::count::{ActionProfile, GameDims};
use crate::error::{invalid, Error, Result};
use crate::game::SuccinctReward;
use crate::scalar::Scalar;
use crate::schedule::StepSizeSchedule;

/// Largest number of agents for which a joint-profile Q-table is built.
pub const MAX_JOINT_AGENTS: usize = 6;
/// Largest number of opponent profiles (columns) of a joint-profile Q-table.
pub const MAX_JOINT_COLUMNS: usize = 1 << 20;

/// What the columns of a Q-table stand for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QLayout {
    /// Rank of the opponent count.
    Aggregate,
    /// Full opponent profile, see [`opponent_index`].
    Joint,
    /// A single column: the value of the own action alone.
    OwnAction,
}

/// Per-agent reward estimates with per-cell visit counters.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable<T> {
    dims: GameDims,
    layout: QLayout,
    columns: usize,
    values: Vec<T>,
    visits: Vec<u64>,
}

impl<T: Scalar> QTable<T> {
    fn zeros(dims: GameDims, layout: QLayout, columns: usize) -> Self {
        let cells = dims.agents() * dims.actions() * columns;
        Self {
            dims,
            layout,
            columns,
            values: vec![T::zero(); cells],
            visits: vec![0; cells],
        }
    }

    pub fn aggregate(dims: GameDims) -> Self {
        Self::zeros(dims, QLayout::Aggregate, dims.count_space_size())
    }

    /// Fails with a capacity error when the opponent profiles cannot be enumerated.
    pub fn joint(dims: GameDims) -> Result<Self> {
        if dims.agents() > MAX_JOINT_AGENTS {
            return Err(Error::Capacity(format!(
                "joint Q-table over {} agents exceeds the limit of {MAX_JOINT_AGENTS}",
                dims.agents()
            )));
        }
        let columns = dims.power_checked(dims.agents() - 1, MAX_JOINT_COLUMNS)?;
        Ok(Self::zeros(dims, QLayout::Joint, columns))
    }

    pub fn own_action(dims: GameDims) -> Self {
        Self::zeros(dims, QLayout::OwnAction, 1)
    }

    /// Aggregate table pre-filled with the given succinct rewards, visits at zero.
    pub fn from_succinct(tables: &[SuccinctReward<T>]) -> Result<Self> {
        let dims = match tables.first() {
            Some(t) => t.dims(),
            None => return invalid("no succinct tables"),
        };
        if tables.len() != dims.agents() || tables.iter().any(|t| t.dims() != dims) {
            return invalid("need one succinct table per agent with matching dimensions");
        }
        let mut q = Self::aggregate(dims);
        q.values = tables.iter().flat_map(|t| t.values().iter().copied()).collect();
        Ok(q)
    }

    pub fn dims(&self) -> GameDims {
        self.dims
    }

    pub fn layout(&self) -> QLayout {
        self.layout
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    #[inline]
    fn cell(&self, agent: usize, action: usize, column: usize) -> usize {
        (agent * self.dims.actions() + action) * self.columns + column
    }

    pub fn get(&self, agent: usize, action: usize, column: usize) -> T {
        self.values[self.cell(agent, action, column)]
    }

    pub fn visits(&self, agent: usize, action: usize, column: usize) -> u64 {
        self.visits[self.cell(agent, action, column)]
    }

    pub fn row(&self, agent: usize, action: usize) -> &[T] {
        let start = self.cell(agent, action, 0);
        &self.values[start..start + self.columns]
    }

    /// All values, agent-major then own action then column.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Counts the visit, then `Q += beta_c * (reward - Q)` with `c` the
    /// visit count after incrementing, so the first visit uses `beta_1`.
    pub(crate) fn update(
        &mut self,
        agent: usize,
        action: usize,
        column: usize,
        reward: T,
        beta: &StepSizeSchedule,
    ) -> T {
        let cell = self.cell(agent, action, column);
        self.visits[cell] += 1;
        let step: T = beta.at(self.visits[cell] as usize);
        let q = &mut self.values[cell];
        *q = *q + step * (reward - *q);
        *q
    }
}

/// Visits one cell and moves its value toward `reward`; returns the new value.
pub fn q_update<T: Scalar>(
    q: &mut QTable<T>,
    agent: usize,
    action: usize,
    column: usize,
    reward: T,
    beta: &StepSizeSchedule,
) -> Result<T> {
    q.dims.check_agent(agent)?;
    q.dims.check_action(action)?;
    if column >= q.columns {
        return invalid(format!("column {column} out of range for {} columns", q.columns));
    }
    Ok(q.update(agent, action, column, reward, beta))
}

/// Mixed-radix index of the opponents' actions of `agent`, opponents in
/// agent order with the first opponent as the most significant digit.
pub fn opponent_index(dims: &GameDims, profile: &ActionProfile, agent: usize) -> usize {
    profile
        .actions()
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != agent)
        .fold(0, |idx, (_, &a)| idx * dims.actions() + a)
}
