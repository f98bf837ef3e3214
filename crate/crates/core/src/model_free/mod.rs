//! Model-free learning in anonymous polymatrix games with random payoffs.
//!
//! Agents observe actions but not reward functions. Rewards are estimated in
//! Q-tables on a fast timescale while beliefs move on a slow one:
//! - two-timescale agg-FP keys its Q-table by (own action, opponent count);
//! - two-timescale FP keys it by (own action, full opponent profile), which
//!   grows exponentially in the number of agents;
//! - individual Q-learning keeps one value per own action and plays a
//!   Boltzmann distribution.
//!
//! All three draw the reward perturbations of a given seed from the same
//! stream in the same order (step by step, agents in index order), so runs of
//! different learners with one seed see the same perturbation realization.

mod learners;
mod metrics;
mod perturbation;
mod qtable;

pub use learners::{
    boltzmann, run_individual_q, run_two_timescale_aggfp, run_two_timescale_fp,
    IndividualQConfig, MetricSnapshot, ModelFreeTrajectory, TwoTimescaleConfig,
};
pub use metrics::{expected_q_values, ne_distance, q_error};
pub use perturbation::{sample_reward, PayoffPerturbation, RandomPayoffGame};
pub use qtable::{opponent_index, q_update, QLayout, QTable, MAX_JOINT_AGENTS, MAX_JOINT_COLUMNS};
