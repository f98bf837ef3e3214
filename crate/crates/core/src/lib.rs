//! Fictitious play with aggregate beliefs for anonymous polymatrix games.
//!
//! In an anonymous game an agent's reward depends on its opponents only
//! through how many of them play each action. This crate represents such
//! games succinctly over (own action, opponent count) pairs and implements:
//!
//! - [`count`]: opponent counts, their lexicographic ranking, and game sizes;
//! - [`game`] and [`reward`]: pairwise, full and succinct reward tables,
//!   expected rewards under individual and aggregate beliefs;
//! - [`discrete`]: classical and aggregate fictitious play with delta-greedy
//!   exploration;
//! - [`continuous`]: best-response and aggregate best-response flows under
//!   forward Euler;
//! - [`model_free`]: two-timescale learners that estimate rewards with
//!   Q-tables, plus an individual Q-learning baseline.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`.

pub mod continuous;
pub mod count;
pub mod discrete;
pub mod error;
pub mod game;
pub mod model_free;
pub mod reward;
pub mod rng;
pub mod scalar;
pub mod schedule;

pub use count::{
    enumerate_counts, rank_count, sigma, succinct_size, unrank_count, ActionProfile,
    AggregateCount, GameDims,
};
pub use error::{Error, Result};
pub use game::{
    succinct_from_full, AnonymityCheck, AnonymousPolymatrixGame, FullRewardTable, PayoffMatrix,
    RewardModel, SuccinctGame, SuccinctReward,
};
pub use reward::{
    aggregate_distribution, aggregate_distribution_excluding, best_response, best_response_with,
    expected_reward_aggregate, expected_reward_individual, MixedProfile, TieBreak,
};
pub use scalar::Scalar;
pub use schedule::{StepSizeSchedule, TwoTimescaleSchedule};

pub type PolymatrixGame = AnonymousPolymatrixGame<f64>;
pub type Matrix = PayoffMatrix<f64>;
pub type Succinct = SuccinctReward<f64>;
pub type FullTable = FullRewardTable<f64>;
pub type Mixed = MixedProfile<f64>;
pub type Beliefs = discrete::BeliefState<f64>;
pub type RandomGame = model_free::RandomPayoffGame<f64>;
pub type Perturbation = model_free::PayoffPerturbation<f64>;
pub type QValues = model_free::QTable<f64>;
