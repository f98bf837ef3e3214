use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Step-size sequence indexed from 1: `step(k) = (k + 1)^(-exponent)`,
/// or a constant for reductions and tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSizeSchedule {
    Power { exponent: f64 },
    Constant { step: f64 },
}

impl StepSizeSchedule {
    /// Robbins-Monro power law; the exponent must lie in `(0.5, 1]`.
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent > 0.5 && exponent <= 1.0) {
            return invalid(format!("step-size exponent {exponent} outside (0.5, 1]"));
        }
        Ok(Self::Power { exponent })
    }

    /// `1 / (k + 1)`: the plain running average.
    pub fn harmonic() -> Self {
        Self::Power { exponent: 1.0 }
    }

    pub fn constant(step: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&step) {
            return invalid(format!("constant step {step} outside [0, 1]"));
        }
        Ok(Self::Constant { step })
    }

    pub fn at<T: Scalar>(&self, k: usize) -> T {
        match *self {
            Self::Power { exponent } => T::from_count(k + 1).powf(T::cast(-exponent)),
            Self::Constant { step } => T::cast(step),
        }
    }
}

/// Belief (slow) and Q-value (fast) step sizes of the two-timescale learners.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoTimescaleSchedule {
    pub alpha: StepSizeSchedule,
    pub beta: StepSizeSchedule,
}

impl TwoTimescaleSchedule {
    pub fn power(alpha_exponent: f64, beta_exponent: f64) -> Result<Self> {
        if alpha_exponent <= beta_exponent {
            return invalid(format!(
                "belief exponent {alpha_exponent} must exceed Q exponent {beta_exponent} so that alpha/beta -> 0"
            ));
        }
        Ok(Self {
            alpha: StepSizeSchedule::power(alpha_exponent)?,
            beta: StepSizeSchedule::power(beta_exponent)?,
        })
    }
}

impl Default for TwoTimescaleSchedule {
    /// `alpha_k = (k+1)^-0.7`, `beta_k = (k+1)^-0.6`.
    fn default() -> Self {
        Self {
            alpha: StepSizeSchedule::Power { exponent: 0.7 },
            beta: StepSizeSchedule::Power { exponent: 0.6 },
        }
    }
}
