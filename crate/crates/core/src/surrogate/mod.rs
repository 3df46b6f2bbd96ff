//! Stochastic radial-basis-function regression with Tikhonov
//! regularization, ensemble-based uncertainty, and additive two-fidelity
//! composition.

pub mod mf;
pub mod srbf;

pub use mf::{predict_mf, train_mf, MfSurrogate};
pub use srbf::{train_srbf, EpsilonSpec, MuSpec, SrbfConfig, SrbfModel};

use crate::error::{Error, Result};
use crate::hydro::Fidelity;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Training data at one fidelity level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingSet<T> {
    pub inputs: Vec<Vec<T>>,
    pub outputs: Vec<T>,
    pub fidelity: Fidelity,
}

impl<T: Real> TrainingSet<T> {
    pub fn new(inputs: Vec<Vec<T>>, outputs: Vec<T>, fidelity: Fidelity) -> Result<Self> {
        if inputs.len() != outputs.len() {
            return Err(Error::domain(
                "training_set",
                format!("{} inputs vs {} outputs", inputs.len(), outputs.len()),
            ));
        }
        let dim = inputs.first().map(|x| x.len()).unwrap_or(0);
        if inputs.iter().any(|x| x.len() != dim) {
            return Err(Error::domain("training_set", "ragged input dimensions".to_string()));
        }
        if inputs.iter().flatten().any(|v| !v.is_finite())
            || outputs.iter().any(|v| !v.is_finite())
        {
            return Err(Error::domain("training_set", "non-finite entries".to_string()));
        }
        Ok(TrainingSet {
            inputs,
            outputs,
            fidelity,
        })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.inputs.first().map(|x| x.len()).unwrap_or(0)
    }
}

/// Mean and uncertainty of a surrogate at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction<T> {
    pub mean: T,
    pub uncertainty: T,
}

/// Root-sum-square combination of uncorrelated uncertainty contributions.
pub fn combine_uncertainty<T: Real>(u1: T, u2: T) -> T {
    (u1 * u1 + u2 * u2).sqrt()
}
