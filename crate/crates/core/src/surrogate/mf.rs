//! Additive two-fidelity composition: a low-fidelity SRBF plus an SRBF of
//! the high-fidelity discrepancy, with uncorrelated uncertainty combination.

use crate::error::Result;
use crate::hydro::Fidelity;
use crate::scalar::Real;
use crate::surrogate::srbf::{train_srbf, SrbfConfig, SrbfModel};
use crate::surrogate::{combine_uncertainty, Prediction, TrainingSet};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Two-fidelity surrogate `f_hat = f_lf + discrepancy`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct MfSurrogate<T> {
    pub lf_model: SrbfModel<T>,
    /// Trained on high-fidelity residuals; `None` when no high-fidelity
    /// data exists, in which case the surrogate degrades to the
    /// low-fidelity model with zero discrepancy uncertainty.
    pub discrepancy_model: Option<SrbfModel<T>>,
}

/// Train the additive composition. The discrepancy targets are
/// `f_hf(x_j) - mean_lf(x_j)` at the high-fidelity inputs, which need not
/// be a subset of the low-fidelity ones.
pub fn train_mf<T: Real>(
    lf_data: &TrainingSet<T>,
    hf_data: &TrainingSet<T>,
    cfg: &SrbfConfig<T>,
) -> Result<MfSurrogate<T>> {
    let lf_model = train_srbf(lf_data, cfg)?;
    if hf_data.is_empty() {
        log::warn!("train_mf: no high-fidelity data; surrogate degrades to low fidelity");
        return Ok(MfSurrogate {
            lf_model,
            discrepancy_model: None,
        });
    }
    let residuals: Vec<T> = hf_data
        .inputs
        .iter()
        .zip(&hf_data.outputs)
        .map(|(x, &y)| y - lf_model.predict(x).mean)
        .collect();
    let disc_data = TrainingSet::new(hf_data.inputs.clone(), residuals, Fidelity::Fine)?;
    let discrepancy_model = Some(train_srbf(&disc_data, cfg)?);
    Ok(MfSurrogate {
        lf_model,
        discrepancy_model,
    })
}

impl<T: Real> MfSurrogate<T> {
    pub fn lf_only(&self) -> bool {
        self.discrepancy_model.is_none()
    }

    /// Uncertainty of the low-fidelity component alone.
    pub fn predict_lf(&self, x: &[T]) -> Prediction<T> {
        self.lf_model.predict(x)
    }
}

/// Combined mean and uncertainty `sqrt(U_lf^2 + U_disc^2)`.
pub fn predict_mf<T: Real>(mf: &MfSurrogate<T>, x: &[T]) -> Prediction<T> {
    let lf = mf.lf_model.predict(x);
    match &mf.discrepancy_model {
        None => lf,
        Some(disc) => {
            let d = disc.predict(x);
            Prediction {
                mean: lf.mean + d.mean,
                uncertainty: combine_uncertainty(lf.uncertainty, d.uncertainty),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::shifted_sobol;
    use crate::surrogate::srbf::{EpsilonSpec, MuSpec};

    fn sets(
        n_lf: usize,
        n_hf: usize,
        f_lf: impl Fn(&[f64]) -> f64,
        f_hf: impl Fn(&[f64]) -> f64,
    ) -> (TrainingSet<f64>, TrainingSet<f64>) {
        let lf_inputs = shifted_sobol::<f64>(3, n_lf, 1);
        let hf_inputs = shifted_sobol::<f64>(3, n_hf, 2);
        let lf = TrainingSet::new(
            lf_inputs.clone(),
            lf_inputs.iter().map(|x| f_lf(x)).collect(),
            Fidelity::Coarse,
        )
        .unwrap();
        let hf = TrainingSet::new(
            hf_inputs.clone(),
            hf_inputs.iter().map(|x| f_hf(x)).collect(),
            Fidelity::Fine,
        )
        .unwrap();
        (lf, hf)
    }

    fn cfg() -> SrbfConfig<f64> {
        SrbfConfig {
            mu: MuSpec::Absolute(0.0),
            epsilon: EpsilonSpec::Stratified { count: 8, seed: 4 },
            normalization: Some(vec![(0.0, 1.0); 3]),
        }
    }

    #[test]
    fn identical_fidelities_give_near_zero_discrepancy() {
        // high-fidelity points sit where the low-fidelity model
        // interpolates, so the residuals vanish
        let f = |x: &[f64]| x[0] + 0.5 * x[1] * x[2];
        let lf_inputs = shifted_sobol::<f64>(3, 40, 1);
        let hf_inputs: Vec<Vec<f64>> = lf_inputs.iter().step_by(3).cloned().collect();
        let lf = TrainingSet::new(
            lf_inputs.clone(),
            lf_inputs.iter().map(|x| f(x)).collect(),
            Fidelity::Coarse,
        )
        .unwrap();
        let hf = TrainingSet::new(
            hf_inputs.clone(),
            hf_inputs.iter().map(|x| f(x)).collect(),
            Fidelity::Fine,
        )
        .unwrap();
        let mf = train_mf(&lf, &hf, &cfg()).unwrap();
        for x in &hf.inputs {
            let d = mf.discrepancy_model.as_ref().unwrap().predict(x).mean;
            assert!(d.abs() < 1e-7, "discrepancy target should vanish, got {d}");
        }
        for x in shifted_sobol::<f64>(3, 15, 9) {
            let combined = predict_mf(&mf, &x);
            let lf_only = mf.predict_lf(&x);
            assert!(
                (combined.mean - lf_only.mean).abs() < 1e-6,
                "combined {} vs lf {}",
                combined.mean,
                lf_only.mean
            );
        }
    }

    #[test]
    fn constant_shift_is_recovered_inside_the_hull() {
        // linear low-fidelity truth is reproduced exactly by the tail, so
        // the residuals equal the shift everywhere
        let f1 = |x: &[f64]| 2.0 * x[0] - x[1] + 0.5 * x[2];
        let f2 = move |x: &[f64]| f1(x) + 1.0;
        let (lf, hf) = sets(50, 16, f1, f2);
        let mf = train_mf(&lf, &hf, &cfg()).unwrap();
        for x in shifted_sobol::<f64>(3, 25, 10) {
            let d = mf
                .discrepancy_model
                .as_ref()
                .unwrap()
                .predict(&x)
                .mean;
            assert!((d - 1.0).abs() < 1e-6, "shift estimate {d}");
            let combined = predict_mf(&mf, &x).mean;
            assert!((combined - f2(&x)).abs() < 1e-6, "combined {combined}");
        }
    }

    #[test]
    fn combined_uncertainty_is_root_sum_square_exactly() {
        let f1 = |x: &[f64]| x[0] * x[1];
        let f2 = |x: &[f64]| x[0] * x[1] + 0.3 * x[2];
        let (lf, hf) = sets(30, 14, f1, f2);
        let mf = train_mf(&lf, &hf, &cfg()).unwrap();
        for x in shifted_sobol::<f64>(3, 20, 44) {
            let u1 = mf.lf_model.predict(&x).uncertainty;
            let ue = mf.discrepancy_model.as_ref().unwrap().predict(&x).uncertainty;
            let combined = predict_mf(&mf, &x).uncertainty;
            assert!(
                (combined - (u1 * u1 + ue * ue).sqrt()).abs() < 1e-12,
                "combination not exact"
            );
        }
    }

    #[test]
    fn empty_high_fidelity_degrades_to_low_fidelity() {
        let f1 = |x: &[f64]| x[0] + x[2];
        let (lf, _) = sets(25, 8, f1, f1);
        let empty = TrainingSet::new(vec![], vec![], Fidelity::Fine).unwrap();
        let mf = train_mf(&lf, &empty, &cfg()).unwrap();
        assert!(mf.lf_only());
        let x = [0.2, 0.4, 0.6];
        let combined = predict_mf(&mf, &x);
        let lf_pred = mf.predict_lf(&x);
        assert_eq!(combined.mean, lf_pred.mean);
        assert_eq!(combined.uncertainty, lf_pred.uncertainty);
    }
}
