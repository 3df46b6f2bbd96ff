//! Power-kernel RBF regression with a linear polynomial tail and a
//! stochastic shape exponent.
//!
//! Each model holds one coefficient set per exponent sample `eps ~ U(1,3)`;
//! the ensemble mean is the prediction and twice the ensemble standard
//! deviation is the uncertainty. Regularization solves the stacked system
//! `[A P; sqrt(mu) I 0] [w; c] = [y; 0]` in the least-squares sense; the
//! `mu = 0` limit is the interpolating saddle system `[A P; P^T 0]`, whose
//! solution minimizes `||w||` among interpolants and therefore reproduces
//! polynomials of the tail degree exactly.

use crate::error::{Error, Result};
use crate::linalg::{lstsq, lu_solve, Matrix};
use crate::sampling::stratified_uniform;
use crate::scalar::Real;
use crate::surrogate::{Prediction, TrainingSet};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

/// Regularization weight selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MuSpec<T> {
    /// Fixed weight.
    Absolute(T),
    /// Weight relative to the kernel-matrix scale `||A||_F / n`.
    Relative(T),
    /// Pick the relative weight by generalized cross-validation over a
    /// fixed candidate grid.
    Gcv,
}

impl<T: Real> Default for MuSpec<T> {
    fn default() -> Self {
        MuSpec::Relative(T::of(1e-8))
    }
}

/// Shape-exponent sampling strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EpsilonSpec<T> {
    /// Stratified low-discrepancy draw from U(1, 3), deterministic per seed.
    Stratified { count: usize, seed: u64 },
    /// Explicit exponent list (each must lie in [1, 3]).
    Explicit(Vec<T>),
}

impl<T: Real> Default for EpsilonSpec<T> {
    fn default() -> Self {
        EpsilonSpec::Stratified { count: 16, seed: 7 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SrbfConfig<T> {
    pub mu: MuSpec<T>,
    pub epsilon: EpsilonSpec<T>,
    /// Input box used to normalize coordinates before kernel evaluation;
    /// inferred from the data extents when absent.
    pub normalization: Option<Vec<(T, T)>>,
}

impl<T: Real> Default for SrbfConfig<T> {
    fn default() -> Self {
        SrbfConfig {
            mu: MuSpec::default(),
            epsilon: EpsilonSpec::default(),
            normalization: None,
        }
    }
}

/// Trained stochastic RBF model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct SrbfModel<T> {
    pub version: u32,
    /// Normalized training inputs (kernel centers).
    pub centers: Vec<Vec<T>>,
    /// Normalization box per input dimension.
    pub norm_lo: Vec<T>,
    pub norm_hi: Vec<T>,
    /// Shape exponents of the ensemble.
    pub eps_samples: Vec<T>,
    /// Per-exponent coefficients: `n` kernel weights then `d + 1` tail
    /// coefficients (constant first).
    pub coeffs: Vec<Vec<T>>,
    /// Effective regularization weight per exponent.
    pub mu_eff: Vec<T>,
    pub train_hash: String,
}

pub const SRBF_FORMAT_VERSION: u32 = 1;

fn normalize_point<T: Real>(x: &[T], lo: &[T], hi: &[T]) -> Vec<T> {
    x.iter()
        .zip(lo.iter().zip(hi))
        .map(|(&v, (&l, &h))| {
            let w = h - l;
            if w > T::zero() {
                (v - l) / w
            } else {
                v - l
            }
        })
        .collect()
}

fn dist<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .fold(T::zero(), |acc, v| acc + v)
        .sqrt()
}

fn kernel_matrix<T: Real>(pts: &[Vec<T>], eps: T) -> Matrix<T> {
    let n = pts.len();
    let mut a = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = dist(&pts[i], &pts[j]).powf(eps);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

fn tail_matrix<T: Real>(pts: &[Vec<T>], dim: usize) -> Matrix<T> {
    let n = pts.len();
    let mut p = Matrix::zeros(n, dim + 1);
    for i in 0..n {
        p[(i, 0)] = T::one();
        for d in 0..dim {
            p[(i, d + 1)] = pts[i][d];
        }
    }
    p
}

/// Solve for one exponent at the given absolute `mu`.
fn solve_coeffs<T: Real>(
    a: &Matrix<T>,
    p: &Matrix<T>,
    y: &[T],
    mu: T,
) -> Result<Vec<T>> {
    let n = a.rows();
    let nt = p.cols();
    if mu == T::zero() {
        // interpolating saddle system [A P; P^T 0]
        let m = n + nt;
        let mut sys = Matrix::zeros(m, m);
        for i in 0..n {
            for j in 0..n {
                sys[(i, j)] = a[(i, j)];
            }
            for j in 0..nt {
                sys[(i, n + j)] = p[(i, j)];
                sys[(n + j, i)] = p[(i, j)];
            }
        }
        let mut rhs = vec![T::zero(); m];
        rhs[..n].copy_from_slice(y);
        lu_solve(sys, &rhs).map_err(|e| {
            Error::RankDeficient(format!("interpolation system singular ({e})"))
        })
    } else {
        // stacked least squares [A P; sqrt(mu) I 0]
        let rows = 2 * n;
        let cols = n + nt;
        let mut sys = Matrix::zeros(rows, cols);
        for i in 0..n {
            for j in 0..n {
                sys[(i, j)] = a[(i, j)];
            }
            for j in 0..nt {
                sys[(i, n + j)] = p[(i, j)];
            }
            sys[(n + i, i)] = mu.sqrt();
        }
        let mut rhs = vec![T::zero(); rows];
        rhs[..n].copy_from_slice(y);
        lstsq(&sys, &rhs)
    }
}

/// GCV score `n ||r||^2 / tr(I - H)^2` for the ridge problem
/// `(M^T M + mu J) z = M^T y` with `J = diag(I_n, 0)`.
fn gcv_score<T: Real>(a: &Matrix<T>, p: &Matrix<T>, y: &[T], mu: T) -> Result<T> {
    let n = a.rows();
    let nt = p.cols();
    let cols = n + nt;
    let mut m = Matrix::zeros(n, cols);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = a[(i, j)];
        }
        for j in 0..nt {
            m[(i, n + j)] = p[(i, j)];
        }
    }
    // normal matrix with ridge on the kernel block
    let mt = m.transpose();
    let mut nm = mt.matmul(&m);
    for i in 0..n {
        nm[(i, i)] += mu;
    }
    let lu = match crate::linalg::LuDecomp::factor(nm) {
        Ok(lu) => lu,
        // a candidate weight too small to stabilize the normal system is
        // simply not a viable GCV choice
        Err(_) => return Ok(T::infinity()),
    };
    // H = M (M^T M + mu J)^{-1} M^T ; trace via one solve per data row
    let mut trace = T::zero();
    for i in 0..n {
        let z = lu.solve(m.row(i));
        let hi = m.matvec(&z);
        trace = trace + hi[i];
    }
    let mty = m.t_matvec(y);
    let z = lu.solve(&mty);
    let hy = m.matvec(&z);
    let mut rss = T::zero();
    for i in 0..n {
        let r = y[i] - hy[i];
        rss = rss + r * r;
    }
    let denom = T::of_usize(n) - trace;
    if denom <= T::zero() {
        return Ok(T::infinity());
    }
    Ok(T::of_usize(n) * rss / (denom * denom))
}

/// Train one stochastic RBF model.
pub fn train_srbf<T: Real>(data: &TrainingSet<T>, cfg: &SrbfConfig<T>) -> Result<SrbfModel<T>> {
    let n = data.len();
    let dim = data.dim();
    if n < dim + 2 {
        return Err(Error::domain(
            "training_set",
            format!("need at least dim + 2 = {} points, got {n}", dim + 2),
        ));
    }
    let (lo, hi) = match &cfg.normalization {
        Some(b) => (
            b.iter().map(|&(l, _)| l).collect::<Vec<T>>(),
            b.iter().map(|&(_, h)| h).collect::<Vec<T>>(),
        ),
        None => {
            let mut lo = data.inputs[0].clone();
            let mut hi = data.inputs[0].clone();
            for x in &data.inputs {
                for d in 0..dim {
                    lo[d] = lo[d].min(x[d]);
                    hi[d] = hi[d].max(x[d]);
                }
            }
            (lo, hi)
        }
    };
    let centers: Vec<Vec<T>> = data
        .inputs
        .iter()
        .map(|x| normalize_point(x, &lo, &hi))
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            if dist(&centers[i], &centers[j]) < T::of(1e-12) {
                return Err(Error::domain(
                    "training_set",
                    format!("duplicate inputs at rows {i} and {j}"),
                ));
            }
        }
    }
    let eps_samples: Vec<T> = match &cfg.epsilon {
        EpsilonSpec::Stratified { count, seed } => {
            stratified_uniform(*count, T::one(), T::of(3.0), *seed)
        }
        EpsilonSpec::Explicit(list) => {
            if list.iter().any(|&e| e < T::one() || e > T::of(3.0)) {
                return Err(Error::domain("epsilon", "exponents must lie in [1, 3]".to_string()));
            }
            list.clone()
        }
    };
    if eps_samples.is_empty() {
        return Err(Error::domain("epsilon", "need at least one exponent".to_string()));
    }

    let p = tail_matrix(&centers, dim);
    let mut coeffs = Vec::with_capacity(eps_samples.len());
    let mut mu_eff = Vec::with_capacity(eps_samples.len());
    for &eps in &eps_samples {
        let a = kernel_matrix(&centers, eps);
        // scale-aware weight; the power kernel has zero diagonal, so the
        // Frobenius norm stands in for the trace scale
        let scale = a.frobenius_norm() / T::of_usize(n).max(T::one());
        let mu = match cfg.mu {
            MuSpec::Absolute(m) => m,
            MuSpec::Relative(rel) => rel * scale,
            MuSpec::Gcv => {
                let mut best = (T::infinity(), T::zero());
                for rel_exp in [-12.0, -10.0, -8.0, -6.0, -4.0, -2.0] {
                    let cand = T::of(10f64.powf(rel_exp)) * scale;
                    let score = gcv_score(&a, &p, &data.outputs, cand)?;
                    if score < best.0 {
                        best = (score, cand);
                    }
                }
                best.1
            }
        };
        if mu < T::zero() {
            return Err(Error::domain("mu", format!("must be >= 0, got {mu}")));
        }
        let c = solve_coeffs(&a, &p, &data.outputs, mu)?;
        coeffs.push(c);
        mu_eff.push(mu);
    }

    let mut hasher = Sha256::new();
    for x in &data.inputs {
        for v in x {
            hasher.update(v.as_f64().to_le_bytes());
        }
    }
    for v in &data.outputs {
        hasher.update(v.as_f64().to_le_bytes());
    }
    let train_hash = hasher
        .finalize()
        .iter()
        .take(8)
        .map(|b| format!("{b:02x}"))
        .collect();

    Ok(SrbfModel {
        version: SRBF_FORMAT_VERSION,
        centers,
        norm_lo: lo,
        norm_hi: hi,
        eps_samples,
        coeffs,
        mu_eff,
        train_hash,
    })
}

impl<T: Real> SrbfModel<T> {
    pub fn dim(&self) -> usize {
        self.norm_lo.len()
    }

    fn eval_single(&self, xn: &[T], eps_idx: usize) -> T {
        let n = self.centers.len();
        let dim = self.dim();
        let c = &self.coeffs[eps_idx];
        let eps = self.eps_samples[eps_idx];
        let mut acc = c[n]; // constant tail term
        for d in 0..dim {
            acc = acc + c[n + 1 + d] * xn[d];
        }
        for (i, center) in self.centers.iter().enumerate() {
            let r = dist(xn, center);
            if r > T::zero() {
                acc = acc + c[i] * r.powf(eps);
            }
        }
        acc
    }

    /// Ensemble mean and twice the ensemble standard deviation.
    pub fn predict(&self, x: &[T]) -> Prediction<T> {
        let xn = normalize_point(x, &self.norm_lo, &self.norm_hi);
        let k = self.eps_samples.len();
        let vals: Vec<T> = (0..k).map(|e| self.eval_single(&xn, e)).collect();
        let mean = vals.iter().fold(T::zero(), |a, &v| a + v) / T::of_usize(k);
        let uncertainty = if k > 1 {
            let var = vals
                .iter()
                .fold(T::zero(), |a, &v| a + (v - mean) * (v - mean))
                / T::of_usize(k - 1);
            T::of(2.0) * var.sqrt()
        } else {
            T::zero()
        };
        Prediction { mean, uncertainty }
    }
}

impl<T: Real + Serialize + DeserializeOwned> SrbfModel<T> {
    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let m: SrbfModel<T> = serde_json::from_str(&text)?;
        if m.version != SRBF_FORMAT_VERSION {
            return Err(Error::InvalidConfig(format!(
                "surrogate format version {} (expected {})",
                m.version, SRBF_FORMAT_VERSION
            )));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hydro::Fidelity;
    use crate::sampling::{shifted_sobol, splitmix64};

    fn training_5d(n: usize, seed: u64, f: impl Fn(&[f64]) -> f64) -> TrainingSet<f64> {
        let inputs = shifted_sobol::<f64>(5, n, seed);
        let outputs = inputs.iter().map(|x| f(x)).collect();
        TrainingSet::new(inputs, outputs, Fidelity::Coarse).unwrap()
    }

    fn interp_config() -> SrbfConfig<f64> {
        SrbfConfig {
            mu: MuSpec::Absolute(0.0),
            epsilon: EpsilonSpec::Stratified { count: 8, seed: 3 },
            normalization: None,
        }
    }

    #[test]
    fn interpolates_training_points_at_mu_zero() {
        let data = training_5d(24, 11, |x| (3.0 * x[0]).sin() + x[1] * x[2] - x[4]);
        let model = train_srbf(&data, &interp_config()).unwrap();
        for (x, &y) in data.inputs.iter().zip(&data.outputs) {
            let p = model.predict(x);
            let rel = (p.mean - y).abs() / y.abs().max(1.0);
            assert!(rel < 1e-8, "interpolation error {rel}");
            assert!(p.uncertainty < 1e-7, "ensemble disagrees at training point");
        }
    }

    #[test]
    fn linear_functions_are_reproduced_off_sample() {
        let lin = |x: &[f64]| 2.0 + 3.0 * x[0] - 1.5 * x[1] + 0.25 * x[3];
        let data = training_5d(20, 4, lin);
        let model = train_srbf(&data, &interp_config()).unwrap();
        let probes = shifted_sobol::<f64>(5, 30, 99);
        for x in &probes {
            let p = model.predict(x);
            assert!(
                (p.mean - lin(x)).abs() < 1e-8,
                "linear reproduction failed: {} vs {}",
                p.mean,
                lin(x)
            );
        }
    }

    #[test]
    fn huge_mu_collapses_to_linear_least_squares() {
        let data = training_5d(30, 8, |x| x[0] * x[0] + 0.3 * x[1] - 0.7 * x[2]);
        let cfg = SrbfConfig {
            mu: MuSpec::Relative(1e10),
            epsilon: EpsilonSpec::Explicit(vec![1.5]),
            normalization: None,
        };
        let model = train_srbf(&data, &cfg).unwrap();
        // direct linear least squares on [1, x]
        let rows: Vec<Vec<f64>> = data
            .inputs
            .iter()
            .map(|x| {
                let mut r = vec![1.0];
                r.extend_from_slice(x);
                r
            })
            .collect();
        let a = Matrix::from_rows(&rows);
        let beta = lstsq(&a, &data.outputs).unwrap();
        for x in &data.inputs {
            let lsq: f64 = beta[0] + x.iter().zip(&beta[1..]).map(|(v, b)| v * b).sum::<f64>();
            let p = model.predict(x);
            assert!((p.mean - lsq).abs() < 1e-6, "{} vs lsq {}", p.mean, lsq);
        }
    }

    #[test]
    fn single_epsilon_has_zero_uncertainty() {
        let data = training_5d(16, 2, |x| x[0] + x[1]);
        let cfg = SrbfConfig {
            mu: MuSpec::Relative(1e-8),
            epsilon: EpsilonSpec::Explicit(vec![1.7]),
            normalization: None,
        };
        let model = train_srbf(&data, &cfg).unwrap();
        let p = model.predict(&[0.3, 0.9, 0.1, 0.5, 0.7]);
        assert_eq!(p.uncertainty, 0.0);
    }

    #[test]
    fn uncertainty_grows_away_from_the_training_hull() {
        let inputs: Vec<Vec<f64>> = (0..12).map(|i| vec![i as f64 / 11.0]).collect();
        let outputs: Vec<f64> = inputs.iter().map(|x| (4.0 * x[0]).sin()).collect();
        let data = TrainingSet::new(inputs, outputs, Fidelity::Coarse).unwrap();
        let cfg = SrbfConfig {
            mu: MuSpec::Absolute(0.0),
            epsilon: EpsilonSpec::Stratified { count: 12, seed: 5 },
            normalization: Some(vec![(0.0, 1.0)]),
        };
        let model = train_srbf(&data, &cfg).unwrap();
        let us: Vec<f64> = [1.1, 1.4, 1.8, 2.5]
            .iter()
            .map(|&x| model.predict(&[x]).uncertainty)
            .collect();
        for w in us.windows(2) {
            assert!(w[1] > w[0], "uncertainty not growing: {us:?}");
        }
        let inside = model.predict(&[0.5]).uncertainty;
        assert!(us[0] > inside);
    }

    #[test]
    fn predictions_invariant_under_training_permutation() {
        let data = training_5d(18, 21, |x| x[0] * x[1] + x[2]);
        let mut rev_inputs = data.inputs.clone();
        let mut rev_outputs = data.outputs.clone();
        rev_inputs.reverse();
        rev_outputs.reverse();
        let data_rev = TrainingSet::new(rev_inputs, rev_outputs, Fidelity::Coarse).unwrap();
        let m1 = train_srbf(&data, &interp_config()).unwrap();
        let m2 = train_srbf(&data_rev, &interp_config()).unwrap();
        for x in shifted_sobol::<f64>(5, 20, 77) {
            let a = m1.predict(&x).mean;
            let b = m2.predict(&x).mean;
            assert!((a - b).abs() < 1e-8, "permutation changed prediction");
        }
    }

    #[test]
    fn adding_a_point_keeps_other_training_values_at_mu_zero() {
        let data = training_5d(15, 31, |x| (2.0 * x[0]).cos() + x[3]);
        let mut bigger_inputs = data.inputs.clone();
        let mut bigger_outputs = data.outputs.clone();
        bigger_inputs.push(vec![0.21, 0.93, 0.4, 0.66, 0.05]);
        bigger_outputs.push(1.234);
        let bigger = TrainingSet::new(bigger_inputs, bigger_outputs, Fidelity::Coarse).unwrap();
        let cfg = SrbfConfig {
            mu: MuSpec::Absolute(0.0),
            epsilon: EpsilonSpec::Explicit(vec![1.3]),
            normalization: Some(vec![(0.0, 1.0); 5]),
        };
        let m2 = train_srbf(&bigger, &cfg).unwrap();
        for (x, &y) in data.inputs.iter().zip(&data.outputs) {
            let p = m2.predict(x);
            assert!((p.mean - y).abs() / y.abs().max(1.0) < 1e-8);
        }
    }

    #[test]
    fn stratified_exponents_stay_in_range() {
        let data = training_5d(14, 6, |x| x[0]);
        let model = train_srbf(&data, &SrbfConfig::default()).unwrap();
        assert_eq!(model.eps_samples.len(), 16);
        assert!(model
            .eps_samples
            .iter()
            .all(|&e| (1.0..=3.0).contains(&e)));
    }

    #[test]
    fn even_exponent_rank_deficiency_advises_regularization() {
        // r^2 is a polynomial kernel: the interpolation system is singular
        // for more points than the quadratic dimension
        let inputs = shifted_sobol::<f64>(2, 16, 12);
        let outputs: Vec<f64> = inputs.iter().map(|x| (7.0 * x[0]).sin()).collect();
        let data = TrainingSet::new(inputs, outputs, Fidelity::Coarse).unwrap();
        let cfg = SrbfConfig {
            mu: MuSpec::Absolute(0.0),
            epsilon: EpsilonSpec::Explicit(vec![2.0]),
            normalization: None,
        };
        match train_srbf(&data, &cfg) {
            Err(e @ Error::RankDeficient(_)) => {
                let msg = e.to_string();
                assert!(msg.contains("mu > 0"), "message should advise mu > 0: {msg}")
            }
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn gcv_picks_a_sensible_weight_for_noisy_data() {
        let mut state = 17u64;
        let inputs = shifted_sobol::<f64>(2, 40, 3);
        let outputs: Vec<f64> = inputs
            .iter()
            .map(|x| {
                let noise = (splitmix64(&mut state) as f64 / u64::MAX as f64 - 0.5) * 0.2;
                x[0] + x[1] + noise
            })
            .collect();
        let data = TrainingSet::new(inputs, outputs, Fidelity::Coarse).unwrap();
        let cfg = SrbfConfig {
            mu: MuSpec::Gcv,
            epsilon: EpsilonSpec::Explicit(vec![1.5]),
            normalization: None,
        };
        let model = train_srbf(&data, &cfg).unwrap();
        assert!(model.mu_eff[0] > 0.0, "GCV should regularize noisy data");
        // prediction stays near the trend
        let p = model.predict(&[0.5, 0.5]);
        assert!((p.mean - 1.0).abs() < 0.15, "mean {}", p.mean);
    }

    #[test]
    fn save_load_round_trip() {
        let data = training_5d(14, 61, |x| x[0] - x[4]);
        let model = train_srbf(&data, &SrbfConfig::default()).unwrap();
        let tmp = tempfile::tempdir().unwrap();
        let path = tmp.path().join("model.json");
        model.save(&path).unwrap();
        let back = SrbfModel::<f64>::load(&path).unwrap();
        assert_eq!(model, back);
    }
}
