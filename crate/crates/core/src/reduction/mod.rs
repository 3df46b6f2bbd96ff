//! Physics-driven dimensionality reduction of the geometric design space:
//! outlier filtering, the physics-augmented data matrix, the weighted
//! covariance eigenproblem, and analytic back-mapping.

pub mod embedding;
pub mod filter;

pub use embedding::{assemble_matrix, build_embedding, reduced_bounds, solve_embedding, DataMatrix};
pub use filter::filter_ensemble;

use crate::error::{Error, Result};
use crate::geometry::{FullDesignVector, DESIGN_DIM};
use crate::linalg::Matrix;
use crate::scalar::Real;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// One evaluated ensemble member: design parameters, a distributed surface
/// field, and lumped force outputs (L, D).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleRecord<T> {
    pub u: Vec<T>,
    pub f: Vec<T>,
    pub c: [T; 2],
}

impl<T: Real> EnsembleRecord<T> {
    pub fn is_finite(&self) -> bool {
        self.u.iter().all(|v| v.is_finite())
            && self.f.iter().all(|v| v.is_finite())
            && self.c.iter().all(|v| v.is_finite())
    }
}

/// Write an ensemble as CSV: `u0..u31, f0.., L, D` with a header row.
pub fn ensemble_to_csv<T: Real>(records: &[EnsembleRecord<T>]) -> String {
    let n_f = records.first().map(|r| r.f.len()).unwrap_or(0);
    let mut s = String::new();
    let mut cols: Vec<String> = (0..DESIGN_DIM).map(|i| format!("u{i}")).collect();
    cols.extend((0..n_f).map(|i| format!("f{i}")));
    cols.push("L".into());
    cols.push("D".into());
    s.push_str(&cols.join(","));
    s.push('\n');
    for r in records {
        let mut row: Vec<String> = r.u.iter().map(|v| format!("{}", v.as_f64())).collect();
        row.extend(r.f.iter().map(|v| format!("{}", v.as_f64())));
        row.push(format!("{}", r.c[0].as_f64()));
        row.push(format!("{}", r.c[1].as_f64()));
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

/// Parse an ensemble CSV; lines starting with `#` are ignored.
pub fn ensemble_from_csv<T: Real>(text: &str) -> Result<Vec<EnsembleRecord<T>>> {
    let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Serde("empty ensemble file".into()))?;
    let names: Vec<&str> = header.split(',').collect();
    let n_total = names.len();
    if n_total < DESIGN_DIM + 2 {
        return Err(Error::Serde(format!(
            "ensemble header has {n_total} columns, need at least {}",
            DESIGN_DIM + 2
        )));
    }
    let n_f = n_total - DESIGN_DIM - 2;
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Serde(format!("ensemble row {i}: {e}")))?;
        if vals.len() != n_total {
            return Err(Error::Serde(format!(
                "ensemble row {i}: {} columns, expected {n_total}",
                vals.len()
            )));
        }
        out.push(EnsembleRecord {
            u: vals[..DESIGN_DIM].iter().map(|&v| T::of(v)).collect(),
            f: vals[DESIGN_DIM..DESIGN_DIM + n_f].iter().map(|&v| T::of(v)).collect(),
            c: [T::of(vals[n_total - 2]), T::of(vals[n_total - 1])],
        });
    }
    Ok(out)
}

/// Reduced-order embedding: mean design, geometry basis, spectrum, and the
/// reduced-space box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: DeserializeOwned"))]
pub struct Embedding<T> {
    pub version: u32,
    /// Ensemble mean of the design vector.
    pub mean_u: Vec<T>,
    /// Geometry blocks of the retained eigenvectors, unit-norm columns
    /// (`DESIGN_DIM x n` matrix).
    pub basis: Matrix<T>,
    /// Retained eigenvalues, descending.
    pub eigenvalues: Vec<T>,
    /// Full spectrum of the weighted covariance, descending.
    pub spectrum: Vec<T>,
    /// Reduced-coordinate box from the training projections.
    pub x_bounds: Vec<(T, T)>,
    /// Fraction of weighted variance retained by the basis.
    pub eta_retained: T,
    /// Truncation target.
    pub eta_target: T,
    /// Original design box, used to clamp back-mapped designs.
    pub u_lower: Vec<T>,
    pub u_upper: Vec<T>,
    /// Content hash of the producing ensemble.
    pub ensemble_hash: String,
}

pub const EMBEDDING_FORMAT_VERSION: u32 = 1;

impl<T: Real> Embedding<T> {
    /// Number of reduced coordinates.
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Project a design into reduced coordinates: `x = V^T (u - <u>)`.
    pub fn project(&self, u: &FullDesignVector<T>) -> Vec<T> {
        let centered: Vec<T> = u
            .as_slice()
            .iter()
            .zip(&self.mean_u)
            .map(|(&a, &m)| a - m)
            .collect();
        self.basis.t_matvec(&centered)
    }

    /// Analytic back-mapping `u = <u> + V x`, with `x` clamped to the
    /// reduced box (logged) and `u` clamped to the original design box.
    pub fn back_map(&self, x: &[T]) -> FullDesignVector<T> {
        assert_eq!(x.len(), self.dim(), "reduced coordinate dimension");
        let mut xc: Vec<T> = x.to_vec();
        let mut clamped = false;
        for (v, &(lo, hi)) in xc.iter_mut().zip(&self.x_bounds) {
            if *v < lo {
                *v = lo;
                clamped = true;
            } else if *v > hi {
                *v = hi;
                clamped = true;
            }
        }
        if clamped {
            log::warn!("back_map: reduced coordinates clamped to x_bounds");
        }
        let delta = self.basis.matvec(&xc);
        let u: Vec<T> = self
            .mean_u
            .iter()
            .zip(&delta)
            .zip(self.u_lower.iter().zip(&self.u_upper))
            .map(|((&m, &d), (&lo, &hi))| (m + d).max(lo).min(hi))
            .collect();
        FullDesignVector(u)
    }

    /// Back-mapping without any clamping (used by linearity checks).
    pub fn back_map_unclamped(&self, x: &[T]) -> Vec<T> {
        let delta = self.basis.matvec(x);
        self.mean_u.iter().zip(&delta).map(|(&m, &d)| m + d).collect()
    }

    /// Cumulative variance-retention curve `N -> sum(lambda_1..N)/sum`.
    pub fn retention_curve(&self) -> Vec<T> {
        let total: T = self
            .spectrum
            .iter()
            .fold(T::zero(), |a, &l| a + l.max(T::zero()));
        let mut acc = T::zero();
        self.spectrum
            .iter()
            .map(|&l| {
                acc = acc + l.max(T::zero());
                if total > T::zero() {
                    acc / total
                } else {
                    T::one()
                }
            })
            .collect()
    }
}

impl<T: Real + Serialize + DeserializeOwned> Embedding<T> {
    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let e: Embedding<T> = serde_json::from_str(&text)?;
        if e.version != EMBEDDING_FORMAT_VERSION {
            return Err(Error::InvalidConfig(format!(
                "embedding format version {} (expected {})",
                e.version, EMBEDDING_FORMAT_VERSION
            )));
        }
        Ok(e)
    }
}
