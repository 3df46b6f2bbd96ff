//! Physics-augmented data matrix and the weighted covariance eigenproblem.
//!
//! The geometric block carries zero weight, so the embedding directions are
//! driven purely by the physical rows. With `W = diag(0, W_p)` the
//! eigenproblem `A W Z = Z Λ` reduces to the symmetric problem
//! `B = W_p^{1/2} A_pp W_p^{1/2}` on the physical block; the geometry block
//! of each eigenvector is recovered from the cross-covariance,
//! `z_u = A_up W_p z_p / λ`.

use crate::error::{Error, Result};
use crate::geometry::{GeometryBounds, DESIGN_DIM};
use crate::linalg::{sym_eigen, Matrix};
use crate::reduction::{filter_ensemble, Embedding, EnsembleRecord, EMBEDDING_FORMAT_VERSION};
use crate::scalar::Real;

/// Centered physics-augmented data matrix with per-row inverse-variance
/// weights (geometry rows weighted zero).
#[derive(Debug, Clone)]
pub struct DataMatrix<T> {
    /// Row-centered data, `(M + n_f + n_c) x S`.
    pub p: Matrix<T>,
    /// Diagonal weights per row.
    pub weights: Vec<T>,
    /// Row means removed during centering.
    pub row_means: Vec<T>,
    pub n_f: usize,
    pub n_c: usize,
    pub samples: usize,
}

/// Assemble and center the data matrix; physical rows are weighted by
/// inverse sample variance, zero-variance rows get weight zero.
pub fn assemble_matrix<T: Real>(records: &[EnsembleRecord<T>]) -> Result<DataMatrix<T>> {
    let s = records.len();
    if s < DESIGN_DIM + 2 {
        return Err(Error::Numerical(format!(
            "ensemble too small: {s} samples for {DESIGN_DIM} parameters (need >= {})",
            DESIGN_DIM + 2
        )));
    }
    let n_f = records[0].f.len();
    if records.iter().any(|r| r.f.len() != n_f || r.u.len() != DESIGN_DIM) {
        return Err(Error::Numerical("inconsistent record dimensions".into()));
    }
    let n_c = 2;
    let rows = DESIGN_DIM + n_f + n_c;
    let mut p = Matrix::zeros(rows, s);
    for (j, r) in records.iter().enumerate() {
        for (i, &v) in r.u.iter().enumerate() {
            p[(i, j)] = v;
        }
        for (i, &v) in r.f.iter().enumerate() {
            p[(DESIGN_DIM + i, j)] = v;
        }
        p[(DESIGN_DIM + n_f, j)] = r.c[0];
        p[(DESIGN_DIM + n_f + 1, j)] = r.c[1];
    }
    let s_t = T::of_usize(s);
    let mut row_means = vec![T::zero(); rows];
    let mut weights = vec![T::zero(); rows];
    let mut any_physics = false;
    for i in 0..rows {
        let mut mean = T::zero();
        let mut scale = T::zero();
        for j in 0..s {
            mean = mean + p[(i, j)];
            scale = scale.max(p[(i, j)].abs());
        }
        mean = mean / s_t;
        row_means[i] = mean;
        let mut var = T::zero();
        for j in 0..s {
            let d = p[(i, j)] - mean;
            p[(i, j)] = d;
            var = var + d * d;
        }
        var = var / T::of_usize(s - 1);
        if i >= DESIGN_DIM {
            let floor = (T::of(1e-12) * scale) * (T::of(1e-12) * scale);
            if var > floor && var > T::zero() {
                weights[i] = T::one() / var;
                any_physics = true;
            }
        }
    }
    if !any_physics {
        return Err(Error::Numerical(
            "all physical rows have zero variance; nothing to embed".into(),
        ));
    }
    Ok(DataMatrix {
        p,
        weights,
        row_means,
        n_f,
        n_c,
        samples: s,
    })
}

/// Solve the weighted covariance eigenproblem and truncate at retained
/// variance `eta`. Returns the embedding without reduced-space bounds
/// (see [`reduced_bounds`]).
pub fn solve_embedding<T: Real>(dm: &DataMatrix<T>, eta: T) -> Result<Embedding<T>> {
    if !(eta > T::zero() && eta <= T::one()) {
        return Err(Error::domain("eta", format!("must be in (0, 1], got {eta}")));
    }
    let rows = dm.p.rows();
    let s = dm.samples;
    let s_t = T::of_usize(s);
    // active physical rows (nonzero weight)
    let active: Vec<usize> = (DESIGN_DIM..rows).filter(|&i| dm.weights[i] > T::zero()).collect();
    let na = active.len();
    let sigma: Vec<T> = active.iter().map(|&i| (T::one() / dm.weights[i]).sqrt()).collect();

    // B = W^{1/2} A_pp W^{1/2}, A = (1/S) P P^T
    let mut b = Matrix::zeros(na, na);
    for ii in 0..na {
        for jj in ii..na {
            let (ri, rj) = (active[ii], active[jj]);
            let mut acc = T::zero();
            for k in 0..s {
                acc = acc + dm.p[(ri, k)] * dm.p[(rj, k)];
            }
            let v = acc / s_t / (sigma[ii] * sigma[jj]);
            b[(ii, jj)] = v;
            b[(jj, ii)] = v;
        }
    }
    let (lambda, y) = sym_eigen(&b).map_err(|e| {
        Error::Eigen(format!(
            "weighted covariance eigensolve failed ({e}); matrix size {na}, scale {:?}",
            b.max_abs()
        ))
    })?;

    let lambda_max = lambda.first().copied().unwrap_or(T::zero()).max(T::zero());
    let rank_tol = lambda_max * T::of(1e-10);
    let rank = lambda.iter().filter(|&&l| l > rank_tol).count();
    if rank == 0 {
        return Err(Error::Eigen("weighted covariance has zero rank".into()));
    }
    let total: T = lambda.iter().map(|&l| l.max(T::zero())).sum();
    let mut n_keep = rank;
    let mut acc = T::zero();
    for (k, &l) in lambda.iter().take(rank).enumerate() {
        acc = acc + l.max(T::zero());
        if acc / total >= eta {
            n_keep = k + 1;
            break;
        }
    }
    let mut retained_sum = T::zero();
    for &l in lambda.iter().take(n_keep) {
        retained_sum = retained_sum + l.max(T::zero());
    }

    // geometry blocks: z_u = A_up W_p z_p / lambda, with
    // (W_p z_p)_i = y_i / sigma_i
    let mut basis = Matrix::zeros(DESIGN_DIM, n_keep);
    for k in 0..n_keep {
        let wz: Vec<T> = (0..na).map(|ii| y[(ii, k)] / sigma[ii]).collect();
        let mut col = vec![T::zero(); DESIGN_DIM];
        for (g, cg) in col.iter_mut().enumerate() {
            let mut acc2 = T::zero();
            for ii in 0..na {
                let ri = active[ii];
                let mut dot = T::zero();
                for j in 0..s {
                    dot = dot + dm.p[(g, j)] * dm.p[(ri, j)];
                }
                acc2 = acc2 + dot / s_t * wz[ii];
            }
            *cg = acc2 / lambda[k];
        }
        let norm = col.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
        if norm > T::zero() {
            for (g, &v) in col.iter().enumerate() {
                basis[(g, k)] = v / norm;
            }
        }
    }

    Ok(Embedding {
        version: EMBEDDING_FORMAT_VERSION,
        mean_u: dm.row_means[..DESIGN_DIM].to_vec(),
        basis,
        eigenvalues: lambda[..n_keep].to_vec(),
        spectrum: lambda,
        x_bounds: Vec::new(),
        eta_retained: retained_sum / total,
        eta_target: eta,
        u_lower: vec![T::neg_infinity(); DESIGN_DIM],
        u_upper: vec![T::infinity(); DESIGN_DIM],
        ensemble_hash: String::new(),
    })
}

/// Reduced-space box: per-coordinate min/max of the training projections,
/// expanded 5% symmetrically about the midpoint.
pub fn reduced_bounds<T: Real>(
    embedding: &Embedding<T>,
    records: &[EnsembleRecord<T>],
) -> Result<Vec<(T, T)>> {
    if records.len() < 2 {
        return Err(Error::DegenerateBounds(format!(
            "need at least 2 records, got {}",
            records.len()
        )));
    }
    let n = embedding.dim();
    let mut lo = vec![T::infinity(); n];
    let mut hi = vec![T::neg_infinity(); n];
    for r in records {
        let u = crate::geometry::FullDesignVector(r.u.clone());
        let x = embedding.project(&u);
        for k in 0..n {
            lo[k] = lo[k].min(x[k]);
            hi[k] = hi[k].max(x[k]);
        }
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if !(hi[k] > lo[k]) {
            return Err(Error::DegenerateBounds(format!(
                "reduced coordinate {k} collapsed to a point"
            )));
        }
        let mid = (lo[k] + hi[k]) / T::of(2.0);
        let half = (hi[k] - lo[k]) / T::of(2.0) * T::of(1.05);
        out.push((mid - half, mid + half));
    }
    Ok(out)
}

/// Full pipeline: filter, assemble, solve, attach bounds and the design
/// box used for back-map clamping.
pub fn build_embedding<T: Real>(
    records: Vec<EnsembleRecord<T>>,
    eta: T,
    u_bounds: &GeometryBounds<T>,
    ensemble_hash: &str,
) -> Result<Embedding<T>> {
    let kept = filter_ensemble(records)?;
    let dm = assemble_matrix(&kept)?;
    let mut embedding = solve_embedding(&dm, eta)?;
    embedding.x_bounds = reduced_bounds(&embedding, &kept)?;
    embedding.u_lower = u_bounds.lower.clone();
    embedding.u_upper = u_bounds.upper.clone();
    embedding.ensemble_hash = ensemble_hash.to_string();
    Ok(embedding)
}
