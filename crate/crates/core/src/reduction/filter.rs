//! Ensemble screening: non-finite records and extreme outliers in the
//! lumped outputs are dropped before the embedding is built.

use crate::error::{Error, Result};
use crate::linalg::quantile_sorted;
use crate::reduction::EnsembleRecord;
use crate::scalar::Real;

/// Keep records whose lumped outputs fall within `[Q1 - 3 IQR, Q3 + 3 IQR]`
/// per output (inclusive). A degenerate fence (IQR = 0) keeps equal values.
pub fn filter_ensemble<T: Real>(records: Vec<EnsembleRecord<T>>) -> Result<Vec<EnsembleRecord<T>>> {
    if records.is_empty() {
        return Err(Error::EmptyAfterFilter("no records to filter".into()));
    }
    let finite: Vec<EnsembleRecord<T>> = records.into_iter().filter(|r| r.is_finite()).collect();
    if finite.is_empty() {
        return Err(Error::EmptyAfterFilter("all records non-finite".into()));
    }
    let three = T::of(3.0);
    let mut fences = Vec::new();
    for k in 0..2 {
        let mut vals: Vec<T> = finite.iter().map(|r| r.c[k]).collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let q1 = quantile_sorted(&vals, 0.25);
        let q3 = quantile_sorted(&vals, 0.75);
        let iqr = q3 - q1;
        fences.push((q1 - three * iqr, q3 + three * iqr));
    }
    let kept: Vec<EnsembleRecord<T>> = finite
        .into_iter()
        .filter(|r| {
            r.c.iter()
                .zip(&fences)
                .all(|(&v, &(lo, hi))| v >= lo && v <= hi)
        })
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyAfterFilter("IQR fence removed everything".into()));
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DESIGN_DIM;

    fn record(l: f64, d: f64) -> EnsembleRecord<f64> {
        EnsembleRecord {
            u: vec![0.0; DESIGN_DIM],
            f: vec![0.0; 4],
            c: [l, d],
        }
    }

    #[test]
    fn non_finite_records_are_dropped() {
        let mut records: Vec<EnsembleRecord<f64>> = (0..10).map(|i| record(i as f64, 1.0)).collect();
        records.push(record(f64::INFINITY, 1.0));
        let kept = filter_ensemble(records).unwrap();
        assert_eq!(kept.len(), 10);
        assert!(kept.iter().all(|r| r.is_finite()));
    }

    #[test]
    fn identical_records_survive_the_degenerate_fence() {
        let records: Vec<EnsembleRecord<f64>> = (0..8).map(|_| record(5.0, 2.0)).collect();
        let kept = filter_ensemble(records).unwrap();
        assert_eq!(kept.len(), 8);
    }

    #[test]
    fn far_outlier_is_removed_exactly() {
        // tight cluster plus one 10-sigma outlier in drag; verify the fence
        // by brute force against the quartile definition
        let mut records: Vec<EnsembleRecord<f64>> = (0..40)
            .map(|i| record(10.0 + 0.01 * i as f64, 1.0 + 0.005 * (i % 7) as f64))
            .collect();
        records.push(record(10.2, 50.0));
        let mut drags: Vec<f64> = records.iter().map(|r| r.c[1]).collect();
        drags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let q1 = quantile_sorted(&drags, 0.25);
        let q3 = quantile_sorted(&drags, 0.75);
        let hi = q3 + 3.0 * (q3 - q1);
        assert!(50.0 > hi, "outlier must sit beyond the brute-force fence");
        let kept = filter_ensemble(records).unwrap();
        assert_eq!(kept.len(), 40);
        assert!(kept.iter().all(|r| r.c[1] < 2.0));
    }

    #[test]
    fn emptied_ensemble_is_an_error() {
        let records = vec![record(f64::NAN, 1.0)];
        assert!(matches!(
            filter_ensemble(records),
            Err(Error::EmptyAfterFilter(_))
        ));
    }
}
