//! Deterministic sampling: Sobol designs, quasi-random normals, and
//! stratified draws. Every generator here is a pure function of its
//! arguments — no wall-clock entropy anywhere.

use crate::scalar::Real;
use sobol::params::JoeKuoD6;
use sobol::Sobol;

/// First `n` points of the Sobol sequence in the unit cube of dimension
/// `dims`, optionally skipping a prefix.
pub fn sobol_unit<T: Real>(dims: usize, n: usize, skip: usize) -> Vec<Vec<T>> {
    let params = JoeKuoD6::minimal();
    let seq = Sobol::<f64>::new(dims, &params);
    seq.skip(skip)
        .take(n)
        .map(|p| p.into_iter().map(T::of).collect())
        .collect()
}

/// Sobol points mapped into an axis-aligned box.
pub fn sobol_in_box<T: Real>(lo: &[T], hi: &[T], n: usize, skip: usize) -> Vec<Vec<T>> {
    assert_eq!(lo.len(), hi.len());
    sobol_unit::<T>(lo.len(), n, skip)
        .into_iter()
        .map(|u| scale_to_box(&u, lo, hi))
        .collect()
}

/// Map a unit-cube point into `[lo, hi]` componentwise.
pub fn scale_to_box<T: Real>(u: &[T], lo: &[T], hi: &[T]) -> Vec<T> {
    u.iter()
        .zip(lo.iter().zip(hi))
        .map(|(&ui, (&l, &h))| l + (h - l) * ui)
        .collect()
}

/// SplitMix64: tiny deterministic bit mixer used to derive shifts/jitter
/// from integer seeds.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Uniform f64 in [0, 1) from a mixer output.
fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Sobol points with a seed-dependent Cranley–Patterson rotation
/// (`u + shift mod 1` per coordinate). Deterministic given the seed.
pub fn shifted_sobol<T: Real>(dims: usize, n: usize, seed: u64) -> Vec<Vec<T>> {
    let mut state = seed ^ 0xA076_1D64_78BD_642F;
    let shifts: Vec<f64> = (0..dims).map(|_| unit_f64(splitmix64(&mut state))).collect();
    let params = JoeKuoD6::minimal();
    let seq = Sobol::<f64>::new(dims, &params);
    seq.take(n)
        .map(|p| {
            p.into_iter()
                .zip(&shifts)
                .map(|(u, &s)| {
                    let v = (u + s).fract();
                    T::of(v)
                })
                .collect()
        })
        .collect()
}

/// Quasi-random standard-normal pairs via Box–Muller on a shifted 2-D Sobol
/// set. Used by the Monte-Carlo acquisition integrals.
pub fn qmc_normal_pairs<T: Real>(n: usize, seed: u64) -> Vec<[T; 2]> {
    shifted_sobol::<f64>(2, n, seed)
        .into_iter()
        .map(|uv| {
            let u = uv[0].max(1e-16).min(1.0 - 1e-16);
            let v = uv[1];
            let r = (-2.0 * u.ln()).sqrt();
            let theta = 2.0 * std::f64::consts::PI * v;
            [T::of(r * theta.cos()), T::of(r * theta.sin())]
        })
        .collect()
}

/// Stratified draw of `n` values from U(lo, hi): one jittered value per
/// stratum, jitter derived from the seed. Returned sorted ascending.
pub fn stratified_uniform<T: Real>(n: usize, lo: T, hi: T, seed: u64) -> Vec<T> {
    let mut state = seed ^ 0x9E2F_63BD_11A3_F7B5;
    let width = (hi - lo) / T::of_usize(n.max(1));
    let mut out: Vec<T> = (0..n)
        .map(|k| {
            let j = T::of(unit_f64(splitmix64(&mut state)));
            lo + width * (T::of_usize(k) + j)
        })
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sobol_prefix_is_dyadically_balanced() {
        // first 2^k points: exactly 2^{k-1} fall in each half-interval,
        // per coordinate
        for k in [3usize, 5, 7] {
            let n = 1 << k;
            let pts = sobol_unit::<f64>(6, n, 0);
            for d in 0..6 {
                let lo = pts.iter().filter(|p| p[d] < 0.5).count();
                assert_eq!(lo, n / 2, "dim {d}, 2^{k} points");
                // quarter intervals too
                for q in 0..4 {
                    let a = q as f64 * 0.25;
                    let b = a + 0.25;
                    let c = pts.iter().filter(|p| p[d] >= a && p[d] < b).count();
                    assert_eq!(c, n / 4, "dim {d} quarter {q}");
                }
            }
        }
    }

    #[test]
    fn sobol_designs_are_nested() {
        let small = sobol_unit::<f64>(4, 16, 0);
        let big = sobol_unit::<f64>(4, 64, 0);
        assert_eq!(&big[..16], &small[..]);
    }

    #[test]
    fn shifted_sobol_depends_on_seed_but_is_reproducible() {
        let a = shifted_sobol::<f64>(3, 10, 42);
        let b = shifted_sobol::<f64>(3, 10, 42);
        let c = shifted_sobol::<f64>(3, 10, 43);
        assert_eq!(a, b);
        assert_ne!(a, c);
        for p in &a {
            for &x in p {
                assert!((0.0..1.0).contains(&x));
            }
        }
    }

    #[test]
    fn qmc_normals_have_sane_moments() {
        let z = qmc_normal_pairs::<f64>(4096, 7);
        let n = (z.len() * 2) as f64;
        let mean: f64 = z.iter().map(|p| p[0] + p[1]).sum::<f64>() / n;
        let var: f64 = z.iter().map(|p| p[0] * p[0] + p[1] * p[1]).sum::<f64>() / n;
        assert!(mean.abs() < 0.02, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }

    #[test]
    fn stratified_uniform_covers_strata() {
        let xs = stratified_uniform::<f64>(16, 1.0, 3.0, 5);
        assert_eq!(xs.len(), 16);
        for (k, x) in xs.iter().enumerate() {
            let lo = 1.0 + 2.0 * k as f64 / 16.0;
            let hi = 1.0 + 2.0 * (k + 1) as f64 / 16.0;
            assert!(*x >= lo && *x < hi, "stratum {k}: {x} not in [{lo},{hi})");
        }
    }
}
