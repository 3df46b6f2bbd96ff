//! NACA 4-digit section profiles with a sharp (closed) trailing edge.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Closed section loop on the unit chord, ordered trailing edge → upper
/// surface → leading edge → lower surface → (back to the) trailing edge.
///
/// Chordwise abscissae are cosine spaced via `x = (1 + cos psi)/2` with
/// `psi` swept uniformly over `[0, 2pi)`; the first point is the sharp
/// trailing edge. The thickness polynomial uses the closed-trailing-edge
/// coefficient (-0.1036) so the loop is watertight without extra segments.
pub fn naca4_profile<T: Real>(
    camber_max: T,
    camber_pos: T,
    thickness: T,
    n_points: usize,
) -> Result<Vec<[T; 2]>> {
    validate_params(camber_max, camber_pos, thickness)?;
    if n_points < 10 {
        return Err(Error::domain(
            "n_points",
            format!("need at least 10 points, got {n_points}"),
        ));
    }
    let two_pi = T::PI() * T::of(2.0);
    let mut loop_pts = Vec::with_capacity(n_points);
    for j in 0..n_points {
        let psi = two_pi * T::of_usize(j) / T::of_usize(n_points);
        let x = (T::one() + psi.cos()) / T::of(2.0);
        let upper = psi <= T::PI();
        let yt = half_thickness(thickness, x);
        let (yc, dyc) = camber_line(camber_max, camber_pos, x);
        let theta = dyc.atan();
        let (px, py) = if upper {
            (x - yt * theta.sin(), yc + yt * theta.cos())
        } else {
            (x + yt * theta.sin(), yc - yt * theta.cos())
        };
        loop_pts.push([px, py]);
    }
    Ok(loop_pts)
}

/// Half-thickness of the 4-digit polynomial at chord fraction `x`, closed
/// trailing-edge variant (zero thickness at `x = 1`).
pub fn half_thickness<T: Real>(thickness: T, x: T) -> T {
    let c = [0.2969, -0.1260, -0.3516, 0.2843, -0.1036];
    T::of(5.0)
        * thickness
        * (T::of(c[0]) * x.sqrt()
            + x * (T::of(c[1]) + x * (T::of(c[2]) + x * (T::of(c[3]) + x * T::of(c[4])))))
}

/// Camber ordinate and slope at chord fraction `x`.
fn camber_line<T: Real>(m: T, p: T, x: T) -> (T, T) {
    if m == T::zero() {
        return (T::zero(), T::zero());
    }
    if x <= p {
        let yc = m / (p * p) * (T::of(2.0) * p * x - x * x);
        let dyc = T::of(2.0) * m / (p * p) * (p - x);
        (yc, dyc)
    } else {
        let q = T::one() - p;
        let yc = m / (q * q) * ((T::one() - T::of(2.0) * p) + T::of(2.0) * p * x - x * x);
        let dyc = T::of(2.0) * m / (q * q) * (p - x);
        (yc, dyc)
    }
}

pub(crate) fn validate_params<T: Real>(camber_max: T, camber_pos: T, thickness: T) -> Result<()> {
    if !(thickness >= T::zero() && thickness <= T::of(0.5)) {
        return Err(Error::domain(
            "thickness",
            format!("must be in [0, 0.5], got {thickness}"),
        ));
    }
    if !(camber_max >= T::zero() && camber_max <= T::of(0.2)) {
        return Err(Error::domain(
            "camber_max",
            format!("must be in [0, 0.2], got {camber_max}"),
        ));
    }
    if camber_max > T::zero() && !(camber_pos > T::zero() && camber_pos < T::one()) {
        return Err(Error::domain(
            "camber_pos",
            format!("must be in (0, 1) when camber_max > 0, got {camber_pos}"),
        ));
    }
    Ok(())
}

/// 2-D area enclosed by a closed loop (shoelace formula).
pub fn loop_area<T: Real>(pts: &[[T; 2]]) -> T {
    let n = pts.len();
    let mut acc = T::zero();
    for i in 0..n {
        let [x0, y0] = pts[i];
        let [x1, y1] = pts[(i + 1) % n];
        acc = acc + x0 * y1 - x1 * y0;
    }
    (acc / T::of(2.0)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn max_half_thickness_location_and_value() {
        // 12% section: max half-thickness ~0.06 of chord near x/c = 0.30
        let pts = naca4_profile::<f64>(0.0, 0.4, 0.12, 801).unwrap();
        let (mut best_y, mut best_x) = (0.0, 0.0);
        for p in &pts {
            if p[1] > best_y {
                best_y = p[1];
                best_x = p[0];
            }
        }
        assert!((best_y - 0.06).abs() < 1.5e-3, "max half-thickness {best_y}");
        assert!((best_x - 0.30).abs() < 0.02, "location {best_x}");
    }

    #[test]
    fn zero_thickness_collapses_to_chord_line() {
        let pts = naca4_profile::<f64>(0.0, 0.4, 0.0, 64).unwrap();
        for p in &pts {
            assert!(p[1].abs() < 1e-15);
            assert!((0.0..=1.0).contains(&p[0]));
        }
    }

    #[test]
    fn symmetric_profile_mirrors_about_chord() {
        let n = 127; // odd count still yields a reflection-symmetric point set
        let pts = naca4_profile::<f64>(0.0, 0.3, 0.15, n).unwrap();
        for j in 1..n {
            let a = pts[j];
            let b = pts[n - j];
            assert!((a[0] - b[0]).abs() < 1e-12);
            assert!((a[1] + b[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn trailing_edge_is_sharp() {
        let pts = naca4_profile::<f64>(0.04, 0.4, 0.12, 64).unwrap();
        assert!((pts[0][0] - 1.0).abs() < 1e-14);
        assert!(pts[0][1].abs() < 1e-14);
        assert!(half_thickness::<f64>(0.12, 1.0).abs() < 1e-15);
    }

    #[test]
    fn area_matches_thickness_polynomial_quadrature() {
        let t = 0.12;
        let pts = naca4_profile::<f64>(0.0, 0.4, t, 2001).unwrap();
        let area = loop_area(&pts);
        // fine-grid quadrature of 2*yt over the chord, cosine substitution to
        // resolve the sqrt singularity at the leading edge
        let n = 200_000;
        let mut quad = 0.0;
        for i in 0..n {
            let phi0 = std::f64::consts::PI * i as f64 / n as f64;
            let phi1 = std::f64::consts::PI * (i + 1) as f64 / n as f64;
            let x0 = (1.0 + phi0.cos()) / 2.0;
            let x1 = (1.0 + phi1.cos()) / 2.0;
            quad += (half_thickness(t, x0) + half_thickness(t, x1)) * (x0 - x1);
        }
        assert!(
            (area - quad).abs() / quad < 1e-3,
            "area {area} vs quadrature {quad}"
        );
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(naca4_profile::<f64>(0.0, 0.4, 0.6, 64).is_err());
        assert!(naca4_profile::<f64>(0.3, 0.4, 0.1, 64).is_err());
        assert!(naca4_profile::<f64>(0.02, 1.2, 0.1, 64).is_err());
        assert!(naca4_profile::<f64>(0.0, 0.4, 0.1, 4).is_err());
    }
}
