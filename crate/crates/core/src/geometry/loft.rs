//! Sectional loft: spanwise cubic interpolation of the four section loops
//! into a watertight mirrored surface mesh.

use crate::error::{Error, Result};
use crate::geometry::mesh::SurfaceMesh;
use crate::geometry::naca::naca4_profile;
use crate::geometry::SectionParams;
use crate::linalg::{CubicSpline, SplineEnd, Vec3};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Mesh resolution knobs. `spanwise_stations` counts stations per half-body;
/// the mirrored mesh carries `2n - 1` rings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshResolution {
    pub spanwise_stations: usize,
    pub chordwise_points: usize,
}

impl Default for MeshResolution {
    fn default() -> Self {
        // 56x56 panels per half-body at default resolution
        MeshResolution {
            spanwise_stations: 57,
            chordwise_points: 57,
        }
    }
}

/// Minimum admissible chord; anything thinner is screened out as a
/// degenerate design rather than lofted.
const MIN_CHORD_M: f64 = 0.01;

/// Loft the four sections into a closed mirrored mesh.
///
/// Spanwise interpolation is a cubic spline through the section curves,
/// clamped to zero spanwise slope at the symmetry plane so the mirrored
/// surface is tangency-continuous. Fails with
/// [`Error::GeometryInfeasible`] on degenerate chords, non-increasing
/// spanwise ordinates, or a folded (self-intersecting) loft; callers treat
/// that as a filtered sample.
pub fn loft<T: Real>(sections: &[SectionParams<T>; 4], res: MeshResolution) -> Result<SurfaceMesh<T>> {
    let n = res.spanwise_stations;
    let m = res.chordwise_points;
    if n < 4 {
        return Err(Error::domain("spanwise_stations", "need at least 4".to_string()));
    }
    if m < 10 {
        return Err(Error::domain("chordwise_points", "need at least 10".to_string()));
    }
    for (k, s) in sections.iter().enumerate() {
        if s.chord < T::of(MIN_CHORD_M) {
            return Err(Error::GeometryInfeasible(format!(
                "section {k} chord {} below {MIN_CHORD_M} m",
                s.chord
            )));
        }
    }
    let knots: Vec<T> = sections.iter().map(|s| s.leading_edge.y).collect();
    for k in 0..3 {
        if knots[k + 1] <= knots[k] + T::of(1e-6) {
            return Err(Error::GeometryInfeasible(format!(
                "spanwise ordinates not strictly increasing at section {}",
                k + 2
            )));
        }
    }

    // section loops in 3-D
    let mut loops: Vec<Vec<Vec3<T>>> = Vec::with_capacity(4);
    for s in sections {
        let profile = naca4_profile(s.camber_max, s.camber_pos, s.thickness, m)?;
        loops.push(profile.into_iter().map(|p| s.place(p)).collect());
    }

    // spanwise stations, sine-spaced to cluster toward the tip
    let s_max = knots[3];
    let half = T::PI() / T::of(2.0);
    let stations: Vec<T> = (0..n)
        .map(|i| s_max * (half * T::of_usize(i) / T::of_usize(n - 1)).sin())
        .collect();

    // one clamped spline per loop index and coordinate
    let mut rings_pos: Vec<Vec<Vec3<T>>> = vec![Vec::with_capacity(m); n];
    for j in 0..m {
        let xs: Vec<T> = loops.iter().map(|l| l[j].x).collect();
        let ys: Vec<T> = loops.iter().map(|l| l[j].y).collect();
        let zs: Vec<T> = loops.iter().map(|l| l[j].z).collect();
        let sx = CubicSpline::new(knots.clone(), xs, SplineEnd::Clamped(T::zero()), SplineEnd::Natural)?;
        let sy = CubicSpline::new(knots.clone(), ys, SplineEnd::Natural, SplineEnd::Natural)?;
        let sz = CubicSpline::new(knots.clone(), zs, SplineEnd::Clamped(T::zero()), SplineEnd::Natural)?;
        for (i, &s) in stations.iter().enumerate() {
            rings_pos[i].push(Vec3::new(sx.eval(s), sy.eval(s), sz.eval(s)));
        }
    }

    // mirrored ring sequence ordered by increasing y
    let mut rings: Vec<Vec<Vec3<T>>> = Vec::with_capacity(2 * n - 1);
    for i in (1..n).rev() {
        rings.push(rings_pos[i].iter().map(|p| p.mirror_y()).collect());
    }
    rings.extend(rings_pos);
    let n_rings = rings.len();

    // screen for spanwise folds: every grid edge must advance in y
    for r in 0..n_rings - 1 {
        for j in 0..m {
            if rings[r + 1][j].y - rings[r][j].y <= T::zero() {
                return Err(Error::GeometryInfeasible(format!(
                    "self-intersecting loft: spanwise fold at ring {r}, loop {j}"
                )));
            }
        }
    }

    let mut points: Vec<Vec3<T>> = Vec::with_capacity(n_rings * m + 2);
    for ring in &rings {
        points.extend_from_slice(ring);
    }
    let idx = |r: usize, j: usize| (r * m + j) as u32;

    let mut triangles: Vec<[u32; 3]> = Vec::with_capacity(2 * (n_rings - 1) * m + 2 * m);
    for r in 0..n_rings - 1 {
        for j in 0..m {
            let jn = (j + 1) % m;
            let a = idx(r, j);
            let b = idx(r + 1, j);
            let c = idx(r, jn);
            let d = idx(r + 1, jn);
            triangles.push([a, b, c]);
            triangles.push([c, b, d]);
        }
    }

    // close both tips with a fan about the ring centroid, oriented outward
    for &(r, outward_y) in &[(0usize, T::of(-1.0)), (n_rings - 1, T::one())] {
        let ring = &rings[r];
        let mut centroid = Vec3::zero();
        for p in ring {
            centroid += *p;
        }
        let centroid = centroid / T::of_usize(m);
        let c_idx = points.len() as u32;
        points.push(centroid);
        let mut normal_sum = Vec3::zero();
        for j in 0..m {
            let jn = (j + 1) % m;
            normal_sum += (ring[j] - centroid).cross(ring[jn] - centroid);
        }
        let flip = normal_sum.y * outward_y < T::zero();
        for j in 0..m {
            let jn = (j + 1) % m;
            if flip {
                triangles.push([c_idx, idx(r, jn), idx(r, j)]);
            } else {
                triangles.push([c_idx, idx(r, j), idx(r, jn)]);
            }
        }
    }

    let mesh = SurfaceMesh {
        points,
        triangles,
        spanwise_stations: n_rings,
        chordwise_points: m,
    };

    // degenerate-triangle screen, relative to the overall scale
    let (lo, hi) = mesh.bbox();
    let diag2 = (hi - lo).norm_sq();
    let tol = diag2 * T::of(1e-14);
    for t in &mesh.triangles {
        if mesh.triangle_area(*t) <= tol {
            return Err(Error::GeometryInfeasible(format!(
                "degenerate triangle [{} {} {}]",
                t[0], t[1], t[2]
            )));
        }
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::mesh::enclosed_volume;
    use crate::geometry::naca::loop_area;
    use crate::geometry::{baseline_design, build_sections};

    fn extruded_sections() -> [SectionParams<f64>; 4] {
        let base = SectionParams::root(0.12, 0.6);
        let mut sections = [base; 4];
        for (k, y) in [(1usize, 1.0 / 3.0), (2, 2.0 / 3.0), (3, 1.0)] {
            sections[k].leading_edge = Vec3::new(0.0, y, 0.0);
        }
        sections
    }

    #[test]
    fn extruded_prism_volume_matches_section_area_times_span() {
        let sections = extruded_sections();
        let res = MeshResolution {
            spanwise_stations: 25,
            chordwise_points: 61,
        };
        let mesh = loft(&sections, res).unwrap();
        let v = enclosed_volume(&mesh).unwrap();
        let profile = naca4_profile(0.0, 0.5, 0.12, res.chordwise_points).unwrap();
        let area = loop_area(&profile) * 0.6 * 0.6; // scaled by chord^2
        let expect = area * 2.0; // mirrored span
        assert!(
            (v - expect).abs() / expect < 0.01,
            "prism volume {v} vs {expect}"
        );
    }

    #[test]
    fn baseline_mesh_is_watertight() {
        let sections = build_sections(&baseline_design::<f64>());
        let mesh = loft(&sections, MeshResolution::default()).unwrap();
        mesh.check_watertight().unwrap();
        let v = enclosed_volume(&mesh).unwrap();
        assert!(v > 0.0, "outward winding gives positive volume, got {v}");
    }

    #[test]
    fn volume_converges_under_refinement() {
        let sections = build_sections(&baseline_design::<f64>());
        let coarse = loft(
            &sections,
            MeshResolution {
                spanwise_stations: 57,
                chordwise_points: 57,
            },
        )
        .unwrap();
        let fine = loft(
            &sections,
            MeshResolution {
                spanwise_stations: 114,
                chordwise_points: 114,
            },
        )
        .unwrap();
        let vc = enclosed_volume(&coarse).unwrap();
        let vf = enclosed_volume(&fine).unwrap();
        assert!(
            ((vf - vc) / vf).abs() < 0.005,
            "volume drift {vc} -> {vf}"
        );
    }

    #[test]
    fn mirror_symmetry_of_mesh_points() {
        let sections = build_sections(&baseline_design::<f64>());
        let mesh = loft(
            &sections,
            MeshResolution {
                spanwise_stations: 17,
                chordwise_points: 25,
            },
        )
        .unwrap();
        for p in &mesh.points {
            let found = mesh
                .points
                .iter()
                .any(|q| (q.x - p.x).abs() < 1e-12 && (q.y + p.y).abs() < 1e-12 && (q.z - p.z).abs() < 1e-12);
            assert!(found, "no mirror partner for ({}, {}, {})", p.x, p.y, p.z);
        }
    }

    #[test]
    fn loft_is_deterministic() {
        let sections = build_sections(&baseline_design::<f64>());
        let res = MeshResolution {
            spanwise_stations: 17,
            chordwise_points: 25,
        };
        let a = loft(&sections, res).unwrap();
        let b = loft(&sections, res).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn volume_is_translation_invariant_and_scales_cubically() {
        let sections = build_sections(&baseline_design::<f64>());
        let res = MeshResolution {
            spanwise_stations: 17,
            chordwise_points: 25,
        };
        let mesh = loft(&sections, res).unwrap();
        let v0 = enclosed_volume(&mesh).unwrap();

        let mut shifted = mesh.clone();
        for p in &mut shifted.points {
            *p = *p + Vec3::new(3.0, -2.0, 7.0);
        }
        let v1 = enclosed_volume(&shifted).unwrap();
        assert!((v1 - v0).abs() / v0 < 1e-10, "translation changed volume");

        let s = 1.7;
        let mut scaled = mesh.clone();
        for p in &mut scaled.points {
            *p = p.scale(s);
        }
        let v2 = enclosed_volume(&scaled).unwrap();
        assert!(
            (v2 - v0 * s * s * s).abs() / (v0 * s * s * s) < 1e-10,
            "scaling law violated"
        );
    }

    #[test]
    fn degenerate_chord_is_screened() {
        let mut sections = extruded_sections();
        sections[3].chord = 0.001;
        assert!(matches!(
            loft(&sections, MeshResolution::default()),
            Err(Error::GeometryInfeasible(_))
        ));
    }

    #[test]
    fn bad_spanwise_ordering_is_screened() {
        let mut sections = extruded_sections();
        sections[2].leading_edge.y = 0.1; // behind section 2
        assert!(matches!(
            loft(&sections, MeshResolution::default()),
            Err(Error::GeometryInfeasible(_))
        ));
    }
}
