//! Flat-plate viscous drag: Prandtl friction correlations on the wetted
//! surface, with the laminar/turbulent switch at a configurable transition
//! Reynolds number.

use crate::geometry::SurfaceMesh;
use crate::hydro::FlowConditions;
use crate::scalar::Real;

/// Default transition Reynolds number for the friction-coefficient switch.
pub const DEFAULT_TRANSITION_RE: f64 = 5e5;

/// Total-plate friction coefficient at the given run-length Reynolds
/// number: `1.328/sqrt(Re)` laminar, `0.074/Re^0.2` turbulent. `Re` is
/// clamped to at least 1.
pub fn friction_coefficient<T: Real>(re: T, transition_re: T) -> T {
    let re = re.max(T::one());
    if re < transition_re {
        T::of(1.328) / re.sqrt()
    } else {
        T::of(0.074) / re.powf(T::of(0.2))
    }
}

/// Viscous drag of the wetted mesh: `D = Σ q Cf(Re_local) A` over
/// triangles. The local Reynolds number of a triangle uses its
/// boundary-layer run length — the chordwise distance from the local
/// leading edge of its spanwise strip to the triangle's trailing extent —
/// so a whole-chord strip reproduces the plate correlation exactly.
pub fn viscous_drag<T: Real>(
    mesh: &SurfaceMesh<T>,
    conditions: &FlowConditions<T>,
    transition_re: T,
) -> T {
    let q = conditions.dynamic_pressure();
    let re_per_len = conditions.rho_water * conditions.speed / conditions.dynamic_viscosity;
    let m = mesh.chordwise_points;
    let n_ring_points = mesh.spanwise_stations * m;
    let ring_le_x: Vec<T> = (0..mesh.spanwise_stations)
        .map(|r| {
            mesh.ring(r)
                .iter()
                .fold(T::infinity(), |acc, p| acc.min(p.x))
        })
        .collect();
    let global_le_x = {
        let (lo, _) = mesh.bbox();
        lo.x
    };
    let le_of_vertex = |v: u32| -> T {
        let v = v as usize;
        if v < n_ring_points && m > 0 {
            ring_le_x[v / m]
        } else {
            // cap apices and unstructured meshes
            global_le_x
        }
    };
    let mut drag = T::zero();
    for t in &mesh.triangles {
        let le = (le_of_vertex(t[0]) + le_of_vertex(t[1]) + le_of_vertex(t[2])) / T::of(3.0);
        let [a, b, c] = mesh.triangle_points(*t);
        let trailing = a.x.max(b.x).max(c.x);
        let run = (trailing - le).max(T::zero());
        let re = re_per_len * run;
        let cf = friction_coefficient(re, transition_re);
        drag = drag + q * cf * mesh.triangle_area(*t);
    }
    drag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{baseline_design, build_sections, loft, MeshResolution};
    use crate::linalg::Vec3;

    /// One-sided unit square plate as a 2-ring structured mesh.
    fn unit_plate() -> SurfaceMesh<f64> {
        SurfaceMesh {
            points: vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
            ],
            triangles: vec![[0, 1, 2], [2, 1, 3]],
            spanwise_stations: 2,
            chordwise_points: 2,
        }
    }

    #[test]
    fn unit_plate_matches_prandtl_hand_value() {
        let cond = FlowConditions::<f64>::default();
        let re: f64 = 1030.0 * 0.25 / 0.0012; // ~2.15e5, laminar
        let cf = 1.328 / re.sqrt();
        let expect = cond.dynamic_pressure() * cf * 1.0;
        let d = viscous_drag(&unit_plate(), &cond, DEFAULT_TRANSITION_RE);
        assert!(
            (d - expect).abs() / expect < 1e-12,
            "drag {d} vs hand value {expect}"
        );
    }

    #[test]
    fn drag_vanishes_with_speed() {
        let mut cond = FlowConditions::<f64>::default();
        cond.speed = 1e-6;
        let d = viscous_drag(&unit_plate(), &cond, DEFAULT_TRANSITION_RE);
        assert!(d < 1e-8, "drag {d}");
    }

    #[test]
    fn turbulent_branch_engages_above_transition() {
        let mut cond = FlowConditions::<f64>::default();
        cond.speed = 5.0; // Re ~ 4.3e6 on the unit chord
        let re: f64 = 1030.0 * 5.0 / 0.0012;
        let cf = 0.074 / re.powf(0.2);
        let expect = 0.5 * 1030.0 * 25.0 * cf;
        let d = viscous_drag(&unit_plate(), &cond, DEFAULT_TRANSITION_RE);
        assert!((d - expect).abs() / expect < 1e-12);
    }

    #[test]
    fn baseline_center_body_reynolds_is_near_reference() {
        let sections = build_sections(&baseline_design::<f64>());
        let mesh = loft(&sections, MeshResolution::default()).unwrap();
        let cond = FlowConditions::<f64>::default();
        let root = mesh.spanwise_stations / 2; // symmetry-plane ring
        let chord = mesh.ring_chord(root);
        let re = cond.rho_water * cond.speed * chord / cond.dynamic_viscosity;
        // reported value ~2.5e5; the stated constants give 2.15e5 on a 1 m
        // chord, so check a 20% band around the reference
        assert!(
            (re / 2.5e5 - 1.0).abs() < 0.2,
            "center-body Re {re:.3e} outside band"
        );
    }
}
