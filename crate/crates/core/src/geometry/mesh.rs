//! Triangulated surface mesh: topology checks, enclosed volume, export.

use crate::error::{Error, Result};
use crate::linalg::Vec3;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write as _;

/// Discretized outer shell. Points are stored ring-major for structured
/// meshes: index `r * chordwise_points + j` addresses loop point `j` of
/// spanwise station `r` (stations ordered by increasing y, both halves).
/// Cap apex points, when present, follow the ring block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMesh<T> {
    pub points: Vec<Vec3<T>>,
    pub triangles: Vec<[u32; 3]>,
    /// Number of spanwise stations (full mirrored body).
    pub spanwise_stations: usize,
    /// Number of points per section loop.
    pub chordwise_points: usize,
}

impl<T: Real> SurfaceMesh<T> {
    /// Loop points of station `r`.
    pub fn ring(&self, r: usize) -> &[Vec3<T>] {
        let m = self.chordwise_points;
        &self.points[r * m..(r + 1) * m]
    }

    /// Chordwise extent (x span) of a station ring.
    pub fn ring_chord(&self, r: usize) -> T {
        let ring = self.ring(r);
        let mut lo = ring[0].x;
        let mut hi = ring[0].x;
        for p in ring {
            lo = lo.min(p.x);
            hi = hi.max(p.x);
        }
        hi - lo
    }

    pub fn triangle_points(&self, t: [u32; 3]) -> [Vec3<T>; 3] {
        [
            self.points[t[0] as usize],
            self.points[t[1] as usize],
            self.points[t[2] as usize],
        ]
    }

    pub fn triangle_area(&self, t: [u32; 3]) -> T {
        let [a, b, c] = self.triangle_points(t);
        (b - a).cross(c - a).norm() / T::of(2.0)
    }

    /// Verify the mesh is a closed orientable surface: every undirected
    /// edge shared by exactly two triangles with opposite directions.
    pub fn check_watertight(&self) -> Result<()> {
        let mut directed: HashMap<(u32, u32), u32> = HashMap::new();
        for t in &self.triangles {
            for k in 0..3 {
                let e = (t[k], t[(k + 1) % 3]);
                if e.0 == e.1 {
                    return Err(Error::NonWatertight(format!("degenerate edge at vertex {}", e.0)));
                }
                *directed.entry(e).or_insert(0) += 1;
            }
        }
        for (&(a, b), &count) in &directed {
            if count != 1 {
                return Err(Error::NonWatertight(format!(
                    "directed edge ({a},{b}) used {count} times"
                )));
            }
            if !directed.contains_key(&(b, a)) {
                return Err(Error::NonWatertight(format!(
                    "edge ({a},{b}) has no opposite; boundary or flipped winding"
                )));
            }
        }
        Ok(())
    }

    /// Axis-aligned bounding box.
    pub fn bbox(&self) -> (Vec3<T>, Vec3<T>) {
        let mut lo = self.points[0];
        let mut hi = self.points[0];
        for p in &self.points {
            lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
            hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
        }
        (lo, hi)
    }

    /// ASCII STL export.
    pub fn to_stl(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "solid {name}");
        for t in &self.triangles {
            let [a, b, c] = self.triangle_points(*t);
            let n = (b - a).cross(c - a).normalized();
            let _ = writeln!(
                s,
                "  facet normal {} {} {}",
                n.x.as_f64(),
                n.y.as_f64(),
                n.z.as_f64()
            );
            let _ = writeln!(s, "    outer loop");
            for p in [a, b, c] {
                let _ = writeln!(
                    s,
                    "      vertex {} {} {}",
                    p.x.as_f64(),
                    p.y.as_f64(),
                    p.z.as_f64()
                );
            }
            let _ = writeln!(s, "    endloop");
            let _ = writeln!(s, "  endfacet");
        }
        let _ = writeln!(s, "endsolid {name}");
        s
    }

    /// Structured point-table export: a header with the grid dimensions
    /// followed by one `x y z` line per point.
    pub fn to_point_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# stations={} loop={} points={}",
            self.spanwise_stations,
            self.chordwise_points,
            self.points.len()
        );
        for p in &self.points {
            let _ = writeln!(s, "{} {} {}", p.x.as_f64(), p.y.as_f64(), p.z.as_f64());
        }
        s
    }
}

/// Enclosed volume by the divergence theorem:
/// `V = (1/3) Σ (centroid · normal_area)` over triangles. Positive for
/// outward-consistent winding, negated when the winding is reversed.
pub fn enclosed_volume<T: Real>(mesh: &SurfaceMesh<T>) -> Result<T> {
    mesh.check_watertight()?;
    let three = T::of(3.0);
    let six = T::of(6.0);
    let mut v = T::zero();
    for t in &mesh.triangles {
        let [a, b, c] = mesh.triangle_points(*t);
        let centroid = (a + b + c) / three;
        let normal_area = (b - a).cross(c - a); // 2 * area * unit normal
        v = v + centroid.dot(normal_area) / six;
    }
    Ok(v)
}

#[cfg(test)]
pub(crate) fn unit_cube_mesh() -> SurfaceMesh<f64> {
    // 8 corners, 12 outward-wound triangles
    let p = |x: f64, y: f64, z: f64| Vec3::new(x, y, z);
    let points = vec![
        p(0., 0., 0.),
        p(1., 0., 0.),
        p(1., 1., 0.),
        p(0., 1., 0.),
        p(0., 0., 1.),
        p(1., 0., 1.),
        p(1., 1., 1.),
        p(0., 1., 1.),
    ];
    let triangles = vec![
        [0, 2, 1],
        [0, 3, 2], // bottom (z=0, normal -z)
        [4, 5, 6],
        [4, 6, 7], // top
        [0, 1, 5],
        [0, 5, 4], // front (y=0)
        [1, 2, 6],
        [1, 6, 5], // right
        [2, 3, 7],
        [2, 7, 6], // back
        [3, 0, 4],
        [3, 4, 7], // left
    ];
    SurfaceMesh {
        points,
        triangles,
        spanwise_stations: 0,
        chordwise_points: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn icosphere(subdivisions: u32) -> SurfaceMesh<f64> {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let mut points: Vec<Vec3<f64>> = vec![
            Vec3::new(-1.0, phi, 0.0),
            Vec3::new(1.0, phi, 0.0),
            Vec3::new(-1.0, -phi, 0.0),
            Vec3::new(1.0, -phi, 0.0),
            Vec3::new(0.0, -1.0, phi),
            Vec3::new(0.0, 1.0, phi),
            Vec3::new(0.0, -1.0, -phi),
            Vec3::new(0.0, 1.0, -phi),
            Vec3::new(phi, 0.0, -1.0),
            Vec3::new(phi, 0.0, 1.0),
            Vec3::new(-phi, 0.0, -1.0),
            Vec3::new(-phi, 0.0, 1.0),
        ]
        .into_iter()
        .map(|p| p.normalized())
        .collect();
        let mut tris: Vec<[u32; 3]> = vec![
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        for _ in 0..subdivisions {
            let mut midpoint: HashMap<(u32, u32), u32> = HashMap::new();
            let mut next = Vec::new();
            for t in &tris {
                let mut mids = [0u32; 3];
                for k in 0..3 {
                    let (a, b) = (t[k], t[(k + 1) % 3]);
                    let key = (a.min(b), a.max(b));
                    mids[k] = *midpoint.entry(key).or_insert_with(|| {
                        let m = ((points[a as usize] + points[b as usize]) / 2.0).normalized();
                        points.push(m);
                        (points.len() - 1) as u32
                    });
                }
                next.push([t[0], mids[0], mids[2]]);
                next.push([t[1], mids[1], mids[0]]);
                next.push([t[2], mids[2], mids[1]]);
                next.push([mids[0], mids[1], mids[2]]);
            }
            tris = next;
        }
        SurfaceMesh {
            points,
            triangles: tris,
            spanwise_stations: 0,
            chordwise_points: 0,
        }
    }

    #[test]
    fn unit_cube_volume_is_exactly_one() {
        let v = enclosed_volume(&unit_cube_mesh()).unwrap();
        assert!((v - 1.0).abs() < 1e-14, "cube volume {v}");
    }

    #[test]
    fn icosphere_volume_matches_analytic_sphere() {
        let mesh = icosphere(4);
        let v = enclosed_volume(&mesh).unwrap();
        let exact = 4.0 / 3.0 * std::f64::consts::PI;
        assert!(
            (v - exact).abs() / exact < 0.01,
            "icosphere volume {v} vs {exact}"
        );
    }

    #[test]
    fn reversed_winding_negates_volume() {
        let mut mesh = unit_cube_mesh();
        for t in &mut mesh.triangles {
            t.swap(1, 2);
        }
        let v = enclosed_volume(&mesh).unwrap();
        assert!((v + 1.0).abs() < 1e-14, "reversed volume {v}");
    }

    #[test]
    fn open_mesh_is_rejected() {
        let mut mesh = unit_cube_mesh();
        mesh.triangles.pop();
        assert!(matches!(
            enclosed_volume(&mesh),
            Err(Error::NonWatertight(_))
        ));
    }
}
