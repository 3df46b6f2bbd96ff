//! Horseshoe-vortex lattice on the camber surface.
//!
//! The influence matrix depends only on geometry (trailing legs run along
//! the body x-axis), so one factorization serves the whole incidence sweep.
//! Lift comes from Kutta–Joukowski on the bound segments; induced drag from
//! the near-field summation with the full induced velocity at each bound
//! midpoint.

use crate::error::{Error, Result};
use crate::geometry::SurfaceMesh;
use crate::hydro::FlowConditions;
use crate::linalg::{LuDecomp, Matrix, Vec3};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Lattice panel counts over the full span and the chord.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSize {
    pub n_span: usize,
    pub n_chord: usize,
}

impl LatticeSize {
    pub fn doubled(self) -> Self {
        LatticeSize {
            n_span: self.n_span * 2,
            n_chord: self.n_chord * 2,
        }
    }

    pub fn panel_count(self) -> usize {
        self.n_span * self.n_chord
    }
}

/// Mid-surface between upper and lower skins, stored as spanwise rows of
/// chordwise polylines (leading edge → trailing edge), rows ordered by
/// increasing y over the full mirrored span.
#[derive(Debug, Clone, PartialEq)]
pub struct CamberGrid<T> {
    pub rows: Vec<Vec<Vec3<T>>>,
}

impl<T: Real> CamberGrid<T> {
    /// Extract the camber surface from a structured loft mesh by averaging
    /// paired upper/lower loop points of every station ring.
    pub fn from_mesh(mesh: &SurfaceMesh<T>) -> Result<Self> {
        let m = mesh.chordwise_points;
        let n = mesh.spanwise_stations;
        if m < 6 || n < 3 {
            return Err(Error::EvaluationFailed(
                "mesh too coarse for camber extraction".into(),
            ));
        }
        let mut rows = Vec::with_capacity(n);
        for r in 0..n {
            let ring = mesh.ring(r);
            let mut row = Vec::with_capacity(m / 2 + 1);
            // k = 0 is the trailing edge; walk toward the leading edge
            for k in 0..=m / 2 {
                let j2 = (m - k) % m;
                let camber = (ring[k] + ring[j2]) / T::of(2.0);
                row.push(camber);
            }
            row.reverse(); // leading edge first
            rows.push(row);
        }
        Ok(CamberGrid { rows })
    }

    /// Planar rectangular plate of given full span and chord at z = 0,
    /// mid-span at y = 0. Used for canonical checks.
    pub fn flat_plate(span: T, chord: T, n_rows: usize, n_cols: usize) -> Self {
        let mut rows = Vec::with_capacity(n_rows);
        for i in 0..n_rows {
            let fy = T::of_usize(i) / T::of_usize(n_rows - 1);
            let y = (fy - T::of(0.5)) * span;
            let mut row = Vec::with_capacity(n_cols);
            for j in 0..n_cols {
                let fx = T::of_usize(j) / T::of_usize(n_cols - 1);
                row.push(Vec3::new(fx * chord, y, T::zero()));
            }
            rows.push(row);
        }
        CamberGrid { rows }
    }

    fn row_mean_y(&self, i: usize) -> T {
        let row = &self.rows[i];
        row.iter().fold(T::zero(), |a, p| a + p.y) / T::of_usize(row.len())
    }

    /// Resample onto `(n_span + 1) x (n_chord + 1)` lattice nodes: cosine
    /// distribution across the span, uniform arc-length fraction along the
    /// chord.
    pub fn resample(&self, lattice: LatticeSize) -> Result<Vec<Vec<Vec3<T>>>> {
        if self.rows.len() < 2 {
            return Err(Error::EvaluationFailed("camber grid needs >= 2 rows".into()));
        }
        let n_sp = lattice.n_span;
        let n_ch = lattice.n_chord;
        if n_sp < 2 || n_ch < 2 {
            return Err(Error::domain("lattice", "panel counts must be >= 2".to_string()));
        }
        // chordwise resample of every source row first
        let fractions: Vec<T> = (0..=n_ch)
            .map(|j| T::of_usize(j) / T::of_usize(n_ch))
            .collect();
        let resampled: Vec<Vec<Vec3<T>>> = self
            .rows
            .iter()
            .map(|row| resample_polyline(row, &fractions))
            .collect();
        let ys: Vec<T> = (0..self.rows.len()).map(|i| self.row_mean_y(i)).collect();
        let (y_min, y_max) = (ys[0], ys[ys.len() - 1]);
        let mid = (y_min + y_max) / T::of(2.0);
        let half = (y_max - y_min) / T::of(2.0);
        let mut nodes = Vec::with_capacity(n_sp + 1);
        for i in 0..=n_sp {
            let t = T::of_usize(i) / T::of_usize(n_sp);
            let y = mid - half * (T::PI() * t).cos();
            // locate the bracketing source rows
            let mut hi = 1;
            while hi < ys.len() - 1 && ys[hi] < y {
                hi += 1;
            }
            let lo = hi - 1;
            let denom = ys[hi] - ys[lo];
            let w = if denom == T::zero() {
                T::zero()
            } else {
                ((y - ys[lo]) / denom).max(T::zero()).min(T::one())
            };
            let row: Vec<Vec3<T>> = resampled[lo]
                .iter()
                .zip(&resampled[hi])
                .map(|(&a, &b)| a + (b - a) * w)
                .collect();
            nodes.push(row);
        }
        Ok(nodes)
    }
}

/// Sample a polyline at the given cumulative arc-length fractions.
fn resample_polyline<T: Real>(pts: &[Vec3<T>], fractions: &[T]) -> Vec<Vec3<T>> {
    let mut cum = Vec::with_capacity(pts.len());
    let mut acc = T::zero();
    cum.push(T::zero());
    for w in pts.windows(2) {
        acc = acc + (w[1] - w[0]).norm();
        cum.push(acc);
    }
    let total = acc.max(T::of(1e-300));
    fractions
        .iter()
        .map(|&f| {
            let s = f * total;
            let mut hi = 1;
            while hi < cum.len() - 1 && cum[hi] < s {
                hi += 1;
            }
            let lo = hi - 1;
            let seg = cum[hi] - cum[lo];
            let w = if seg == T::zero() { T::zero() } else { (s - cum[lo]) / seg };
            pts[lo] + (pts[hi] - pts[lo]) * w
        })
        .collect()
}

struct Panel<T> {
    bound_a: Vec3<T>,
    bound_b: Vec3<T>,
    control: Vec3<T>,
    normal: Vec3<T>,
    mid: Vec3<T>,
    /// Bound segment vector (a -> b).
    span_vec: Vec3<T>,
    /// Local chord length of the panel strip.
    chord: T,
}

/// Vortex-lattice solver with a factored influence matrix; reusable across
/// angles of attack for one geometry.
pub struct VlmSolver<T> {
    panels: Vec<Panel<T>>,
    lu: LuDecomp<T>,
    /// Induced velocity at bound midpoints per unit circulation.
    mid_influence: Vec<Vec<Vec3<T>>>,
    speed: T,
    rho: T,
}

impl<T: Real> VlmSolver<T> {
    pub fn new(camber: &CamberGrid<T>, lattice: LatticeSize, conditions: &FlowConditions<T>) -> Result<Self> {
        conditions.validate()?;
        let nodes = camber.resample(lattice)?;
        let n_sp = lattice.n_span;
        let n_ch = lattice.n_chord;

        // reference length for the far-wake cutoff
        let mut lo = nodes[0][0];
        let mut hi = nodes[0][0];
        for row in &nodes {
            for p in row {
                lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
                hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
            }
        }
        let ref_len = (hi - lo).norm().max(T::of(1e-6));
        let far = ref_len * T::of(1e3);
        let core = ref_len * T::of(1e-8);

        let quarter = T::of(0.25);
        let three_quarter = T::of(0.75);
        let mut panels = Vec::with_capacity(n_sp * n_ch);
        for i in 0..n_sp {
            for j in 0..n_ch {
                let p00 = nodes[i][j];
                let p01 = nodes[i][j + 1];
                let p10 = nodes[i + 1][j];
                let p11 = nodes[i + 1][j + 1];
                let bound_a = p00 + (p01 - p00) * quarter;
                let bound_b = p10 + (p11 - p10) * quarter;
                let cp_l = p00 + (p01 - p00) * three_quarter;
                let cp_r = p10 + (p11 - p10) * three_quarter;
                let control = (cp_l + cp_r) / T::of(2.0);
                let normal = (p01 - p10).cross(p11 - p00).normalized();
                let chord =
                    (((p01 - p00).norm() + (p11 - p10).norm()) / T::of(2.0)).max(T::of(1e-12));
                let mid = (bound_a + bound_b) / T::of(2.0);
                panels.push(Panel {
                    bound_a,
                    bound_b,
                    control,
                    normal,
                    mid,
                    span_vec: bound_b - bound_a,
                    chord,
                });
            }
        }

        let n = panels.len();
        let mut aic = Matrix::zeros(n, n);
        // trailing-leg-only induction at the bound midpoints; leaving the
        // bound-bound terms out of the force sum is the standard near-field
        // drag treatment and avoids spurious thrust on swept lattices
        let mut mid_influence = vec![vec![Vec3::zero(); n]; n];
        for (k, src) in panels.iter().enumerate() {
            for (i, obs) in panels.iter().enumerate() {
                let v_cp = horseshoe_velocity(src.bound_a, src.bound_b, obs.control, far, core);
                aic[(i, k)] = v_cp.dot(obs.normal);
                mid_influence[i][k] =
                    trailing_velocity(src.bound_a, src.bound_b, obs.mid, far, core);
            }
        }
        let lu = LuDecomp::factor(aic)
            .map_err(|e| Error::EvaluationFailed(format!("singular influence matrix: {e}")))?;
        Ok(VlmSolver {
            panels,
            lu,
            mid_influence,
            speed: conditions.speed,
            rho: conditions.rho_water,
        })
    }

    pub fn panel_count(&self) -> usize {
        self.panels.len()
    }

    fn circulation(&self, aoa_rad: T) -> Result<Vec<T>> {
        let u = freestream(self.speed, aoa_rad);
        let rhs: Vec<T> = self.panels.iter().map(|p| -u.dot(p.normal)).collect();
        let gamma = self.lu.solve(&rhs);
        if gamma.iter().any(|g| !g.is_finite()) {
            return Err(Error::EvaluationFailed("non-finite circulation".into()));
        }
        Ok(gamma)
    }

    /// Lift and induced drag at the given incidence [rad].
    pub fn forces(&self, aoa_rad: T) -> Result<(T, T)> {
        let gamma = self.circulation(aoa_rad)?;
        let u = freestream(self.speed, aoa_rad);
        let mut force = Vec3::zero();
        for (i, p) in self.panels.iter().enumerate() {
            let mut v = u;
            for (k, w) in self.mid_influence[i].iter().enumerate() {
                v += *w * gamma[k];
            }
            force += v.cross(p.span_vec) * (self.rho * gamma[i]);
        }
        let (sa, ca) = (aoa_rad.sin(), aoa_rad.cos());
        let lift = force.dot(Vec3::new(-sa, T::zero(), ca));
        let drag = force.dot(Vec3::new(ca, T::zero(), sa));
        Ok((lift, drag))
    }

    /// Pressure-jump signature per panel, `2 Γ / (U c_panel)` — the
    /// distributed field consumed by the dimensionality reduction.
    pub fn surface_signature(&self, aoa_rad: T) -> Result<Vec<T>> {
        let gamma = self.circulation(aoa_rad)?;
        Ok(self
            .panels
            .iter()
            .zip(&gamma)
            .map(|(p, &g)| T::of(2.0) * g / (self.speed * p.chord))
            .collect())
    }
}

fn freestream<T: Real>(speed: T, aoa_rad: T) -> Vec3<T> {
    Vec3::new(speed * aoa_rad.cos(), T::zero(), speed * aoa_rad.sin())
}

/// Velocity induced at `x` by a unit-circulation horseshoe: trailing leg in
/// from far downstream to `a`, bound segment `a -> b`, trailing leg out from
/// `b` to far downstream. Legs run along +x.
fn horseshoe_velocity<T: Real>(a: Vec3<T>, b: Vec3<T>, x: Vec3<T>, far: T, core: T) -> Vec3<T> {
    let far_x = Vec3::new(far, T::zero(), T::zero());
    segment_velocity(a + far_x, a, x, core)
        + segment_velocity(a, b, x, core)
        + segment_velocity(b, b + far_x, x, core)
}

/// Trailing legs only — the streamwise vorticity that sets induced drag.
fn trailing_velocity<T: Real>(a: Vec3<T>, b: Vec3<T>, x: Vec3<T>, far: T, core: T) -> Vec3<T> {
    let far_x = Vec3::new(far, T::zero(), T::zero());
    segment_velocity(a + far_x, a, x, core) + segment_velocity(b, b + far_x, x, core)
}

/// Biot–Savart velocity of a straight segment `p1 -> p2` with unit
/// circulation, evaluated at `x`; zero inside the viscous core.
fn segment_velocity<T: Real>(p1: Vec3<T>, p2: Vec3<T>, x: Vec3<T>, core: T) -> Vec3<T> {
    let r1 = x - p1;
    let r2 = x - p2;
    let cr = r1.cross(r2);
    let cr2 = cr.norm_sq();
    let d = p2 - p1;
    let d2 = d.norm_sq();
    if d2 == T::zero() {
        return Vec3::zero();
    }
    // perpendicular distance to the segment line
    if cr2 <= core * core * d2 {
        return Vec3::zero();
    }
    let k = d.dot(r1.normalized() - r2.normalized()) / (T::of(4.0) * T::PI() * cr2);
    cr * k
}

/// One-shot lattice evaluation (factors the influence matrix internally).
pub fn vlm_forces<T: Real>(
    camber: &CamberGrid<T>,
    aoa_rad: T,
    conditions: &FlowConditions<T>,
    lattice: LatticeSize,
) -> Result<(T, T)> {
    if aoa_rad.abs() >= T::of(20.0) * T::PI() / T::of(180.0) {
        return Err(Error::domain("aoa", format!("|aoa| must be < 20 deg, got {aoa_rad} rad")));
    }
    VlmSolver::new(camber, lattice, conditions)?.forces(aoa_rad)
}
