//! Lower-level internal sizing: minimize empty weight over pressure-hull
//! placement, dimensions, wall thickness, and extra buoyancy volume under
//! structural, hydrostatic, surfacing, containment, and payload constraints.

pub mod constraints;
pub mod pso;

pub use constraints::{
    buoyancy, constraint_vector, empty_weight, empty_weight_raw, g_cont, g_hydro, g_pay,
    g_struct, g_surf, total_weight,
};
pub use pso::{solve_sizing, PsoConfig};

use crate::error::{Error, Result};
use crate::geometry::SurfaceMesh;
use crate::linalg::Vec3;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Internal design variables `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizingVariables<T> {
    /// Hull-center longitudinal coordinate [m].
    pub xi0: T,
    /// Hull-center vertical coordinate [m].
    pub zeta0: T,
    /// Internal semi-axes [m].
    pub a: T,
    pub b: T,
    pub c: T,
    /// Wall thickness [m].
    pub t: T,
    /// Additional buoyancy volume [m^3].
    pub v_buo: T,
}

impl<T: Real> SizingVariables<T> {
    pub fn from_array(v: [T; 7]) -> Self {
        SizingVariables {
            xi0: v[0],
            zeta0: v[1],
            a: v[2],
            b: v[3],
            c: v[4],
            t: v[5],
            v_buo: v[6],
        }
    }

    pub fn to_array(self) -> [T; 7] {
        [self.xi0, self.zeta0, self.a, self.b, self.c, self.t, self.v_buo]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c), ("t", self.t)] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::domain("y", format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.v_buo >= T::zero()) {
            return Err(Error::domain("y", format!("v_buo must be >= 0, got {}", self.v_buo)));
        }
        Ok(())
    }
}

/// Fixed masses, component volumes, materials, and margins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassBudget<T> {
    /// Fixed masses [kg]: science sensors, payload, batteries, buoyancy system.
    pub m_sci: T,
    pub m_pay: T,
    pub m_bat: T,
    pub m_buo: T,
    /// Component volumes [m^3].
    pub v_sci: T,
    pub v_pay: T,
    pub v_bat: T,
    /// Filler (shell) and pressure-hull material densities [kg/m^3].
    pub rho_fill: T,
    pub rho_ph: T,
    /// Hull material stiffness [Pa] and Poisson ratio.
    pub e_ph: T,
    pub nu_ph: T,
    /// Design external pressure [Pa].
    pub p_max: T,
    /// Hydrostatic trim tolerance [N].
    pub tau: T,
    /// Containment margin (dimensionless).
    pub eps_cont: T,
}

impl<T: Real> Default for MassBudget<T> {
    fn default() -> Self {
        MassBudget {
            m_sci: T::of(1.0),
            m_pay: T::of(2.5),
            m_bat: T::of(8.0),
            m_buo: T::of(7.5),
            v_sci: T::of(0.0068),
            v_pay: T::of(0.0026),
            v_bat: T::of(0.005),
            rho_fill: T::of(950.0),
            rho_ph: T::of(2700.0),
            e_ph: T::of(69e9),
            nu_ph: T::of(0.33),
            p_max: T::of(1e7),
            // tau and eps_cont are not published; these are the declared
            // defaults (configurable)
            tau: T::of(2.0),
            eps_cont: T::of(0.05),
        }
    }
}

impl<T: Real> MassBudget<T> {
    pub fn fixed_mass(&self) -> T {
        self.m_sci + self.m_pay + self.m_bat + self.m_buo
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            ("m_sci", self.m_sci),
            ("m_pay", self.m_pay),
            ("m_bat", self.m_bat),
            ("m_buo", self.m_buo),
            ("v_sci", self.v_sci),
            ("v_pay", self.v_pay),
            ("v_bat", self.v_bat),
            ("rho_fill", self.rho_fill),
            ("rho_ph", self.rho_ph),
            ("e_ph", self.e_ph),
            ("p_max", self.p_max),
            ("tau", self.tau),
            ("eps_cont", self.eps_cont),
        ];
        for (name, v) in all {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::domain("budget", format!("{name} must be > 0, got {v}")));
            }
        }
        if !(self.nu_ph > T::zero() && self.nu_ph < T::of(0.5)) {
            return Err(Error::domain(
                "budget",
                format!("nu_ph must be in (0, 0.5), got {}", self.nu_ph),
            ));
        }
        Ok(())
    }
}

/// Geometry quantities the sizing problem consumes: shell volume and the
/// outer-surface points for the containment check.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryContext<T> {
    pub volume: T,
    pub shell_points: Vec<Vec3<T>>,
}

impl<T: Real> GeometryContext<T> {
    pub fn from_mesh(mesh: &SurfaceMesh<T>, volume: T) -> Self {
        GeometryContext {
            volume,
            shell_points: mesh.points.clone(),
        }
    }
}

/// Box bounds on the sizing variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizingBounds<T> {
    pub lower: SizingVariables<T>,
    pub upper: SizingVariables<T>,
}

impl<T: Real> SizingBounds<T> {
    /// Defaults: hull center inside the shell bounding box, semi-axes in
    /// [0.02, 0.6] m, thickness in [1, 30] mm, extra buoyancy in
    /// [delta_vb, 0.05] m^3 (the stroke must cover both glide legs).
    pub fn default_for(ctx: &GeometryContext<T>, delta_vb: T) -> Self {
        let mut lo = ctx.shell_points[0];
        let mut hi = ctx.shell_points[0];
        for p in &ctx.shell_points {
            lo = Vec3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
            hi = Vec3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
        }
        let v_buo_hi = T::of(0.05).max(delta_vb * T::of(2.0));
        SizingBounds {
            lower: SizingVariables {
                xi0: lo.x,
                zeta0: lo.z,
                a: T::of(0.02),
                b: T::of(0.02),
                c: T::of(0.02),
                t: T::of(0.001),
                v_buo: delta_vb,
            },
            upper: SizingVariables {
                xi0: hi.x,
                zeta0: hi.z,
                a: T::of(0.6),
                b: T::of(0.6),
                c: T::of(0.6),
                t: T::of(0.030),
                v_buo: v_buo_hi,
            },
        }
    }

    pub fn lower_array(&self) -> [T; 7] {
        self.lower.to_array()
    }

    pub fn upper_array(&self) -> [T; 7] {
        self.upper.to_array()
    }

    pub fn validate(&self) -> Result<()> {
        let lo = self.lower_array();
        let hi = self.upper_array();
        if lo.iter().zip(&hi).any(|(l, u)| l >= u) {
            return Err(Error::InvalidConfig("sizing lower bound >= upper bound".into()));
        }
        Ok(())
    }
}

/// Result of the lower-level solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizingSolution<T> {
    pub y_star: SizingVariables<T>,
    /// Minimum empty weight [N].
    pub w_empty_star: T,
    /// `[g_struct, g_hydro, g_surf, g_cont, g_pay]` at the solution.
    pub constraint_values: [T; 5],
    pub feasible: bool,
    pub pso_iterations: usize,
    /// Optional per-iteration best penalized objective trace.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<(usize, f64)>>,
}
