//! Two-fidelity hydrodynamic evaluation: vortex-lattice forces with a
//! flat-plate viscous correction, polar sweeps, maximum efficiency, and the
//! steady-glide buoyancy closure.

pub mod adapter;
pub mod polar;
pub mod viscous;
pub mod vlm;

pub use adapter::ExternalSolverAdapter;
pub use polar::{glide_closure, glide_state, max_efficiency, polar, AoaGrid, HydroConfig};
pub use viscous::viscous_drag;
pub use vlm::{vlm_forces, CamberGrid, LatticeSize, VlmSolver};

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Operating-point fluid and gravity constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowConditions<T> {
    /// Forward speed U_inf [m/s].
    pub speed: T,
    /// Water density [kg/m^3].
    pub rho_water: T,
    /// Dynamic viscosity [kg/(m s)].
    pub dynamic_viscosity: T,
    /// Gravity [m/s^2].
    pub gravity: T,
}

impl<T: Real> Default for FlowConditions<T> {
    fn default() -> Self {
        // deep-water Mediterranean reference conditions
        FlowConditions {
            speed: T::of(0.25),
            rho_water: T::of(1030.0),
            dynamic_viscosity: T::of(0.0012),
            gravity: T::of(9.804),
        }
    }
}

impl<T: Real> FlowConditions<T> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("speed", self.speed),
            ("rho_water", self.rho_water),
            ("dynamic_viscosity", self.dynamic_viscosity),
            ("gravity", self.gravity),
        ] {
            if !(v > T::zero() && v.is_finite()) {
                return Err(Error::domain("flow", format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Dynamic pressure q = rho U^2 / 2.
    pub fn dynamic_pressure(&self) -> T {
        self.rho_water * self.speed * self.speed / T::of(2.0)
    }
}

/// Internal fidelity levels of the lattice evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fidelity {
    Coarse,
    Fine,
}

impl Fidelity {
    pub fn level(self) -> usize {
        match self {
            Fidelity::Coarse => 1,
            Fidelity::Fine => 2,
        }
    }

    pub fn from_level(level: usize) -> Result<Self> {
        match level {
            1 => Ok(Fidelity::Coarse),
            2 => Ok(Fidelity::Fine),
            other => Err(Error::domain("fidelity", format!("unknown level {other}"))),
        }
    }

    pub const ALL: [Fidelity; 2] = [Fidelity::Coarse, Fidelity::Fine];
}

/// One polar sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarPoint<T> {
    pub aoa_deg: T,
    pub lift: T,
    pub drag: T,
}

/// Lift/drag sweep over the incidence grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarCurve<T> {
    pub points: Vec<PolarPoint<T>>,
    pub fidelity: Fidelity,
}

impl<T: Real> PolarCurve<T> {
    pub fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(Error::EvaluationFailed("empty polar".into()));
        }
        for w in self.points.windows(2) {
            if w[1].aoa_deg <= w[0].aoa_deg {
                return Err(Error::EvaluationFailed(
                    "polar angles not strictly increasing".into(),
                ));
            }
        }
        if let Some(p) = self.points.iter().find(|p| !(p.drag > T::zero())) {
            return Err(Error::EvaluationFailed(format!(
                "non-positive drag {} at {} deg",
                p.drag, p.aoa_deg
            )));
        }
        Ok(())
    }

    /// CSV with header `aoa_deg,lift_N,drag_N`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("aoa_deg,lift_N,drag_N\n");
        for p in &self.points {
            s.push_str(&format!(
                "{},{},{}\n",
                p.aoa_deg.as_f64(),
                p.lift.as_f64(),
                p.drag.as_f64()
            ));
        }
        s
    }

    pub fn from_csv(text: &str, fidelity: Fidelity) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default().trim();
        if header != "aoa_deg,lift_N,drag_N" {
            return Err(Error::Adapter(format!("bad polar header: {header:?}")));
        }
        let mut points = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(Error::Adapter(format!("polar row {i}: expected 3 columns")));
            }
            let parse = |s: &str, what: &str| -> Result<T> {
                s.trim()
                    .parse::<f64>()
                    .map(T::of)
                    .map_err(|e| Error::Adapter(format!("polar row {i} {what}: {e}")))
            };
            points.push(PolarPoint {
                aoa_deg: parse(cols[0], "aoa")?,
                lift: parse(cols[1], "lift")?,
                drag: parse(cols[2], "drag")?,
            });
        }
        let curve = PolarCurve { points, fidelity };
        curve.validate()?;
        Ok(curve)
    }
}

/// Steady-glide summary at the best-efficiency point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlideState<T> {
    /// Glide-path angle, radians, in (-pi/2, 0).
    pub gamma: T,
    /// Equivalent bladder volume variation [m^3].
    pub delta_vb: T,
    /// Incidence of maximum efficiency [deg].
    pub aoa_star_deg: T,
    /// Maximum lift-to-drag ratio.
    pub e_max: T,
}
