//! Polar sweeps, maximum-efficiency extraction, and the steady-glide
//! buoyancy closure.

use crate::error::{Error, Result};
use crate::geometry::SurfaceMesh;
use crate::hydro::viscous::viscous_drag;
use crate::hydro::vlm::{CamberGrid, LatticeSize, VlmSolver};
use crate::hydro::{Fidelity, FlowConditions, GlideState, PolarCurve, PolarPoint};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Incidence sweep: `-2°..=12°` at 1° steps by default (15 samples).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AoaGrid {
    pub start_deg: f64,
    pub end_deg: f64,
    pub step_deg: f64,
}

impl Default for AoaGrid {
    fn default() -> Self {
        AoaGrid {
            start_deg: -2.0,
            end_deg: 12.0,
            step_deg: 1.0,
        }
    }
}

impl AoaGrid {
    pub fn degrees<T: Real>(&self) -> Vec<T> {
        let mut out = Vec::new();
        let mut a = self.start_deg;
        while a <= self.end_deg + 1e-9 {
            out.push(T::of(a));
            a += self.step_deg;
        }
        out
    }
}

/// Lattice sizes and viscous settings for the two internal fidelity levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydroConfig {
    pub coarse: LatticeSize,
    pub fine: LatticeSize,
    pub transition_re: f64,
    pub aoa: AoaGrid,
}

impl Default for HydroConfig {
    fn default() -> Self {
        // fine = coarse doubled in both directions; measured cost ratio is
        // order 1:10 on these sizes
        HydroConfig {
            coarse: LatticeSize { n_span: 16, n_chord: 4 },
            fine: LatticeSize { n_span: 32, n_chord: 8 },
            transition_re: crate::hydro::viscous::DEFAULT_TRANSITION_RE,
            aoa: AoaGrid::default(),
        }
    }
}

impl HydroConfig {
    pub fn lattice(&self, fidelity: Fidelity) -> LatticeSize {
        match fidelity {
            Fidelity::Coarse => self.coarse,
            Fidelity::Fine => self.fine,
        }
    }
}

/// Evaluate the polar over the configured sweep at one fidelity level.
/// Any failed sample rejects the whole polar.
pub fn polar<T: Real>(
    mesh: &SurfaceMesh<T>,
    conditions: &FlowConditions<T>,
    cfg: &HydroConfig,
    fidelity: Fidelity,
) -> Result<PolarCurve<T>> {
    let camber = CamberGrid::from_mesh(mesh)?;
    let solver = VlmSolver::new(&camber, cfg.lattice(fidelity), conditions)?;
    let d_visc = viscous_drag(mesh, conditions, T::of(cfg.transition_re));
    let mut points = Vec::new();
    for aoa_deg in cfg.aoa.degrees::<T>() {
        let aoa_rad = aoa_deg * T::PI() / T::of(180.0);
        let (lift, d_ind) = solver.forces(aoa_rad)?;
        points.push(PolarPoint {
            aoa_deg,
            lift,
            drag: d_ind + d_visc,
        });
    }
    let curve = PolarCurve { points, fidelity };
    curve.validate()?;
    Ok(curve)
}

/// Best-efficiency sample of a polar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyPoint<T> {
    pub e_max: T,
    pub aoa_star_deg: T,
    pub lift: T,
    pub drag: T,
}

/// Maximum lift-to-drag ratio over the sweep — the slope of the tangent
/// from the origin to the sampled polar. Ties resolve to the smaller
/// incidence.
pub fn max_efficiency<T: Real>(polar: &PolarCurve<T>) -> Result<EfficiencyPoint<T>> {
    polar.validate()?;
    if !polar.points.iter().any(|p| p.lift > T::zero()) {
        return Err(Error::NoPositiveLift);
    }
    let mut best: Option<EfficiencyPoint<T>> = None;
    for p in &polar.points {
        let e = p.lift / p.drag;
        let improved = match &best {
            None => true,
            Some(b) => e > b.e_max,
        };
        if improved {
            best = Some(EfficiencyPoint {
                e_max: e,
                aoa_star_deg: p.aoa_deg,
                lift: p.lift,
                drag: p.drag,
            });
        }
    }
    Ok(best.expect("non-empty polar"))
}

/// Steady-glide closure at one operating point: glide angle from the force
/// balance and the minimum equivalent bladder volume variation.
///
/// `gamma = atan(-D/L)`; `delta_vb = (-D sin gamma + L cos gamma)/(rho g)`,
/// which is identically `sqrt(L^2 + D^2)/(rho g)`.
pub fn glide_closure<T: Real>(
    lift: T,
    drag: T,
    conditions: &FlowConditions<T>,
) -> Result<(T, T)> {
    if !(lift > T::zero()) {
        return Err(Error::NoPositiveLift);
    }
    if !(drag > T::zero()) {
        return Err(Error::domain("drag", format!("must be > 0, got {drag}")));
    }
    let gamma = (-drag / lift).atan();
    let delta_vb = (-drag * gamma.sin() + lift * gamma.cos())
        / (conditions.rho_water * conditions.gravity);
    Ok((gamma, delta_vb))
}

/// Full glide summary of a polar: efficiency peak plus buoyancy closure at
/// that point.
pub fn glide_state<T: Real>(
    polar: &PolarCurve<T>,
    conditions: &FlowConditions<T>,
) -> Result<GlideState<T>> {
    let peak = max_efficiency(polar)?;
    let (gamma, delta_vb) = glide_closure(peak.lift, peak.drag, conditions)?;
    Ok(GlideState {
        gamma,
        delta_vb,
        aoa_star_deg: peak.aoa_star_deg,
        e_max: peak.e_max,
    })
}
