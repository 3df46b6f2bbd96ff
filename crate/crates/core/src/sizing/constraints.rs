//! Empty-weight model and the five disciplinary constraint families.
//! All functions here are total, finite, and continuous on the open box;
//! packaging overflow surfaces as an error only through [`empty_weight`].

use crate::error::{Error, Result};
use crate::hydro::FlowConditions;
use crate::linalg::Vec3;
use crate::scalar::Real;
use crate::sizing::{GeometryContext, MassBudget, SizingVariables};

/// Internal and external hull volumes `4π/3 abc`, `4π/3 (a+t)(b+t)(c+t)`.
pub fn hull_volumes<T: Real>(y: &SizingVariables<T>) -> (T, T) {
    let k = T::of(4.0) * T::PI() / T::of(3.0);
    let v_int = k * y.a * y.b * y.c;
    let v_ext = k * (y.a + y.t) * (y.b + y.t) * (y.c + y.t);
    (v_int, v_ext)
}

/// Total internal volume claimed by hull, bladders, and science package.
fn internal_volume<T: Real>(y: &SizingVariables<T>, budget: &MassBudget<T>, delta_vb: T) -> T {
    let (_, v_ext) = hull_volumes(y);
    let v_bladd = delta_vb + y.v_buo;
    v_ext + v_bladd + budget.v_sci
}

/// Empty weight `W_ph + W_fill` [N], allowing a negative filler term when
/// the internals overflow the shell (kept continuous for the optimizer).
pub fn empty_weight_raw<T: Real>(
    ctx: &GeometryContext<T>,
    y: &SizingVariables<T>,
    budget: &MassBudget<T>,
    gravity: T,
    delta_vb: T,
) -> T {
    let (v_int, v_ext) = hull_volumes(y);
    let w_ph = (v_ext - v_int) * budget.rho_ph * gravity;
    let w_fill = (ctx.volume - internal_volume(y, budget, delta_vb)) * budget.rho_fill * gravity;
    w_ph + w_fill
}

/// Empty weight with the packaging guard: internals larger than the shell
/// volume are an infeasible-packaging error, not a negative filler mass.
pub fn empty_weight<T: Real>(
    ctx: &GeometryContext<T>,
    y: &SizingVariables<T>,
    budget: &MassBudget<T>,
    gravity: T,
    delta_vb: T,
) -> Result<T> {
    let excess = internal_volume(y, budget, delta_vb) - ctx.volume;
    if excess > T::zero() {
        return Err(Error::InfeasiblePackaging {
            excess: excess.as_f64(),
        });
    }
    Ok(empty_weight_raw(ctx, y, budget, gravity, delta_vb))
}

/// Packaging overflow volume [m^3], zero when everything fits.
pub fn packaging_excess<T: Real>(
    ctx: &GeometryContext<T>,
    y: &SizingVariables<T>,
    budget: &MassBudget<T>,
    delta_vb: T,
) -> T {
    (internal_volume(y, budget, delta_vb) - ctx.volume).max(T::zero())
}

/// Total vehicle weight: empty weight plus the fixed component masses.
pub fn total_weight<T: Real>(
    ctx: &GeometryContext<T>,
    y: &SizingVariables<T>,
    budget: &MassBudget<T>,
    gravity: T,
    delta_vb: T,
) -> T {
    empty_weight_raw(ctx, y, budget, gravity, delta_vb) + budget.fixed_mass() * gravity
}

/// Buoyancy at depth: bladder and science volumes are excluded from the
/// effective displaced volume.
pub fn buoyancy<T: Real>(
    ctx: &GeometryContext<T>,
    y: &SizingVariables<T>,
    budget: &MassBudget<T>,
    flow: &FlowConditions<T>,
    delta_vb: T,
) -> T {
    let v_bladd = delta_vb + y.v_buo;
    flow.rho_water * flow.gravity * (ctx.volume - v_bladd - budget.v_sci)
}

/// Buckling constraint `P_max/P_cr - 1` with the ellipsoidal-shell
/// critical pressure `P_cr = 2E/sqrt(3(1-nu^2)) (t/R_min)^2`, where
/// `R_min` is the smallest curvature radius over the sorted semi-axes.
pub fn g_struct<T: Real>(y: &SizingVariables<T>, budget: &MassBudget<T>) -> T {
    let mut s = [y.a, y.b, y.c];
    s.sort_by(|p, q| q.partial_cmp(p).unwrap_or(std::cmp::Ordering::Equal));
    let [sa, sb, sc] = s;
    let candidates = [
        sb * sb / sa,
        sc * sc / sa,
        sa * sa / sb,
        sc * sc / sb,
        sa * sa / sc,
        sb * sb / sc,
    ];
    let r_min = candidates
        .into_iter()
        .fold(T::infinity(), |acc, r| acc.min(r));
    let ratio = y.t / r_min;
    let p_cr = T::of(2.0) * budget.e_ph / (T::of(3.0) * (T::one() - budget.nu_ph * budget.nu_ph)).sqrt()
        * ratio
        * ratio;
    budget.p_max / p_cr - T::one()
}

/// Hydrostatic trim constraint `(W - B)/tau - 1`.
pub fn g_hydro<T: Real>(
    ctx: &GeometryContext<T>,
    y: &SizingVariables<T>,
    budget: &MassBudget<T>,
    flow: &FlowConditions<T>,
    delta_vb: T,
) -> T {
    let w = total_weight(ctx, y, budget, flow.gravity, delta_vb);
    let b = buoyancy(ctx, y, budget, flow, delta_vb);
    (w - b) / budget.tau - T::one()
}

/// Surface-buoyancy constraint `W / (rho g (V - V_sci)) - 1` (bladders
/// empty at the surface).
pub fn g_surf<T: Real>(
    ctx: &GeometryContext<T>,
    y: &SizingVariables<T>,
    budget: &MassBudget<T>,
    flow: &FlowConditions<T>,
    delta_vb: T,
) -> T {
    let w = total_weight(ctx, y, budget, flow.gravity, delta_vb);
    w / (flow.rho_water * flow.gravity * (ctx.volume - budget.v_sci)) - T::one()
}

/// Containment constraint: sum of pointwise violations
/// `v_i = max(0, (1+eps)/d_i^2 - 1)` of the normalized squared distance of
/// every shell point from the inflated hull ellipsoid.
pub fn g_cont<T: Real>(
    shell_points: &[Vec3<T>],
    y: &SizingVariables<T>,
    eps_cont: T,
) -> T {
    let ax = y.a + y.t;
    let ay = y.b + y.t;
    let az = y.c + y.t;
    let one_eps = T::one() + eps_cont;
    let mut acc = T::zero();
    for p in shell_points {
        let dx = (p.x - y.xi0) / ax;
        let dy = p.y / ay;
        let dz = (p.z - y.zeta0) / az;
        let d2 = dx * dx + dy * dy + dz * dz;
        let v = one_eps / d2 - T::one();
        if v > T::zero() {
            acc = acc + v;
        }
    }
    acc
}

/// Payload accommodation `(V_pay + V_bat)/V_ph_int - 1`.
pub fn g_pay<T: Real>(y: &SizingVariables<T>, budget: &MassBudget<T>) -> T {
    let (v_int, _) = hull_volumes(y);
    (budget.v_pay + budget.v_bat) / v_int - T::one()
}

/// All five constraints in reporting order
/// `[g_struct, g_hydro, g_surf, g_cont, g_pay]`.
pub fn constraint_vector<T: Real>(
    ctx: &GeometryContext<T>,
    y: &SizingVariables<T>,
    budget: &MassBudget<T>,
    flow: &FlowConditions<T>,
    delta_vb: T,
) -> [T; 5] {
    [
        g_struct(y, budget),
        g_hydro(ctx, y, budget, flow, delta_vb),
        g_surf(ctx, y, budget, flow, delta_vb),
        g_cont(&ctx.shell_points, y, budget.eps_cont),
        g_pay(y, budget),
    ]
}
