//! Deterministic particle swarm with compass pattern-search refinement for
//! the penalized sizing objective.
//!
//! The swarm uses synchronous updates with fixed acceleration coefficients
//! (no random factors) and a low-discrepancy initial placement, so a given
//! seed and configuration reproduce the solution bit for bit.

use crate::hydro::FlowConditions;
use crate::error::Result;
use crate::sampling::shifted_sobol;
use crate::scalar::Real;
use crate::sizing::constraints::{constraint_vector, empty_weight_raw, packaging_excess};
use crate::sizing::{GeometryContext, MassBudget, SizingBounds, SizingSolution, SizingVariables};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsoConfig {
    pub particles: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    pub pattern_iterations: usize,
    pub pattern_shrink: f64,
    pub penalty_weight: f64,
    pub seed: u64,
    pub record_trace: bool,
    /// Drop the five disciplinary constraints (bounds-only problem); the
    /// packaging guard stays active. Intended for diagnostics and tests.
    pub ignore_constraints: bool,
}

impl Default for PsoConfig {
    fn default() -> Self {
        PsoConfig {
            particles: 32,
            iterations: 200,
            inertia: 0.721,
            cognitive: 1.193,
            social: 1.193,
            pattern_iterations: 50,
            pattern_shrink: 0.5,
            penalty_weight: 1e6,
            seed: 0,
            record_trace: false,
            ignore_constraints: false,
        }
    }
}

/// Feasibility tolerance on the re-checked constraint values.
pub const FEASIBILITY_TOL: f64 = 1e-9;

struct Objective<'a, T> {
    ctx: &'a GeometryContext<T>,
    budget: &'a MassBudget<T>,
    flow: &'a FlowConditions<T>,
    delta_vb: T,
    penalty_weight: T,
    ignore_constraints: bool,
}

#[derive(Clone, Copy, Debug)]
struct EvalOut<T> {
    /// Raw empty weight.
    w: T,
    /// Quadratically penalized objective (equals `w` on feasible points).
    penalized: T,
    /// Strict feasibility (all constraints <= 0, no packaging overflow).
    feasible: bool,
}

impl<'a, T: Real> Objective<'a, T> {
    /// Penalized objective: raw empty weight plus quadratic exterior
    /// penalties on constraint violations and packaging overflow (in
    /// liters, to keep its scale comparable).
    fn eval(&self, y: &SizingVariables<T>) -> EvalOut<T> {
        let w = empty_weight_raw(self.ctx, y, self.budget, self.flow.gravity, self.delta_vb);
        let mut pen = T::zero();
        let mut feasible = true;
        if !self.ignore_constraints {
            for g in constraint_vector(self.ctx, y, self.budget, self.flow, self.delta_vb) {
                if g > T::zero() {
                    feasible = false;
                    pen = pen + g * g;
                }
            }
        } else {
            feasible = false;
        }
        let overflow_l = packaging_excess(self.ctx, y, self.budget, self.delta_vb) * T::of(1e3);
        if overflow_l > T::zero() {
            feasible = false;
            pen = pen + overflow_l * overflow_l;
        }
        EvalOut {
            w,
            penalized: w + self.penalty_weight * pen,
            feasible,
        }
    }

    /// Pattern-search acceptance: feasible beats infeasible; feasible
    /// points compare on raw weight, infeasible points on the penalized
    /// objective. With constraints ignored everything compares penalized.
    fn better(&self, a: &EvalOut<T>, b: &EvalOut<T>) -> bool {
        if self.ignore_constraints {
            return a.penalized < b.penalized;
        }
        match (a.feasible, b.feasible) {
            (true, false) => true,
            (false, true) => false,
            (true, true) => a.w < b.w,
            (false, false) => a.penalized < b.penalized,
        }
    }
}

fn clamp_step<T: Real>(x: &mut [T; 7], v: &mut [T; 7], lo: &[T; 7], hi: &[T; 7]) {
    for d in 0..7 {
        x[d] = x[d] + v[d];
        if x[d] < lo[d] {
            x[d] = lo[d];
            v[d] = T::zero();
        } else if x[d] > hi[d] {
            x[d] = hi[d];
            v[d] = T::zero();
        }
    }
}

/// Minimize the empty weight for one geometry. Returns the best feasible
/// point, or the best penalized point flagged infeasible (the re-checked
/// constraint values serve as diagnostics).
pub fn solve_sizing<T: Real>(
    ctx: &GeometryContext<T>,
    delta_vb: T,
    budget: &MassBudget<T>,
    flow: &FlowConditions<T>,
    bounds: &SizingBounds<T>,
    cfg: &PsoConfig,
) -> Result<SizingSolution<T>> {
    budget.validate()?;
    flow.validate()?;
    bounds.validate()?;
    let lo = bounds.lower_array();
    let hi = bounds.upper_array();
    let objective = Objective {
        ctx,
        budget,
        flow,
        delta_vb,
        penalty_weight: T::of(cfg.penalty_weight),
        ignore_constraints: cfg.ignore_constraints,
    };

    // low-discrepancy swarm placement
    let mut xs: Vec<[T; 7]> = shifted_sobol::<T>(7, cfg.particles, cfg.seed)
        .into_iter()
        .map(|u| {
            let mut x = [T::zero(); 7];
            for d in 0..7 {
                x[d] = lo[d] + (hi[d] - lo[d]) * u[d];
            }
            x
        })
        .collect();
    let mut vs: Vec<[T; 7]> = vec![[T::zero(); 7]; cfg.particles];

    let eval_all = |xs: &[[T; 7]]| -> Vec<EvalOut<T>> {
        xs.par_iter()
            .map(|x| objective.eval(&SizingVariables::from_array(*x)))
            .collect()
    };

    let mut fs = eval_all(&xs);
    let mut pbest = xs.clone();
    let mut pbest_f: Vec<T> = fs.iter().map(|e| e.penalized).collect();
    let (mut gbest, mut gbest_out) = {
        let mut bi = 0;
        for i in 1..cfg.particles {
            if fs[i].penalized < fs[bi].penalized {
                bi = i;
            }
        }
        (xs[bi], fs[bi])
    };
    let w = T::of(cfg.inertia);
    let c1 = T::of(cfg.cognitive);
    let c2 = T::of(cfg.social);
    let mut trace: Vec<(usize, f64)> = Vec::new();

    for iter in 0..cfg.iterations {
        for i in 0..cfg.particles {
            for d in 0..7 {
                vs[i][d] = w * vs[i][d]
                    + c1 * (pbest[i][d] - xs[i][d])
                    + c2 * (gbest[d] - xs[i][d]);
            }
            clamp_step(&mut xs[i], &mut vs[i], &lo, &hi);
        }
        fs = eval_all(&xs);
        for i in 0..cfg.particles {
            if fs[i].penalized < pbest_f[i] {
                pbest_f[i] = fs[i].penalized;
                pbest[i] = xs[i];
            }
            if fs[i].penalized < gbest_out.penalized {
                gbest_out = fs[i];
                gbest = xs[i];
            }
        }
        if cfg.record_trace {
            trace.push((iter, gbest_out.penalized.as_f64()));
        }
    }

    // compass pattern search around the swarm incumbent; acceptance is
    // feasibility-first so active constraints end up satisfied strictly
    let mut steps: [T; 7] = [T::zero(); 7];
    for d in 0..7 {
        steps[d] = (hi[d] - lo[d]) * T::of(0.1);
    }
    let shrink = T::of(cfg.pattern_shrink);
    for it in 0..cfg.pattern_iterations {
        let mut candidates: Vec<[T; 7]> = Vec::with_capacity(14);
        for d in 0..7 {
            for sign in [T::one(), -T::one()] {
                let mut c = gbest;
                c[d] = (c[d] + sign * steps[d]).max(lo[d]).min(hi[d]);
                candidates.push(c);
            }
        }
        let cf = eval_all(&candidates);
        let mut best_i: Option<usize> = None;
        for (i, f) in cf.iter().enumerate() {
            if objective.better(f, &gbest_out)
                && best_i.map_or(true, |bi| objective.better(f, &cf[bi]))
            {
                best_i = Some(i);
            }
        }
        match best_i {
            Some(i) => {
                gbest = candidates[i];
                gbest_out = cf[i];
            }
            None => {
                for s in &mut steps {
                    *s = *s * shrink;
                }
            }
        }
        if cfg.record_trace {
            trace.push((cfg.iterations + it, gbest_out.penalized.as_f64()));
        }
    }

    let y_star = SizingVariables::from_array(gbest);
    let constraint_values = constraint_vector(ctx, &y_star, budget, flow, delta_vb);
    let overflow = packaging_excess(ctx, &y_star, budget, delta_vb);
    let feasible = !cfg.ignore_constraints
        && constraint_values
            .iter()
            .all(|g| g.as_f64() <= FEASIBILITY_TOL)
        && overflow.as_f64() <= 0.0;
    let w_empty_star = empty_weight_raw(ctx, &y_star, budget, flow.gravity, delta_vb);
    Ok(SizingSolution {
        y_star,
        w_empty_star,
        constraint_values,
        feasible,
        pso_iterations: cfg.iterations + cfg.pattern_iterations,
        trace: if cfg.record_trace { Some(trace) } else { None },
    })
}
