//! Comparison schemes: Strang splitting with Crank-Nicolson diffusion, and the
//! "0-wave" well-balanced scheme.

use alloc::vec::Vec;

use crate::math;
use crate::tridiag::{thomas_solve, TridiagonalSystem};
use crate::wb::{moving_frame_step, Integrator};
use crate::{Error, Grid, Profile, Reaction, ReactionKind, ReactionModel, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReactionMode {
    /// Closed-form logistic flow; F/KPP only.
    ExactLogistic,
    /// One backward-Euler step solved by Newton's method.
    ImplicitEuler,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OsConfig {
    pub dt: f64,
    pub reaction_mode: ReactionMode,
}

impl OsConfig {
    pub fn new(dt: f64, reaction_mode: ReactionMode, model: &ReactionModel) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter {
                name: "dt",
                value: dt,
            });
        }
        if reaction_mode == ReactionMode::ExactLogistic && model.kind != ReactionKind::Fkpp {
            return Err(Error::InvalidParameter {
                name: "a",
                value: model.a,
            });
        }
        Ok(Self { dt, reaction_mode })
    }

    /// Exact logistic steps for F/KPP, implicit Euler otherwise.
    pub fn for_model(dt: f64, model: &ReactionModel) -> Result<Self> {
        let mode = match model.kind {
            ReactionKind::Fkpp => ReactionMode::ExactLogistic,
            ReactionKind::Cubic => ReactionMode::ImplicitEuler,
        };
        Self::new(dt, mode, model)
    }
}

const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 50;

/// Logistic flow map `e^tau / (e^tau - 1 + 1/v)`, evaluated as
/// `v / (v + (1 - v) e^-tau)` so that both fixed points are exact
/// (`v = 0` maps to 0 by continuity).
pub fn logistic_flow(v: f64, tau: f64) -> f64 {
    v / (v + (1.0 - v) * math::exp(-tau))
}

fn backward_euler<R: Reaction + ?Sized>(v: f64, tau: f64, reaction: &R) -> Result<f64> {
    let mut w = v;
    for _ in 0..NEWTON_MAX_ITER {
        let residual = w - tau * reaction.rate(w) - v;
        let slope = 1.0 - tau * reaction.rate_slope(w);
        let step = residual / slope;
        w -= step;
        if !w.is_finite() {
            break;
        }
        if step.abs() <= NEWTON_TOL * w.abs().max(1.0) {
            return Ok(w);
        }
    }
    Err(Error::NewtonDiverged { value: v })
}

/// Integrates `v' = f(v)` over `tau` at every point.
pub fn reaction_half_step<R: Reaction + ?Sized>(
    u: &[f64],
    tau: f64,
    reaction: &R,
    mode: ReactionMode,
) -> Result<Vec<f64>> {
    if !(tau > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
        });
    }
    match mode {
        ReactionMode::ExactLogistic => Ok(u.iter().map(|&v| logistic_flow(v, tau)).collect()),
        ReactionMode::ImplicitEuler => u.iter().map(|&v| backward_euler(v, tau, reaction)).collect(),
    }
}

/// One Crank-Nicolson step of the heat equation with Dirichlet ends.
pub fn crank_nicolson_diffusion(
    u: &[f64],
    dt: f64,
    dx: f64,
    bc: (f64, f64),
) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !(dx > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt/dx",
            value: if dt > 0.0 { dx } else { dt },
        });
    }
    let n = u.len();
    if n < 3 {
        return Err(Error::NotEnoughData { needed: 3, found: n });
    }
    let r = 0.5 * dt / (dx * dx);
    let mut sys = TridiagonalSystem::zeros(n);
    sys.diagonal[0] = 1.0;
    sys.rhs[0] = bc.0;
    sys.diagonal[n - 1] = 1.0;
    sys.rhs[n - 1] = bc.1;
    for i in 1..n - 1 {
        sys.lower[i] = -r;
        sys.diagonal[i] = 1.0 + 2.0 * r;
        sys.upper[i] = -r;
        sys.rhs[i] = u[i] + r * (u[i - 1] - 2.0 * u[i] + u[i + 1]);
    }
    thomas_solve(&sys)
}

/// Strang splitting: half reaction, full Crank-Nicolson diffusion, half reaction.
pub fn strang_step<R: Reaction + ?Sized>(
    u: &Profile,
    cfg: &OsConfig,
    reaction: &R,
    grid: &Grid,
) -> Result<Profile> {
    if u.len() != grid.n_points {
        return Err(Error::LengthMismatch {
            expected: grid.n_points,
            found: u.len(),
        });
    }
    let half = 0.5 * cfg.dt;
    let bc = (u.left_state(), u.right_state());
    let v = reaction_half_step(u.values(), half, reaction, cfg.reaction_mode)?;
    let v = crank_nicolson_diffusion(&v, cfg.dt, grid.dx, bc)?;
    let v = reaction_half_step(&v, half, reaction, cfg.reaction_mode)?;
    Ok(u.with_values(v))
}

/// Well-balanced step for a wave of speed zero: no speed estimate and no shift.
pub fn zero_wave_step<R: Reaction + ?Sized>(
    curr: &Profile,
    dt: f64,
    reaction: &R,
    grid: &Grid,
    integrator: Integrator,
) -> Result<Profile> {
    moving_frame_step(curr, 0.0, dt, integrator, reaction, grid)
}
