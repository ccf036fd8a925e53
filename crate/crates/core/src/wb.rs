//! The well-balanced moving-frame time step.
//!
//! One step of the scheme:
//!
//! 1. estimate the front speed `sigma` from the last two stationary-frame
//!    profiles with the LeVeque-Yee formula;
//! 2. pick `dt` so that `|sigma| dt <= dx` (plus the parabolic limit for the
//!    explicit integrator);
//! 3. integrate `u_t = u_zz + sigma u_z + F(u) u` in the frame moving at
//!    `sigma`, with fluxes taken from the exact frozen-coefficient solution on
//!    each cell, and update each node by its `C^1` defect;
//! 4. move back to the stationary frame by evaluating the cell solutions of the
//!    new moving-frame values at `z_i - sigma dt`.

use alloc::vec::Vec;

use crate::cell::{self, CellOperator};
use crate::tridiag::{thomas_solve, TridiagonalSystem};
use crate::{Error, Grid, Profile, Reaction, Result};

/// LeVeque-Yee speed estimate and the two quantities it is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedEstimate {
    pub sigma_hat: f64,
    /// `sum_i (prev_i - curr_i)`.
    pub numerator_mass_change: f64,
    /// `curr_last - curr_first`.
    pub denominator_jump: f64,
}

impl SpeedEstimate {
    pub const ZERO: Self = Self {
        sigma_hat: 0.0,
        numerator_mass_change: 0.0,
        denominator_jump: 0.0,
    };
}

/// `sigma = (dx/dt) sum_i (prev_i - curr_i) / (curr_I - curr_0)`, summed in
/// index order over the whole stored profile.
pub fn leveque_yee(prev: &Profile, curr: &Profile, dx: f64, dt: f64) -> Result<SpeedEstimate> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
        });
    }
    if prev.len() != curr.len() {
        return Err(Error::LengthMismatch {
            expected: curr.len(),
            found: prev.len(),
        });
    }
    let values = curr.values();
    let denominator_jump = values[values.len() - 1] - values[0];
    if denominator_jump == 0.0 {
        return Err(Error::ZeroJump);
    }
    let mut numerator_mass_change = 0.0;
    for (p, c) in prev.values().iter().zip(values) {
        numerator_mass_change += p - c;
    }
    Ok(SpeedEstimate {
        sigma_hat: (dx / dt) * numerator_mass_change / denominator_jump,
        numerator_mass_change,
        denominator_jump,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    Implicit,
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepConfig {
    pub integrator: Integrator,
    pub dt_cap: f64,
    pub cfl_safety: f64,
    pub sigma_floor: f64,
    /// Also apply `dt <= dx^2/2` to the implicit integrator (shared time
    /// steps across schemes, second-order mimic runs).
    pub parabolic_limit: bool,
}

impl StepConfig {
    pub const DEFAULT_SIGMA_FLOOR: f64 = 1e-6;

    /// Implicit integrator with `dt_cap = dx`.
    pub fn implicit(dx: f64) -> Self {
        Self {
            integrator: Integrator::Implicit,
            dt_cap: dx,
            cfl_safety: 1.0,
            sigma_floor: Self::DEFAULT_SIGMA_FLOOR,
            parabolic_limit: false,
        }
    }

    /// Explicit integrator with `dt_cap = 0.05`.
    pub fn explicit() -> Self {
        Self {
            integrator: Integrator::Explicit,
            dt_cap: 0.05,
            cfl_safety: 1.0,
            sigma_floor: Self::DEFAULT_SIGMA_FLOOR,
            parabolic_limit: false,
        }
    }

    fn uses_parabolic_limit(&self) -> bool {
        self.parabolic_limit || self.integrator == Integrator::Explicit
    }
}

/// Largest admissible step for the current speed estimate.
///
/// The result always satisfies `|sigma_hat| * dt <= dx` in floating point.
pub fn select_timestep(sigma_hat: f64, dx: f64, cfg: &StepConfig) -> f64 {
    let speed = sigma_hat.abs().max(cfg.sigma_floor);
    let mut dt = cfg.dt_cap.min(cfg.cfl_safety * dx / speed);
    if cfg.uses_parabolic_limit() {
        dt = dt.min(0.5 * dx * dx);
    }
    while sigma_hat.abs() * dt > dx {
        dt = dt.next_down();
    }
    dt
}

fn frozen_operators<R: Reaction + ?Sized>(
    values: &[f64],
    sigma: f64,
    reaction: &R,
    dx: f64,
) -> Result<Vec<CellOperator>> {
    values
        .windows(2)
        .map(|w| cell::flux_matrix(sigma, reaction.growth(0.5 * (w[0] + w[1])), dx))
        .collect()
}

fn check_len(profile: &Profile, grid: &Grid) -> Result<()> {
    if profile.len() != grid.n_points {
        return Err(Error::LengthMismatch {
            expected: grid.n_points,
            found: profile.len(),
        });
    }
    Ok(())
}

/// Backward-Euler system in the moving frame:
/// `u_i - (dt/dx)(L_{i+1/2} - R_{i-1/2}) = u^n_i` with fluxes linear in the
/// unknowns and frozen factors taken from `curr`. Boundary rows pin the limit
/// states.
pub fn assemble_implicit<R: Reaction + ?Sized>(
    curr: &Profile,
    sigma_hat: f64,
    dt: f64,
    reaction: &R,
    grid: &Grid,
) -> Result<TridiagonalSystem> {
    check_len(curr, grid)?;
    let n = grid.n_points;
    let lambda = dt / grid.dx;
    let ops = frozen_operators(curr.values(), sigma_hat, reaction, grid.dx)?;
    let mut sys = TridiagonalSystem::zeros(n);
    sys.diagonal[0] = 1.0;
    sys.rhs[0] = curr.left_state();
    sys.diagonal[n - 1] = 1.0;
    sys.rhs[n - 1] = curr.right_state();
    for i in 1..n - 1 {
        let left = &ops[i - 1].s;
        let right = &ops[i].s;
        sys.lower[i] = lambda * left[1][0];
        sys.diagonal[i] = 1.0 - lambda * right[0][0] + lambda * left[1][1];
        sys.upper[i] = -lambda * right[0][1];
        sys.rhs[i] = curr.values()[i];
    }
    Ok(sys)
}

/// Implicit moving-frame step (no shift).
pub fn wb_step_implicit<R: Reaction + ?Sized>(
    curr: &Profile,
    sigma_hat: f64,
    dt: f64,
    reaction: &R,
    grid: &Grid,
) -> Result<Profile> {
    let sys = assemble_implicit(curr, sigma_hat, dt, reaction, grid)?;
    Ok(curr.with_values(thomas_solve(&sys)?))
}

/// Explicit moving-frame step (no shift): `u_i + (dt/dx)(L_{i+1/2} - R_{i-1/2})`
/// with fluxes evaluated on `curr`.
pub fn wb_step_explicit<R: Reaction + ?Sized>(
    curr: &Profile,
    sigma_hat: f64,
    dt: f64,
    reaction: &R,
    grid: &Grid,
) -> Result<Profile> {
    check_len(curr, grid)?;
    let lambda = dt / grid.dx;
    let u = curr.values();
    let ops = frozen_operators(u, sigma_hat, reaction, grid.dx)?;
    let mut next = u.to_vec();
    for i in 1..u.len() - 1 {
        let (_, r_left) = ops[i - 1].apply(u[i - 1], u[i]);
        let (l_right, _) = ops[i].apply(u[i], u[i + 1]);
        next[i] = u[i] + lambda * (l_right - r_left);
    }
    Ok(curr.with_values(next))
}

/// Moving-frame step with the chosen integrator.
pub fn moving_frame_step<R: Reaction + ?Sized>(
    curr: &Profile,
    sigma_hat: f64,
    dt: f64,
    integrator: Integrator,
    reaction: &R,
    grid: &Grid,
) -> Result<Profile> {
    match integrator {
        Integrator::Implicit => wb_step_implicit(curr, sigma_hat, dt, reaction, grid),
        Integrator::Explicit => wb_step_explicit(curr, sigma_hat, dt, reaction, grid),
    }
}

/// Returns to the stationary frame: node `x_i` sits at `z_i - sigma dt` in the
/// moving frame, so its value comes from the exact solution on the cell to the
/// left (right for `sigma < 0`), with factors refreshed from `moving`.
pub fn shift_back<R: Reaction + ?Sized>(
    moving: &Profile,
    sigma_hat: f64,
    dt: f64,
    reaction: &R,
    grid: &Grid,
) -> Result<Profile> {
    check_len(moving, grid)?;
    let shift = sigma_hat * dt;
    let h = grid.dx;
    if shift == 0.0 {
        return Ok(moving.clone());
    }
    if shift.abs() > h {
        return Err(Error::InvalidParameter {
            name: "sigma*dt",
            value: shift,
        });
    }
    let u = moving.values();
    let n = u.len();
    let mut out = u.to_vec();
    let frozen = |j: usize| reaction.growth(0.5 * (u[j] + u[j + 1]));
    if shift > 0.0 {
        let offset = (h - shift).max(0.0);
        for i in 1..n {
            let row = cell::shift_row(sigma_hat, frozen(i - 1), h, offset)?;
            out[i] = row.apply(u[i - 1], u[i]);
        }
    } else {
        let offset = -shift;
        for i in 0..n - 1 {
            let row = cell::shift_row(sigma_hat, frozen(i), h, offset)?;
            out[i] = row.apply(u[i], u[i + 1]);
        }
    }
    Ok(moving.with_values(out))
}

/// Moving-frame step followed by the shift back, at a given speed.
pub fn wb_step<R: Reaction + ?Sized>(
    curr: &Profile,
    sigma_hat: f64,
    dt: f64,
    integrator: Integrator,
    reaction: &R,
    grid: &Grid,
) -> Result<Profile> {
    let moving = moving_frame_step(curr, sigma_hat, dt, integrator, reaction, grid)?;
    shift_back(&moving, sigma_hat, dt, reaction, grid)
}

/// Outcome of one full step.
#[derive(Debug, Clone, PartialEq)]
pub struct Advance {
    pub profile: Profile,
    pub speed: SpeedEstimate,
    pub dt: f64,
}

/// Full well-balanced step. `prev` is the previous profile with the step
/// that led from it to `curr`; without it the speed is taken as zero.
pub fn advance<R: Reaction + ?Sized>(
    curr: &Profile,
    prev: Option<(&Profile, f64)>,
    cfg: &StepConfig,
    reaction: &R,
    grid: &Grid,
) -> Result<Advance> {
    let speed = match prev {
        Some((p, dt_prev)) => leveque_yee(p, curr, grid.dx, dt_prev)?,
        None => SpeedEstimate::ZERO,
    };
    let dt = select_timestep(speed.sigma_hat, grid.dx, cfg);
    let profile = wb_step(curr, speed.sigma_hat, dt, cfg.integrator, reaction, grid)?;
    Ok(Advance { profile, speed, dt })
}
