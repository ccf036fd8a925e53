//! Time loop shared by all five schemes.

use std::io;

use thiserror::Error;
use wbfront_core::analysis::{fit_delay, level_set_position, FitResult, RunRecord};
use wbfront_core::model::{exact_pushed_front, sigmoid_initial};
use wbfront_core::reference::{strang_step, zero_wave_step, OsConfig};
use wbfront_core::wb::{leveque_yee, select_timestep, wb_step, Integrator, StepConfig};
use wbfront_core::{Grid, Profile};

use crate::config::{ExperimentConfig, InitialData, SchemeKind};
use crate::output::read_profile_csv;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure at step {step} (t = {t}): {source}")]
    Numerical {
        step: u64,
        t: f64,
        #[source]
        source: wbfront_core::Error,
    },
    #[error("non-finite value at grid point {index} after step {step} (t = {t})")]
    NonFinite { step: u64, t: f64, index: usize },
    #[error("step budget of {budget} exhausted at t = {t}")]
    BudgetExhausted {
        budget: u64,
        t: f64,
        /// Everything recorded before the budget ran out.
        partial: Box<RunRecord>,
    },
    #[error("reading initial data: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub grid: Grid,
    pub record: RunRecord,
    pub final_profile: Profile,
    pub steps: u64,
    pub t_final: f64,
}

impl RunOutcome {
    /// Delay fit against the model's minimal speed, when enough samples exist.
    pub fn fit(&self, cfg: &ExperimentConfig) -> Option<FitResult> {
        fit_delay(&self.record, cfg.model.minimal_wave_speed()).ok()
    }
}

pub fn initial_profile(cfg: &ExperimentConfig, grid: &Grid) -> Result<Profile, RunError> {
    let (l, r) = (cfg.left_state, cfg.right_state);
    let num = |e| RunError::Numerical {
        step: 0,
        t: 0.0,
        source: e,
    };
    match &cfg.initial {
        InitialData::Sigmoid => Profile::sample(grid, sigmoid_initial, l, r).map_err(num),
        InitialData::ExactPushedFront => {
            let values = grid
                .points()
                .map(|x| exact_pushed_front(cfg.model.a, x - 40.0))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| RunError::Config(e.to_string()))?;
            Profile::pinned(values, l, r).map_err(num)
        }
        InitialData::FromFile(path) => {
            Profile::pinned(read_profile_csv(path, grid)?, l, r).map_err(num)
        }
    }
}

fn step_config(cfg: &ExperimentConfig) -> StepConfig {
    StepConfig {
        integrator: if cfg.scheme.is_explicit() {
            Integrator::Explicit
        } else {
            Integrator::Implicit
        },
        dt_cap: cfg.effective_dt_cap(),
        cfl_safety: cfg.cfl_safety,
        sigma_floor: cfg.sigma_floor,
        parabolic_limit: cfg.same_dt,
    }
}

/// Snapshot times `t_end * k / (n - 1)`.
fn snapshot_marks(cfg: &ExperimentConfig) -> Vec<f64> {
    match cfg.snapshots {
        0 => Vec::new(),
        1 => vec![cfg.t_end],
        n => (0..n)
            .map(|k| cfg.t_end * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Runs one experiment until the first step that reaches `t_end`.
///
/// A sample is recorded at the first step at or after each multiple of
/// `record_cadence`, and at the final step. The speed recorded with a step is
/// the LeVeque-Yee estimate over that step, i.e. the one the next
/// well-balanced step will use.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    cfg.validate().map_err(|(_, msg)| RunError::Config(msg))?;
    let grid = cfg.grid().map_err(|e| RunError::Config(e.to_string()))?;
    let reaction = cfg.model;
    let step_cfg = step_config(cfg);
    let os_cfg = OsConfig::for_model(step_cfg.dt_cap, &cfg.model)
        .map_err(|e| RunError::Config(e.to_string()))?;

    let mut curr = initial_profile(cfg, &grid)?;
    let mut record = RunRecord::new();
    let marks = snapshot_marks(cfg);
    let mut next_snap = 0;
    if cfg.t_end > 0.0 {
        while next_snap < marks.len() && marks[next_snap] <= 0.0 {
            next_snap += 1;
        }
        if next_snap > 0 {
            record.snapshots.push((0.0, curr.clone()));
        }
    }

    let mut t = 0.0;
    let mut steps: u64 = 0;
    let mut sigma_hat = 0.0;
    let mut cadence_k: u64 = 1;

    while t < cfg.t_end {
        if let Some(budget) = cfg.budget {
            if steps >= budget {
                return Err(RunError::BudgetExhausted {
                    budget,
                    t,
                    partial: Box::new(record),
                });
            }
        }
        let num = |source| RunError::Numerical { step: steps, t, source };

        let uses_speed = matches!(cfg.scheme, SchemeKind::WbImplicit | SchemeKind::WbExplicit);
        let dt_speed = if uses_speed || cfg.same_dt { sigma_hat } else { 0.0 };
        let dt = match cfg.scheme {
            SchemeKind::Os if !cfg.same_dt => step_cfg.dt_cap,
            _ => select_timestep(dt_speed, grid.dx, &step_cfg),
        };
        let next = match cfg.scheme {
            SchemeKind::WbImplicit | SchemeKind::WbExplicit => wb_step(
                &curr,
                sigma_hat,
                dt,
                step_cfg.integrator,
                &reaction,
                &grid,
            ),
            SchemeKind::ZeroWaveImplicit | SchemeKind::ZeroWaveExplicit => {
                zero_wave_step(&curr, dt, &reaction, &grid, step_cfg.integrator)
            }
            SchemeKind::Os => strang_step(&curr, &OsConfig { dt, ..os_cfg }, &reaction, &grid),
        }
        .map_err(num)?;

        steps += 1;
        t += dt;
        if let Some(index) = next.values().iter().position(|v| !v.is_finite()) {
            return Err(RunError::NonFinite { step: steps, t, index });
        }
        let num = |source| RunError::Numerical { step: steps, t, source };
        sigma_hat = leveque_yee(&curr, &next, grid.dx, dt).map_err(num)?.sigma_hat;
        curr = next;

        let cadence_mark = cadence_k as f64 * cfg.record_cadence;
        if t >= cadence_mark || t >= cfg.t_end {
            let x_c = level_set_position(&curr, &grid, cfg.level_c).map_err(num)?;
            record.push(t, dt, sigma_hat, x_c).map_err(num)?;
            while cadence_k as f64 * cfg.record_cadence <= t {
                cadence_k += 1;
            }
        }
        if next_snap < marks.len() && t >= marks[next_snap] {
            record.snapshots.push((t, curr.clone()));
            while next_snap < marks.len() && t >= marks[next_snap] {
                next_snap += 1;
            }
        }
    }

    Ok(RunOutcome {
        grid,
        record,
        final_profile: curr,
        steps,
        t_final: t,
    })
}
