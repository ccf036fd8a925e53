//! Named experiment families: one model, a list of schemes and a mesh sweep.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use wbfront_core::ReactionModel;

use crate::config::{ExperimentConfig, InitialData, SchemeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    FkppSpeed,
    FkppBramson,
    CubicPulled,
    CubicPushmiPullyu,
    CubicPushed,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::FkppSpeed,
        Preset::FkppBramson,
        Preset::CubicPulled,
        Preset::CubicPushmiPullyu,
        Preset::CubicPushed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::FkppSpeed => "fkpp_speed",
            Preset::FkppBramson => "fkpp_bramson",
            Preset::CubicPulled => "cubic_pulled",
            Preset::CubicPushmiPullyu => "cubic_pushmi_pullyu",
            Preset::CubicPushed => "cubic_pushed",
        }
    }

    pub fn model(self) -> ReactionModel {
        let a = match self {
            Preset::FkppSpeed | Preset::FkppBramson => return ReactionModel::fkpp(),
            Preset::CubicPulled => 1.0,
            Preset::CubicPushmiPullyu => 2.0,
            Preset::CubicPushed => 3.0,
        };
        ReactionModel::cubic(a).expect("preset parameters are valid")
    }

    pub fn default_schemes(self) -> Vec<SchemeKind> {
        match self {
            Preset::FkppSpeed => SchemeKind::ALL.to_vec(),
            _ => vec![SchemeKind::WbImplicit, SchemeKind::Os],
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
            format!("unknown preset `{s}` (expected one of {})", names.join(", "))
        })
    }
}

/// Mesh sweep `2^-1 .. 2^-6`.
pub const DEFAULT_DX: [f64; 6] = [0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625];

pub const DOMAIN_LENGTH: f64 = 3080.0;
pub const EXTENDED_DOMAIN_LENGTH: f64 = 6080.0;
pub const T_END: f64 = 1500.0;

#[derive(Debug, Clone, Default)]
pub struct PresetOptions {
    pub dx: Option<Vec<f64>>,
    pub t_end: Option<f64>,
    pub schemes: Option<Vec<SchemeKind>>,
    pub budget: Option<u64>,
    pub same_dt: bool,
    /// Drop sweep entries with more grid points than this.
    pub max_cells: Option<usize>,
}

/// The non-well-balanced references overshoot the minimal speed on coarse
/// meshes and would run out of the standard domain before `t_end`.
fn domain_length(scheme: SchemeKind, dx: f64) -> f64 {
    match scheme {
        SchemeKind::WbImplicit | SchemeKind::WbExplicit => DOMAIN_LENGTH,
        _ if dx >= 0.5 => EXTENDED_DOMAIN_LENGTH,
        _ => DOMAIN_LENGTH,
    }
}

pub fn run_dir(root: &Path, preset: Preset, scheme: SchemeKind, dx: f64) -> PathBuf {
    root.join(preset.name())
        .join(scheme.name())
        .join(format!("dx_{dx}"))
}

/// Expands a preset into one validated config per (scheme, dx), output
/// directories under `root`.
pub fn expand(
    preset: Preset,
    opts: &PresetOptions,
    root: &Path,
) -> Result<Vec<ExperimentConfig>, String> {
    let schemes = opts
        .schemes
        .clone()
        .unwrap_or_else(|| preset.default_schemes());
    let dxs = opts.dx.clone().unwrap_or_else(|| DEFAULT_DX.to_vec());
    let mut out = Vec::new();
    for &scheme in &schemes {
        for &dx in &dxs {
            let cfg = ExperimentConfig {
                model: preset.model(),
                scheme,
                x_min: 0.0,
                x_max: domain_length(scheme, dx),
                dx,
                t_end: opts.t_end.unwrap_or(T_END),
                initial: InitialData::Sigmoid,
                output_dir: Some(run_dir(root, preset, scheme, dx)),
                same_dt: opts.same_dt,
                budget: opts.budget,
                ..ExperimentConfig::default()
            };
            cfg.validate()
                .map_err(|(key, msg)| format!("{preset} {scheme} dx={dx}: {key}: {msg}"))?;
            let reach = cfg.model.minimal_wave_speed() * cfg.t_end;
            if !(cfg.x_max - cfg.x_min > reach) {
                return Err(format!(
                    "{preset} {scheme}: domain length {} is shorter than the front travel {reach}",
                    cfg.x_max - cfg.x_min
                ));
            }
            let points = cfg.grid().map_err(|e| e.to_string())?.n_points;
            if opts.max_cells.is_some_and(|m| points > m) {
                continue;
            }
            out.push(cfg);
        }
    }
    Ok(out)
}
