//! Full-length F/KPP and cubic runs. Each takes seconds to minutes in the
//! optimized test profile.

use std::path::Path;

use wbfront::presets::{expand, Preset, PresetOptions};
use wbfront::{run_experiment, ExperimentConfig, SchemeKind};

fn final_speed(cfg: &ExperimentConfig) -> f64 {
    run_experiment(cfg).unwrap().record.last_speed().unwrap()
}

fn preset_config(preset: Preset, scheme: SchemeKind, dx: f64) -> ExperimentConfig {
    let opts = PresetOptions {
        dx: Some(vec![dx]),
        schemes: Some(vec![scheme]),
        ..Default::default()
    };
    let mut cfgs = expand(preset, &opts, Path::new("unused")).unwrap();
    assert_eq!(cfgs.len(), 1);
    cfgs.pop().unwrap()
}

#[test]
fn fkpp_preset_on_coarse_mesh_is_close_to_two() {
    let s = final_speed(&preset_config(Preset::FkppSpeed, SchemeKind::WbImplicit, 0.5));
    assert!((s - 2.0).abs() <= 5e-3, "{s}");
}

fn splitting(dx: f64) -> ExperimentConfig {
    ExperimentConfig {
        scheme: SchemeKind::Os,
        dx,
        x_max: 3080.0,
        t_end: 1500.0,
        ..Default::default()
    }
}

/// Minimal speed of `u' = D2 u + u(1 - u)` with the centred three-point
/// Laplacian: `min over l of (2(cosh(l dx) - 1)/dx^2 + 1)/l`, by golden section.
fn lattice_speed(dx: f64) -> f64 {
    let f = |l: f64| (2.0 * ((l * dx).cosh() - 1.0) / (dx * dx) + 1.0) / l;
    let (mut a, mut b) = (0.1, 5.0);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let (c, d) = (b - g * (b - a), a + g * (b - a));
        if f(c) < f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    f(0.5 * (a + b))
}

#[test]
fn splitting_on_coarse_mesh_follows_the_lattice_speed() {
    let cfg = splitting(0.5);
    assert_eq!(cfg.effective_dt_cap(), 0.05);
    let s = final_speed(&cfg);
    // spatial error dominates: the coarse lattice front outruns 2
    let expected = lattice_speed(0.5) - 1.5 / 1500.0;
    assert!((s - expected).abs() <= 2e-3, "{s} vs {expected}");
    assert!(s - 2.0 > 1e-2);
}

#[test]
fn splitting_on_fine_mesh_is_close_to_two() {
    let s = final_speed(&splitting(0.125));
    assert!((s - 2.0).abs() <= 5e-3, "{s}");
}

#[test]
fn zero_wave_misses_the_speed_more_than_moving_frame() {
    let wb = final_speed(&preset_config(Preset::FkppSpeed, SchemeKind::WbImplicit, 0.5));
    let zero = final_speed(&preset_config(Preset::FkppSpeed, SchemeKind::ZeroWaveImplicit, 0.5));
    assert!((zero - 2.0).abs() > (wb - 2.0).abs(), "0-wave {zero}, WB {wb}");
}

#[test]
#[ignore = "long: about 10^9 cell updates"]
fn cubic_pushed_preset_on_fine_mesh() {
    let s = final_speed(&preset_config(Preset::CubicPushed, SchemeKind::WbImplicit, 0.0625));
    assert!((s - 2.041241).abs() <= 5e-3, "{s}");
}
