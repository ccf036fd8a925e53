//! Convergence tables assembled from finished run directories.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use wbfront_core::analysis::{convergence_table, sign_changes};
use wbfront_core::ReactionKind;

use crate::config::{parse_config, SchemeKind};
use crate::output::{read_timeseries, CONFIG_FILE, TIMESERIES_FILE};

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub scheme: SchemeKind,
    pub kind: ReactionKind,
    pub a: f64,
    pub dx: f64,
    pub minimal_speed: f64,
    pub final_speed: f64,
}

fn invalid(msg: String) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg)
}

/// Finds every run directory (one holding both a config echo and a time
/// series) at or below each root.
pub fn collect_runs(roots: &[PathBuf]) -> io::Result<Vec<RunSummary>> {
    let mut out = Vec::new();
    for root in roots {
        if !root.is_dir() {
            return Err(io::Error::new(
                io::ErrorKind::NotFound,
                format!("{} is not a directory", root.display()),
            ));
        }
        visit(root, &mut out)?;
    }
    Ok(out)
}

fn visit(dir: &Path, out: &mut Vec<RunSummary>) -> io::Result<()> {
    let cfg_path = dir.join(CONFIG_FILE);
    let ts_path = dir.join(TIMESERIES_FILE);
    if cfg_path.is_file() && ts_path.is_file() {
        let text = fs::read_to_string(&cfg_path)?;
        let cfg = parse_config(&text)
            .map_err(|e| invalid(format!("{}: {e}", cfg_path.display())))?;
        let record = read_timeseries(&ts_path)?;
        let Some(final_speed) = record.last_speed() else {
            return Err(invalid(format!("{} has no samples", ts_path.display())));
        };
        out.push(RunSummary {
            dir: dir.to_path_buf(),
            scheme: cfg.scheme,
            kind: cfg.model.kind,
            a: cfg.model.a,
            dx: cfg.dx,
            minimal_speed: cfg.model.minimal_wave_speed(),
            final_speed,
        });
        return Ok(());
    }
    let mut children: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<io::Result<_>>()?;
    children.sort();
    for child in children.into_iter().filter(|p| p.is_dir()) {
        visit(&child, out)?;
    }
    Ok(())
}

/// One table per (model, scheme) group: final speed, signed error against the
/// minimal speed and the meshes where the error changes sign.
pub fn render_tables(runs: &[RunSummary]) -> Result<String, String> {
    let mut groups: BTreeMap<(String, SchemeKind), Vec<&RunSummary>> = BTreeMap::new();
    for r in runs {
        let model = match r.kind {
            ReactionKind::Fkpp => "fkpp".to_string(),
            ReactionKind::Cubic => format!("cubic a={}", r.a),
        };
        groups.entry((model, r.scheme)).or_default().push(r);
    }
    let mut s = String::new();
    for ((model, scheme), members) in groups {
        let target = members[0].minimal_speed;
        let pairs: Vec<(f64, f64)> = members.iter().map(|r| (r.dx, r.final_speed)).collect();
        let _ = writeln!(s, "# {model}, {scheme}, target speed {target}");
        if pairs.len() < 2 {
            let _ = writeln!(
                s,
                "dx = {}  speed = {:.10}  error = {:+.3e}\n",
                pairs[0].0,
                pairs[0].1,
                pairs[0].1 - target
            );
            continue;
        }
        let rows = convergence_table(&pairs, target).map_err(|e| e.to_string())?;
        let _ = writeln!(s, "{:>12}  {:>16}  {:>12}  sign", "dx", "speed", "error");
        for row in &rows {
            let _ = writeln!(
                s,
                "{:>12}  {:>16.10}  {:>+12.3e}  {:+}",
                row.dx, row.speed, row.error, row.sign
            );
        }
        let changes = sign_changes(&rows);
        if changes.is_empty() {
            let _ = writeln!(s, "no sign change\n");
        } else {
            let at: Vec<String> = changes
                .iter()
                .map(|&i| format!("{} -> {}", rows[i].dx, rows[i + 1].dx))
                .collect();
            let _ = writeln!(s, "sign changes: {}\n", at.join(", "));
        }
    }
    Ok(s)
}
