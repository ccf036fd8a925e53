//! Run artifacts: time-series CSV, profile snapshots, fit summary, an SVG
//! chart and a config echo so that result directories are self-describing.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use wbfront_core::analysis::{FitResult, RunRecord};
use wbfront_core::Grid;

use crate::config::ExperimentConfig;

pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const TIMESERIES_HEADER: &str = "t,dt,sigma_ly,x_c";
pub const CONFIG_FILE: &str = "config.txt";
pub const FIT_FILE: &str = "fit.txt";
pub const CHART_FILE: &str = "chart.svg";
pub const SNAPSHOT_DIR: &str = "snapshots";

/// 17 significant digits: enough to round-trip any f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn timeseries_csv(record: &RunRecord) -> String {
    let mut s = String::with_capacity(80 * (record.len() + 1));
    s.push_str(TIMESERIES_HEADER);
    s.push('\n');
    for i in 0..record.len() {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            fmt_f64(record.times[i]),
            fmt_f64(record.dts[i]),
            fmt_f64(record.ly_speeds[i]),
            fmt_f64(record.level_positions[i])
        );
    }
    s
}

fn invalid(path: &Path, line: usize, msg: impl std::fmt::Display) -> io::Error {
    io::Error::new(
        io::ErrorKind::InvalidData,
        format!("{}:{line}: {msg}", path.display()),
    )
}

fn parse_row(path: &Path, line: usize, text: &str, width: usize) -> io::Result<Vec<f64>> {
    let fields: Vec<f64> = text
        .split(',')
        .map(|f| f.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| invalid(path, line, e))?;
    if fields.len() != width {
        return Err(invalid(
            path,
            line,
            format!("expected {width} columns, found {}", fields.len()),
        ));
    }
    Ok(fields)
}

/// Reads a `t,dt,sigma_ly,x_c` file back into a record (without snapshots).
pub fn read_timeseries(path: &Path) -> io::Result<RunRecord> {
    let text = fs::read_to_string(path).map_err(at(path))?;
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == TIMESERIES_HEADER => {}
        _ => return Err(invalid(path, 1, format!("expected header `{TIMESERIES_HEADER}`"))),
    }
    let mut record = RunRecord::new();
    for (idx, l) in lines {
        if l.trim().is_empty() {
            continue;
        }
        let f = parse_row(path, idx + 1, l, 4)?;
        record
            .push(f[0], f[1], f[2], f[3])
            .map_err(|e| invalid(path, idx + 1, e))?;
    }
    Ok(record)
}

pub fn profile_csv(grid: &Grid, values: &[f64]) -> String {
    let mut s = String::with_capacity(48 * (values.len() + 1));
    s.push_str("x,u\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(s, "{},{}", fmt_f64(grid.x(i)), fmt_f64(*v));
    }
    s
}

/// Reads an `x,u` profile and checks that it sits on `grid`.
pub fn read_profile_csv(path: &Path, grid: &Grid) -> io::Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(at(path))?;
    let mut values = Vec::with_capacity(grid.n_points);
    for (idx, l) in text.lines().enumerate() {
        let l = l.trim();
        if l.is_empty() || (idx == 0 && l == "x,u") {
            continue;
        }
        let f = parse_row(path, idx + 1, l, 2)?;
        let i = values.len();
        if i >= grid.n_points {
            return Err(invalid(path, idx + 1, "more rows than grid points"));
        }
        if (f[0] - grid.x(i)).abs() > 1e-9 * grid.dx.max(grid.x(i).abs()) {
            return Err(invalid(
                path,
                idx + 1,
                format!("x = {} is off the grid point {}", f[0], grid.x(i)),
            ));
        }
        values.push(f[1]);
    }
    if values.len() != grid.n_points {
        return Err(invalid(
            path,
            text.lines().count(),
            format!("expected {} rows, found {}", grid.n_points, values.len()),
        ));
    }
    Ok(values)
}

pub fn fit_text(fit: &FitResult) -> String {
    format!(
        "alpha = {}\nbeta = {}\ngamma = {}\nresidual_rms = {}\nwindow = {} {}\n",
        fmt_f64(fit.alpha),
        fmt_f64(fit.beta),
        fmt_f64(fit.gamma),
        fmt_f64(fit.residual_rms),
        fmt_f64(fit.window.0),
        fmt_f64(fit.window.1),
    )
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 240.0;
const MARGIN: f64 = 40.0;

fn polyline(xs: &[f64], ys: &[f64], top: f64, color: &str) -> String {
    let finite = |v: &&f64| v.is_finite();
    let (x0, x1) = bounds(xs.iter().filter(finite).copied());
    let (y0, y1) = bounds(ys.iter().filter(finite).copied());
    let sx = (SVG_W - 2.0 * MARGIN) / (x1 - x0).max(f64::MIN_POSITIVE);
    let sy = (SVG_H - 2.0 * MARGIN) / (y1 - y0).max(f64::MIN_POSITIVE);
    let mut pts = String::new();
    for (x, y) in xs.iter().zip(ys) {
        if x.is_finite() && y.is_finite() {
            let px = MARGIN + (x - x0) * sx;
            let py = top + SVG_H - MARGIN - (y - y0) * sy;
            let _ = write!(pts, "{px:.2},{py:.2} ");
        }
    }
    format!(
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\" points=\"{}\"/>\n\
         <text x=\"{MARGIN}\" y=\"{:.1}\" font-size=\"11\">[{y0:.6}, {y1:.6}] over t in [{x0:.3}, {x1:.3}]</text>\n",
        pts.trim_end(),
        top + SVG_H - 8.0,
    )
}

fn bounds(it: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if lo.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

/// Two stacked panels against time: the speed estimate, and the level-set
/// position in the frame moving at `reference_speed`.
pub fn chart_svg(record: &RunRecord, reference_speed: f64) -> String {
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        2.0 * SVG_H
    );
    let _ = writeln!(s, "<text x=\"{MARGIN}\" y=\"20\" font-size=\"13\">sigma_ly(t)</text>");
    s.push_str(&polyline(&record.times, &record.ly_speeds, 0.0, "#1f5fa8"));
    let _ = writeln!(
        s,
        "<text x=\"{MARGIN}\" y=\"{}\" font-size=\"13\">x_c(t) - {reference_speed:.6} t</text>",
        SVG_H + 20.0
    );
    let lag: Vec<f64> = record
        .times
        .iter()
        .zip(&record.level_positions)
        .map(|(t, x)| x - reference_speed * t)
        .collect();
    s.push_str(&polyline(&record.times, &lag, SVG_H, "#b0401f"));
    s.push_str("</svg>\n");
    s
}

fn at(path: &Path) -> impl FnOnce(io::Error) -> io::Error + '_ {
    move |e| io::Error::new(e.kind(), format!("{}: {e}", path.display()))
}

/// Writes every artifact of a finished run into `dir`; returns the paths written.
pub fn write_run(
    dir: &Path,
    cfg: &ExperimentConfig,
    grid: &Grid,
    record: &RunRecord,
    fit: Option<&FitResult>,
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(at(dir))?;
    let mut written = Vec::new();
    let mut put = |name: PathBuf, body: String| -> io::Result<()> {
        fs::write(&name, body).map_err(at(&name))?;
        written.push(name);
        Ok(())
    };
    put(dir.join(CONFIG_FILE), cfg.to_config_text())?;
    put(dir.join(TIMESERIES_FILE), timeseries_csv(record))?;
    if !record.snapshots.is_empty() {
        let snap_dir = dir.join(SNAPSHOT_DIR);
        fs::create_dir_all(&snap_dir).map_err(at(&snap_dir))?;
        for (k, (t, p)) in record.snapshots.iter().enumerate() {
            put(
                snap_dir.join(format!("snapshot_{k}_t{t:.3}.csv")),
                profile_csv(grid, p.values()),
            )?;
        }
    }
    if let Some(fit) = fit {
        put(dir.join(FIT_FILE), fit_text(fit))?;
    }
    put(
        dir.join(CHART_FILE),
        chart_svg(record, cfg.model.minimal_wave_speed()),
    )?;
    Ok(written)
}
