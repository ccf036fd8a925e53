//! Level-set tracking, delay fits and convergence tables.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Grid, Profile, Result};

/// Time series produced by a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunRecord {
    pub times: Vec<f64>,
    pub dts: Vec<f64>,
    pub ly_speeds: Vec<f64>,
    /// Position of the tracked level at each recorded time.
    pub level_positions: Vec<f64>,
    pub snapshots: Vec<(f64, Profile)>,
}

impl RunRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends one sample; times must increase strictly.
    pub fn push(&mut self, t: f64, dt: f64, ly_speed: f64, level_position: f64) -> Result<()> {
        if let Some(&last) = self.times.last() {
            if !(t > last) {
                return Err(Error::InvalidParameter { name: "t", value: t });
            }
        }
        self.times.push(t);
        self.dts.push(dt);
        self.ly_speeds.push(ly_speed);
        self.level_positions.push(level_position);
        Ok(())
    }

    pub fn last_speed(&self) -> Option<f64> {
        self.ly_speeds.last().copied()
    }
}

/// `sup { x : u(x) = c }` on the piecewise-linear interpolant: the rightmost
/// cell with `u_i >= c > u_{i+1}`, interpolated linearly.
pub fn level_set_position(profile: &Profile, grid: &Grid, c: f64) -> Result<f64> {
    let u = profile.values();
    if u.len() != grid.n_points {
        return Err(Error::LengthMismatch {
            expected: grid.n_points,
            found: u.len(),
        });
    }
    (0..u.len() - 1)
        .rev()
        .find(|&i| u[i] >= c && c > u[i + 1])
        .map(|i| grid.x(i) + grid.dx * (u[i] - c) / (u[i] - u[i + 1]))
        .ok_or(Error::NoCrossing { level: c })
}

/// Coefficients of `alpha ln t + beta + gamma / sqrt(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub residual_rms: f64,
    pub window: (f64, f64),
}

impl FitResult {
    pub fn eval(&self, t: f64) -> f64 {
        self.alpha * math::ln(t) + self.beta + self.gamma / math::sqrt(t)
    }
}

/// Fits `x_c(t) - reference_speed t` over the second half of the record.
pub fn fit_delay(record: &RunRecord, reference_speed: f64) -> Result<FitResult> {
    if record.len() < 10 {
        return Err(Error::NotEnoughData {
            needed: 10,
            found: record.len(),
        });
    }
    let ys: Vec<f64> = record
        .times
        .iter()
        .zip(&record.level_positions)
        .map(|(t, x)| x - reference_speed * t)
        .collect();
    fit_last_half(&record.times, &ys)
}

/// Least-squares fit of `ys` against `{ln t, 1, 1/sqrt t}` restricted to
/// samples with `t >= t_last / 2`.
pub fn fit_last_half(times: &[f64], ys: &[f64]) -> Result<FitResult> {
    if times.len() != ys.len() {
        return Err(Error::LengthMismatch {
            expected: times.len(),
            found: ys.len(),
        });
    }
    let t_end = match times.last() {
        Some(&t) => t,
        None => return Err(Error::NotEnoughData { needed: 3, found: 0 }),
    };
    let (ts, ws): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(ys)
        .filter(|(t, _)| **t >= 0.5 * t_end)
        .map(|(t, y)| (*t, *y))
        .unzip();
    fit_model(&ts, &ws)
}

/// Least-squares fit of `ys` against `{ln t, 1, 1/sqrt t}` on all samples.
pub fn fit_model(ts: &[f64], ys: &[f64]) -> Result<FitResult> {
    if ts.len() != ys.len() {
        return Err(Error::LengthMismatch {
            expected: ts.len(),
            found: ys.len(),
        });
    }
    if ts.len() < 3 {
        return Err(Error::RankDeficient);
    }
    if ts.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: ts.iter().copied().find(|t| !(*t > 0.0)).unwrap_or(0.0),
        });
    }
    let logs: Vec<f64> = ts.iter().map(|&t| math::ln(t)).collect();
    let roots: Vec<f64> = ts.iter().map(|&t| 1.0 / math::sqrt(t)).collect();
    let (log_mean, log_spread) = center_scale(&logs)?;
    let (root_mean, root_spread) = center_scale(&roots)?;

    // columns: 1, scaled log, scaled inverse root. The scaled log and root
    // columns are nearly collinear over short windows, so solve by QR rather
    // than normal equations.
    let mut cols: [Vec<f64>; 3] = [
        vec![1.0; ts.len()],
        logs.iter().map(|l| (l - log_mean) / log_spread).collect(),
        roots.iter().map(|r| (r - root_mean) / root_spread).collect(),
    ];
    let coef = householder_lstsq(&mut cols, ys.to_vec())?;
    let alpha = coef[1] / log_spread;
    let gamma = coef[2] / root_spread;
    let beta = coef[0] - alpha * log_mean - gamma * root_mean;

    let mut fit = FitResult {
        alpha,
        beta,
        gamma,
        residual_rms: 0.0,
        window: (ts[0], ts[ts.len() - 1]),
    };
    let sq: f64 = ts
        .iter()
        .zip(ys)
        .map(|(&t, &y)| {
            let r = y - fit.eval(t);
            r * r
        })
        .sum();
    fit.residual_rms = math::sqrt(sq / ts.len() as f64);
    Ok(fit)
}

fn center_scale(v: &[f64]) -> Result<(f64, f64)> {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let spread = math::sqrt(var);
    if !(spread > 0.0) {
        return Err(Error::RankDeficient);
    }
    Ok((mean, spread))
}

// Least squares by Householder QR. `cols` is overwritten; rank loss is flagged
// by a tiny diagonal of R relative to its largest entry.
fn householder_lstsq(cols: &mut [Vec<f64>; 3], mut y: Vec<f64>) -> Result<[f64; 3]> {
    let m = y.len();
    let mut diag = [0.0f64; 3];
    for k in 0..3 {
        let norm = math::sqrt(cols[k][k..].iter().map(|v| v * v).sum::<f64>());
        if norm == 0.0 {
            return Err(Error::RankDeficient);
        }
        let alpha = if cols[k][k] > 0.0 { -norm } else { norm };
        // v = x - alpha e_k, stored in place of column k
        cols[k][k] -= alpha;
        let vnorm2: f64 = cols[k][k..].iter().map(|v| v * v).sum();
        let (head, tail) = cols.split_at_mut(k + 1);
        let v = &head[k];
        for c in tail.iter_mut() {
            let dot: f64 = (k..m).map(|i| v[i] * c[i]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..m {
                c[i] -= f * v[i];
            }
        }
        let dot: f64 = (k..m).map(|i| v[i] * y[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..m {
            y[i] -= f * v[i];
        }
        diag[k] = alpha;
    }
    let scale = diag.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
    if diag.iter().any(|d| d.abs() <= 1e-12 * scale) {
        return Err(Error::RankDeficient);
    }
    let mut x = [0.0; 3];
    for r in (0..3).rev() {
        let mut acc = y[r];
        for c in r + 1..3 {
            acc -= cols[c][r] * x[c];
        }
        x[r] = acc / diag[r];
    }
    Ok(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub dx: f64,
    pub speed: f64,
    pub error: f64,
    /// Sign of `speed - target`: -1, 0 or 1.
    pub sign: i8,
}

/// Rows `(dx, speed, speed - target, sign)` sorted by decreasing `dx`.
pub fn convergence_table(results: &[(f64, f64)], target: f64) -> Result<Vec<ConvergenceRow>> {
    if results.len() < 2 {
        return Err(Error::NotEnoughData {
            needed: 2,
            found: results.len(),
        });
    }
    let mut rows: Vec<ConvergenceRow> = results
        .iter()
        .map(|&(dx, speed)| {
            let error = speed - target;
            let sign = if error > 0.0 {
                1
            } else if error < 0.0 {
                -1
            } else {
                0
            };
            ConvergenceRow {
                dx,
                speed,
                error,
                sign,
            }
        })
        .collect();
    rows.sort_by(|a, b| b.dx.total_cmp(&a.dx));
    Ok(rows)
}

/// Indices `i` where the sign of the error differs between rows `i` and `i + 1`.
pub fn sign_changes(rows: &[ConvergenceRow]) -> Vec<usize> {
    rows.windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].sign != 0 && w[1].sign != 0 && w[0].sign != w[1].sign)
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid_for(n: usize) -> Grid {
        Grid::new(0.0, (n - 1) as f64, 1.0).unwrap()
    }

    #[test]
    fn level_set_examples() {
        let p = Profile::pinned(vec![1.0, 0.75, 0.25, 0.0], 1.0, 0.0).unwrap();
        assert!((level_set_position(&p, &grid_for(4), 0.5).unwrap() - 1.5).abs() < 1e-15);

        let p = Profile::pinned(vec![1.0, 0.5, 0.0], 1.0, 0.0).unwrap();
        assert_eq!(level_set_position(&p, &grid_for(3), 0.5).unwrap(), 1.0);

        let p = Profile::pinned(vec![1.0, 0.4, 0.6, 0.2, 0.0], 1.0, 0.0).unwrap();
        assert!((level_set_position(&p, &grid_for(5), 0.5).unwrap() - 2.25).abs() < 1e-15);
    }

    #[test]
    fn level_set_without_crossing() {
        let p = Profile::pinned(vec![1.0, 0.9, 0.8, 0.7], 1.0, 0.7).unwrap();
        assert_eq!(
            level_set_position(&p, &grid_for(4), 0.5),
            Err(Error::NoCrossing { level: 0.5 })
        );
    }

    #[test]
    fn level_set_shift_equivariance() {
        let grid = Grid::new(0.0, 20.0, 0.25).unwrap();
        let f = |x: f64| 1.0 / (1.0 + (1.3 * (x - 7.1)).exp());
        let p = Profile::sample(&grid, f, 1.0, 0.0).unwrap();
        let shifted = Profile::sample(&grid, |x| f(x - 0.25), 1.0, 0.0).unwrap();
        let a = level_set_position(&p, &grid, 0.5).unwrap();
        let b = level_set_position(&shifted, &grid, 0.5).unwrap();
        assert!((b - a - 0.25).abs() < 1e-12);
    }

    fn record_from(ts: &[f64], y: impl Fn(f64) -> f64, speed: f64) -> RunRecord {
        let mut r = RunRecord::new();
        for &t in ts {
            r.push(t, 1.0, speed, y(t) + speed * t).unwrap();
        }
        r
    }

    #[test]
    fn fit_recovers_in_span_data() {
        let ts: Vec<f64> = (0..=1000).map(|k| k as f64).skip(1).collect();
        let rec = record_from(&ts, |t| -1.5 * t.ln() + 4.0 + 2.0 / t.sqrt(), 2.0);
        let fit = fit_delay(&rec, 2.0).unwrap();
        assert!((fit.alpha + 1.5).abs() < 1e-9, "{fit:?}");
        assert!((fit.beta - 4.0).abs() < 1e-9);
        assert!((fit.gamma - 2.0).abs() < 1e-9);
        assert_eq!(fit.window, (500.0, 1000.0));

        let rec = record_from(&ts, |_| 7.0, 2.0);
        let fit = fit_delay(&rec, 2.0).unwrap();
        assert!(fit.alpha.abs() < 1e-9 && (fit.beta - 7.0).abs() < 1e-9 && fit.gamma.abs() < 1e-9);
    }

    #[test]
    fn fit_errors() {
        let rec = record_from(&[1.0, 2.0, 3.0], |_| 1.0, 2.0);
        assert!(matches!(fit_delay(&rec, 2.0), Err(Error::NotEnoughData { .. })));
        assert_eq!(fit_model(&[5.0, 5.0, 5.0, 5.0], &[1.0; 4]), Err(Error::RankDeficient));
        assert_eq!(fit_model(&[5.0, 6.0], &[1.0; 2]), Err(Error::RankDeficient));
    }

    #[test]
    fn record_times_must_increase() {
        let mut r = RunRecord::new();
        r.push(1.0, 0.1, 2.0, 3.0).unwrap();
        assert!(r.push(1.0, 0.1, 2.0, 3.0).is_err());
    }

    #[test]
    fn convergence_rows() {
        let rows = convergence_table(&[(0.25, 1.995), (0.5, 1.99)], 2.0).unwrap();
        assert_eq!(rows[0].dx, 0.5);
        assert!((rows[0].error + 0.01).abs() < 1e-15);
        assert!((rows[1].error + 0.005).abs() < 1e-15);
        assert!(rows.iter().all(|r| r.sign == -1));
        assert!(sign_changes(&rows).is_empty());
        assert!(convergence_table(&[], 2.0).is_err());

        let rows = convergence_table(&[(0.5, 1.99), (0.25, 2.001), (0.125, 2.002)], 2.0).unwrap();
        assert_eq!(sign_changes(&rows), vec![0]);
    }
}
