//! Independent reference computations for the integration tests, plus the
//! well-balancing check shared with the acceptance suite (the only part that
//! calls into the crate).

#![allow(dead_code)]

/// Classical RK4 for `y' = f(t, y)` with a fixed number of steps.
pub fn rk4<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    t0: f64,
    t1: f64,
    steps: usize,
) -> [f64; N] {
    let h = (t1 - t0) / steps as f64;
    let mut y = y0;
    let axpy = |y: &[f64; N], k: &[f64; N], a: f64| {
        let mut out = *y;
        for i in 0..N {
            out[i] += a * k[i];
        }
        out
    };
    for s in 0..steps {
        let t = t0 + s as f64 * h;
        let k1 = f(t, &y);
        let k2 = f(t + 0.5 * h, &axpy(&y, &k1, 0.5 * h));
        let k3 = f(t + 0.5 * h, &axpy(&y, &k2, 0.5 * h));
        let k4 = f(t + h, &axpy(&y, &k3, h));
        for i in 0..N {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y
}

/// Cell problem `w'' + sigma w' + F w = 0`, `w(0) = ul`, `w(h) = ur`, solved by
/// shooting with two fundamental solutions. Returns `(w'(0), w'(h), w(delta))`.
pub fn shooting_cell(sigma: f64, growth: f64, h: f64, delta: f64, ul: f64, ur: f64) -> (f64, f64, f64) {
    let rhs = |_: f64, y: &[f64; 4]| {
        [
            y[1],
            -sigma * y[1] - growth * y[0],
            y[3],
            -sigma * y[3] - growth * y[2],
        ]
    };
    // y1: w(0)=1, w'(0)=0; y2: w(0)=0, w'(0)=1
    let y0 = [1.0, 0.0, 0.0, 1.0];
    let steps = 4000;
    let end = rk4(rhs, y0, 0.0, h, steps);
    let slope0 = (ur - ul * end[0]) / end[2];
    let slope_h = ul * end[1] + slope0 * end[3];
    let at = if delta == 0.0 {
        y0
    } else {
        let n = ((steps as f64 * delta / h).ceil() as usize).max(16);
        rk4(rhs, y0, 0.0, delta, n)
    };
    (slope0, slope_h, ul * at[0] + slope0 * at[2])
}

/// Adaptive Dormand-Prince 5(4) for a scalar ODE, tight tolerances.
pub fn dopri5(f: impl Fn(f64, f64) -> f64, y0: f64, t0: f64, t1: f64, rtol: f64, atol: f64) -> f64 {
    const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
    let mut t = t0;
    let mut y = y0;
    let mut h = (t1 - t0) / 100.0;
    while t < t1 {
        if t + h > t1 {
            h = t1 - t;
        }
        let mut k = [0.0; 7];
        for s in 0..7 {
            let mut ys = y;
            for j in 0..s {
                ys += h * A[s][j] * k[j];
            }
            k[s] = f(t + C[s] * h, ys);
        }
        let y5 = y + h * (0..7).map(|s| B5[s] * k[s]).sum::<f64>();
        let y4 = y + h * (0..7).map(|s| B4[s] * k[s]).sum::<f64>();
        let err = (y5 - y4).abs() / (atol + rtol * y5.abs().max(y.abs()));
        if err <= 1.0 {
            t += h;
            y = y5;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
    }
    y
}

/// Dense Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let m = a[row][col] / a[col][col];
            if m != 0.0 {
                for k in col..n {
                    a[row][k] -= m * a[col][k];
                }
                b[row] -= m * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// `sinh(k z)/k` with `k^2 = disc` of either sign, using std math.
fn sinhc(disc: f64, z: f64) -> f64 {
    let q = disc * z * z;
    if q.abs() < 1e-8 {
        z * (1.0 + q / 6.0)
    } else if disc > 0.0 {
        let k = disc.sqrt();
        (k * z).sinh() / k
    } else {
        let k = (-disc).sqrt();
        (k * z).sin() / k
    }
}

fn coshc(disc: f64, z: f64) -> f64 {
    let q = disc * z * z;
    if q.abs() < 1e-8 {
        1.0 + q / 2.0
    } else if disc > 0.0 {
        (disc.sqrt() * z).cosh()
    } else {
        ((-disc).sqrt() * z).cos()
    }
}

/// Global solution of `w'' + sigma w' + F w = 0` with `w(0) = a`, `w'(0) = b`.
pub fn stationary_solution(sigma: f64, growth: f64, a: f64, b: f64) -> impl Fn(f64) -> f64 {
    let disc = 0.25 * sigma * sigma - growth;
    move |x| {
        let e = (-0.5 * sigma * x).exp();
        e * (a * coshc(disc, x) + (b + 0.5 * sigma * a) * sinhc(disc, x))
    }
}

/// Samples an exact stationary solution with constant growth on `n` nodes,
/// runs one moving-frame step and the shift back at the exact speed, and
/// returns `(moving-frame defect, shifted defect)` relative to `max |w|`. The
/// shifted values are compared with `w(x_i - sigma dt)` at interior nodes.
pub fn wb_exactness_defects(
    sigma: f64,
    growth: f64,
    dx: f64,
    slope: f64,
    integrator: wbfront_core::wb::Integrator,
) -> Option<(f64, f64)> {
    use wbfront_core::model::LinearGrowth;
    use wbfront_core::wb::{moving_frame_step, select_timestep, shift_back, Integrator, StepConfig};
    use wbfront_core::{Grid, Profile};

    let n = 41;
    let grid = Grid::new(0.0, dx * (n - 1) as f64, dx).ok()?;
    let w = stationary_solution(sigma, growth, 1.0, slope);
    let (left, right) = (w(grid.x_min), w(grid.x_max));
    if (left - right).abs() < 1e-6 {
        return None;
    }
    let u = Profile::sample(&grid, &w, left, right).ok()?;
    let cfg = match integrator {
        Integrator::Implicit => StepConfig::implicit(dx),
        Integrator::Explicit => StepConfig::explicit(),
    };
    let dt = select_timestep(sigma, dx, &cfg);
    let reaction = LinearGrowth(growth);
    let moving = moving_frame_step(&u, sigma, dt, integrator, &reaction, &grid).unwrap();
    let shifted = shift_back(&moving, sigma, dt, &reaction, &grid).unwrap();
    let scale = u.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let moving_defect = moving
        .values()
        .iter()
        .zip(u.values())
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let shift_defect = (1..n - 1).fold(0.0f64, |m, i| {
        m.max((shifted.values()[i] - w(grid.x(i) - sigma * dt)).abs())
    });
    Some((moving_defect / scale, shift_defect / scale))
}
