//! Exact solution of the frozen-coefficient two-point problem on one cell.
//!
//! On a cell of width `h` the moving-frame equation with a frozen growth
//! factor `F` becomes the linear ODE
//!
//! ```text
//! w'' + sigma w' + F w = 0,   w(0) = u_left,  w(h) = u_right
//! ```
//!
//! Writing `w = exp(-sigma z / 2) v` gives `v'' = (D/4) v` with
//! `D = sigma^2 - 4F`, so every quantity is expressed through
//!
//! ```text
//! s(z) = sinh(k z) / k,   c(z) = cosh(k z),   k^2 = D/4
//! ```
//!
//! which are entire functions of `D z^2`. Evaluating them by power series near
//! `D = 0`, by hyperbolic functions for `D > 0` and by trigonometric functions
//! for `D < 0` covers the three root configurations with one formula and no
//! cancellation at the double root. All evaluations use local coordinates
//! `z in [0, h]`.

use crate::math;
use crate::{Error, Result};

/// Root configuration of `mu^2 + sigma mu + F = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Roots {
    TwoReal { minus: f64, plus: f64 },
    Double { mu: f64 },
    ComplexPair { real_part: f64, frequency: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSet {
    pub discriminant: f64,
    pub roots: Roots,
}

/// Classifies the characteristic roots. Discriminants within
/// `max(1e-12, 1e-10 sigma^2)` of zero count as a double root.
pub fn characteristic_roots(sigma: f64, growth: f64) -> RootSet {
    let discriminant = sigma * sigma - 4.0 * growth;
    let band = (1e-10 * sigma * sigma).max(1e-12);
    let roots = if discriminant.abs() <= band {
        Roots::Double { mu: -0.5 * sigma }
    } else if discriminant > 0.0 {
        let root = math::sqrt(discriminant);
        let (minus, plus) = if sigma == 0.0 {
            (-0.5 * root, 0.5 * root)
        } else {
            // larger-magnitude root first, the other from the product
            let big = -0.5 * (sigma + sigma.signum() * root);
            let small = growth / big;
            if big < small {
                (big, small)
            } else {
                (small, big)
            }
        };
        Roots::TwoReal { minus, plus }
    } else {
        Roots::ComplexPair {
            real_part: -0.5 * sigma,
            frequency: 0.5 * math::sqrt(-discriminant),
        }
    };
    RootSet {
        discriminant,
        roots,
    }
}

/// Flux matrix of one cell: `(L, R) = S (u_left, u_right)` where `L = w'(0+)`
/// and `R = w'(h-)` for the exact cell solution `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellOperator {
    pub s: [[f64; 2]; 2],
    pub sigma: f64,
    pub growth: f64,
    pub width: f64,
}

impl CellOperator {
    /// Returns `(L, R)` for the given boundary values.
    #[inline]
    pub fn apply(&self, u_left: f64, u_right: f64) -> (f64, f64) {
        (
            self.s[0][0] * u_left + self.s[0][1] * u_right,
            self.s[1][0] * u_left + self.s[1][1] * u_right,
        )
    }
}

/// Interpolation row: `w(delta) = t[0] u_left + t[1] u_right`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftRow {
    pub t: [f64; 2],
    pub delta: f64,
}

impl ShiftRow {
    #[inline]
    pub fn apply(&self, u_left: f64, u_right: f64) -> f64 {
        self.t[0] * u_left + self.t[1] * u_right
    }
}

// Above this value of (D/4) h^2 the hyperbolic functions are replaced by
// exponential forms that cannot overflow.
const LARGE: f64 = 400.0;

/// `(s(z)/z, c(z))` as functions of `q = (D/4) z^2`.
fn kernels(q: f64) -> (f64, f64) {
    if q.abs() < 1.0 {
        let mut sh = 1.0;
        let mut ch = 1.0;
        let mut term_s = 1.0;
        let mut term_c = 1.0;
        for k in 1..=12 {
            let k = k as f64;
            term_c *= q / ((2.0 * k - 1.0) * (2.0 * k));
            term_s *= q / ((2.0 * k) * (2.0 * k + 1.0));
            ch += term_c;
            sh += term_s;
            if term_c.abs() < 1e-18 {
                break;
            }
        }
        (sh, ch)
    } else if q > 0.0 {
        let x = math::sqrt(q);
        (math::sinh(x) / x, math::cosh(x))
    } else {
        let x = math::sqrt(-q);
        (math::sin(x) / x, math::cos(x))
    }
}

fn check_inputs(sigma: f64, growth: f64, h: f64) -> Result<()> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParameter { name: "h", value: h });
    }
    if !sigma.is_finite() {
        return Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
        });
    }
    if !growth.is_finite() {
        return Err(Error::InvalidParameter {
            name: "F",
            value: growth,
        });
    }
    Ok(())
}

fn check_resonance(sigma: f64, growth: f64, h: f64, q: f64) -> Result<()> {
    if q < 0.0 {
        let x = math::sqrt(-q);
        let k = math::round(x / core::f64::consts::PI);
        if k >= 1.0 && (x - k * core::f64::consts::PI).abs() <= 1e-9 {
            return Err(Error::Resonance {
                sigma,
                growth,
                width: h,
            });
        }
    }
    Ok(())
}

fn finite_or(value: f64, sigma: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name: "sigma",
            value: sigma,
        })
    }
}

/// Builds the flux matrix for frozen coefficients `(sigma, F)` on a cell of width `h`.
pub fn flux_matrix(sigma: f64, growth: f64, h: f64) -> Result<CellOperator> {
    check_inputs(sigma, growth, h)?;
    let quarter = 0.25 * sigma * sigma - growth;
    let q = quarter * h * h;
    check_resonance(sigma, growth, h, q)?;
    let half = 0.5 * sigma;

    let s = if q > LARGE {
        let k = math::sqrt(quarter);
        let g = math::exp(-2.0 * k * h);
        let denom = 1.0 - g;
        let k_coth = k * (1.0 + g) / denom;
        [
            [
                -half - k_coth,
                2.0 * k * math::exp((half - k) * h) / denom,
            ],
            [
                -2.0 * k * math::exp((-half - k) * h) / denom,
                -half + k_coth,
            ],
        ]
    } else {
        let (sh, ch) = kernels(q);
        let s_h = h * sh;
        let e = math::exp(half * h);
        let c_over_s = ch / s_h;
        [
            [-half - c_over_s, e / s_h],
            [-1.0 / (e * s_h), -half + c_over_s],
        ]
    };
    for row in &s {
        for &v in row {
            finite_or(v, sigma)?;
        }
    }
    Ok(CellOperator {
        s,
        sigma,
        growth,
        width: h,
    })
}

/// Row `T` such that `T (u_left, u_right)` is the exact cell solution at
/// local offset `delta`.
pub fn shift_row(sigma: f64, growth: f64, h: f64, delta: f64) -> Result<ShiftRow> {
    check_inputs(sigma, growth, h)?;
    if !(0.0..=h).contains(&delta) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
        });
    }
    let quarter = 0.25 * sigma * sigma - growth;
    let q = quarter * h * h;
    check_resonance(sigma, growth, h, q)?;
    let half = 0.5 * sigma;
    let rest = h - delta;

    let t = if q > LARGE {
        // sinh ratios in exponential form
        let k = math::sqrt(quarter);
        let denom = -math::expm1(-2.0 * k * h);
        let t0 = math::exp(-(half + k) * delta) * -math::expm1(-2.0 * k * rest) / denom;
        let t1 = math::exp((half - k) * rest) * -math::expm1(-2.0 * k * delta) / denom;
        [t0, t1]
    } else {
        let s_h = h * kernels(q).0;
        let s_rest = rest * kernels(quarter * rest * rest).0;
        let s_delta = delta * kernels(quarter * delta * delta).0;
        [
            math::exp(-half * delta) * s_rest / s_h,
            math::exp(half * rest) * s_delta / s_h,
        ]
    };
    finite_or(t[0], sigma)?;
    finite_or(t[1], sigma)?;
    Ok(ShiftRow { t, delta })
}

/// Value of the exact cell solution at local coordinate `z`.
pub fn cell_eval(
    sigma: f64,
    growth: f64,
    h: f64,
    u_left: f64,
    u_right: f64,
    z: f64,
) -> Result<f64> {
    Ok(shift_row(sigma, growth, h, z)?.apply(u_left, u_right))
}
