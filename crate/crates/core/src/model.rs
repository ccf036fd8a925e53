//! Reaction models, analytic reference quantities, grids and initial data.

use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

/// A reaction term `f(u)` together with its growth factor `F(u) = f(u)/u`.
///
/// The growth factor must be provided in closed form: the well-balanced
/// scheme evaluates it where `u` is close to zero.
pub trait Reaction {
    fn rate(&self, u: f64) -> f64;
    fn growth(&self, u: f64) -> f64;
    /// `f'(u)`, used by Newton solves of implicit reaction steps.
    fn rate_slope(&self, u: f64) -> f64;
}

impl<R: Reaction + ?Sized> Reaction for &R {
    fn rate(&self, u: f64) -> f64 {
        (**self).rate(u)
    }
    fn growth(&self, u: f64) -> f64 {
        (**self).growth(u)
    }
    fn rate_slope(&self, u: f64) -> f64 {
        (**self).rate_slope(u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReactionKind {
    /// `f(u) = u(1 - u)`.
    Fkpp,
    /// `f(u) = u(1 - u)(1 + a u)`.
    Cubic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReactionModel {
    pub kind: ReactionKind,
    /// Cubic coefficient; ignored for F/KPP.
    pub a: f64,
}

impl ReactionModel {
    pub const fn fkpp() -> Self {
        Self {
            kind: ReactionKind::Fkpp,
            a: 0.0,
        }
    }

    pub fn cubic(a: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter { name: "a", value: a });
        }
        Ok(Self {
            kind: ReactionKind::Cubic,
            a,
        })
    }

    /// Minimal traveling-wave speed: 2 in the pulled regime, and
    /// `sqrt(a/2) + sqrt(2/a)` for the pushed cubic case `a > 2`.
    pub fn minimal_wave_speed(&self) -> f64 {
        match self.kind {
            ReactionKind::Fkpp => 2.0,
            ReactionKind::Cubic if self.a <= 2.0 => 2.0,
            ReactionKind::Cubic => math::sqrt(self.a / 2.0) + math::sqrt(2.0 / self.a),
        }
    }
}

impl Reaction for ReactionModel {
    fn rate(&self, u: f64) -> f64 {
        u * self.growth(u)
    }

    fn growth(&self, u: f64) -> f64 {
        match self.kind {
            ReactionKind::Fkpp => 1.0 - u,
            ReactionKind::Cubic => (1.0 - u) * (1.0 + self.a * u),
        }
    }

    fn rate_slope(&self, u: f64) -> f64 {
        match self.kind {
            ReactionKind::Fkpp => 1.0 - 2.0 * u,
            ReactionKind::Cubic => 1.0 + 2.0 * (self.a - 1.0) * u - 3.0 * self.a * u * u,
        }
    }
}

/// Linear reaction `f(u) = F u` with a constant growth factor.
///
/// Every frozen cell problem built from it has exactly the coefficient `F`,
/// which makes it the natural fixture for exactness checks; `LinearGrowth(0.0)`
/// switches the reaction off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearGrowth(pub f64);

impl Reaction for LinearGrowth {
    fn rate(&self, u: f64) -> f64 {
        self.0 * u
    }
    fn growth(&self, _u: f64) -> f64 {
        self.0
    }
    fn rate_slope(&self, _u: f64) -> f64 {
        self.0
    }
}

/// Exact pushed front of the cubic model, `1 / (1 + exp(k xi))` with
/// `k = sqrt(a/2)`. It travels at `sqrt(a/2) + sqrt(2/a)` and takes the
/// value 1/2 at `xi = 0`.
pub fn exact_pushed_front(a: f64, xi: f64) -> Result<f64> {
    if !(a > 2.0) {
        return Err(Error::InvalidParameter { name: "a", value: a });
    }
    let k = math::sqrt(a / 2.0);
    Ok(logistic_tail(k * xi))
}

/// Sigmoid initial datum `1 - 1/(1 + exp(-3(x - 40)))`.
pub fn sigmoid_initial(x: f64) -> f64 {
    logistic_tail(3.0 * (x - 40.0))
}

// 1/(1 + e^y), written so that the decaying side keeps full relative precision.
// Far ahead it underflows to exactly 0: any positive floor there would be
// amplified like e^t by the unstable state and launch a spurious front.
fn logistic_tail(y: f64) -> f64 {
    if y > 0.0 {
        let e = math::exp(-y);
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + math::exp(y))
    }
}

/// Uniform 1D mesh `x_i = x_min + i dx`, `i = 0..n_points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub n_points: usize,
}

impl Grid {
    /// Builds the grid, refusing spacings that do not divide the domain.
    pub fn new(x_min: f64, x_max: f64, dx: f64) -> Result<Self> {
        if !(dx > 0.0) || !dx.is_finite() {
            return Err(Error::InvalidGrid("dx must be positive and finite"));
        }
        if !(x_max > x_min) {
            return Err(Error::InvalidGrid("x_max must exceed x_min"));
        }
        let cells = (x_max - x_min) / dx;
        let rounded = math::round(cells);
        if (cells - rounded).abs() > 1e-9 * rounded.max(1.0) {
            return Err(Error::InvalidGrid("domain length is not a multiple of dx"));
        }
        let n_points = rounded as usize + 1;
        if n_points < 3 {
            return Err(Error::InvalidGrid("need at least 3 grid points"));
        }
        Ok(Self {
            x_min,
            x_max,
            dx,
            n_points,
        })
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.x(i))
    }

    pub fn cells(&self) -> usize {
        self.n_points - 1
    }
}

/// Discrete solution at one time level, pinned to its limit states at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    values: Vec<f64>,
    left_state: f64,
    right_state: f64,
}

impl Profile {
    /// Wraps `values`, overwriting the first and last entries with the
    /// boundary states.
    pub fn pinned(mut values: Vec<f64>, left_state: f64, right_state: f64) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::NotEnoughData {
                needed: 3,
                found: values.len(),
            });
        }
        if left_state == right_state {
            return Err(Error::ZeroJump);
        }
        let last = values.len() - 1;
        values[0] = left_state;
        values[last] = right_state;
        Ok(Self {
            values,
            left_state,
            right_state,
        })
    }

    /// Samples `f` on the grid (with the usual end pinning).
    pub fn sample(
        grid: &Grid,
        f: impl Fn(f64) -> f64,
        left_state: f64,
        right_state: f64,
    ) -> Result<Self> {
        Self::pinned(grid.points().map(f).collect(), left_state, right_state)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn left_state(&self) -> f64 {
        self.left_state
    }

    pub fn right_state(&self) -> f64 {
        self.right_state
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Same boundary states, new interior. Used for every step result, so
    /// subnormals are flushed to zero here: in that range `0.7 * v` rounds
    /// back to `v`, geometric decay stalls at the smallest step, and the
    /// resulting floor ahead of the front grows like `e^t` until it launches
    /// a spurious front.
    pub(crate) fn with_values(&self, mut values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        for v in &mut values {
            if v.is_subnormal() {
                *v = 0.0;
            }
        }
        Self::pinned(values, self.left_state, self.right_state)
            .expect("boundary states already validated")
    }
}
