//! Thin wrappers over `libm` so the numerics read like ordinary float code.

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

#[inline]
pub(crate) fn cosh(x: f64) -> f64 {
    libm::cosh(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

#[inline]
pub(crate) fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}
