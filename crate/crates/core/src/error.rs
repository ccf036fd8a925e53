use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failures raised by the numerical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A grid could not be built from the requested bounds and spacing.
    InvalidGrid(&'static str),
    /// A parameter was outside its admissible range.
    InvalidParameter { name: &'static str, value: f64 },
    /// Two arrays that must share a length did not.
    LengthMismatch { expected: usize, found: usize },
    /// The frozen-coefficient cell problem has no unique solution:
    /// the oscillation frequency times the cell width hits a multiple of pi.
    Resonance { sigma: f64, growth: f64, width: f64 },
    /// Thomas' forward sweep met a pivot too small to divide by.
    ZeroPivot { row: usize },
    /// The LeVeque-Yee denominator `u_I - u_0` vanished.
    ZeroJump,
    /// Newton's method in the implicit reaction step did not converge.
    NewtonDiverged { value: f64 },
    /// No grid cell brackets the requested level.
    NoCrossing { level: f64 },
    /// The least-squares basis is rank deficient on the fit window.
    RankDeficient,
    /// An operation needed more data than it was given.
    NotEnoughData { needed: usize, found: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGrid(why) => write!(f, "invalid grid: {why}"),
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid value {value} for parameter `{name}`")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::Resonance { sigma, growth, width } => write!(
                f,
                "resonant cell problem (sigma = {sigma}, F = {growth}, h = {width})"
            ),
            Error::ZeroPivot { row } => write!(f, "zero pivot in tridiagonal solve at row {row}"),
            Error::ZeroJump => write!(f, "boundary states coincide; speed estimate undefined"),
            Error::NewtonDiverged { value } => {
                write!(f, "Newton iteration failed to converge from v = {value}")
            }
            Error::NoCrossing { level } => write!(f, "profile never crosses level {level}"),
            Error::RankDeficient => write!(f, "least-squares basis is rank deficient"),
            Error::NotEnoughData { needed, found } => {
                write!(f, "need at least {needed} samples, got {found}")
            }
        }
    }
}

impl core::error::Error for Error {}
