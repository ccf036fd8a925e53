//! Tridiagonal systems and Thomas' algorithm.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// `lower[i] x[i-1] + diagonal[i] x[i] + upper[i] x[i+1] = rhs[i]`.
///
/// `lower[0]` and `upper[n-1]` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub lower: Vec<f64>,
    pub diagonal: Vec<f64>,
    pub upper: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![0.0; n],
            diagonal: vec![0.0; n],
            upper: vec![0.0; n],
            rhs: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    /// `A x`, mostly useful for residual checks.
    pub fn multiply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diagonal[i] * x[i];
                if i > 0 {
                    acc += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.upper[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    fn check_lengths(&self) -> Result<()> {
        let n = self.diagonal.len();
        for len in [self.lower.len(), self.upper.len(), self.rhs.len()] {
            if len != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: len,
                });
            }
        }
        Ok(())
    }
}

const MIN_PIVOT: f64 = 1e-300;

/// Solves the system without pivoting.
pub fn thomas_solve(sys: &TridiagonalSystem) -> Result<Vec<f64>> {
    sys.check_lengths()?;
    let n = sys.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c_prime = vec![0.0; n];
    let mut x = vec![0.0; n];

    let mut pivot = sys.diagonal[0];
    if pivot.abs() < MIN_PIVOT {
        return Err(Error::ZeroPivot { row: 0 });
    }
    c_prime[0] = sys.upper[0] / pivot;
    x[0] = sys.rhs[0] / pivot;
    for i in 1..n {
        pivot = sys.diagonal[i] - sys.lower[i] * c_prime[i - 1];
        if !(pivot.abs() >= MIN_PIVOT) {
            return Err(Error::ZeroPivot { row: i });
        }
        c_prime[i] = sys.upper[i] / pivot;
        x[i] = (sys.rhs[i] - sys.lower[i] * x[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        x[i] -= c_prime[i] * x[i + 1];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let sys = TridiagonalSystem {
            lower: vec![0.0; 3],
            diagonal: vec![1.0; 3],
            upper: vec![0.0; 3],
            rhs: vec![3.0, 1.0, 4.0],
        };
        assert_eq!(thomas_solve(&sys).unwrap(), vec![3.0, 1.0, 4.0]);
    }

    #[test]
    fn second_difference() {
        let sys = TridiagonalSystem {
            lower: vec![0.0, -1.0, -1.0],
            diagonal: vec![2.0; 3],
            upper: vec![-1.0, -1.0, 0.0],
            rhs: vec![1.0, 0.0, 1.0],
        };
        let x = thomas_solve(&sys).unwrap();
        for v in x {
            assert!((v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_pivot_and_lengths() {
        let mut sys = TridiagonalSystem::zeros(3);
        sys.diagonal = vec![0.0, 1.0, 1.0];
        assert_eq!(thomas_solve(&sys), Err(Error::ZeroPivot { row: 0 }));

        let sys = TridiagonalSystem {
            lower: vec![0.0, 1.0],
            diagonal: vec![1.0, 1.0],
            upper: vec![1.0, 0.0],
            rhs: vec![1.0, 1.0],
        };
        assert_eq!(thomas_solve(&sys), Err(Error::ZeroPivot { row: 1 }));

        let mut sys = TridiagonalSystem::zeros(3);
        sys.rhs.pop();
        assert!(matches!(thomas_solve(&sys), Err(Error::LengthMismatch { .. })));
    }
}
