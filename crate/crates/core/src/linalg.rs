//! Dense complex matrices, tolerances and the validated [`DensityMatrix`].
//!
//! Operators are stored as `nalgebra::DMatrix<Complex64>`. Row index is the
//! output index, so `|k⟩` is the `k`-th standard basis column.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;

/// Structural tolerance: unitarity, Hermiticity, trace and equivalence checks.
pub const STRUCTURAL_TOL: f64 = 1e-12;
/// Eigenvalues in `[-EIGEN_FLOOR, 0)` count as roundoff; anything lower is an error.
pub const EIGEN_FLOOR: f64 = 1e-10;
/// Normalization tolerance for amplitude vectors and probability tables.
pub const NORM_TOL: f64 = 1e-14;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Neumaier-compensated sum; plain summation of `d⁴` probabilities drifts
/// past the normalization tolerances for `d ≳ 30`.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Largest entrywise magnitude of `a - b`.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise magnitude of `a - a^H`.
pub fn hermiticity_error(a: &ComplexMatrix) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for c in 0..a.ncols() {
        for r in 0..n.min(c + 1) {
            worst = worst.max((a[(r, c)] - a[(c, r)].conj()).norm());
        }
    }
    worst
}

pub fn trace(a: &ComplexMatrix) -> C64 {
    a.diagonal().iter().sum()
}

/// Largest entrywise deviation of `u^H u` from the identity.
pub fn unitarity_error(u: &ComplexMatrix) -> f64 {
    let prod = u.adjoint() * u;
    max_abs_diff(&prod, &ComplexMatrix::identity(u.nrows(), u.ncols()))
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
pub fn hermitian_eigenvalues(a: &ComplexMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = a.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

/// A `dim × dim` matrix known to be Hermitian, unit trace and positive
/// semidefinite (up to the module tolerances).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates `m` fully, including an eigendecomposition for positivity.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidDensity(format!(
                "expected a non-empty square matrix, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let herm = hermiticity_error(&m);
        if herm > STRUCTURAL_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = trace(&m);
        if (tr - ONE).norm() > STRUCTURAL_TOL {
            return Err(Error::InvalidDensity(format!("trace is {tr}, expected 1")));
        }
        let min = hermitian_eigenvalues(&m).last().copied().unwrap_or(0.0);
        if min < -EIGEN_FLOOR {
            return Err(Error::NegativeEigenvalue(min));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix that is valid by construction (outer products, CPTP
    /// images of valid inputs).
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        debug_assert!(m.is_square());
        Self(m)
    }

    /// `1/dim` times the identity.
    pub fn maximally_mixed(dim: usize) -> Self {
        let mut m = ComplexMatrix::identity(dim, dim);
        m /= C64::new(dim as f64, 0.0);
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2, 2) * C64::new(0.5, 0.0);
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn rejects_wrong_trace() {
        let m = ComplexMatrix::identity(2, 2);
        assert!(matches!(DensityMatrix::new(m), Err(Error::InvalidDensity(_))));
    }

    #[test]
    fn rejects_negative_eigenvalue() {
        let m = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(1.5, 0.0),
            C64::new(-0.5, 0.0),
        ]));
        assert!(matches!(
            DensityMatrix::new(m),
            Err(Error::NegativeEigenvalue(_))
        ));
    }

    #[test]
    fn accepts_maximally_mixed() {
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
    }

    #[test]
    fn eigenvalues_descending() {
        let m = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(0.2, 0.0),
            C64::new(0.7, 0.0),
            C64::new(0.1, 0.0),
        ]));
        let ev = hermitian_eigenvalues(&m);
        assert!(ev.windows(2).all(|w| w[0] >= w[1]));
        assert!((ev[0] - 0.7).abs() < 1e-15);
    }
}
