//! 2x2 density matrices for Alice's `{A, B}` qubit.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

/// Density matrix over the ordered basis `(|A>, |B>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDensity(pub Matrix2<Complex64>);

/// Bloch components `(<X>, <Y>, <Z>)` with `|A> = |0>` as the `+Z` state.
pub type Bloch = [f64; 3];

impl QubitDensity {
    /// `v v^dagger / |v|^2`.
    pub fn from_amplitudes(a: Complex64, b: Complex64) -> Option<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if norm == 0.0 {
            return None;
        }
        let m = Matrix2::new(
            a * a.conj(),
            a * b.conj(),
            b * a.conj(),
            b * b.conj(),
        ) / Complex64::new(norm, 0.0);
        Some(Self(m))
    }

    /// `(I + x X + y Y + z Z) / 2`.
    pub fn from_bloch([x, y, z]: Bloch) -> Self {
        Self(Matrix2::new(
            Complex64::new((1.0 + z) / 2.0, 0.0),
            Complex64::new(x / 2.0, -y / 2.0),
            Complex64::new(x / 2.0, y / 2.0),
            Complex64::new((1.0 - z) / 2.0, 0.0),
        ))
    }

    pub fn bloch(&self) -> Bloch {
        let m = &self.0;
        let off = m[(1, 0)] + m[(0, 1)].conj();
        [off.re, off.im, (m[(0, 0)] - m[(1, 1)]).re]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[(0, 0)] + self.0[(1, 1)]
    }

    /// Eigenvalues in ascending order, from the Hermitian part.
    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_eigenvalues(&self.0)
    }

    /// Nearest positive-semidefinite, unit-trace matrix: eigenvalues below
    /// zero are clipped and the trace is renormalized.
    pub fn project_physical(&self) -> Self {
        let eig = hermitian_eigenvalues(&self.0);
        if eig[0] >= 0.0 {
            let t = eig[0] + eig[1];
            return Self(self.0 / Complex64::new(t, 0.0));
        }
        // Only the top eigenvector survives; for a qubit that is the pure
        // state along the Bloch direction of the traceless part.
        let [x, y, z] = self.bloch();
        let r = (x * x + y * y + z * z).sqrt();
        if r == 0.0 {
            return Self::from_bloch([0.0, 0.0, 0.0]);
        }
        Self::from_bloch([x / r, y / r, z / r])
    }

    /// `||rho - sigma||_1 / 2`.
    pub fn trace_distance(&self, other: &QubitDensity) -> f64 {
        let eig = hermitian_eigenvalues(&(self.0 - other.0));
        0.5 * (eig[0].abs() + eig[1].abs())
    }
}

fn hermitian_eigenvalues(m: &Matrix2<Complex64>) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - half_gap, mean + half_gap]
}

impl Serialize for QubitDensity {
    /// Row-major `[[[re, im], [re, im]], [[re, im], [re, im]]]`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut rows = serializer.serialize_seq(Some(2))?;
        for r in 0..2 {
            let row = [
                [self.0[(r, 0)].re, self.0[(r, 0)].im],
                [self.0[(r, 1)].re, self.0[(r, 1)].im],
            ];
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}
