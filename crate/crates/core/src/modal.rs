//! Single-photon modal states and the two-mode unitaries acting on them.
//!
//! The photon lives in first quantization: a state is one complex amplitude
//! per mode, over the ordered basis `[A, B, C, L1, .., LK]`. Operators are
//! dense `M x M` complex matrices with `M = K + 3`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for identities that hold exactly in real arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A distinguishable channel the photon can occupy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Mode {
    /// Alice's input/output arm, read out by D0.
    A,
    /// Inner-interferometer arm that stays on Alice's side, read out by D1.
    B,
    /// Arm that goes to Bob, read out by D3.
    C,
    /// Loss mode of cycle `n` (1-based).
    Loss(usize),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::A => f.write_str("A"),
            Mode::B => f.write_str("B"),
            Mode::C => f.write_str("C"),
            Mode::Loss(n) => write!(f, "L{n}"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(Mode::A),
            "B" => Ok(Mode::B),
            "C" => Ok(Mode::C),
            _ => s
                .strip_prefix('L')
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .map(Mode::Loss)
                .ok_or_else(|| Error::UnknownMode(s.to_string())),
        }
    }
}

impl From<Mode> for String {
    fn from(m: Mode) -> Self {
        m.to_string()
    }
}

impl TryFrom<String> for Mode {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// The ordered mode basis `[A, B, C, L1, .., LK]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeBasis {
    loss_modes: usize,
}

impl ModeBasis {
    /// Basis with `k` loss modes. `k` must be at least 1.
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("a mode basis needs at least one loss mode".into()));
        }
        Ok(Self { loss_modes: k })
    }

    /// Number of loss modes.
    pub fn loss_modes(&self) -> usize {
        self.loss_modes
    }

    /// Total number of modes, `K + 3`.
    pub fn len(&self) -> usize {
        self.loss_modes + 3
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, mode: Mode) -> Result<usize> {
        match mode {
            Mode::A => Ok(0),
            Mode::B => Ok(1),
            Mode::C => Ok(2),
            Mode::Loss(n) if (1..=self.loss_modes).contains(&n) => Ok(2 + n),
            Mode::Loss(_) => Err(Error::UnknownMode(mode.to_string())),
        }
    }

    pub fn mode(&self, index: usize) -> Result<Mode> {
        match index {
            0 => Ok(Mode::A),
            1 => Ok(Mode::B),
            2 => Ok(Mode::C),
            i if i < self.len() => Ok(Mode::Loss(i - 2)),
            i => Err(Error::UnknownMode(format!("#{i}"))),
        }
    }

    pub fn labels(&self) -> Vec<Mode> {
        [Mode::A, Mode::B, Mode::C]
            .into_iter()
            .chain((1..=self.loss_modes).map(Mode::Loss))
            .collect()
    }

    /// Resolves a textual label such as `"B"` or `"L3"`.
    pub fn parse_mode(&self, label: &str) -> Result<Mode> {
        let mode: Mode = label.parse()?;
        self.index(mode)?;
        Ok(mode)
    }
}

/// Normalized single-photon state.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    basis: ModeBasis,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Builds a state from explicit amplitudes, checking length and norm.
    pub fn from_amplitudes(basis: ModeBasis, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: amplitudes.len() });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(Self { basis, amplitudes: DVector::from_vec(amplitudes) })
    }

    pub fn basis(&self) -> ModeBasis {
        self.basis
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, mode: Mode) -> Result<Complex64> {
        Ok(self.amplitudes[self.basis.index(mode)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// A unitary acting on all `M` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    matrix: DMatrix<Complex64>,
}

impl UnitaryOp {
    pub fn identity(dim: usize) -> Self {
        Self { matrix: DMatrix::identity(dim, dim) }
    }

    /// Wraps a square matrix, rejecting it unless `U^dagger U = I` within [`EXACT_TOL`].
    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let op = Self { matrix };
        let dev = op.unitarity_error();
        if dev > EXACT_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(op)
    }

    pub(crate) fn from_matrix_unchecked(matrix: DMatrix<Complex64>) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |(U^dagger U - I)_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        let gram = self.matrix.adjoint() * &self.matrix;
        max_abs_diff(&gram, &DMatrix::identity(n, n))
    }

    /// The operator that applies `self` first and then `next`.
    pub fn then(&self, next: &UnitaryOp) -> Result<UnitaryOp> {
        if next.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: next.dim() });
        }
        Ok(Self { matrix: &next.matrix * &self.matrix })
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `(cos, sin)` that is exact at integer multiples of a quarter turn.
///
/// `cos(FRAC_PI_2)` evaluates to `6.1e-17` in floating point; snapping keeps
/// fully-closed couplings exactly zero so path pruning sees them.
pub fn cos_sin(angle: f64) -> (f64, f64) {
    let quarters = angle / FRAC_PI_2;
    if quarters.fract() == 0.0 && quarters * FRAC_PI_2 == angle && quarters.abs() < 1e9 {
        return match (quarters as i64).rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
    }
    (angle.cos(), angle.sin())
}

/// `|mode>` with unit amplitude.
pub fn basis_state(basis: ModeBasis, mode: Mode) -> Result<PureState> {
    let idx = basis.index(mode)?;
    let mut amplitudes = DVector::from_element(basis.len(), ZERO);
    amplitudes[idx] = ONE;
    Ok(PureState { basis, amplitudes })
}

fn distinct_indices(basis: ModeBasis, i: Mode, j: Mode) -> Result<(usize, usize)> {
    if i == j {
        return Err(Error::SameMode(i.to_string()));
    }
    Ok((basis.index(i)?, basis.index(j)?))
}

/// Real rotation in the `(i, j)` plane:
/// `U|i> = cos a |i> + sin a |j>`, `U|j> = -sin a |i> + cos a |j>`.
pub fn rotation(basis: ModeBasis, i: Mode, j: Mode, angle: f64) -> Result<UnitaryOp> {
    let (ii, jj) = distinct_indices(basis, i, j)?;
    let (c, s) = cos_sin(angle);
    let mut m = DMatrix::identity(basis.len(), basis.len());
    m[(ii, ii)] = Complex64::new(c, 0.0);
    m[(jj, ii)] = Complex64::new(s, 0.0);
    m[(ii, jj)] = Complex64::new(-s, 0.0);
    m[(jj, jj)] = Complex64::new(c, 0.0);
    Ok(UnitaryOp { matrix: m })
}

/// Exact exchange `|j><i| + |i><j| + 1_rest`, no sign.
pub fn swap(basis: ModeBasis, i: Mode, j: Mode) -> Result<UnitaryOp> {
    let (ii, jj) = distinct_indices(basis, i, j)?;
    let mut m = DMatrix::identity(basis.len(), basis.len());
    m[(ii, ii)] = ZERO;
    m[(jj, jj)] = ZERO;
    m[(jj, ii)] = ONE;
    m[(ii, jj)] = ONE;
    Ok(UnitaryOp { matrix: m })
}

pub fn apply(op: &UnitaryOp, state: &PureState) -> Result<PureState> {
    if op.dim() != state.basis.len() {
        return Err(Error::DimensionMismatch { expected: state.basis.len(), found: op.dim() });
    }
    Ok(PureState { basis: state.basis, amplitudes: &op.matrix * &state.amplitudes })
}

/// Born-rule readout, one probability per mode in basis order.
pub fn mode_probabilities(state: &PureState) -> Vec<f64> {
    state.amplitudes.iter().map(|a| a.norm_sqr()).collect()
}
