//! Programmable nearest-neighbour MZI mesh: layout, compilation of the
//! protocol, equivalence checking against the modal evolution, and
//! tomography of Alice's output qubit.

mod compile;
mod mzi;
mod tomography;
mod verify;

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modal::UnitaryOp;

pub use compile::{canonical_layout, compile, compile_with, CompileOptions};
pub use mzi::{coupler, internal_phase_for_rotation, mzi_transfer, phase_shifter};
pub use tomography::{
    simulate_tomography, tomography_setting, BasisCounts, TomographyBasis, TomographyResult,
};
pub use verify::{verify, EquivalenceReport};

/// What an MZI is doing in the compiled program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Identity,
    OuterRotation,
    InnerRotation,
    Blocker,
    Router,
    Tomography,
}

/// One MZI acting on the adjacent modes `pair = [p, p + 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MziSetting {
    pub pair: [usize; 2],
    /// Internal phase, radians.
    pub theta: f64,
    /// External phase, radians.
    pub phi: f64,
    pub role: Role,
}

impl MziSetting {
    /// Phases are wrapped into `[0, 2 pi)`.
    pub fn new(first_mode: usize, theta: f64, phi: f64, role: Role) -> Self {
        Self {
            pair: [first_mode, first_mode + 1],
            theta: theta.rem_euclid(TAU),
            phi: phi.rem_euclid(TAU),
            role,
        }
    }
}

/// Columns of MZIs applied left to right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshProgram {
    pub mode_count: usize,
    pub columns: Vec<Vec<MziSetting>>,
}

impl MeshProgram {
    pub fn new(mode_count: usize) -> Self {
        Self { mode_count, columns: Vec::new() }
    }

    pub fn push_column(&mut self, column: Vec<MziSetting>) {
        self.columns.push(column);
    }

    pub fn mzis(&self) -> impl Iterator<Item = &MziSetting> {
        self.columns.iter().flatten()
    }

    pub fn mzi_count(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn count_role(&self, role: Role) -> usize {
        self.mzis().filter(|m| m.role == role).count()
    }

    /// Checks adjacency, bounds, and disjointness within each column.
    pub fn validate(&self) -> Result<()> {
        for (c, column) in self.columns.iter().enumerate() {
            let mut used = vec![false; self.mode_count];
            for m in column {
                let [p, q] = m.pair;
                if q != p + 1 {
                    return Err(Error::Mesh(format!("column {c}: pair {p},{q} is not adjacent")));
                }
                if q >= self.mode_count {
                    return Err(Error::Mesh(format!(
                        "column {c}: pair {p},{q} outside {} modes",
                        self.mode_count
                    )));
                }
                if used[p] || used[q] {
                    return Err(Error::Mesh(format!("column {c}: overlapping MZIs on mode {p}")));
                }
                used[p] = true;
                used[q] = true;
            }
        }
        Ok(())
    }
}

/// Embeds every MZI and multiplies in column order.
pub fn mesh_unitary(program: &MeshProgram) -> Result<UnitaryOp> {
    program.validate()?;
    let n = program.mode_count;
    let mut u: DMatrix<Complex64> = DMatrix::identity(n, n);
    for m in program.mzis() {
        let t = mzi_transfer(m.theta, m.phi);
        let [p, q] = m.pair;
        for col in 0..n {
            let (up, uq) = (u[(p, col)], u[(q, col)]);
            u[(p, col)] = t[(0, 0)] * up + t[(0, 1)] * uq;
            u[(q, col)] = t[(1, 0)] * up + t[(1, 1)] * uq;
        }
    }
    Ok(UnitaryOp::from_matrix_unchecked(u))
}
