//! Pauli tomography of Alice's `{A, B}` qubit at the mesh output.
//!
//! `Z` reads D0/D1 directly. `X` and `Y` first pass `(A, B)` through the
//! tomography MZI set as a 50:50 rotation, with external phase `0` or
//! `pi/2`, which turns the D0-minus-D1 readout into `sigma_X` or `sigma_Y`.
//! Shots landing anywhere else (D3 or a loss mode) are discarded.
//!
//! Randomness: basis `b` (0 = Z, 1 = X, 2 = Y) draws from
//! `ChaCha8Rng::seed_from_u64(seed)` switched to stream `b`, so each basis
//! is an independent, reproducible sub-stream and may be sampled in any
//! order or in parallel.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{canonical_layout, compile, internal_phase_for_rotation, mesh_unitary, MziSetting, Role};
use crate::error::{Error, Result};
use crate::protocol::{alice_reduced_state, run, ProtocolConfig};
use crate::qubit::QubitDensity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TomographyBasis {
    Z,
    X,
    Y,
}

impl TomographyBasis {
    pub const ALL: [TomographyBasis; 3] = [TomographyBasis::Z, TomographyBasis::X, TomographyBasis::Y];

    fn stream(self) -> u64 {
        match self {
            TomographyBasis::Z => 0,
            TomographyBasis::X => 1,
            TomographyBasis::Y => 2,
        }
    }
}

impl fmt::Display for TomographyBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Tomography MZI on `(A, B)` for a basis, or `None` for direct `Z` readout.
pub fn tomography_setting(basis: TomographyBasis) -> Option<MziSetting> {
    let theta = internal_phase_for_rotation(FRAC_PI_4);
    match basis {
        TomographyBasis::Z => None,
        TomographyBasis::X => Some(MziSetting::new(0, theta, 0.0, Role::Tomography)),
        TomographyBasis::Y => Some(MziSetting::new(0, theta, FRAC_PI_2, Role::Tomography)),
    }
}

/// Counts at `[D0, D1]` for each basis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BasisCounts {
    #[serde(rename = "X")]
    pub x: [u64; 2],
    #[serde(rename = "Y")]
    pub y: [u64; 2],
    #[serde(rename = "Z")]
    pub z: [u64; 2],
}

impl BasisCounts {
    fn slot(&mut self, basis: TomographyBasis) -> &mut [u64; 2] {
        match basis {
            TomographyBasis::X => &mut self.x,
            TomographyBasis::Y => &mut self.y,
            TomographyBasis::Z => &mut self.z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TomographyResult {
    /// Shots per basis; `0` means analytic expectations.
    pub shots: u64,
    pub counts: BasisCounts,
    /// `(<X>, <Y>, <Z>)` from the postselected data.
    pub expectations: [f64; 3],
    pub reconstructed_rho: QubitDensity,
    pub exact_rho: QubitDensity,
    pub trace_distance: f64,
    pub postselected_fraction: f64,
}

/// Output-mode probabilities of the compiled mesh (plus tomography MZI) on `|A>`.
fn detector_probabilities(config: &ProtocolConfig, basis: TomographyBasis) -> Result<Vec<f64>> {
    let mut program = compile(config, &canonical_layout(config.k())?)?;
    if let Some(m) = tomography_setting(basis) {
        program.push_column(vec![m]);
    }
    let u = mesh_unitary(&program)?;
    Ok((0..u.dim()).map(|r| u.entry(r, 0).norm_sqr()).collect())
}

pub fn simulate_tomography(
    config: &ProtocolConfig,
    shots_per_basis: u64,
    seed: u64,
) -> Result<TomographyResult> {
    let (final_state, _) = run(config);
    let exact = alice_reduced_state(&final_state)?;

    let mut counts = BasisCounts::default();
    let mut expectations = [0.0; 3];
    let mut kept = 0.0;
    for basis in TomographyBasis::ALL {
        let probs = detector_probabilities(config, basis)?;
        let (plus, minus) = if shots_per_basis == 0 {
            (probs[0], probs[1])
        } else {
            let hits = sample(&probs, shots_per_basis, seed, basis.stream())?;
            *counts.slot(basis) = hits;
            (hits[0] as f64, hits[1] as f64)
        };
        let total = plus + minus;
        if total == 0.0 {
            return Err(Error::InsufficientStatistics(basis.to_string()));
        }
        kept += total;
        let slot = match basis {
            TomographyBasis::X => 0,
            TomographyBasis::Y => 1,
            TomographyBasis::Z => 2,
        };
        expectations[slot] = (plus - minus) / total;
    }
    let postselected_fraction = if shots_per_basis == 0 {
        kept / 3.0
    } else {
        kept / (3.0 * shots_per_basis as f64)
    };

    let reconstructed = QubitDensity::from_bloch(expectations).project_physical();
    Ok(TomographyResult {
        shots: shots_per_basis,
        counts,
        expectations,
        reconstructed_rho: reconstructed,
        exact_rho: exact.rho,
        trace_distance: reconstructed.trace_distance(&exact.rho),
        postselected_fraction,
    })
}

/// Samples `shots` photons over all output modes; returns hits on `[A, B]`.
fn sample(probs: &[f64], shots: u64, seed: u64, stream: u64) -> Result<[u64; 2]> {
    let dist = WeightedIndex::new(probs)
        .map_err(|e| Error::InvalidConfig(format!("bad outcome weights: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut hits = [0u64; 2];
    for _ in 0..shots {
        match dist.sample(&mut rng) {
            0 => hits[0] += 1,
            1 => hits[1] += 1,
            _ => {}
        }
    }
    Ok(hits)
}
