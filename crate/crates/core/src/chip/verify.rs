use std::cmp::Ordering;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modal::UnitaryOp;
use crate::protocol::{build_steps, ProtocolConfig};

/// Entries of the modal unitary below this modulus carry no usable phase.
const PHASE_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// `max |D_out U_mesh D_in - U_modal|`.
    pub residual: f64,
    pub tol: f64,
    /// Output phases (radians), one per mode; entries for A and B are equal.
    pub output_phases: Vec<f64>,
    pub input_phases: Vec<f64>,
}

/// Fits diagonal phases `D_out`, `D_in` (with equal A/B output phases) so
/// that `D_out U_mesh D_in` matches the modal unitary of `config`.
///
/// Phase constraints `a_row + b_col = arg(U_modal / U_mesh)` are collected
/// from the largest modal entries first into a spanning forest; the
/// residual over all entries then decides equivalence.
pub fn verify(mesh: &UnitaryOp, config: &ProtocolConfig, tol: f64) -> Result<EquivalenceReport> {
    let modal = build_steps(config).unitary();
    let n = modal.dim();
    if mesh.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: mesh.dim() });
    }

    // nodes 0..n are output rows (row B shares A's node), n..2n input columns
    let row_node = |r: usize| if r == 1 { 0 } else { r };
    let mut edges: Vec<(f64, usize, usize)> = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let w = modal.entry(r, c).norm();
            if w > PHASE_FLOOR && mesh.entry(r, c).norm() > PHASE_FLOOR {
                edges.push((w, r, c));
            }
        }
    }
    edges.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));

    // potential[u] - potential[v] = offset along each merge; a_r = pot(row),
    // b_c = -pot(col)
    let mut forest = PotentialForest::new(2 * n);
    for &(_, r, c) in &edges {
        let target = (modal.entry(r, c) / mesh.entry(r, c)).arg();
        forest.union(row_node(r), n + c, target);
    }
    let output_phases: Vec<f64> = (0..n).map(|r| forest.potential(row_node(r))).collect();
    let input_phases: Vec<f64> = (0..n).map(|c| -forest.potential(n + c)).collect();

    let mut residual = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let fitted = Complex64::from_polar(1.0, output_phases[r] + input_phases[c])
                * mesh.entry(r, c);
            residual = residual.max((fitted - modal.entry(r, c)).norm());
        }
    }
    Ok(EquivalenceReport {
        equivalent: residual <= tol,
        residual,
        tol,
        output_phases: output_phases.into_iter().map(wrap).collect(),
        input_phases: input_phases.into_iter().map(wrap).collect(),
    })
}

fn wrap(x: f64) -> f64 {
    let w = x.rem_euclid(std::f64::consts::TAU);
    if w > std::f64::consts::PI {
        w - std::f64::consts::TAU
    } else {
        w
    }
}

/// Union-find carrying a phase potential relative to each node's root.
struct PotentialForest {
    parent: Vec<usize>,
    offset: Vec<f64>,
}

impl PotentialForest {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect(), offset: vec![0.0; n] }
    }

    /// Root of `u` and `potential(u) - potential(root)`.
    fn find(&mut self, u: usize) -> (usize, f64) {
        let p = self.parent[u];
        if p == u {
            return (u, 0.0);
        }
        let (root, d) = self.find(p);
        self.parent[u] = root;
        self.offset[u] += d;
        (root, self.offset[u])
    }

    /// Imposes `potential(u) - potential(v) = diff` unless already connected.
    fn union(&mut self, u: usize, v: usize, diff: f64) {
        let (ru, du) = self.find(u);
        let (rv, dv) = self.find(v);
        if ru != rv {
            self.parent[ru] = rv;
            self.offset[ru] = diff - du + dv;
        }
    }

    /// Potential with every root pinned at zero.
    fn potential(&mut self, u: usize) -> f64 {
        self.find(u).1
    }
}
