//! Feynman path histories through the protocol's step sequence.
//!
//! A history is a choice of mode at every time slice; its amplitude is the
//! product of the single matrix entries it traverses. Summing the histories
//! that end in a mode reproduces that mode's amplitude in the evolved state,
//! which gives an oracle independent of the matrix-vector route. Splitting
//! that sum by whether a history ever sits in `C` measures how much of an
//! outcome could have passed through Bob's channel.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modal::Mode;
use crate::protocol::{build_steps, ProtocolConfig, StepSequence};

/// Largest `K` accepted for explicit enumeration.
pub const MAX_ENUMERATION_K: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct History {
    /// Initial mode followed by the mode after each step.
    pub path: Vec<Mode>,
    pub amplitude: Complex64,
}

impl History {
    pub fn end(&self) -> Mode {
        *self.path.last().expect("a history has at least its initial slice")
    }

    pub fn visits(&self, mode: Mode) -> bool {
        self.path.contains(&mode)
    }
}

/// Nonzero transitions out of each input mode, per step.
type Transitions = Vec<Vec<Vec<(usize, Complex64)>>>;

fn transitions(seq: &StepSequence, prune: bool) -> Transitions {
    let dim = seq.basis.len();
    seq.steps
        .iter()
        .map(|s| {
            (0..dim)
                .map(|from| {
                    (0..dim)
                        .map(|to| (to, s.op.entry(to, from)))
                        // exact zeros only
                        .filter(|(_, a)| !prune || *a != Complex64::new(0.0, 0.0))
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Depth-first enumeration from mode `A`, emitting histories in a fixed
/// order (lower-indexed successor first).
pub(crate) fn enumerate_sequence(seq: &StepSequence, prune: bool) -> Vec<History> {
    let table = transitions(seq, prune);
    let labels = seq.basis.labels();
    let mut out = Vec::new();
    let mut path = vec![0usize];
    walk(&table, &labels, &mut path, Complex64::new(1.0, 0.0), &mut out);
    out
}

fn walk(
    table: &Transitions,
    labels: &[Mode],
    path: &mut Vec<usize>,
    amplitude: Complex64,
    out: &mut Vec<History>,
) {
    let t = path.len() - 1;
    if t == table.len() {
        out.push(History { path: path.iter().map(|&i| labels[i]).collect(), amplitude });
        return;
    }
    let here = path[t];
    for &(next, entry) in &table[t][here] {
        path.push(next);
        walk(table, labels, path, amplitude * entry, out);
        path.pop();
    }
}

fn check_bound(config: &ProtocolConfig) -> Result<()> {
    if config.k() > MAX_ENUMERATION_K {
        return Err(Error::EnumerationBound { k: config.k(), max: MAX_ENUMERATION_K });
    }
    Ok(())
}

/// Every history with a nonzero amplitude, each exactly once.
pub fn enumerate(config: &ProtocolConfig) -> Result<Vec<History>> {
    check_bound(config)?;
    Ok(enumerate_sequence(&build_steps(config), true))
}

/// Sum of the amplitudes of histories ending in `outcome`, in list order.
pub fn amplitude_by_paths(histories: &[History], outcome: Mode) -> Complex64 {
    histories
        .iter()
        .filter(|h| h.end() == outcome)
        .map(|h| h.amplitude)
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterfactualityReport {
    pub outcome_mode: Mode,
    pub total_amplitude: Complex64,
    pub total_paths: usize,
    pub c_visiting_amplitude: Complex64,
    pub c_visiting_paths: usize,
    /// True when no history reaching the outcome ever occupied `C`.
    pub verdict: bool,
}

pub fn counterfactuality_report(
    config: &ProtocolConfig,
    outcome: Mode,
) -> Result<CounterfactualityReport> {
    config.basis().index(outcome)?;
    let histories = enumerate(config)?;
    let ending: Vec<&History> = histories.iter().filter(|h| h.end() == outcome).collect();
    let total_amplitude = ending.iter().map(|h| h.amplitude).sum();
    let via_c: Vec<&&History> = ending.iter().filter(|h| h.visits(Mode::C)).collect();
    let c_visiting_amplitude = via_c.iter().map(|h| h.amplitude).sum();
    Ok(CounterfactualityReport {
        outcome_mode: outcome,
        total_amplitude,
        total_paths: ending.len(),
        c_visiting_amplitude,
        c_visiting_paths: via_c.len(),
        verdict: via_c.is_empty(),
    })
}
