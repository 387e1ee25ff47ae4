//! The chained-Zeno counterfactual protocol as an ordered product of
//! two-mode unitaries acting on `|A>`.
//!
//! One run is: a rotation by `phi = pi/2 - delta` on `(A, B)`, then `K`
//! inner cycles, each a rotation by `theta = pi/(2K)` on `(B, C)`. Between
//! consecutive inner rotations Bob acts on `(C, Ln)` with a fresh loss mode
//! per cycle. The final inner rotation is not followed by Bob unless
//! `include_final_block` is set.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::modal::{self, cos_sin, Mode, ModeBasis, PureState, UnitaryOp};
use crate::qubit::QubitDensity;

/// What Bob does to mode `C` in each cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BobAction {
    /// Exact swap of `C` into the cycle's loss mode.
    Block,
    /// Identity; no interaction step is emitted.
    Pass,
    /// Rotation by `beta` on `(C, Ln)`; `beta = pi/4` is a 50:50 blocker.
    Splitter(f64),
}

impl BobAction {
    pub fn validate(&self) -> Result<()> {
        match *self {
            BobAction::Splitter(beta) if !(0.0..=FRAC_PI_2).contains(&beta) => Err(
                Error::InvalidConfig(format!("splitter angle {beta} outside [0, pi/2]")),
            ),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for BobAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BobAction::Block => f.write_str("block"),
            BobAction::Pass => f.write_str("pass"),
            BobAction::Splitter(beta) => write!(f, "split:{beta}"),
        }
    }
}

impl FromStr for BobAction {
    type Err = Error;

    /// Accepts `block`, `pass` and `split:<beta radians>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "block" => Ok(BobAction::Block),
            "pass" => Ok(BobAction::Pass),
            _ => s
                .strip_prefix("split:")
                .and_then(|b| b.parse::<f64>().ok())
                .filter(|b| b.is_finite())
                .map(BobAction::Splitter)
                .ok_or_else(|| Error::InvalidConfig(format!("unrecognized Bob action `{s}`"))),
        }
    }
}

impl Serialize for BobAction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Everything that determines one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProtocolConfig {
    #[serde(rename = "K")]
    k: usize,
    delta: f64,
    bob: BobAction,
    include_final_block: bool,
}

impl ProtocolConfig {
    pub fn new(k: usize, delta: f64, bob: BobAction) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidConfig("K must be at least 1".into()));
        }
        if !(0.0..FRAC_PI_2).contains(&delta) {
            return Err(Error::InvalidConfig(format!("delta {delta} outside [0, pi/2)")));
        }
        bob.validate()?;
        Ok(Self { k, delta, bob, include_final_block: false })
    }

    /// Also let Bob act after the K-th inner rotation.
    pub fn with_final_block(mut self, include: bool) -> Self {
        self.include_final_block = include;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn bob(&self) -> BobAction {
        self.bob
    }

    pub fn include_final_block(&self) -> bool {
        self.include_final_block
    }

    /// Outer rotation angle `pi/2 - delta`.
    pub fn phi(&self) -> f64 {
        FRAC_PI_2 - self.delta
    }

    /// Inner rotation angle `pi/(2K)`.
    pub fn theta(&self) -> f64 {
        PI / (2 * self.k) as f64
    }

    pub fn basis(&self) -> ModeBasis {
        ModeBasis::new(self.k).expect("K >= 1 is checked at construction")
    }
}

/// Single-shot detector statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeDistribution {
    #[serde(rename = "p_D0")]
    pub p_d0: f64,
    #[serde(rename = "p_D1")]
    pub p_d1: f64,
    #[serde(rename = "p_D3")]
    pub p_d3: f64,
    /// One entry per loss mode `L1..LK`.
    pub p_loss: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn from_state(state: &PureState) -> Self {
        let p = modal::mode_probabilities(state);
        Self { p_d0: p[0], p_d1: p[1], p_d3: p[2], p_loss: p[3..].to_vec() }
    }

    pub fn p_loss_total(&self) -> f64 {
        self.p_loss.iter().sum()
    }

    pub fn total(&self) -> f64 {
        self.p_d0 + self.p_d1 + self.p_d3 + self.p_loss_total()
    }

    /// Entries in basis order `[A, B, C, L1..LK]`.
    pub fn as_vec(&self) -> Vec<f64> {
        let mut v = vec![self.p_d0, self.p_d1, self.p_d3];
        v.extend_from_slice(&self.p_loss);
        v
    }

    /// Largest entrywise difference; distributions of different length never agree.
    pub fn max_abs_diff(&self, other: &OutcomeDistribution) -> f64 {
        if self.p_loss.len() != other.p_loss.len() {
            return f64::INFINITY;
        }
        self.as_vec()
            .iter()
            .zip(other.as_vec())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    OuterRotation,
    InnerRotation { cycle: usize },
    BobInteraction { cycle: usize },
}

/// The two-mode action behind a step, kept alongside its matrix so that
/// compilers can target it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepAction {
    Rotation { i: Mode, j: Mode, angle: f64 },
    Swap { i: Mode, j: Mode },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub kind: StepKind,
    pub action: StepAction,
    pub op: UnitaryOp,
}

/// Steps in temporal order: `steps[0]` acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSequence {
    pub basis: ModeBasis,
    pub steps: Vec<Step>,
}

impl StepSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Product of all steps, later steps on the left.
    pub fn unitary(&self) -> UnitaryOp {
        self.steps
            .iter()
            .fold(UnitaryOp::identity(self.basis.len()), |acc, s| {
                acc.then(&s.op).expect("steps share the sequence basis")
            })
    }
}

fn step(basis: ModeBasis, kind: StepKind, action: StepAction) -> Step {
    let op = match action {
        StepAction::Rotation { i, j, angle } => modal::rotation(basis, i, j, angle),
        StepAction::Swap { i, j } => modal::swap(basis, i, j),
    }
    .expect("protocol steps use distinct modes inside the basis");
    Step { kind, action, op }
}

pub fn build_steps(config: &ProtocolConfig) -> StepSequence {
    let basis = config.basis();
    let k = config.k;
    let mut steps = Vec::with_capacity(2 * k + 1);
    steps.push(step(
        basis,
        StepKind::OuterRotation,
        StepAction::Rotation { i: Mode::A, j: Mode::B, angle: config.phi() },
    ));
    for cycle in 1..=k {
        steps.push(step(
            basis,
            StepKind::InnerRotation { cycle },
            StepAction::Rotation { i: Mode::B, j: Mode::C, angle: config.theta() },
        ));
        if cycle == k && !config.include_final_block {
            break;
        }
        let loss = Mode::Loss(cycle);
        let action = match config.bob {
            BobAction::Pass => continue,
            BobAction::Block => StepAction::Swap { i: Mode::C, j: loss },
            BobAction::Splitter(beta) => StepAction::Rotation { i: Mode::C, j: loss, angle: beta },
        };
        steps.push(step(basis, StepKind::BobInteraction { cycle }, action));
    }
    StepSequence { basis, steps }
}

/// Evolves `|A>` through the protocol.
pub fn run(config: &ProtocolConfig) -> (PureState, OutcomeDistribution) {
    let seq = build_steps(config);
    let mut state = modal::basis_state(seq.basis, Mode::A).expect("A is always in the basis");
    for s in &seq.steps {
        state = modal::apply(&s.op, &state).expect("steps share the sequence basis");
    }
    let dist = OutcomeDistribution::from_state(&state);
    (state, dist)
}

/// Analytic outcome probabilities for `Block` and `Pass` without the final block.
pub fn closed_form(config: &ProtocolConfig) -> Result<OutcomeDistribution> {
    if config.include_final_block {
        return Err(Error::Unsupported("closed form assumes no block after the last cycle".into()));
    }
    let k = config.k;
    let (cos_phi, sin_phi) = cos_sin(config.phi());
    let (cos_th, sin_th) = cos_sin(config.theta());
    let (cphi2, sphi2) = (cos_phi * cos_phi, sin_phi * sin_phi);
    let (cth2, sth2) = (cos_th * cos_th, sin_th * sin_th);
    match config.bob {
        BobAction::Pass => Ok(OutcomeDistribution {
            p_d0: cphi2,
            p_d1: 0.0,
            p_d3: sphi2,
            p_loss: vec![0.0; k],
        }),
        BobAction::Block => {
            let mut p_loss: Vec<f64> =
                (1..k).map(|n| sphi2 * cth2.powi(n as i32 - 1) * sth2).collect();
            p_loss.push(0.0);
            Ok(OutcomeDistribution {
                p_d0: cphi2,
                p_d1: sphi2 * cth2.powi(k as i32),
                p_d3: sphi2 * cth2.powi(k as i32 - 1) * sth2,
                p_loss,
            })
        }
        BobAction::Splitter(_) => {
            Err(Error::Unsupported("no closed form for a splitter; use run".into()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub config: ProtocolConfig,
    pub distribution: OutcomeDistribution,
}

/// One row per `(K, delta)` pair, `K` outer and `delta` inner.
pub fn sweep(
    k_values: &[usize],
    delta_values: &[f64],
    bob: BobAction,
    include_final_block: bool,
) -> Result<Vec<SweepRow>> {
    if k_values.is_empty() || delta_values.is_empty() {
        return Err(Error::InvalidConfig("sweep needs at least one K and one delta".into()));
    }
    let mut rows = Vec::with_capacity(k_values.len() * delta_values.len());
    for &k in k_values {
        for &delta in delta_values {
            let config = ProtocolConfig::new(k, delta, bob)?.with_final_block(include_final_block);
            let (_, distribution) = run(&config);
            rows.push(SweepRow { config, distribution });
        }
    }
    Ok(rows)
}

/// Alice's qubit conditioned on the photon being in `{A, B}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedState {
    pub rho: QubitDensity,
    /// `|alpha_A|^2 + |alpha_B|^2`.
    pub p_ab: f64,
}

pub fn alice_reduced_state(final_state: &PureState) -> Result<ReducedState> {
    let a = final_state.amplitude(Mode::A)?;
    let b = final_state.amplitude(Mode::B)?;
    let p_ab = a.norm_sqr() + b.norm_sqr();
    let rho = QubitDensity::from_amplitudes(a, b).ok_or(Error::NoPostselection)?;
    Ok(ReducedState { rho, p_ab })
}
