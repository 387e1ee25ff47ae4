//! Structured compilation of the protocol onto the mesh.
//!
//! Every MZI factorizes as `i e^{i theta/2} R(angle) diag(e^{i phi}, -1)`.
//! The compiler tracks a phase frame per logical mode (mesh so far equals
//! `frames * modal so far * input phases^-1`) and picks the external phase
//! `phi` so that the diagonal factor is a scalar on the two incoming frames.
//! The rotation then acts exactly as in the modal layer and both outputs
//! share one frame.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::{internal_phase_for_rotation, MeshProgram, MziSetting, Role};
use crate::error::{Error, Result};
use crate::modal::{Mode, ModeBasis};
use crate::protocol::{build_steps, BobAction, ProtocolConfig, StepAction, StepKind};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CompileOptions {
    /// With `Pass`, still emit router chains and a blocker tuned to zero
    /// for every Bob stage, as the physical chip would.
    pub force_bob_stage: bool,
}

/// `[A, B, C, L1, .., LK]`, the only layout the compiler accepts.
pub fn canonical_layout(k: usize) -> Result<Vec<Mode>> {
    Ok(ModeBasis::new(k)?.labels())
}

pub fn compile(config: &ProtocolConfig, layout: &[Mode]) -> Result<MeshProgram> {
    compile_with(config, layout, CompileOptions::default())
}

pub fn compile_with(
    config: &ProtocolConfig,
    layout: &[Mode],
    options: CompileOptions,
) -> Result<MeshProgram> {
    let expected = canonical_layout(config.k())?;
    if layout != expected.as_slice() {
        return Err(Error::Layout(format!(
            "expected A,B,C adjacent followed by L1..L{} in order",
            config.k()
        )));
    }
    let target = match (config.bob(), options.force_bob_stage) {
        (BobAction::Pass, true) => ProtocolConfig::new(config.k(), config.delta(), BobAction::Splitter(0.0))?
            .with_final_block(config.include_final_block()),
        _ => *config,
    };

    let dim = layout.len();
    let first = Emitter::run(&target, vec![Complex64::new(1.0, 0.0); dim]);
    // Give the input mode that seeds B's final frame the phase that lines it
    // up with A's frame, so Alice's qubit leaves the mesh with a common phase.
    let (fa, fb) = (first.frames[0], first.frames[1]);
    if fa.source == fb.source {
        return Ok(first.program);
    }
    let mut input = vec![Complex64::new(1.0, 0.0); dim];
    input[fb.source] = fa.phase / fb.phase;
    Ok(Emitter::run(&target, input).program)
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    phase: Complex64,
    /// Input mode whose phase this frame is proportional to.
    source: usize,
}

struct Emitter {
    program: MeshProgram,
    /// Indexed by logical mode.
    frames: Vec<Frame>,
    /// Logical mode at each physical position.
    occupant: Vec<usize>,
}

impl Emitter {
    fn run(config: &ProtocolConfig, input_phases: Vec<Complex64>) -> Self {
        let dim = input_phases.len();
        let mut e = Emitter {
            program: MeshProgram::new(dim),
            frames: input_phases
                .into_iter()
                .enumerate()
                .map(|(source, phase)| Frame { phase, source })
                .collect(),
            occupant: (0..dim).collect(),
        };
        let basis = config.basis();
        let idx = |m: Mode| basis.index(m).expect("protocol modes are in the basis");
        for step in build_steps(config).steps {
            let (i, j, angle) = match step.action {
                StepAction::Rotation { i, j, angle } => (i, j, angle),
                // realized as a full rotation into the loss mode
                StepAction::Swap { i, j } => (i, j, FRAC_PI_2),
            };
            match step.kind {
                StepKind::OuterRotation => e.rotation(idx(i), angle, Role::OuterRotation),
                StepKind::InnerRotation { .. } => e.rotation(idx(i), angle, Role::InnerRotation),
                StepKind::BobInteraction { .. } => {
                    let c = idx(i);
                    let home = idx(j);
                    for p in (c + 1..home).rev() {
                        e.router(p);
                    }
                    e.rotation(c, angle, Role::Blocker);
                    for p in c + 1..home {
                        e.router(p);
                    }
                }
            }
        }
        debug_assert!(e.occupant.iter().enumerate().all(|(p, &m)| p == m));
        e
    }

    fn rotation(&mut self, p: usize, angle: f64, role: Role) {
        let (x, y) = (self.occupant[p], self.occupant[p + 1]);
        let theta = internal_phase_for_rotation(angle);
        let (fx, fy) = (self.frames[x], self.frames[y]);
        let phi = (-fy.phase / fx.phase).arg();
        let out = Frame { phase: -gain(theta) * fy.phase, source: fy.source };
        self.frames[x] = out;
        self.frames[y] = out;
        self.program.push_column(vec![MziSetting::new(p, theta, phi, role)]);
    }

    /// Cross-state MZI exchanging the occupants of `p` and `p + 1`.
    fn router(&mut self, p: usize) {
        let (x, y) = (self.occupant[p], self.occupant[p + 1]);
        let g = gain(0.0);
        self.frames[x].phase *= g;
        self.frames[y].phase *= g;
        self.occupant.swap(p, p + 1);
        self.program.push_column(vec![MziSetting::new(p, 0.0, 0.0, Role::Router)]);
    }
}

/// Common prefactor `i e^{i theta/2}` of an MZI transfer matrix.
fn gain(theta: f64) -> Complex64 {
    Complex64::new(0.0, 1.0) * Complex64::from_polar(1.0, theta / 2.0)
}
