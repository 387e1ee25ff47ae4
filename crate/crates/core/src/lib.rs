//! Simulation of chained quantum-Zeno counterfactual communication in a
//! single-photon modal picture.
//!
//! * [`modal`]: state vectors over `[A, B, C, L1..LK]` and two-mode unitaries.
//! * [`protocol`]: the step sequence, its evolution, closed-form outcome
//!   probabilities and Alice's postselected qubit.
//! * [`histories`]: sum-over-paths oracle and the C-visiting decomposition
//!   used to check counterfactuality of each outcome.
//! * [`chip`]: compilation onto a nearest-neighbour MZI mesh, equivalence
//!   checking and simulated tomography.

pub mod chip;
pub mod error;
pub mod histories;
pub mod modal;
pub mod protocol;
pub mod qubit;

pub use error::{Error, Result};
pub use modal::{Mode, ModeBasis, PureState, UnitaryOp};
pub use protocol::{BobAction, OutcomeDistribution, ProtocolConfig};
