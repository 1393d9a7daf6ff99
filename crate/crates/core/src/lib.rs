//! Auxiliary-fermion stabilizer encoding for sparse, non-local fermion models.
//!
//! The crate is layered bottom-up:
//!
//! - [`pauli`]: exact algebra of phased Pauli strings.
//! - [`fermion`]: Jordan-Wigner images of physical and auxiliary modes.
//! - [`graph`]: interaction graphs, edge coloring, orientation and stabilizers.
//! - [`encoder`]: stabilizer-multiplied Hamiltonian terms grouped into color layers.
//! - [`circuit`]: gate schedules, depth accounting and resource reports.
//! - [`sim`]: dense statevector oracle used for every verification.
//! - [`models`]: deterministic instance generators and the model file format.
//!
//! Qubit `q` of a [`sim::StateVector`] is bit `q` of the basis index. The
//! all-zeros basis state is the reference state: every Jordan-Wigner string
//! evaluates to `+1` on it and the number operator `(1 + Z)/2` evaluates to 1,
//! so computational `|0>` marks an occupied mode.

pub mod circuit;
pub mod encoder;
pub mod error;
pub mod fermion;
pub mod format;
pub mod graph;
pub mod models;
pub mod pauli;
pub mod sim;

pub use error::{Error, Result};
pub use fermion::{MajoranaKind, MajoranaLabel, ModeLayout};
pub use graph::{Edge, InteractionGraph, InteractionHypergraph, LayerAssignment};
pub use pauli::{Letter, PauliSum, PauliTerm, Phase};
