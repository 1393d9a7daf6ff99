use thiserror::Error;

use crate::graph::Edge;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("site {site} out of range 1..={n_sites}")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("register {register} out of range 0..={n_aux}")]
    RegisterOutOfRange { register: usize, n_aux: usize },

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("edge set is not a matching: vertex {0} is covered twice")]
    NotAMatching(usize),

    #[error("edge {0} has no stabilizer in the layer assignment")]
    MissingStabilizer(Edge),

    #[error("layout provides {available} auxiliary registers but the assignment needs {required}")]
    TooFewRegisters { available: usize, required: usize },

    #[error("hyperedge {0:?} has repeated or out-of-range indices")]
    InvalidHyperedge([usize; 4]),

    #[error("operator is not Hermitian: {0}")]
    NonHermitian(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("rejection budget of {0} attempts exhausted")]
    RejectionBudget(usize),

    #[error("terms {first} and {second} overlap inside layer {layer}")]
    LayerOverlap { layer: usize, first: usize, second: usize },

    #[error("{qubits} qubits exceeds the cap of {cap}")]
    CapExceeded { qubits: usize, cap: usize },

    #[error("state has {actual} qubits, expected {expected}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state norm collapsed to {0:e} while applying {1}")]
    DegenerateState(f64, String),

    #[error("qubit {qubit} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
