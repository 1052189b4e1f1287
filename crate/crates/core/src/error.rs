//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for {n} p-bits")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("duplicate weight entry ({i}, {j})")]
    DuplicateWeight { i: usize, j: usize },

    #[error("symmetric flag set but w[{i}][{j}] = {w_ij} while w[{j}][{i}] = {w_ji}")]
    AsymmetricWeight {
        i: usize,
        j: usize,
        w_ij: f64,
        w_ji: f64,
    },

    #[error("diagonal weight entry at index {i} is not allowed in a symmetric network")]
    DiagonalWeight { i: usize },

    #[error("clamp value {value} at index {index} must be -1 or +1")]
    BadClampValue { index: usize, value: i8 },

    #[error("duplicate clamp for index {index}")]
    DuplicateClamp { index: usize },

    #[error("bias vector has length {got}, expected {expected}")]
    BiasLength { expected: usize, got: usize },

    #[error("network must have at least one p-bit")]
    EmptyNetwork,

    #[error("operation requires a symmetric network")]
    NotSymmetric,

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("{n} bits exceeds the supported limit of {max}")]
    TooManyBits { n: usize, max: usize },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("vector length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("model probability is zero at config {index} where the empirical probability is positive")]
    ZeroModelProbability { index: usize },

    #[error("order is not a valid permutation of distinct in-range indices")]
    NotAPermutation,

    #[error("weight entry from parent {parent} to child {child} violates the given topological order")]
    NotTopological { child: usize, parent: usize },

    #[error("correlation window {window} exceeds trace length {len}")]
    WindowTooLarge { window: usize, len: usize },

    #[error("family tree contains a cycle")]
    CycleDetected,

    #[error("node {child} has more than two parents")]
    TooManyParents { child: String },

    #[error("unknown bit name: {0}")]
    UnknownBit(String),

    #[error("bit {0} must be assigned in this mode")]
    MissingBit(String),

    #[error("bit {0} is not an output of this gate")]
    NotAnOutput(String),

    #[error("bit name {0} appears in multiple gates without being declared shared")]
    NameCollision(String),

    #[error("truth table invalid: {0}")]
    BadTruthTable(String),

    #[error("synthesis missed its probability targets after {iters} iterations: row masses {masses:?}")]
    SynthesisTargets { iters: usize, masses: Vec<f64> },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("transverse field is zero but {n_replicas} replicas were requested; use one replica for a classical model")]
    ZeroGammaReplicas { n_replicas: usize },

    #[error("invalid transverse-field schedule: {0}")]
    BadGammaSchedule(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("transfer table must be strictly monotone")]
    NonMonotoneTable,

    #[error("parse error: {0}")]
    Parse(String),
}
