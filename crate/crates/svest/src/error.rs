//! Crate-wide error type.

use crate::machine::{StateId, SymbolId, Transition};

/// Errors produced by machine construction, estimation, decomposition and
/// geometry operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A symbol was used that is not part of the machine's alphabet.
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(SymbolId),

    /// A state was referenced that is not declared by the machine.
    #[error("unknown state `{0}`")]
    UnknownState(StateId),

    /// A declared name (state or symbol) is empty or duplicated.
    #[error("invalid declaration: {0}")]
    InvalidDeclaration(String),

    /// A machine definition references undeclared states or symbols.
    #[error("dangling reference: {0}")]
    DanglingReference(String),

    /// A state has no outgoing transition, so the machine can halt.
    #[error("state `{0}` has no outgoing transition")]
    BlockingState(StateId),

    /// The initial state set is empty or references undeclared states.
    #[error("invalid initial state set: {0}")]
    InvalidInitialSet(String),

    /// A signal string must contain at least one symbol.
    #[error("signal strings must contain at least one symbol")]
    EmptySignal,

    /// An argument was outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An exhaustive enumeration would exceed the configured budget.
    #[error("enumeration budget exceeded: {reached} items reached with budget {budget}")]
    BudgetExceeded { budget: usize, reached: usize },

    /// Aggregation functions in one suite must share their domain alphabet.
    #[error("mismatched alphabets: {0}")]
    MismatchedAlphabets(String),

    /// No partition of the alphabet into non-deterministic chains exists.
    #[error("machine is not chain-decomposable: symbol `{symbol}` maps two sources onto one target ({first} and {second})")]
    NotChainDecomposable {
        symbol: SymbolId,
        first: Transition,
        second: Transition,
    },

    /// A linear map with zero determinant cannot be used as a state update.
    #[error("singular matrix: determinant is zero")]
    SingularMatrix,

    /// A vertex chain does not describe a convex polygon.
    #[error("vertex chain is not convex")]
    NotConvex,

    /// Malformed textual input (symbol tokens, trace files, JSON payloads).
    #[error("parse error: {0}")]
    Parse(String),

    /// A simulated trajectory left the modelled operating range.
    #[error("trajectory left the operating range at step {step}")]
    OutOfRange { step: usize },
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
