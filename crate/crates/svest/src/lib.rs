//! Set-valued state estimation for finite and hybrid state machines.
//!
//! The crate estimates *sets* of states compatible with an observed symbol
//! string and predicts where the system can move next.  On top of that core
//! it provides:
//!
//! - signal-space decomposition: aggregation functions that split one
//!   alphabet into coarser per-observer alphabets, the consistency check
//!   that makes the split lossless at the string level, and the chain
//!   partition that guarantees lossless *estimation*;
//! - decentralized estimators that fuse per-observer estimates by
//!   intersection and compare them against the monolithic estimator;
//! - finite-memory approximations: sliding-window automata whose states are
//!   recent observation windows, with online estimation and complexity
//!   reports;
//! - an exact rational 2-D polytope engine and a quantized two-tank
//!   benchmark that exercises the whole pipeline on a hybrid system.
//!
//! Start with [`machine::FiniteStateMachine`] and [`estimator::estimate`],
//! or run the examples in `examples/` for end-to-end walkthroughs.

pub mod decentralized;
pub mod decomposition;
pub mod error;
pub mod estimator;
pub mod hybrid;
pub mod lcomplete;
pub mod machine;

pub use error::{Error, Result};
pub use estimator::{EstimatePair, StateSet};
pub use machine::{
    EnumerationBudget, FiniteStateMachine, MachineDefinition, SignalString, StateId, SymbolId,
    Transition,
};
