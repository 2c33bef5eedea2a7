//! Set-valued state estimation over observed symbol strings.
//!
//! The estimator maintains two sets per observation: the *compatible* set
//! (states the machine can be in while emitting the last observed symbol)
//! and the *predicted* set (states reachable one step later).  Both are
//! computed by a windowed recursion that only looks at the observed string,
//! so estimates can start at any time without knowing the past.
//! [`brute_force_estimate`] recomputes the same sets by enumerating runs
//! and serves as the definitional reference.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::machine::{
    enumerate_runs, EnumerationBudget, FiniteStateMachine, SignalString, StateId, SymbolId,
};

/// A sorted, duplicate-free set of machine states.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateSet(BTreeSet<StateId>);

impl StateSet {
    pub fn empty() -> Self {
        StateSet(BTreeSet::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, state: &StateId) -> bool {
        self.0.contains(state)
    }

    pub fn insert(&mut self, state: StateId) {
        self.0.insert(state);
    }

    pub fn iter(&self) -> impl Iterator<Item = &StateId> {
        self.0.iter()
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        StateSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        StateSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl FromIterator<StateId> for StateSet {
    fn from_iter<I: IntoIterator<Item = StateId>>(iter: I) -> Self {
        StateSet(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<&'a str> for StateSet {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        StateSet(iter.into_iter().map(StateId::new).collect())
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.0.iter().map(StateId::as_str).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

/// Result of estimating one observed string: the compatible set for its
/// last symbol and the predicted set one step after it.  The predicted set
/// is always the one-step image of the compatible set, so an empty
/// compatible set forces an empty prediction.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EstimatePair {
    #[serde(rename = "chi")]
    pub compatible: StateSet,
    #[serde(rename = "rho")]
    pub predicted: StateSet,
}

impl EstimatePair {
    pub fn new(compatible: StateSet, predicted: StateSet) -> Self {
        EstimatePair { compatible, predicted }
    }
}

/// States that can emit `symbol`: the sources of all transitions labelled
/// with it.  A symbol used by no transition yields the empty set.
pub fn compatible_for_symbol(machine: &FiniteStateMachine, symbol: &SymbolId) -> Result<StateSet> {
    Ok(machine.transitions_for(symbol)?.map(|t| t.source.clone()).collect())
}

/// One-step successor set: all states reachable from `from` by a
/// transition labelled `symbol`.
pub fn successors(
    machine: &FiniteStateMachine,
    symbol: &SymbolId,
    from: &StateSet,
) -> Result<StateSet> {
    Ok(machine
        .transitions_for(symbol)?
        .filter(|t| from.contains(&t.source))
        .map(|t| t.target.clone())
        .collect())
}

/// Estimates the compatible and predicted sets for an observed string
/// using the windowed recursion: seed with the states that can emit the
/// first symbol, then alternate prediction and intersection for every
/// further symbol.  The start time of the string does not influence the
/// result; it is carried for bookkeeping only.
pub fn estimate(machine: &FiniteStateMachine, w: &SignalString) -> Result<EstimatePair> {
    let mut symbols = w.symbols().iter();
    let first = symbols.next().expect("signal strings are never empty");
    let mut compatible = compatible_for_symbol(machine, first)?;
    let mut predicted = successors(machine, first, &compatible)?;
    for symbol in symbols {
        compatible = predicted.intersection(&compatible_for_symbol(machine, symbol)?);
        predicted = successors(machine, symbol, &compatible)?;
    }
    Ok(EstimatePair { compatible, predicted })
}

/// Incremental form of [`estimate`]: feed one observed symbol at a time
/// and read off the same sets the batch computation would produce for the
/// string observed so far.
#[derive(Debug, Clone)]
pub struct EstimatorState {
    machine: Arc<FiniteStateMachine>,
    /// Prediction carried between observations; the full state set before
    /// anything has been observed.
    carried: StateSet,
    current: Option<EstimatePair>,
    observed: usize,
}

impl EstimatorState {
    pub fn new(machine: Arc<FiniteStateMachine>) -> Self {
        let carried = machine.states().iter().cloned().collect();
        EstimatorState { machine, carried, current: None, observed: 0 }
    }

    pub fn machine(&self) -> &Arc<FiniteStateMachine> {
        &self.machine
    }

    /// Number of symbols observed so far.
    pub fn observed(&self) -> usize {
        self.observed
    }

    /// Estimate for the string observed so far; `None` before the first
    /// observation.
    pub fn current(&self) -> Option<&EstimatePair> {
        self.current.as_ref()
    }

    /// Feeds one observed symbol and returns the updated estimate.
    pub fn observe(&mut self, symbol: &SymbolId) -> Result<EstimatePair> {
        let compatible =
            self.carried.intersection(&compatible_for_symbol(&self.machine, symbol)?);
        let predicted = successors(&self.machine, symbol, &compatible)?;
        self.carried = predicted.clone();
        let pair = EstimatePair { compatible, predicted };
        self.current = Some(pair.clone());
        self.observed += 1;
        Ok(pair)
    }
}

/// Reference implementation of [`estimate`] by exhaustive run enumeration.
///
/// Runs are anchored at time zero: when the string starts at `tau > 0`,
/// up to `min(horizon, tau)` unobserved symbols are prepended, so only
/// states that a run can actually reach by time `tau` survive.  With
/// `horizon >= tau` this is the exact run-semantics answer; the windowed
/// recursion can differ only on machines with sourceless states.
pub fn brute_force_estimate(
    machine: &FiniteStateMachine,
    w: &SignalString,
    horizon: usize,
    budget: EnumerationBudget,
) -> Result<EstimatePair> {
    let prefix = horizon.min(w.start_time());
    let total = prefix + w.len();
    let runs = enumerate_runs(machine, total, budget)?;

    let mut compatible = StateSet::empty();
    let mut predicted = StateSet::empty();
    for run in &runs {
        if run.symbols[prefix..] == *w.symbols() {
            compatible.insert(run.states[total - 1].clone());
            predicted.insert(run.states[total].clone());
        }
    }
    Ok(EstimatePair { compatible, predicted })
}
