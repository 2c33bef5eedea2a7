//! Finite state machines with set semantics.
//!
//! A machine is a tuple of states, an observed symbol alphabet, a transition
//! relation and a set of initial states.  Machines are immutable once built;
//! all estimation operations borrow them, so they can be shared freely
//! behind an [`std::sync::Arc`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of an observed symbol.  Symbol names are opaque non-empty tokens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymbolId(String);

impl SymbolId {
    pub fn new(name: impl Into<String>) -> Self {
        SymbolId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SymbolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for SymbolId {
    fn from(name: &str) -> Self {
        SymbolId::new(name)
    }
}

/// Name of a machine state.  State names are opaque non-empty tokens.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateId(String);

impl StateId {
    pub fn new(name: impl Into<String>) -> Self {
        StateId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for StateId {
    fn from(name: &str) -> Self {
        StateId::new(name)
    }
}

/// One element of the transition relation: `source` emits `symbol` and may
/// move to `target`.  Serialized as a `[source, symbol, target]` triple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(StateId, SymbolId, StateId)", into = "(StateId, SymbolId, StateId)")]
pub struct Transition {
    pub source: StateId,
    pub symbol: SymbolId,
    pub target: StateId,
}

impl Transition {
    pub fn new(
        source: impl Into<StateId>,
        symbol: impl Into<SymbolId>,
        target: impl Into<StateId>,
    ) -> Self {
        Transition {
            source: source.into(),
            symbol: symbol.into(),
            target: target.into(),
        }
    }
}

impl From<(StateId, SymbolId, StateId)> for Transition {
    fn from((source, symbol, target): (StateId, SymbolId, StateId)) -> Self {
        Transition { source, symbol, target }
    }
}

impl From<Transition> for (StateId, SymbolId, StateId) {
    fn from(t: Transition) -> Self {
        (t.source, t.symbol, t.target)
    }
}

impl From<(&str, &str, &str)> for Transition {
    fn from((source, symbol, target): (&str, &str, &str)) -> Self {
        Transition::new(source, symbol, target)
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.source, self.symbol, self.target)
    }
}

/// A finite observed string `w(tau) .. w(tau + len - 1)` together with the
/// time `tau` at which its first symbol was observed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignalString {
    symbols: Vec<SymbolId>,
    start_time: usize,
}

impl SignalString {
    /// Builds a string from its symbols; rejects the empty string.
    pub fn new(symbols: Vec<SymbolId>, start_time: usize) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptySignal);
        }
        Ok(SignalString { symbols, start_time })
    }

    /// Parses a comma-separated list of symbol tokens, e.g. `"a,a,b"`.
    pub fn parse(spec: &str, start_time: usize) -> Result<Self> {
        let symbols: Vec<SymbolId> = spec
            .split(',')
            .map(str::trim)
            .filter(|tok| !tok.is_empty())
            .map(SymbolId::new)
            .collect();
        SignalString::new(symbols, start_time)
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty strings
    }

    /// Time at which the first symbol was observed.
    pub fn start_time(&self) -> usize {
        self.start_time
    }

    /// Time at which the last symbol was observed.
    pub fn end_time(&self) -> usize {
        self.start_time + self.symbols.len() - 1
    }

    /// Drops the first `offset` symbols, advancing the start time to match.
    pub fn suffix(&self, offset: usize) -> Result<Self> {
        if offset >= self.symbols.len() {
            return Err(Error::EmptySignal);
        }
        SignalString::new(self.symbols[offset..].to_vec(), self.start_time + offset)
    }

    /// Returns a copy of this string extended by one more observation.
    pub fn extended(&self, symbol: SymbolId) -> Self {
        let mut symbols = self.symbols.clone();
        symbols.push(symbol);
        SignalString { symbols, start_time: self.start_time }
    }
}

impl fmt::Display for SignalString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let joined: Vec<&str> = self.symbols.iter().map(SymbolId::as_str).collect();
        f.write_str(&joined.join(","))
    }
}

/// Raw, unchecked machine description mirroring the on-disk JSON schema.
///
/// `initial` is optional and defaults to the full state set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MachineDefinition {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub transitions: Vec<(String, String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<String>>,
}

impl MachineDefinition {
    /// Checks the definition without building it and reports every finding.
    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    /// Builds a checked machine, rejecting malformed definitions.
    pub fn build(self) -> Result<FiniteStateMachine> {
        FiniteStateMachine::try_from(self)
    }
}

/// Outcome of [`validate`].  The report always succeeds; consumers decide
/// how to react to its findings.
#[derive(Debug, Clone, Default, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    /// States with no outgoing transition (the machine can halt there).
    pub blocking_states: Vec<StateId>,
    /// States with no incoming transition.  Estimates over windows that
    /// start after time zero may include such states even though no run
    /// reaches them; this is the only case where the windowed estimate can
    /// exceed the run-anchored one.
    pub sourceless_states: Vec<StateId>,
    /// References to undeclared states or symbols, and malformed names.
    pub dangling_references: Vec<String>,
}

impl ValidationReport {
    /// True when the definition would build and has no findings at all.
    pub fn is_clean(&self) -> bool {
        self.blocking_states.is_empty()
            && self.sourceless_states.is_empty()
            && self.dangling_references.is_empty()
    }

    /// True when the definition can be built into a [`FiniteStateMachine`]
    /// (sourceless states are allowed, dangling references are not).
    pub fn is_buildable(&self) -> bool {
        self.dangling_references.is_empty() && self.blocking_states.is_empty()
    }
}

/// Inspects a raw definition and lists blocking states, sourceless states
/// and dangling references.  Never fails.
pub fn validate(definition: &MachineDefinition) -> ValidationReport {
    let mut report = ValidationReport::default();

    let states: BTreeSet<&str> = definition.states.iter().map(String::as_str).collect();
    let symbols: BTreeSet<&str> = definition.alphabet.iter().map(String::as_str).collect();

    for name in &definition.states {
        if name.is_empty() {
            report.dangling_references.push("empty state name in declaration".into());
        }
    }
    for name in &definition.alphabet {
        if name.is_empty() {
            report.dangling_references.push("empty symbol name in declaration".into());
        }
    }
    if states.len() != definition.states.len() {
        report.dangling_references.push("duplicate state declaration".into());
    }
    if symbols.len() != definition.alphabet.len() {
        report.dangling_references.push("duplicate symbol declaration".into());
    }

    let mut has_outgoing: BTreeSet<&str> = BTreeSet::new();
    let mut has_incoming: BTreeSet<&str> = BTreeSet::new();
    for (index, (source, symbol, target)) in definition.transitions.iter().enumerate() {
        if !states.contains(source.as_str()) {
            report
                .dangling_references
                .push(format!("transition {index} references undeclared source state `{source}`"));
        }
        if !symbols.contains(symbol.as_str()) {
            report
                .dangling_references
                .push(format!("transition {index} references undeclared symbol `{symbol}`"));
        }
        if !states.contains(target.as_str()) {
            report
                .dangling_references
                .push(format!("transition {index} references undeclared target state `{target}`"));
        }
        has_outgoing.insert(source.as_str());
        has_incoming.insert(target.as_str());
    }

    if let Some(initial) = &definition.initial {
        for name in initial {
            if !states.contains(name.as_str()) {
                report
                    .dangling_references
                    .push(format!("initial set references undeclared state `{name}`"));
            }
        }
        if initial.is_empty() {
            report.dangling_references.push("initial set is empty".into());
        }
    }

    for name in &definition.states {
        if !has_outgoing.contains(name.as_str()) {
            report.blocking_states.push(StateId::new(name.clone()));
        }
        if !has_incoming.contains(name.as_str()) {
            report.sourceless_states.push(StateId::new(name.clone()));
        }
    }

    report
}

/// A checked, immutable finite state machine.
///
/// Invariants enforced at construction: states and symbols are declared,
/// unique and non-empty; every transition references declared names; every
/// state has at least one outgoing transition (the machine never halts);
/// transitions are deduplicated and stored in declaration-index order.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "MachineDefinition", into = "MachineDefinition")]
pub struct FiniteStateMachine {
    states: Vec<StateId>,
    alphabet: Vec<SymbolId>,
    transitions: Vec<Transition>,
    initial: Vec<StateId>,
    state_index: BTreeMap<StateId, usize>,
    symbol_index: BTreeMap<SymbolId, usize>,
    /// Transition indices grouped by symbol index.
    by_symbol: Vec<Vec<usize>>,
    /// Transition indices grouped by source state index.
    outgoing: Vec<Vec<usize>>,
}

impl PartialEq for FiniteStateMachine {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states
            && self.alphabet == other.alphabet
            && self.transitions == other.transitions
            && self.initial == other.initial
    }
}

impl Eq for FiniteStateMachine {}

impl TryFrom<MachineDefinition> for FiniteStateMachine {
    type Error = Error;

    fn try_from(definition: MachineDefinition) -> Result<Self> {
        let report = validate(&definition);
        if let Some(finding) = report.dangling_references.first() {
            return Err(Error::DanglingReference(finding.clone()));
        }
        if definition.states.is_empty() {
            return Err(Error::InvalidDeclaration("machine declares no states".into()));
        }
        if definition.alphabet.is_empty() {
            return Err(Error::InvalidDeclaration("machine declares no symbols".into()));
        }
        if let Some(state) = report.blocking_states.first() {
            return Err(Error::BlockingState(state.clone()));
        }

        let states: Vec<StateId> = definition.states.into_iter().map(StateId::new).collect();
        let alphabet: Vec<SymbolId> = definition.alphabet.into_iter().map(SymbolId::new).collect();
        let state_index: BTreeMap<StateId, usize> =
            states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let symbol_index: BTreeMap<SymbolId, usize> =
            alphabet.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();

        // Deduplicate and order transitions by declaration indices so that
        // every downstream enumeration is deterministic.
        let mut keyed: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
        for (source, symbol, target) in definition.transitions {
            keyed.insert((
                state_index[&StateId::new(source)],
                symbol_index[&SymbolId::new(symbol)],
                state_index[&StateId::new(target)],
            ));
        }
        let transitions: Vec<Transition> = keyed
            .into_iter()
            .map(|(s, y, t)| Transition {
                source: states[s].clone(),
                symbol: alphabet[y].clone(),
                target: states[t].clone(),
            })
            .collect();

        let initial: Vec<StateId> = match definition.initial {
            None => states.clone(),
            Some(names) => {
                if names.is_empty() {
                    return Err(Error::InvalidInitialSet("initial set is empty".into()));
                }
                let mut seen = BTreeSet::new();
                let mut initial = Vec::new();
                for name in names {
                    let id = StateId::new(name);
                    if seen.insert(state_index[&id]) {
                        initial.push(id);
                    }
                }
                // Keep declaration order of the state list.
                initial.sort_by_key(|id| state_index[id]);
                initial
            }
        };

        let mut by_symbol = vec![Vec::new(); alphabet.len()];
        let mut outgoing = vec![Vec::new(); states.len()];
        for (index, t) in transitions.iter().enumerate() {
            by_symbol[symbol_index[&t.symbol]].push(index);
            outgoing[state_index[&t.source]].push(index);
        }

        Ok(FiniteStateMachine {
            states,
            alphabet,
            transitions,
            initial,
            state_index,
            symbol_index,
            by_symbol,
            outgoing,
        })
    }
}

impl From<FiniteStateMachine> for MachineDefinition {
    fn from(machine: FiniteStateMachine) -> Self {
        MachineDefinition {
            states: machine.states.iter().map(|s| s.as_str().to_owned()).collect(),
            alphabet: machine.alphabet.iter().map(|s| s.as_str().to_owned()).collect(),
            transitions: machine
                .transitions
                .iter()
                .map(|t| {
                    (
                        t.source.as_str().to_owned(),
                        t.symbol.as_str().to_owned(),
                        t.target.as_str().to_owned(),
                    )
                })
                .collect(),
            initial: Some(machine.initial.iter().map(|s| s.as_str().to_owned()).collect()),
        }
    }
}

impl FiniteStateMachine {
    /// Convenience constructor used by examples and tests.
    pub fn build(
        states: &[&str],
        alphabet: &[&str],
        transitions: &[(&str, &str, &str)],
        initial: Option<&[&str]>,
    ) -> Result<Self> {
        MachineDefinition {
            states: states.iter().map(|s| s.to_string()).collect(),
            alphabet: alphabet.iter().map(|s| s.to_string()).collect(),
            transitions: transitions
                .iter()
                .map(|(s, y, t)| (s.to_string(), y.to_string(), t.to_string()))
                .collect(),
            initial: initial.map(|names| names.iter().map(|s| s.to_string()).collect()),
        }
        .build()
    }

    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn alphabet(&self) -> &[SymbolId] {
        &self.alphabet
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    /// Initial states; defaults to the full state set when not declared.
    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn state_position(&self, state: &StateId) -> Result<usize> {
        self.state_index
            .get(state)
            .copied()
            .ok_or_else(|| Error::UnknownState(state.clone()))
    }

    pub fn symbol_position(&self, symbol: &SymbolId) -> Result<usize> {
        self.symbol_index
            .get(symbol)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(symbol.clone()))
    }

    pub fn has_symbol(&self, symbol: &SymbolId) -> bool {
        self.symbol_index.contains_key(symbol)
    }

    /// All transitions labelled with `symbol`, in deterministic order.
    pub fn transitions_for(&self, symbol: &SymbolId) -> Result<impl Iterator<Item = &Transition>> {
        let position = self.symbol_position(symbol)?;
        Ok(self.by_symbol[position].iter().map(move |&i| &self.transitions[i]))
    }

    /// All transitions leaving `state`, in deterministic order.
    pub fn transitions_from(&self, state: &StateId) -> Result<impl Iterator<Item = &Transition>> {
        let position = self.state_position(state)?;
        Ok(self.outgoing[position].iter().map(move |&i| &self.transitions[i]))
    }
}

/// Enumeration ceiling shared by the exhaustive reference computations.
///
/// The `SVEST_BUDGET` environment variable (read by the command-line tool)
/// overrides the default of one million enumerated items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget(pub usize);

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget(1_000_000)
    }
}

/// One run of the machine: `states` has exactly one more entry than
/// `symbols`, and consecutive entries are related by the transition
/// relation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Run {
    pub states: Vec<StateId>,
    pub symbols: Vec<SymbolId>,
}

/// Exhaustively enumerates every run of exactly `length` steps that starts
/// in an initial state.  Runs are produced in deterministic order (initial
/// states in declaration order, transitions in declaration order).
///
/// Fails with [`Error::BudgetExceeded`] as soon as more runs than the
/// budget allows have been produced.
pub fn enumerate_runs(
    machine: &FiniteStateMachine,
    length: usize,
    budget: EnumerationBudget,
) -> Result<Vec<Run>> {
    if length == 0 {
        return Err(Error::InvalidArgument("run length must be positive".into()));
    }

    let mut runs = Vec::new();
    let mut states = Vec::with_capacity(length + 1);
    let mut symbols = Vec::with_capacity(length);

    fn extend(
        machine: &FiniteStateMachine,
        length: usize,
        budget: EnumerationBudget,
        states: &mut Vec<StateId>,
        symbols: &mut Vec<SymbolId>,
        runs: &mut Vec<Run>,
    ) -> Result<()> {
        if symbols.len() == length {
            if runs.len() >= budget.0 {
                return Err(Error::BudgetExceeded { budget: budget.0, reached: runs.len() + 1 });
            }
            runs.push(Run { states: states.clone(), symbols: symbols.clone() });
            return Ok(());
        }
        let current = states.last().expect("run under construction is never empty").clone();
        for transition in machine.transitions_from(&current)? {
            states.push(transition.target.clone());
            symbols.push(transition.symbol.clone());
            extend(machine, length, budget, states, symbols, runs)?;
            states.pop();
            symbols.pop();
        }
        Ok(())
    }

    for start in machine.initial() {
        states.push(start.clone());
        extend(machine, length, budget, &mut states, &mut symbols, &mut runs)?;
        states.pop();
    }
    Ok(runs)
}

/// True when some run of the machine produces `w` over the window it
/// covers, i.e. the windowed compatible set of `w` is nonempty.
pub fn is_feasible(machine: &FiniteStateMachine, w: &SignalString) -> Result<bool> {
    Ok(!crate::estimator::estimate(machine, w)?.compatible.is_empty())
}

/// Builders for the two machines used throughout the documentation,
/// examples and tests.
pub mod samples {
    use super::FiniteStateMachine;

    /// Three states over `{a, b}`; `b` funnels two states into one, which
    /// makes the alphabet impossible to split into non-deterministic
    /// chains.
    pub fn m1() -> FiniteStateMachine {
        FiniteStateMachine::build(
            &["s1", "s2", "s3"],
            &["a", "b"],
            &[("s1", "a", "s2"), ("s2", "a", "s3"), ("s2", "b", "s1"), ("s3", "b", "s1")],
            None,
        )
        .expect("sample machine m1 is well-formed")
    }

    /// Four states over `{a1, b1, a2, b2}`; every symbol subrelation is
    /// injective enough for a chain partition to exist.
    pub fn m2() -> FiniteStateMachine {
        FiniteStateMachine::build(
            &["x1", "x2", "x3", "x4"],
            &["a1", "b1", "a2", "b2"],
            &[
                ("x1", "a1", "x2"),
                ("x1", "a1", "x3"),
                ("x4", "b1", "x1"),
                ("x2", "a2", "x4"),
                ("x3", "b2", "x1"),
            ],
            None,
        )
        .expect("sample machine m2 is well-formed")
    }
}
