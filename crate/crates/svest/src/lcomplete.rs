//! Strongest finite-window (ℓ-complete) approximation automata.
//!
//! The automaton's states are the feasible observation windows of length
//! up to ℓ; transitions extend a short window by one symbol or slide a
//! full window forward.  Each state is annotated with the estimate of the
//! source system for its window, so running the automaton online replays
//! set-valued estimation from a lookup table instead of recomputing it.
//!
//! Construction is generic over an [`EstimationSource`]: finite machines
//! annotate states with [`StateSet`]s, the hybrid two-tank oracle with
//! exact rational polygons.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::estimator::{compatible_for_symbol, successors, StateSet};
use crate::machine::{EnumerationBudget, FiniteStateMachine, SignalString, SymbolId};

/// Set-like values a window state can be annotated with.
pub trait Annotation: Clone + Ord + Send + Sync {
    /// Tag used in serialized automata to identify the annotation type.
    fn kind() -> &'static str;

    fn empty() -> Self;

    fn is_empty(&self) -> bool;

    /// Contribution of one annotation to the total annotation size
    /// (set cardinality for finite sets, vertex count for polygons).
    fn size(&self) -> usize;
}

impl Annotation for StateSet {
    fn kind() -> &'static str {
        "states"
    }

    fn empty() -> Self {
        StateSet::empty()
    }

    fn is_empty(&self) -> bool {
        StateSet::is_empty(self)
    }

    fn size(&self) -> usize {
        self.len()
    }
}

/// Compatible/predicted pair produced by an [`EstimationSource`]; the
/// predicted component carries everything needed to extend the window.
#[derive(Debug, Clone)]
pub struct SourceEstimate<A> {
    pub compatible: A,
    pub predicted: A,
}

/// A system whose observation windows can be estimated incrementally.
///
/// `seed` starts a window with its first symbol, `advance` extends it by
/// one more observed symbol.  A window is *feasible* when its compatible
/// annotation is nonempty.  Implementations must be deterministic; they
/// are called from multiple threads during automaton construction.
pub trait EstimationSource: Sync {
    type Annotation: Annotation;

    fn alphabet(&self) -> Vec<SymbolId>;

    fn seed(&self, symbol: &SymbolId) -> Result<SourceEstimate<Self::Annotation>>;

    fn advance(
        &self,
        previous: &SourceEstimate<Self::Annotation>,
        symbol: &SymbolId,
    ) -> Result<SourceEstimate<Self::Annotation>>;

    /// The compatible part of [`EstimationSource::advance`] alone, for
    /// callers that only need feasibility of the extension; sources with
    /// expensive prediction should override it.
    fn advance_compatible(
        &self,
        previous: &SourceEstimate<Self::Annotation>,
        symbol: &SymbolId,
    ) -> Result<Self::Annotation> {
        Ok(self.advance(previous, symbol)?.compatible)
    }

    /// Estimate for a whole window, folded from `seed` and `advance`.
    fn estimate_window(&self, window: &[SymbolId]) -> Result<SourceEstimate<Self::Annotation>> {
        let (first, rest) = window.split_first().ok_or(Error::EmptySignal)?;
        let mut estimate = self.seed(first)?;
        for symbol in rest {
            estimate = self.advance(&estimate, symbol)?;
        }
        Ok(estimate)
    }

    fn is_feasible(&self, window: &[SymbolId]) -> Result<bool> {
        Ok(!self.estimate_window(window)?.compatible.is_empty())
    }
}

impl EstimationSource for FiniteStateMachine {
    type Annotation = StateSet;

    fn alphabet(&self) -> Vec<SymbolId> {
        FiniteStateMachine::alphabet(self).to_vec()
    }

    fn seed(&self, symbol: &SymbolId) -> Result<SourceEstimate<StateSet>> {
        let compatible = compatible_for_symbol(self, symbol)?;
        let predicted = successors(self, symbol, &compatible)?;
        Ok(SourceEstimate { compatible, predicted })
    }

    fn advance(
        &self,
        previous: &SourceEstimate<StateSet>,
        symbol: &SymbolId,
    ) -> Result<SourceEstimate<StateSet>> {
        let compatible = previous.predicted.intersection(&compatible_for_symbol(self, symbol)?);
        let predicted = successors(self, symbol, &compatible)?;
        Ok(SourceEstimate { compatible, predicted })
    }

    fn advance_compatible(
        &self,
        previous: &SourceEstimate<StateSet>,
        symbol: &SymbolId,
    ) -> Result<StateSet> {
        Ok(previous.predicted.intersection(&compatible_for_symbol(self, symbol)?))
    }
}

/// One state of the window automaton: a feasible window plus the source's
/// estimate for it.  Annotations are interned, so equal annotations of
/// different states share storage.
#[derive(Debug, Clone)]
pub struct WindowState<A> {
    pub window: Vec<SymbolId>,
    pub annotation: Arc<A>,
}

impl<A> WindowState<A> {
    pub fn length(&self) -> usize {
        self.window.len()
    }

    /// The window as a comma-joined string, e.g. `"a,b"`.
    pub fn label(&self) -> String {
        let parts: Vec<&str> = self.window.iter().map(SymbolId::as_str).collect();
        parts.join(",")
    }
}

/// The strongest ℓ-complete approximation of an estimation source.
#[derive(Debug, Clone)]
pub struct LCompleteAutomaton<A> {
    ell: usize,
    alphabet: Vec<SymbolId>,
    states: Vec<WindowState<A>>,
    index: BTreeMap<Vec<SymbolId>, usize>,
    adjacency: Vec<BTreeMap<SymbolId, usize>>,
    /// Per state: has at least one incoming window-sliding transition.
    slide_reachable: Vec<bool>,
    /// Indices of the length-1 states every run starts from.
    initial: Vec<usize>,
}

/// Builds the window automaton of depth `ell` over `source`.
///
/// Infeasible windows are pruned: they would carry empty annotations and
/// admit no outgoing transitions.  Level by level, every kept window is
/// extended by each alphabet symbol; full-length windows get sliding
/// transitions instead, whose targets always exist because a suffix of a
/// feasible window is feasible.  Each feasibility evaluation counts
/// against `budget`; the alphabet-exponential growth makes this the
/// safeguard against runaway `ell`.
pub fn build_lcomplete<S: EstimationSource>(
    source: &S,
    ell: usize,
    budget: EnumerationBudget,
) -> Result<LCompleteAutomaton<S::Annotation>> {
    if ell == 0 {
        return Err(Error::InvalidArgument("window length must be at least 1".into()));
    }
    let alphabet = source.alphabet();
    if alphabet.is_empty() {
        return Err(Error::InvalidArgument("source alphabet is empty".into()));
    }

    let mut evaluations = 0usize;
    let charge = |evaluations: &mut usize, amount: usize| -> Result<()> {
        *evaluations += amount;
        if *evaluations > budget.0 {
            Err(Error::BudgetExceeded { budget: budget.0, reached: *evaluations })
        } else {
            Ok(())
        }
    };

    let mut states: Vec<WindowState<S::Annotation>> = Vec::new();
    let mut index: BTreeMap<Vec<SymbolId>, usize> = BTreeMap::new();
    let mut adjacency: Vec<BTreeMap<SymbolId, usize>> = Vec::new();
    let mut interned: BTreeMap<S::Annotation, Arc<S::Annotation>> = BTreeMap::new();
    let intern = |interned: &mut BTreeMap<S::Annotation, Arc<S::Annotation>>,
                  annotation: S::Annotation| {
        interned
            .entry(annotation.clone())
            .or_insert_with(|| Arc::new(annotation))
            .clone()
    };

    // Level 1: feasible single symbols.
    charge(&mut evaluations, alphabet.len())?;
    let mut level: Vec<(usize, SourceEstimate<S::Annotation>)> = Vec::new();
    for symbol in &alphabet {
        let estimate = source.seed(symbol)?;
        if estimate.compatible.is_empty() {
            continue;
        }
        let window = vec![symbol.clone()];
        let annotation = intern(&mut interned, estimate.compatible.clone());
        index.insert(window.clone(), states.len());
        states.push(WindowState { window, annotation });
        adjacency.push(BTreeMap::new());
        level.push((states.len() - 1, estimate));
    }
    let initial: Vec<usize> = level.iter().map(|(i, _)| *i).collect();

    // Levels 2..=ell: extend each kept window by one symbol.
    for _ in 1..ell {
        charge(&mut evaluations, level.len() * alphabet.len())?;
        let expansions: Vec<Vec<(usize, SymbolId, SourceEstimate<S::Annotation>)>> = level
            .par_iter()
            .map(|(state, estimate)| {
                let mut found = Vec::new();
                for symbol in &alphabet {
                    let extended = source.advance(estimate, symbol)?;
                    if !extended.compatible.is_empty() {
                        found.push((*state, symbol.clone(), extended));
                    }
                }
                Ok(found)
            })
            .collect::<Result<_>>()?;

        let mut next = Vec::new();
        for (parent, symbol, estimate) in expansions.into_iter().flatten() {
            let mut window = states[parent].window.clone();
            window.push(symbol.clone());
            let annotation = intern(&mut interned, estimate.compatible.clone());
            let child = states.len();
            index.insert(window.clone(), child);
            states.push(WindowState { window, annotation });
            adjacency.push(BTreeMap::new());
            adjacency[parent].insert(symbol, child);
            next.push((child, estimate));
        }
        level = next;
    }

    // Sliding transitions between full-length windows.
    charge(&mut evaluations, level.len() * alphabet.len())?;
    let slides: Vec<Vec<(usize, SymbolId)>> = level
        .par_iter()
        .map(|(state, estimate)| {
            let mut found = Vec::new();
            for symbol in &alphabet {
                if !source.advance_compatible(estimate, symbol)?.is_empty() {
                    found.push((*state, symbol.clone()));
                }
            }
            Ok(found)
        })
        .collect::<Result<_>>()?;

    let mut slide_reachable = vec![false; states.len()];
    for (state, symbol) in slides.into_iter().flatten() {
        let mut window = states[state].window[1..].to_vec();
        window.push(symbol.clone());
        let target = *index
            .get(&window)
            .expect("the suffix of a feasible window is feasible, so slide targets exist");
        adjacency[state].insert(symbol, target);
        slide_reachable[target] = true;
    }

    Ok(LCompleteAutomaton { ell, alphabet, states, index, adjacency, slide_reachable, initial })
}

impl<A: Annotation> LCompleteAutomaton<A> {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn alphabet(&self) -> &[SymbolId] {
        &self.alphabet
    }

    pub fn states(&self) -> &[WindowState<A>] {
        &self.states
    }

    /// Indices of the length-1 states runs start from.
    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    /// Index of the state for `window`, if that window is feasible.
    pub fn state_index(&self, window: &[SymbolId]) -> Option<usize> {
        self.index.get(window).copied()
    }

    pub fn annotation(&self, state: usize) -> &Arc<A> {
        &self.states[state].annotation
    }

    /// Successor under one observed symbol.
    pub fn successor(&self, state: usize, symbol: &SymbolId) -> Option<usize> {
        self.adjacency[state].get(symbol).copied()
    }

    pub fn transition_count(&self) -> usize {
        self.adjacency.iter().map(BTreeMap::len).sum()
    }

    /// All transitions as `(source, symbol, target)` index triples.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, &SymbolId, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(source, edges)| edges.iter().map(move |(s, &t)| (source, s, t)))
    }

    /// True when `state` is the target of at least one sliding transition.
    pub fn is_slide_reachable(&self, state: usize) -> bool {
        self.slide_reachable[state]
    }

    /// True when the automaton accepts `w`, i.e. `w` never leaves the
    /// feasible-window graph.
    pub fn accepts(&self, w: &SignalString) -> bool {
        let mut estimator = OnlineEstimator::new(self);
        w.symbols().iter().all(|symbol| !estimator.observe(symbol).is_empty())
    }
}

/// How states are counted in a [`ComplexityReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountingConvention {
    /// Every window of length 1..=ℓ, feasible or not.
    All,
    /// Feasible windows of length 1..=ℓ (the built states).
    Feasible,
    /// Full-length windows with at least one incoming sliding transition —
    /// the states the automaton can occupy in steady operation.
    Reachable,
}

impl CountingConvention {
    pub const ALL: [CountingConvention; 3] = [
        CountingConvention::All,
        CountingConvention::Feasible,
        CountingConvention::Reachable,
    ];
}

impl fmt::Display for CountingConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountingConvention::All => "all",
            CountingConvention::Feasible => "feasible",
            CountingConvention::Reachable => "reachable",
        })
    }
}

impl std::str::FromStr for CountingConvention {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        match token {
            "all" => Ok(CountingConvention::All),
            "feasible" => Ok(CountingConvention::Feasible),
            "reachable" => Ok(CountingConvention::Reachable),
            other => Err(Error::InvalidArgument(format!(
                "unknown counting convention `{other}` (expected all|feasible|reachable)"
            ))),
        }
    }
}

/// Per-window-length slice of a [`ComplexityReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LengthCount {
    pub length: usize,
    pub state_count: u64,
    pub annotation_size: u64,
}

/// State and annotation counts of a window automaton.
///
/// `annotation_size` totals the per-state annotation sizes; interning does
/// not reduce it (every state counts its own copy).  Under the `all`
/// convention the pruned infeasible windows count as states with empty
/// annotations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComplexityReport {
    pub ell: usize,
    pub convention: CountingConvention,
    pub state_count: u64,
    pub annotation_size: u64,
    pub per_length: Vec<LengthCount>,
}

/// Counts states and annotation sizes under the given convention.
pub fn complexity_report<A: Annotation>(
    automaton: &LCompleteAutomaton<A>,
    convention: CountingConvention,
) -> ComplexityReport {
    let ell = automaton.ell;
    let per_length: Vec<LengthCount> = match convention {
        CountingConvention::All | CountingConvention::Feasible => (1..=ell)
            .map(|length| {
                let mut state_count = 0u64;
                let mut annotation_size = 0u64;
                for state in &automaton.states {
                    if state.length() == length {
                        state_count += 1;
                        annotation_size += state.annotation.size() as u64;
                    }
                }
                if convention == CountingConvention::All {
                    state_count = (automaton.alphabet.len() as u64).pow(length as u32);
                }
                LengthCount { length, state_count, annotation_size }
            })
            .collect(),
        CountingConvention::Reachable => {
            let mut state_count = 0u64;
            let mut annotation_size = 0u64;
            for (i, state) in automaton.states.iter().enumerate() {
                if automaton.slide_reachable[i] {
                    state_count += 1;
                    annotation_size += state.annotation.size() as u64;
                }
            }
            vec![LengthCount { length: ell, state_count, annotation_size }]
        }
    };
    ComplexityReport {
        ell,
        convention,
        state_count: per_length.iter().map(|l| l.state_count).sum(),
        annotation_size: per_length.iter().map(|l| l.annotation_size).sum(),
        per_length,
    }
}

/// Reason an online estimator stopped tracking the observation stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SinkInfo {
    /// Offset (0-based) of the observation that had no transition.
    pub time: usize,
    pub symbol: SymbolId,
}

/// Replays observations against a built window automaton.
///
/// While the stream stays feasible the estimator walks the automaton and
/// emits the annotation of the current state: the estimate for the full
/// prefix during the first ℓ observations and for the trailing length-ℓ
/// window afterwards.  An observation with no transition sends the
/// estimator into a sink; from then on every emission is the empty
/// annotation and [`OnlineEstimator::sink`] reports the offending step.
#[derive(Debug, Clone)]
pub struct OnlineEstimator<'a, A: Annotation> {
    automaton: &'a LCompleteAutomaton<A>,
    empty: Arc<A>,
    position: Option<usize>,
    time: usize,
    sink: Option<SinkInfo>,
}

impl<'a, A: Annotation> OnlineEstimator<'a, A> {
    pub fn new(automaton: &'a LCompleteAutomaton<A>) -> Self {
        OnlineEstimator {
            automaton,
            empty: Arc::new(A::empty()),
            position: None,
            time: 0,
            sink: None,
        }
    }

    /// Number of observations consumed so far.
    pub fn time(&self) -> usize {
        self.time
    }

    /// The diagnostic for the first infeasible observation, if any.
    pub fn sink(&self) -> Option<&SinkInfo> {
        self.sink.as_ref()
    }

    /// Index of the current window state, unless sunk or not started.
    pub fn position(&self) -> Option<usize> {
        self.position
    }

    /// Consumes one observation and returns the estimate for the current
    /// window.
    pub fn observe(&mut self, symbol: &SymbolId) -> Arc<A> {
        let time = self.time;
        self.time += 1;
        if self.sink.is_some() {
            return self.empty.clone();
        }
        let next = match self.position {
            None => self.automaton.state_index(std::slice::from_ref(symbol)),
            Some(state) => self.automaton.successor(state, symbol),
        };
        match next {
            Some(state) => {
                self.position = Some(state);
                self.automaton.annotation(state).clone()
            }
            None => {
                self.position = None;
                self.sink = Some(SinkInfo { time, symbol: symbol.clone() });
                self.empty.clone()
            }
        }
    }
}

/// Runs [`OnlineEstimator`] over a whole string and collects the emitted
/// estimates.
pub fn online_estimate<A: Annotation>(
    automaton: &LCompleteAutomaton<A>,
    w: &SignalString,
) -> Vec<Arc<A>> {
    let mut estimator = OnlineEstimator::new(automaton);
    w.symbols().iter().map(|symbol| estimator.observe(symbol)).collect()
}

impl<A: Annotation + Serialize> Serialize for LCompleteAutomaton<A> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct StateWire<'a, A> {
            window: &'a [SymbolId],
            annotation: &'a A,
            annotation_size: usize,
            slide_reachable: bool,
        }

        let states: Vec<StateWire<'_, A>> = self
            .states
            .iter()
            .enumerate()
            .map(|(i, state)| StateWire {
                window: &state.window,
                annotation: state.annotation.as_ref(),
                annotation_size: state.annotation.size(),
                slide_reachable: self.slide_reachable[i],
            })
            .collect();
        let transitions: Vec<(usize, &SymbolId, usize)> = self.transitions().collect();

        let mut out = serializer.serialize_struct("LCompleteAutomaton", 6)?;
        out.serialize_field("ell", &self.ell)?;
        out.serialize_field("alphabet", &self.alphabet)?;
        out.serialize_field("annotationKind", A::kind())?;
        out.serialize_field("states", &states)?;
        out.serialize_field("initial", &self.initial)?;
        out.serialize_field("transitions", &transitions)?;
        out.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::estimate;
    use crate::machine::{enumerate_runs, samples};

    fn sym(name: &str) -> SymbolId {
        SymbolId::new(name)
    }

    fn window(names: &[&str]) -> Vec<SymbolId> {
        names.iter().map(|n| sym(n)).collect()
    }

    fn build(machine: &FiniteStateMachine, ell: usize) -> LCompleteAutomaton<StateSet> {
        build_lcomplete(machine, ell, EnumerationBudget::default()).unwrap()
    }

    #[test]
    fn depth_one_automaton_of_m1() {
        let m1 = samples::m1();
        let automaton = build(&m1, 1);
        assert_eq!(automaton.states().len(), 2);
        assert_eq!(automaton.state_index(&window(&["a"])), Some(0));
        assert_eq!(automaton.state_index(&window(&["b"])), Some(1));
        assert_eq!(automaton.initial(), &[0, 1]);

        // Feasible two-symbol continuations: aa, ab, ba — but not bb.
        let triples: Vec<(usize, String, usize)> = automaton
            .transitions()
            .map(|(s, sym, t)| (s, sym.as_str().to_owned(), t))
            .collect();
        assert_eq!(
            triples,
            vec![(0, "a".into(), 0), (0, "b".into(), 1), (1, "a".into(), 0)]
        );

        assert_eq!(automaton.annotation(0).to_string(), "{s1, s2}");
        assert_eq!(automaton.annotation(1).to_string(), "{s2, s3}");
    }

    #[test]
    fn depth_one_state_count_equals_used_symbols() {
        // Symbols that label no transition are infeasible as windows.
        let machine = FiniteStateMachine::build(
            &["q1", "q2"],
            &["a", "b", "unused"],
            &[("q1", "a", "q2"), ("q2", "b", "q1")],
            None,
        )
        .unwrap();
        let automaton = build(&machine, 1);
        assert_eq!(automaton.states().len(), 2);
        assert_eq!(build(&samples::m2(), 1).states().len(), 4);
    }

    #[test]
    fn depth_two_automaton_of_m1() {
        let m1 = samples::m1();
        let automaton = build(&m1, 2);
        assert_eq!(automaton.states().len(), 5, "2 singles + feasible pairs aa, ab, ba");
        for w in [window(&["a", "a"]), window(&["a", "b"]), window(&["b", "a"])] {
            assert!(automaton.state_index(&w).is_some(), "{w:?} missing");
        }
        assert_eq!(automaton.state_index(&window(&["b", "b"])), None);

        // 3 extensions from the two singles, 4 slides between the pairs.
        assert_eq!(automaton.transition_count(), 7);

        // Sliding reaches every feasible pair of this machine.
        let reachable: Vec<String> = automaton
            .states()
            .iter()
            .enumerate()
            .filter(|(i, _)| automaton.is_slide_reachable(*i))
            .map(|(_, s)| s.label())
            .collect();
        assert_eq!(reachable, vec!["a,a", "a,b", "b,a"]);
    }

    #[test]
    fn annotations_match_the_batch_estimator() {
        let m1 = samples::m1();
        let automaton = build(&m1, 3);
        for state in automaton.states() {
            let w = SignalString::new(state.window.clone(), 0).unwrap();
            let expected = estimate(&m1, &w).unwrap().compatible;
            assert_eq!(state.annotation.as_ref(), &expected, "window {}", state.label());
        }
    }

    #[test]
    fn equal_annotations_share_storage() {
        let automaton = build(&samples::m1(), 2);
        let single_b = automaton.state_index(&window(&["b"])).unwrap();
        let pair_ab = automaton.state_index(&window(&["a", "b"])).unwrap();
        assert_eq!(automaton.annotation(single_b), automaton.annotation(pair_ab));
        assert!(Arc::ptr_eq(automaton.annotation(single_b), automaton.annotation(pair_ab)));
    }

    #[test]
    fn online_emissions_on_m1() {
        let automaton = build(&samples::m1(), 2);
        let emitted = online_estimate(&automaton, &SignalString::parse("a,a,b", 0).unwrap());
        let rendered: Vec<String> = emitted.iter().map(|a| a.to_string()).collect();
        assert_eq!(rendered, vec!["{s1, s2}", "{s2}", "{s2, s3}"]);
    }

    #[test]
    fn online_matches_batch_on_windows() {
        let m1 = samples::m1();
        let automaton = build(&m1, 2);
        let w = SignalString::parse("a,a,b,a", 0).unwrap();
        let emitted = online_estimate(&automaton, &w);
        for (t, annotation) in emitted.iter().enumerate() {
            let from = t.saturating_sub(automaton.ell() - 1);
            let suffix = SignalString::new(w.symbols()[from..=t].to_vec(), from).unwrap();
            let expected = estimate(&m1, &suffix).unwrap().compatible;
            assert_eq!(annotation.as_ref(), &expected, "time {t}");
        }
    }

    #[test]
    fn infeasible_observation_sinks_with_diagnostic() {
        let automaton = build(&samples::m1(), 2);
        let mut estimator = OnlineEstimator::new(&automaton);
        assert!(!estimator.observe(&sym("b")).is_empty());
        assert!(estimator.observe(&sym("b")).is_empty(), "bb is infeasible");
        assert_eq!(estimator.sink(), Some(&SinkInfo { time: 1, symbol: sym("b") }));
        // The sink is absorbing, even for symbols that would otherwise fit.
        assert!(estimator.observe(&sym("a")).is_empty());
        assert_eq!(estimator.sink().map(|s| s.time), Some(1));
    }

    #[test]
    fn unknown_symbols_sink_instead_of_failing() {
        let automaton = build(&samples::m1(), 1);
        let mut estimator = OnlineEstimator::new(&automaton);
        assert!(estimator.observe(&sym("zz")).is_empty());
        assert_eq!(estimator.sink().map(|s| s.symbol.clone()), Some(sym("zz")));
    }

    #[test]
    fn accepts_exactly_the_strings_with_feasible_windows() {
        let m1 = samples::m1();
        for ell in 1..=3 {
            let automaton = build(&m1, ell);
            // Every string feasible in the machine is accepted.
            for length in 1..=4 {
                for run in enumerate_runs(&m1, length, EnumerationBudget::default()).unwrap() {
                    let w = SignalString::new(run.symbols.clone(), 0).unwrap();
                    assert!(automaton.accepts(&w), "ell={ell} w={w}");
                }
            }
            // bb is infeasible and rejected at every depth.
            assert!(!automaton.accepts(&SignalString::parse("b,b", 0).unwrap()));
        }
    }

    #[test]
    fn deeper_automata_accept_fewer_strings() {
        let m1 = samples::m1();
        let automata: Vec<_> = (1..=3).map(|ell| build(&m1, ell)).collect();
        let alphabet = [sym("a"), sym("b")];
        let mut strings = vec![Vec::new()];
        for _ in 0..4 {
            strings = strings
                .into_iter()
                .flat_map(|s: Vec<SymbolId>| {
                    alphabet.iter().map(move |a| {
                        let mut extended = s.clone();
                        extended.push(a.clone());
                        extended
                    })
                })
                .collect();
            for symbols in &strings {
                let w = SignalString::new(symbols.clone(), 0).unwrap();
                for deeper in 1..automata.len() {
                    if automata[deeper].accepts(&w) {
                        assert!(automata[deeper - 1].accepts(&w), "w={w} ell={}", deeper + 1);
                    }
                }
            }
        }
    }

    #[test]
    fn deeper_automata_emit_tighter_estimates() {
        let m1 = samples::m1();
        let shallow = build(&m1, 1);
        let deep = build(&m1, 3);
        let w = SignalString::parse("a,a,b,a,a", 0).unwrap();
        let coarse = online_estimate(&shallow, &w);
        let fine = online_estimate(&deep, &w);
        for (t, (c, f)) in coarse.iter().zip(&fine).enumerate() {
            assert!(f.is_subset(c), "time {t}");
        }
        // Strictly tighter somewhere on this stream.
        assert!(coarse.iter().zip(&fine).any(|(c, f)| f.as_ref() != c.as_ref()));
    }

    #[test]
    fn complexity_conventions_on_m1() {
        let automaton = build(&samples::m1(), 2);

        let feasible = complexity_report(&automaton, CountingConvention::Feasible);
        assert_eq!(feasible.state_count, 5);
        assert_eq!(feasible.annotation_size, 8, "4 at length 1, 4 at length 2");
        assert_eq!(feasible.per_length.len(), 2);
        assert_eq!(feasible.per_length[0].state_count, 2);
        assert_eq!(feasible.per_length[1].state_count, 3);

        let all = complexity_report(&automaton, CountingConvention::All);
        assert_eq!(all.state_count, 2 + 4);
        assert_eq!(all.annotation_size, 8, "pruned windows have empty annotations");

        let reachable = complexity_report(&automaton, CountingConvention::Reachable);
        assert_eq!(reachable.state_count, 3);
        assert_eq!(reachable.annotation_size, 4);
        assert_eq!(reachable.per_length, vec![LengthCount {
            length: 2,
            state_count: 3,
            annotation_size: 4,
        }]);
    }

    #[test]
    fn depth_one_complexity_of_m1() {
        let automaton = build(&samples::m1(), 1);
        let report = complexity_report(&automaton, CountingConvention::Feasible);
        assert_eq!(report.state_count, 2);
        assert_eq!(report.annotation_size, 4);
    }

    #[test]
    fn construction_respects_the_budget() {
        let err = build_lcomplete(&samples::m1(), 2, EnumerationBudget(3)).unwrap_err();
        match err {
            Error::BudgetExceeded { budget: 3, reached } => assert!(reached > 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_zero_depth() {
        assert!(build_lcomplete(&samples::m1(), 0, EnumerationBudget::default()).is_err());
    }

    #[test]
    fn automaton_serializes_with_windows_and_annotations() {
        let automaton = build(&samples::m1(), 1);
        let json = serde_json::to_value(&automaton).unwrap();
        assert_eq!(json["ell"], 1);
        assert_eq!(json["annotationKind"], "states");
        assert_eq!(json["states"][0]["window"], serde_json::json!(["a"]));
        assert_eq!(json["states"][0]["annotation"], serde_json::json!(["s1", "s2"]));
        assert_eq!(json["states"][0]["annotationSize"], 2);
        assert_eq!(json["transitions"][0], serde_json::json!([0, "a", 0]));
    }
}
