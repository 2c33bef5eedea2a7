//! Signal-space decomposition.
//!
//! An aggregation function relabels every symbol of a machine's alphabet
//! with a coarser symbol; a suite of such functions models several
//! observers that each see one coarse view of the same signal.  The suite
//! is *consistent* when the tuple of coarse symbols still determines the
//! original symbol, which makes the decomposition lossless at the string
//! level.  Losslessness of *estimation* additionally needs every block of
//! same-observer symbols to form a non-deterministic chain; this module
//! checks that property, partitions alphabets into chains and synthesizes
//! consistent suites from a partition.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::{FiniteStateMachine, MachineDefinition, SignalString, SymbolId, Transition};

/// A total map from one alphabet onto a coarser one.
///
/// The index identifies the observer within a suite (1-based).  The
/// codomain is kept in sorted order so that every serialization and every
/// machine built from this function is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregationFunction {
    index: usize,
    map: BTreeMap<SymbolId, SymbolId>,
}

impl AggregationFunction {
    pub fn new(index: usize, map: BTreeMap<SymbolId, SymbolId>) -> Result<Self> {
        if map.is_empty() {
            return Err(Error::InvalidArgument("aggregation map must not be empty".into()));
        }
        Ok(AggregationFunction { index, map })
    }

    /// The identity relabelling of `alphabet`.
    pub fn identity(index: usize, alphabet: &[SymbolId]) -> Self {
        AggregationFunction {
            index,
            map: alphabet.iter().map(|s| (s.clone(), s.clone())).collect(),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    /// Symbols of the original alphabet this function is defined on.
    pub fn domain(&self) -> impl Iterator<Item = &SymbolId> {
        self.map.keys()
    }

    /// Coarse symbols in sorted order.
    pub fn codomain(&self) -> Vec<SymbolId> {
        let unique: BTreeSet<SymbolId> = self.map.values().cloned().collect();
        unique.into_iter().collect()
    }

    pub fn apply(&self, symbol: &SymbolId) -> Result<&SymbolId> {
        self.map.get(symbol).ok_or_else(|| Error::UnknownSymbol(symbol.clone()))
    }

    /// All original symbols mapped onto `aggregate`, in sorted order.
    pub fn preimage(&self, aggregate: &SymbolId) -> Result<Vec<SymbolId>> {
        let symbols: Vec<SymbolId> = self
            .map
            .iter()
            .filter(|(_, v)| *v == aggregate)
            .map(|(k, _)| k.clone())
            .collect();
        if symbols.is_empty() {
            return Err(Error::UnknownSymbol(aggregate.clone()));
        }
        Ok(symbols)
    }

    /// True when the function is defined on exactly `alphabet`.
    pub fn is_total_on(&self, alphabet: &[SymbolId]) -> bool {
        self.map.len() == alphabet.len() && alphabet.iter().all(|s| self.map.contains_key(s))
    }
}

#[derive(Serialize, Deserialize)]
struct FunctionWire {
    map: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct SuiteWire {
    p: usize,
    functions: Vec<FunctionWire>,
}

/// An ordered family of aggregation functions over one common alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SuiteWire", into = "SuiteWire")]
pub struct AggregationSuite {
    functions: Vec<AggregationFunction>,
}

impl TryFrom<SuiteWire> for AggregationSuite {
    type Error = Error;

    fn try_from(wire: SuiteWire) -> Result<Self> {
        if wire.p != wire.functions.len() {
            return Err(Error::Parse(format!(
                "suite declares p={} but lists {} functions",
                wire.p,
                wire.functions.len()
            )));
        }
        let functions = wire
            .functions
            .into_iter()
            .enumerate()
            .map(|(i, f)| {
                AggregationFunction::new(
                    i + 1,
                    f.map
                        .into_iter()
                        .map(|(k, v)| (SymbolId::new(k), SymbolId::new(v)))
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        AggregationSuite::new(functions)
    }
}

impl From<AggregationSuite> for SuiteWire {
    fn from(suite: AggregationSuite) -> Self {
        SuiteWire {
            p: suite.functions.len(),
            functions: suite
                .functions
                .iter()
                .map(|f| FunctionWire {
                    map: f
                        .map
                        .iter()
                        .map(|(k, v)| (k.as_str().to_owned(), v.as_str().to_owned()))
                        .collect(),
                })
                .collect(),
        }
    }
}

impl AggregationSuite {
    /// Builds a suite, re-indexing the functions 1..=p and requiring them
    /// to share one domain alphabet.
    pub fn new(functions: Vec<AggregationFunction>) -> Result<Self> {
        if functions.is_empty() {
            return Err(Error::InvalidArgument("a suite needs at least one function".into()));
        }
        let domain: BTreeSet<&SymbolId> = functions[0].domain().collect();
        for f in &functions[1..] {
            let other: BTreeSet<&SymbolId> = f.domain().collect();
            if other != domain {
                return Err(Error::MismatchedAlphabets(
                    "aggregation functions are defined on different alphabets".into(),
                ));
            }
        }
        let functions = functions
            .into_iter()
            .enumerate()
            .map(|(i, f)| AggregationFunction { index: i + 1, ..f })
            .collect();
        Ok(AggregationSuite { functions })
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn functions(&self) -> &[AggregationFunction] {
        &self.functions
    }

    /// The common domain alphabet, in sorted order.
    pub fn domain(&self) -> Vec<SymbolId> {
        self.functions[0].domain().cloned().collect()
    }

    /// The tuple of coarse symbols every observer sees for `symbol`.
    pub fn apply(&self, symbol: &SymbolId) -> Result<Vec<SymbolId>> {
        self.functions.iter().map(|f| f.apply(symbol).cloned()).collect()
    }

    /// Checks whether the tuple of coarse symbols determines the original
    /// symbol; on failure reports two symbols with identical tuples.
    pub fn check_consistency(&self) -> ConsistencyCheck {
        let mut seen: BTreeMap<Vec<&SymbolId>, &SymbolId> = BTreeMap::new();
        for symbol in self.functions[0].map.keys() {
            let tuple: Vec<&SymbolId> =
                self.functions.iter().map(|f| &f.map[symbol]).collect();
            if let Some(previous) = seen.insert(tuple, symbol) {
                return ConsistencyCheck {
                    consistent: false,
                    witness: Some((previous.clone(), symbol.clone())),
                };
            }
        }
        ConsistencyCheck { consistent: true, witness: None }
    }
}

/// Result of [`AggregationSuite::check_consistency`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyCheck {
    pub consistent: bool,
    /// Two distinct symbols that every observer sees identically.
    pub witness: Option<(SymbolId, SymbolId)>,
}

/// Applies an aggregation function symbolwise to an observed string.
pub fn aggregate_string(function: &AggregationFunction, w: &SignalString) -> Result<SignalString> {
    let symbols = w
        .symbols()
        .iter()
        .map(|s| function.apply(s).cloned())
        .collect::<Result<Vec<_>>>()?;
    SignalString::new(symbols, w.start_time())
}

/// Lazily enumerates every original string that aggregates to `v`.
///
/// Strings are produced in lexicographic order of the per-position
/// preimages.  The total count is the product of the preimage sizes and is
/// available upfront via [`PreimageStrings::total`].
pub fn invert_string(function: &AggregationFunction, v: &SignalString) -> Result<PreimageStrings> {
    let options = v
        .symbols()
        .iter()
        .map(|aggregate| function.preimage(aggregate))
        .collect::<Result<Vec<_>>>()?;
    Ok(PreimageStrings {
        cursor: Some(vec![0; options.len()]),
        options,
        start_time: v.start_time(),
    })
}

/// Iterator over the preimage strings of one aggregated string.
#[derive(Debug, Clone)]
pub struct PreimageStrings {
    options: Vec<Vec<SymbolId>>,
    cursor: Option<Vec<usize>>,
    start_time: usize,
}

impl PreimageStrings {
    /// Number of strings this iterator will produce in total.
    pub fn total(&self) -> u128 {
        self.options.iter().map(|o| o.len() as u128).product()
    }
}

impl Iterator for PreimageStrings {
    type Item = SignalString;

    fn next(&mut self) -> Option<SignalString> {
        let cursor = self.cursor.as_mut()?;
        let symbols: Vec<SymbolId> = cursor
            .iter()
            .zip(&self.options)
            .map(|(&i, opts)| opts[i].clone())
            .collect();

        // Advance the mixed-radix counter; exhaust on overflow.
        let mut position = cursor.len();
        loop {
            if position == 0 {
                self.cursor = None;
                break;
            }
            position -= 1;
            cursor[position] += 1;
            if cursor[position] < self.options[position].len() {
                break;
            }
            cursor[position] = 0;
        }

        Some(SignalString::new(symbols, self.start_time).expect("preimage strings are nonempty"))
    }
}

/// One observer's machine: the original machine with every transition
/// relabelled through that observer's aggregation function.
#[derive(Debug, Clone)]
pub struct DistributedMachine {
    pub machine: Arc<FiniteStateMachine>,
    pub aggregation: AggregationFunction,
    pub parent: Arc<FiniteStateMachine>,
}

/// Relabels `parent` through `function`.  States and initial states are
/// unchanged; the alphabet becomes the function's codomain and duplicate
/// relabelled transitions collapse.
pub fn build_distributed(
    parent: &Arc<FiniteStateMachine>,
    function: &AggregationFunction,
) -> Result<DistributedMachine> {
    if !function.is_total_on(parent.alphabet()) {
        return Err(Error::MismatchedAlphabets(
            "aggregation function is not total on the machine's alphabet".into(),
        ));
    }
    let definition = MachineDefinition {
        states: parent.states().iter().map(|s| s.as_str().to_owned()).collect(),
        alphabet: function.codomain().iter().map(|s| s.as_str().to_owned()).collect(),
        transitions: parent
            .transitions()
            .iter()
            .map(|t| {
                Ok((
                    t.source.as_str().to_owned(),
                    function.apply(&t.symbol)?.as_str().to_owned(),
                    t.target.as_str().to_owned(),
                ))
            })
            .collect::<Result<Vec<_>>>()?,
        initial: Some(parent.initial().iter().map(|s| s.as_str().to_owned()).collect()),
    };
    Ok(DistributedMachine {
        machine: Arc::new(definition.build()?),
        aggregation: function.clone(),
        parent: parent.clone(),
    })
}

/// Why a symbol block fails to be a non-deterministic chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ChainViolation {
    /// One state emits two distinct symbols of the block.
    MultipleSymbolsFromState { first: Transition, second: Transition },
    /// One state receives block transitions from two distinct sources.
    MultipleSourcesToState { first: Transition, second: Transition },
}

/// Checks the two chain conditions for the subrelation labelled by
/// `block`: no state emits two distinct block symbols, and no state has
/// incoming block transitions from two distinct sources.  Returns the
/// first violation in deterministic transition order, or `None`.
pub fn chain_violation(
    machine: &FiniteStateMachine,
    block: &BTreeSet<SymbolId>,
) -> Result<Option<ChainViolation>> {
    for symbol in block {
        machine.symbol_position(symbol)?;
    }

    let mut first_emission: BTreeMap<usize, &Transition> = BTreeMap::new();
    let mut first_source: BTreeMap<usize, &Transition> = BTreeMap::new();
    for transition in machine.transitions() {
        if !block.contains(&transition.symbol) {
            continue;
        }
        let source = machine.state_position(&transition.source)?;
        let target = machine.state_position(&transition.target)?;

        match first_emission.get(&source) {
            None => {
                first_emission.insert(source, transition);
            }
            Some(previous) if previous.symbol != transition.symbol => {
                return Ok(Some(ChainViolation::MultipleSymbolsFromState {
                    first: (*previous).clone(),
                    second: transition.clone(),
                }));
            }
            Some(_) => {}
        }

        match first_source.get(&target) {
            None => {
                first_source.insert(target, transition);
            }
            Some(previous) if previous.source != transition.source => {
                return Ok(Some(ChainViolation::MultipleSourcesToState {
                    first: (*previous).clone(),
                    second: transition.clone(),
                }));
            }
            Some(_) => {}
        }
    }
    Ok(None)
}

/// True when the subrelation labelled by `block` is a non-deterministic
/// chain.
pub fn is_nondeterministic_chain(
    machine: &FiniteStateMachine,
    block: &BTreeSet<SymbolId>,
) -> Result<bool> {
    Ok(chain_violation(machine, block)?.is_none())
}

/// One block of a chain partition: its symbols (in alphabet order) and the
/// transitions they label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainBlock {
    pub symbols: Vec<SymbolId>,
    pub transitions: Vec<Transition>,
}

/// A partition of a machine's alphabet into non-deterministic chains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainPartition {
    pub blocks: Vec<ChainBlock>,
}

impl ChainPartition {
    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Partitions the alphabet into non-deterministic chains.
///
/// Two symbols conflict when some state emits both or when they drive two
/// distinct sources onto one target; the partition is a greedy first-fit
/// coloring of this conflict graph in alphabet order.  The result is
/// deterministic and valid but not necessarily of minimal block count.
/// Fails when some single symbol already violates the chain conditions,
/// since then no partition can succeed.
pub fn chain_partition(machine: &FiniteStateMachine) -> Result<ChainPartition> {
    // A singleton block can only violate the incoming-sources condition.
    for symbol in machine.alphabet() {
        let block: BTreeSet<SymbolId> = [symbol.clone()].into();
        if let Some(ChainViolation::MultipleSourcesToState { first, second }) =
            chain_violation(machine, &block)?
        {
            return Err(Error::NotChainDecomposable { symbol: symbol.clone(), first, second });
        }
    }

    // Per state: which symbols it emits.  Per (target, symbol): the unique
    // source (unique by the singleton check above).
    let n_states = machine.states().len();
    let n_symbols = machine.alphabet().len();
    let mut emits: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n_states];
    let mut source_into: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n_states];
    for t in machine.transitions() {
        let source = machine.state_position(&t.source)?;
        let symbol = machine.symbol_position(&t.symbol)?;
        let target = machine.state_position(&t.target)?;
        emits[source].insert(symbol);
        source_into[target].insert(symbol, source);
    }

    let conflicts = |a: usize, b: usize| -> bool {
        if emits.iter().any(|set| set.contains(&a) && set.contains(&b)) {
            return true;
        }
        source_into.iter().any(|by_symbol| {
            match (by_symbol.get(&a), by_symbol.get(&b)) {
                (Some(&sa), Some(&sb)) => sa != sb,
                _ => false,
            }
        })
    };

    // Greedy first-fit coloring in alphabet order.
    let mut color: Vec<usize> = Vec::with_capacity(n_symbols);
    let mut used = 0usize;
    for symbol in 0..n_symbols {
        let mut forbidden = vec![false; used];
        for earlier in 0..symbol {
            if conflicts(earlier, symbol) {
                forbidden[color[earlier]] = true;
            }
        }
        let assigned = (0..used).find(|&c| !forbidden[c]).unwrap_or_else(|| {
            used += 1;
            used - 1
        });
        color.push(assigned);
    }

    let mut blocks: Vec<ChainBlock> = (0..used)
        .map(|_| ChainBlock { symbols: Vec::new(), transitions: Vec::new() })
        .collect();
    for (index, symbol) in machine.alphabet().iter().enumerate() {
        blocks[color[index]].symbols.push(symbol.clone());
    }
    for t in machine.transitions() {
        let symbol = machine.symbol_position(&t.symbol)?;
        blocks[color[symbol]].transitions.push(t.clone());
    }

    let partition = ChainPartition { blocks };
    debug_assert!(partition.blocks.iter().all(|b| {
        let set: BTreeSet<SymbolId> = b.symbols.iter().cloned().collect();
        is_nondeterministic_chain(machine, &set).unwrap_or(false)
    }));
    Ok(partition)
}

/// Smallest `b >= 1` with `b^p >= n`.
fn digit_base(n: usize, p: usize) -> usize {
    let mut base = 1usize;
    loop {
        if base.saturating_pow(p as u32) >= n {
            return base;
        }
        base += 1;
    }
}

/// Synthesizes a consistent suite of `p` aggregation functions from a
/// chain partition.
///
/// Within block `j`, each symbol's position is encoded in `p` mixed-radix
/// digits of base `ceil(|block_j|^(1/p))`; observer `k` sees digit `k`
/// tagged with the block, as `c<j>.d<k>.<digit>`.  Symbols from different
/// blocks therefore never share a coarse symbol, and within a block the
/// digits jointly recover the position, so the suite is consistent and
/// every coarse symbol's preimage stays inside one chain.
pub fn synthesize_suite(partition: &ChainPartition, p: usize) -> Result<AggregationSuite> {
    if p == 0 {
        return Err(Error::InvalidArgument("suite size must be at least 1".into()));
    }
    let mut functions = Vec::with_capacity(p);
    for k in 1..=p {
        let mut map = BTreeMap::new();
        for (j, block) in partition.blocks.iter().enumerate() {
            let base = digit_base(block.symbols.len(), p);
            for (i, symbol) in block.symbols.iter().enumerate() {
                let digit = (i / base.pow((k - 1) as u32)) % base;
                map.insert(
                    symbol.clone(),
                    SymbolId::new(format!("c{}.d{}.{}", j + 1, k, digit)),
                );
            }
        }
        functions.push(AggregationFunction::new(k, map)?);
    }
    AggregationSuite::new(functions)
}
