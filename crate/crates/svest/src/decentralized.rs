//! Decentralized estimation over aggregated observations.
//!
//! Given a consistent aggregation suite, one relabelled copy of the
//! machine runs per observer; each copy sees only its own coarse symbol
//! stream.  Fusing the per-observer estimates by intersection always
//! over-approximates the monolithic estimate, and is exact whenever every
//! coarse symbol's preimage forms a non-deterministic chain — the
//! situation the synthesized suites of [`crate::decomposition`] set up.

use serde::Serialize;

use std::sync::Arc;

use crate::decomposition::{build_distributed, AggregationSuite, DistributedMachine};
use crate::error::{Error, Result};
use crate::estimator::{EstimatePair, EstimatorState, StateSet};
use crate::machine::{EnumerationBudget, FiniteStateMachine, SignalString, SymbolId};

/// One fused estimation step.
///
/// The fused sets are the intersections of the per-observer sets; the
/// monolithic sets are present when the estimator was built with a
/// comparison estimator, and `exact` records whether fused and monolithic
/// sets coincide at this step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FusionResult {
    pub symbol: SymbolId,
    pub per_machine_chi: Vec<StateSet>,
    pub per_machine_rho: Vec<StateSet>,
    pub fused_chi: StateSet,
    pub fused_rho: StateSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monolithic_chi: Option<StateSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monolithic_rho: Option<StateSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<bool>,
}

impl FusionResult {
    /// The fused estimate as a pair.
    pub fn fused(&self) -> EstimatePair {
        EstimatePair::new(self.fused_chi.clone(), self.fused_rho.clone())
    }
}

/// Runs one estimator per aggregation function and fuses their estimates.
#[derive(Debug, Clone)]
pub struct DecentralizedEstimator {
    parent: Arc<FiniteStateMachine>,
    suite: AggregationSuite,
    machines: Vec<DistributedMachine>,
    estimators: Vec<EstimatorState>,
    monolithic: Option<EstimatorState>,
}

impl DecentralizedEstimator {
    /// Builds the per-observer machines.  When `compare` is set, a
    /// monolithic estimator runs alongside on the original symbols and
    /// every step reports whether fusion was exact.
    pub fn new(
        parent: Arc<FiniteStateMachine>,
        suite: AggregationSuite,
        compare: bool,
    ) -> Result<Self> {
        let machines = suite
            .functions()
            .iter()
            .map(|f| build_distributed(&parent, f))
            .collect::<Result<Vec<_>>>()?;
        let estimators =
            machines.iter().map(|d| EstimatorState::new(d.machine.clone())).collect();
        let monolithic = compare.then(|| EstimatorState::new(parent.clone()));
        Ok(DecentralizedEstimator { parent, suite, machines, estimators, monolithic })
    }

    pub fn parent(&self) -> &Arc<FiniteStateMachine> {
        &self.parent
    }

    pub fn suite(&self) -> &AggregationSuite {
        &self.suite
    }

    pub fn machines(&self) -> &[DistributedMachine] {
        &self.machines
    }

    /// Feeds one original symbol: every observer sees its aggregated copy,
    /// then the per-observer estimates are intersected.
    pub fn step(&mut self, symbol: &SymbolId) -> Result<FusionResult> {
        self.parent.symbol_position(symbol)?;

        let mut per_machine_chi = Vec::with_capacity(self.estimators.len());
        let mut per_machine_rho = Vec::with_capacity(self.estimators.len());
        for (estimator, function) in
            self.estimators.iter_mut().zip(self.suite.functions())
        {
            let coarse = function.apply(symbol)?.clone();
            let pair = estimator.observe(&coarse)?;
            per_machine_chi.push(pair.compatible);
            per_machine_rho.push(pair.predicted);
        }

        let fuse = |sets: &[StateSet]| {
            let mut fused = sets[0].clone();
            for set in &sets[1..] {
                fused = fused.intersection(set);
            }
            fused
        };
        let fused_chi = fuse(&per_machine_chi);
        let fused_rho = fuse(&per_machine_rho);

        let monolithic = match self.monolithic.as_mut() {
            Some(estimator) => Some(estimator.observe(symbol)?),
            None => None,
        };
        let exact = monolithic
            .as_ref()
            .map(|pair| pair.compatible == fused_chi && pair.predicted == fused_rho);

        Ok(FusionResult {
            symbol: symbol.clone(),
            per_machine_chi,
            per_machine_rho,
            fused_chi,
            fused_rho,
            monolithic_chi: monolithic.as_ref().map(|p| p.compatible.clone()),
            monolithic_rho: monolithic.map(|p| p.predicted),
            exact,
        })
    }
}

/// Builds a fresh decentralized estimator and replays an entire string.
pub fn run_trace(
    parent: &Arc<FiniteStateMachine>,
    suite: &AggregationSuite,
    w: &SignalString,
    compare: bool,
) -> Result<Vec<FusionResult>> {
    let mut estimator = DecentralizedEstimator::new(parent.clone(), suite.clone(), compare)?;
    w.symbols().iter().map(|symbol| estimator.step(symbol)).collect()
}

/// A string on which fusion was not exact, with both estimates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExactnessCounterexample {
    pub string: String,
    pub fused: EstimatePair,
    pub monolithic: EstimatePair,
}

/// Outcome of [`verify_exactness`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExactnessReport {
    pub exact: bool,
    pub max_length: usize,
    pub strings_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<ExactnessCounterexample>,
}

/// Exhaustively compares fused and monolithic estimates on every feasible
/// string of length up to `max_length`, reporting the first mismatch in
/// depth-first symbol order.  Each feasible string counts once against the
/// budget; extensions of infeasible strings are pruned, which is sound
/// because a string's compatible set never grows under extension.
pub fn verify_exactness(
    parent: &Arc<FiniteStateMachine>,
    suite: &AggregationSuite,
    max_length: usize,
    budget: EnumerationBudget,
) -> Result<ExactnessReport> {
    if max_length == 0 {
        return Err(Error::InvalidArgument("maximum string length must be at least 1".into()));
    }

    struct Search<'a> {
        alphabet: &'a [SymbolId],
        max_length: usize,
        budget: usize,
        checked: usize,
        counterexample: Option<ExactnessCounterexample>,
    }

    impl Search<'_> {
        fn explore(
            &mut self,
            estimator: &DecentralizedEstimator,
            prefix: &mut Vec<SymbolId>,
        ) -> Result<()> {
            if self.counterexample.is_some() || prefix.len() == self.max_length {
                return Ok(());
            }
            for symbol in self.alphabet {
                let mut branch = estimator.clone();
                let result = branch.step(symbol)?;
                let monolithic_chi =
                    result.monolithic_chi.clone().expect("search estimators compare");
                if monolithic_chi.is_empty() {
                    continue; // infeasible; all extensions stay infeasible
                }
                self.checked += 1;
                if self.checked > self.budget {
                    return Err(Error::BudgetExceeded {
                        budget: self.budget,
                        reached: self.checked,
                    });
                }
                prefix.push(symbol.clone());
                if result.exact != Some(true) {
                    let joined: Vec<&str> =
                        prefix.iter().map(SymbolId::as_str).collect();
                    self.counterexample = Some(ExactnessCounterexample {
                        string: joined.join(","),
                        fused: result.fused(),
                        monolithic: EstimatePair::new(
                            monolithic_chi,
                            result.monolithic_rho.clone().expect("search estimators compare"),
                        ),
                    });
                    prefix.pop();
                    return Ok(());
                }
                self.explore(&branch, prefix)?;
                prefix.pop();
                if self.counterexample.is_some() {
                    return Ok(());
                }
            }
            Ok(())
        }
    }

    let root = DecentralizedEstimator::new(parent.clone(), suite.clone(), true)?;
    let mut search = Search {
        alphabet: parent.alphabet(),
        max_length,
        budget: budget.0,
        checked: 0,
        counterexample: None,
    };
    search.explore(&root, &mut Vec::new())?;
    Ok(ExactnessReport {
        exact: search.counterexample.is_none(),
        max_length,
        strings_checked: search.checked,
        counterexample: search.counterexample,
    })
}
