//! Quantized two-tank benchmark.
//!
//! Two coupled tanks exchange water and drain; at each step an inflow of
//! 1, 7 or 14 units is chosen per tank and the levels are measured only
//! as one of three bands per tank.  The observed symbol combines both
//! inflow choices and both measured bands, giving an 81-symbol alphabet.
//! Splitting the measurement between two observers (each sees both
//! inflows but only its own tank's band) yields two 27-symbol alphabets.
//!
//! [`TwoTankOracle`] exposes exact polygon-valued estimation sources for
//! the full observer and both single-tank observers, so window automata
//! and fused estimates can be computed and compared without rounding.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::geometry::{
    integer, ratio, vertex_from_wire, vertex_to_wire, Mat2, Point2, RationalPolygon, VertexWire,
};
use crate::decomposition::{AggregationFunction, AggregationSuite};
use crate::error::{Error, Result};
use crate::lcomplete::{
    build_lcomplete, complexity_report, Annotation, ComplexityReport, CountingConvention,
    EstimationSource, LCompleteAutomaton, SourceEstimate,
};
use crate::machine::{EnumerationBudget, SymbolId};

/// The exact two-tank dynamics and quantization grid.
///
/// Level dynamics: `x(t+1) = A·x(t) + u(t)` with
/// `A = [[2/5, 1/4], [1/4, 2/5]]` (drain rate 7/20 per tank, coupling
/// 1/4); inflows per tank are 1, 7 or 14 units, measured bands per tank
/// are `[0,10)`, `[10,20)` and `[20,30]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTankModel {
    matrix: Mat2,
}

impl Default for TwoTankModel {
    fn default() -> Self {
        TwoTankModel::new()
    }
}

impl TwoTankModel {
    pub fn new() -> Self {
        let drain = ratio(7, 20);
        let coupling = ratio(1, 4);
        let retained = &(&integer(1) - &drain) - &coupling;
        TwoTankModel {
            matrix: Mat2::new(retained.clone(), coupling.clone(), coupling, retained),
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    /// Inflow units for a 1-based level index.
    pub fn input_level(&self, level: u8) -> Result<super::geometry::Rational> {
        match level {
            1 => Ok(integer(1)),
            2 => Ok(integer(7)),
            3 => Ok(integer(14)),
            other => Err(Error::InvalidArgument(format!(
                "input level {other} out of range 1..=3"
            ))),
        }
    }

    /// Inflow vector for a pair of 1-based level indices.
    pub fn input_vector(&self, level1: u8, level2: u8) -> Result<Point2> {
        Ok((self.input_level(level1)?, self.input_level(level2)?))
    }

    /// Band boundaries `[lo, hi]` for a 1-based band index.
    fn band(&self, cell: u8) -> Result<(super::geometry::Rational, super::geometry::Rational)> {
        match cell {
            1 => Ok((integer(0), integer(10))),
            2 => Ok((integer(10), integer(20))),
            3 => Ok((integer(20), integer(30))),
            other => Err(Error::InvalidArgument(format!(
                "output band {other} out of range 1..=3"
            ))),
        }
    }

    /// The measurable region `[0,30]²`.
    pub fn domain(&self) -> RationalPolygon {
        RationalPolygon::rect(integer(0), integer(0), integer(30), integer(30))
    }

    /// Closed box for a pair of measured bands.
    pub fn output_cell(&self, cell1: u8, cell2: u8) -> Result<RationalPolygon> {
        let (x0, x1) = self.band(cell1)?;
        let (y0, y1) = self.band(cell2)?;
        Ok(RationalPolygon::rect(x0, y0, x1, y1))
    }

    /// Vertical strip for tank 1's measured band (tank 2 unconstrained).
    pub fn column(&self, cell: u8) -> Result<RationalPolygon> {
        let (x0, x1) = self.band(cell)?;
        Ok(RationalPolygon::rect(x0, integer(0), x1, integer(30)))
    }

    /// Horizontal strip for tank 2's measured band (tank 1 unconstrained).
    pub fn row(&self, cell: u8) -> Result<RationalPolygon> {
        let (y0, y1) = self.band(cell)?;
        Ok(RationalPolygon::rect(integer(0), y0, integer(30), y1))
    }

    /// One exact step of the dynamics.
    pub fn step(&self, x: &Point2, u: &Point2) -> Point2 {
        let moved = self.matrix.apply(x);
        (&moved.0 + &u.0, &moved.1 + &u.1)
    }

    /// Exact trajectory `x(0), …, x(n)` under `n` inflow level pairs.
    pub fn simulate(&self, x0: &Point2, inputs: &[(u8, u8)]) -> Result<Vec<Point2>> {
        let mut states = Vec::with_capacity(inputs.len() + 1);
        states.push(x0.clone());
        for &(level1, level2) in inputs {
            let u = self.input_vector(level1, level2)?;
            let next = self.step(states.last().expect("states never empty"), &u);
            states.push(next);
        }
        Ok(states)
    }

    fn quantize_level(&self, value: &super::geometry::Rational) -> Option<u8> {
        if value < &integer(0) {
            None
        } else if value < &integer(10) {
            Some(1)
        } else if value < &integer(20) {
            Some(2)
        } else if value <= &integer(30) {
            Some(3)
        } else {
            None
        }
    }

    /// The measured band pair for a state, if it is measurable at all.
    /// Bands are half-open (`[0,10)`, `[10,20)`) except the last, which
    /// closes at 30.
    pub fn quantize(&self, x: &Point2) -> Option<(u8, u8)> {
        Some((self.quantize_level(&x.0)?, self.quantize_level(&x.1)?))
    }
}

fn digit(byte: u8) -> Result<u8> {
    match byte {
        b'1'..=b'3' => Ok(byte - b'0'),
        other => Err(Error::Parse(format!(
            "expected a digit 1..=3, found `{}`",
            other as char
        ))),
    }
}

/// One observed symbol of the full observer: both inflow levels and both
/// measured bands, written `u<i><j>y<k><l>` with digits 1..=3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct TwoTankSymbol {
    pub input1: u8,
    pub input2: u8,
    pub output1: u8,
    pub output2: u8,
}

impl TwoTankSymbol {
    pub fn new(input1: u8, input2: u8, output1: u8, output2: u8) -> Result<Self> {
        for value in [input1, input2, output1, output2] {
            if !(1..=3).contains(&value) {
                return Err(Error::InvalidArgument(format!(
                    "symbol component {value} out of range 1..=3"
                )));
            }
        }
        Ok(TwoTankSymbol { input1, input2, output1, output2 })
    }

    pub fn parse(token: &str) -> Result<Self> {
        let bytes = token.as_bytes();
        if bytes.len() != 6 || bytes[0] != b'u' || bytes[3] != b'y' {
            return Err(Error::Parse(format!(
                "expected a token like `u12y31`, found `{token}`"
            )));
        }
        TwoTankSymbol::new(digit(bytes[1])?, digit(bytes[2])?, digit(bytes[4])?, digit(bytes[5])?)
    }

    pub fn token(&self) -> SymbolId {
        SymbolId::new(format!(
            "u{}{}y{}{}",
            self.input1, self.input2, self.output1, self.output2
        ))
    }

    /// What observer `channel` (1 or 2) sees: both inflows plus its own
    /// tank's band, written `u<i><j>t<channel><band>`.
    pub fn aggregate(&self, channel: u8) -> Result<SymbolId> {
        let band = match channel {
            1 => self.output1,
            2 => self.output2,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "channel {other} out of range 1..=2"
                )))
            }
        };
        Ok(SymbolId::new(format!("u{}{}t{}{}", self.input1, self.input2, channel, band)))
    }

    /// Every symbol, ordered by (input1, input2, output1, output2).
    pub fn alphabet() -> Vec<TwoTankSymbol> {
        let mut symbols = Vec::with_capacity(81);
        for input1 in 1..=3 {
            for input2 in 1..=3 {
                for output1 in 1..=3 {
                    for output2 in 1..=3 {
                        symbols.push(TwoTankSymbol { input1, input2, output1, output2 });
                    }
                }
            }
        }
        symbols
    }
}

impl fmt::Display for TwoTankSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.token())
    }
}

/// An aggregated symbol as one observer sees it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct AggregatedSymbol {
    input1: u8,
    input2: u8,
    band: u8,
}

fn parse_aggregated(token: &str, channel: u8) -> Result<AggregatedSymbol> {
    let bytes = token.as_bytes();
    if bytes.len() != 6
        || bytes[0] != b'u'
        || bytes[3] != b't'
        || bytes[4] != b'0' + channel
    {
        return Err(Error::Parse(format!(
            "expected a token like `u12t{channel}3`, found `{token}`"
        )));
    }
    Ok(AggregatedSymbol {
        input1: digit(bytes[1])?,
        input2: digit(bytes[2])?,
        band: digit(bytes[5])?,
    })
}

/// The two observers' relabelling of the 81-symbol alphabet, as a
/// consistent aggregation suite (observer k keeps the inflows and its own
/// band, so the pair of views pins the symbol).
pub fn twotank_aggregation_suite() -> AggregationSuite {
    let mut maps = [BTreeMap::new(), BTreeMap::new()];
    for symbol in TwoTankSymbol::alphabet() {
        for channel in 1..=2u8 {
            maps[channel as usize - 1].insert(
                symbol.token(),
                symbol.aggregate(channel).expect("channels 1 and 2 are valid"),
            );
        }
    }
    let [map1, map2] = maps;
    AggregationSuite::new(vec![
        AggregationFunction::new(1, map1).expect("two-tank maps are nonempty"),
        AggregationFunction::new(2, map2).expect("two-tank maps are nonempty"),
    ])
    .expect("both maps cover the same 81 symbols")
}

/// A polygon-valued estimate of the tank levels.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymbolicEstimate {
    pub region: RationalPolygon,
}

impl SymbolicEstimate {
    /// The no-information estimate: anywhere in the measurable domain.
    pub fn full(model: &TwoTankModel) -> Self {
        SymbolicEstimate { region: model.domain() }
    }
}

/// One estimation step of the full observer: restrict to the measured
/// cell, then push through the dynamics and clip to the measurable
/// domain.  Returns `(compatible, predicted)`.
pub fn symbolic_step(
    model: &TwoTankModel,
    estimate: &SymbolicEstimate,
    symbol: &TwoTankSymbol,
) -> Result<(SymbolicEstimate, SymbolicEstimate)> {
    let cell = model.output_cell(symbol.output1, symbol.output2)?;
    let u = model.input_vector(symbol.input1, symbol.input2)?;
    let compatible = estimate.region.intersect(&cell);
    let predicted = predict(model, &compatible, &u);
    Ok((SymbolicEstimate { region: compatible }, SymbolicEstimate { region: predicted }))
}

fn predict(model: &TwoTankModel, compatible: &RationalPolygon, u: &Point2) -> RationalPolygon {
    if compatible.is_empty() {
        return RationalPolygon::empty();
    }
    compatible
        .affine_image(model.matrix(), u)
        .expect("the two-tank dynamics matrix is invertible")
        .intersect(&model.domain())
}

/// Which observer an oracle models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TwoTankView {
    /// Sees both inflows and both bands (81 symbols).
    Monolithic,
    /// Sees both inflows and tank 1's band (27 symbols).
    Channel1,
    /// Sees both inflows and tank 2's band (27 symbols).
    Channel2,
}

impl TwoTankView {
    pub fn name(&self) -> &'static str {
        match self {
            TwoTankView::Monolithic => "monolithic",
            TwoTankView::Channel1 => "channel1",
            TwoTankView::Channel2 => "channel2",
        }
    }
}

/// Exact polygon-valued estimation source for one observer of the
/// two-tank system.  Plugs into [`build_lcomplete`]; windows are feasible
/// exactly when their compatible region is nonempty.
#[derive(Debug, Clone)]
pub struct TwoTankOracle {
    model: TwoTankModel,
    view: TwoTankView,
}

impl TwoTankOracle {
    pub fn new(view: TwoTankView) -> Self {
        TwoTankOracle { model: TwoTankModel::new(), view }
    }

    pub fn monolithic() -> Self {
        TwoTankOracle::new(TwoTankView::Monolithic)
    }

    pub fn channel(channel: u8) -> Result<Self> {
        match channel {
            1 => Ok(TwoTankOracle::new(TwoTankView::Channel1)),
            2 => Ok(TwoTankOracle::new(TwoTankView::Channel2)),
            other => {
                Err(Error::InvalidArgument(format!("channel {other} out of range 1..=2")))
            }
        }
    }

    pub fn model(&self) -> &TwoTankModel {
        &self.model
    }

    pub fn view(&self) -> TwoTankView {
        self.view
    }

    /// The measurement region and inflow vector encoded by one of this
    /// observer's symbols.
    fn constraint(&self, symbol: &SymbolId) -> Result<(RationalPolygon, Point2)> {
        match self.view {
            TwoTankView::Monolithic => {
                let parsed = TwoTankSymbol::parse(symbol.as_str())?;
                Ok((
                    self.model.output_cell(parsed.output1, parsed.output2)?,
                    self.model.input_vector(parsed.input1, parsed.input2)?,
                ))
            }
            TwoTankView::Channel1 => {
                let parsed = parse_aggregated(symbol.as_str(), 1)?;
                Ok((
                    self.model.column(parsed.band)?,
                    self.model.input_vector(parsed.input1, parsed.input2)?,
                ))
            }
            TwoTankView::Channel2 => {
                let parsed = parse_aggregated(symbol.as_str(), 2)?;
                Ok((
                    self.model.row(parsed.band)?,
                    self.model.input_vector(parsed.input1, parsed.input2)?,
                ))
            }
        }
    }
}

/// The monolithic oracle plus both single-tank observers, in that order.
pub fn twotank_feasibility_oracle() -> [TwoTankOracle; 3] {
    [
        TwoTankOracle::monolithic(),
        TwoTankOracle::new(TwoTankView::Channel1),
        TwoTankOracle::new(TwoTankView::Channel2),
    ]
}

impl EstimationSource for TwoTankOracle {
    type Annotation = RationalPolygon;

    fn alphabet(&self) -> Vec<SymbolId> {
        match self.view {
            TwoTankView::Monolithic => {
                TwoTankSymbol::alphabet().iter().map(TwoTankSymbol::token).collect()
            }
            TwoTankView::Channel1 | TwoTankView::Channel2 => {
                let channel = if self.view == TwoTankView::Channel1 { 1 } else { 2 };
                let mut tokens = Vec::with_capacity(27);
                for input1 in 1..=3 {
                    for input2 in 1..=3 {
                        for band in 1..=3 {
                            tokens.push(SymbolId::new(format!(
                                "u{input1}{input2}t{channel}{band}"
                            )));
                        }
                    }
                }
                tokens
            }
        }
    }

    fn seed(&self, symbol: &SymbolId) -> Result<SourceEstimate<RationalPolygon>> {
        let (region, u) = self.constraint(symbol)?;
        let predicted = predict(&self.model, &region, &u);
        Ok(SourceEstimate { compatible: region, predicted })
    }

    fn advance(
        &self,
        previous: &SourceEstimate<RationalPolygon>,
        symbol: &SymbolId,
    ) -> Result<SourceEstimate<RationalPolygon>> {
        let (region, u) = self.constraint(symbol)?;
        let compatible = previous.predicted.intersect(&region);
        let predicted = predict(&self.model, &compatible, &u);
        Ok(SourceEstimate { compatible, predicted })
    }

    fn advance_compatible(
        &self,
        previous: &SourceEstimate<RationalPolygon>,
        symbol: &SymbolId,
    ) -> Result<RationalPolygon> {
        let (region, _) = self.constraint(symbol)?;
        Ok(previous.predicted.intersect(&region))
    }
}

#[derive(Serialize, Deserialize)]
struct TraceWire {
    x0: VertexWire,
    inputs: Vec<[u8; 2]>,
}

/// An initial state plus a sequence of inflow level pairs (1-based level
/// indices, not raw units).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TraceWire", into = "TraceWire")]
pub struct TwoTankTrace {
    pub x0: Point2,
    pub inputs: Vec<(u8, u8)>,
}

impl TryFrom<TraceWire> for TwoTankTrace {
    type Error = Error;

    fn try_from(wire: TraceWire) -> Result<Self> {
        let x0 = vertex_from_wire(&wire.x0).map_err(Error::Parse)?;
        let inputs: Vec<(u8, u8)> = wire.inputs.iter().map(|[a, b]| (*a, *b)).collect();
        for &(level1, level2) in &inputs {
            for level in [level1, level2] {
                if !(1..=3).contains(&level) {
                    return Err(Error::Parse(format!(
                        "input level {level} out of range 1..=3"
                    )));
                }
            }
        }
        Ok(TwoTankTrace { x0, inputs })
    }
}

impl From<TwoTankTrace> for TraceWire {
    fn from(trace: TwoTankTrace) -> Self {
        TraceWire {
            x0: vertex_to_wire(&trace.x0),
            inputs: trace.inputs.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl TwoTankTrace {
    /// The documented eight-step benchmark run from empty tanks: inflow
    /// levels (7,7), (7,7), (14,14), (14,1), (1,1), (1,14), (7,14),
    /// (7,14).  The trajectory stays strictly inside the measurable
    /// domain and visits seven distinct band pairs.
    pub fn reference() -> Self {
        TwoTankTrace {
            x0: (integer(0), integer(0)),
            inputs: vec![(2, 2), (2, 2), (3, 3), (3, 1), (1, 1), (1, 3), (2, 3), (2, 3)],
        }
    }
}

/// Simulates a trace and pairs each step's inflow levels with the
/// measured bands of the exact state.  Fails with [`Error::OutOfRange`]
/// when the trajectory leaves the measurable domain.
pub fn observed_symbols(model: &TwoTankModel, trace: &TwoTankTrace) -> Result<Vec<TwoTankSymbol>> {
    let states = model.simulate(&trace.x0, &trace.inputs)?;
    trace
        .inputs
        .iter()
        .enumerate()
        .map(|(step, &(level1, level2))| {
            let (band1, band2) =
                model.quantize(&states[step]).ok_or(Error::OutOfRange { step })?;
            TwoTankSymbol::new(level1, level2, band1, band2)
        })
        .collect()
}

/// One time step of [`run_experiment`]: all four window estimates, the
/// exact state, and the containment/exactness verdicts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentStep {
    pub time: usize,
    pub symbol: SymbolId,
    pub window: Vec<SymbolId>,
    pub true_state: VertexWire,
    pub monolithic: RationalPolygon,
    pub channel1: RationalPolygon,
    pub channel2: RationalPolygon,
    pub fused: RationalPolygon,
    pub contains_true: bool,
    pub exact: bool,
}

/// Full record of a windowed estimation run along a simulated trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentReport {
    pub ell: usize,
    pub steps: Vec<ExperimentStep>,
    pub all_contained: bool,
    pub all_exact: bool,
}

/// Simulates `trace` exactly and, at every step, estimates the state from
/// the trailing window of at most `ell` observations — once with the full
/// observer and once per single-tank observer.  The fused estimate is the
/// intersection of the two single-tank estimates; `exact` records whether
/// it coincides with the full observer's estimate.
pub fn run_experiment(trace: &TwoTankTrace, ell: usize) -> Result<ExperimentReport> {
    if ell == 0 {
        return Err(Error::InvalidArgument("window length must be at least 1".into()));
    }
    let [monolithic, channel1, channel2] = twotank_feasibility_oracle();
    let model = monolithic.model().clone();
    let states = model.simulate(&trace.x0, &trace.inputs)?;
    let symbols = observed_symbols(&model, trace)?;

    let mut steps = Vec::with_capacity(symbols.len());
    for (t, symbol) in symbols.iter().enumerate() {
        let from = (t + 1).saturating_sub(ell);
        let window: Vec<TwoTankSymbol> = symbols[from..=t].to_vec();

        let tokens: Vec<SymbolId> = window.iter().map(TwoTankSymbol::token).collect();
        let tokens1: Vec<SymbolId> =
            window.iter().map(|s| s.aggregate(1)).collect::<Result<_>>()?;
        let tokens2: Vec<SymbolId> =
            window.iter().map(|s| s.aggregate(2)).collect::<Result<_>>()?;

        let full = monolithic.estimate_window(&tokens)?.compatible;
        let side1 = channel1.estimate_window(&tokens1)?.compatible;
        let side2 = channel2.estimate_window(&tokens2)?.compatible;
        let fused = side1.intersect(&side2);

        let contains_true = full.contains(&states[t]) && fused.contains(&states[t]);
        let exact = fused == full;
        steps.push(ExperimentStep {
            time: t,
            symbol: symbol.token(),
            window: tokens,
            true_state: vertex_to_wire(&states[t]),
            monolithic: full,
            channel1: side1,
            channel2: side2,
            fused,
            contains_true,
            exact,
        });
    }
    Ok(ExperimentReport {
        ell,
        all_contained: steps.iter().all(|s| s.contains_true),
        all_exact: steps.iter().all(|s| s.exact),
        steps,
    })
}

/// State/annotation counts after merging full-length windows that differ
/// only in the final symbol's inflow levels.  The inflow of the last
/// observation does not influence the compatible region, so merged
/// windows provably share their annotation; this is the most aggressive
/// defensible way to count distinct estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CollapsedCount {
    pub state_count: u64,
    pub annotation_size: u64,
}

fn collapse_last_token(token: &SymbolId, view: TwoTankView) -> Result<String> {
    match view {
        TwoTankView::Monolithic => {
            let parsed = TwoTankSymbol::parse(token.as_str())?;
            Ok(format!("y{}{}", parsed.output1, parsed.output2))
        }
        TwoTankView::Channel1 => {
            let parsed = parse_aggregated(token.as_str(), 1)?;
            Ok(format!("t1{}", parsed.band))
        }
        TwoTankView::Channel2 => {
            let parsed = parse_aggregated(token.as_str(), 2)?;
            Ok(format!("t2{}", parsed.band))
        }
    }
}

/// Counts full-length windows up to trailing-inflow equivalence.
pub fn collapsed_count(
    automaton: &LCompleteAutomaton<RationalPolygon>,
    view: TwoTankView,
) -> Result<CollapsedCount> {
    let ell = automaton.ell();
    let mut classes: BTreeMap<String, Arc<RationalPolygon>> = BTreeMap::new();
    for state in automaton.states() {
        if state.length() != ell {
            continue;
        }
        let (last, prefix) = state.window.split_last().expect("windows are nonempty");
        let mut key = String::new();
        for symbol in prefix {
            key.push_str(symbol.as_str());
            key.push(',');
        }
        key.push_str(&collapse_last_token(last, view)?);
        match classes.get(&key) {
            Some(existing) => debug_assert_eq!(
                existing.as_ref(),
                state.annotation.as_ref(),
                "windows in one trailing-inflow class must share their estimate"
            ),
            None => {
                classes.insert(key, state.annotation.clone());
            }
        }
    }
    Ok(CollapsedCount {
        state_count: classes.len() as u64,
        annotation_size: classes.values().map(|a| a.size() as u64).sum(),
    })
}

/// Complexity figures of one observer's window automaton under every
/// counting convention.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TwoTankAutomatonReport {
    pub name: String,
    pub alphabet_size: usize,
    pub conventions: Vec<ComplexityReport>,
    pub collapsed: CollapsedCount,
}

/// Complexity comparison between the full observer and the two
/// single-tank observers at one window length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TwoTankComplexity {
    pub ell: usize,
    pub automata: Vec<TwoTankAutomatonReport>,
}

/// Builds all three window automata at depth `ell` and tabulates their
/// sizes.
pub fn twotank_complexity(ell: usize, budget: EnumerationBudget) -> Result<TwoTankComplexity> {
    let automata = twotank_feasibility_oracle()
        .into_iter()
        .map(|oracle| {
            let automaton = build_lcomplete(&oracle, ell, budget)?;
            Ok(TwoTankAutomatonReport {
                name: oracle.view().name().to_owned(),
                alphabet_size: EstimationSource::alphabet(&oracle).len(),
                conventions: CountingConvention::ALL
                    .iter()
                    .map(|&convention| complexity_report(&automaton, convention))
                    .collect(),
                collapsed: collapsed_count(&automaton, oracle.view())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TwoTankComplexity { ell, automata })
}

impl TwoTankComplexity {
    /// Aligned text table: one row per observer plus the channel total,
    /// with state count and annotation size per counting convention.
    pub fn to_table(&self) -> String {
        let mut columns: Vec<String> = vec!["automaton".into(), "|V|".into()];
        for convention in CountingConvention::ALL {
            columns.push(format!("{convention} |Z|"));
            columns.push(format!("{convention} n_chi"));
        }
        columns.push("collapsed |Z|".into());
        columns.push("collapsed n_chi".into());

        let mut rows: Vec<Vec<String>> = vec![columns];
        let mut channel_sums = vec![0u64; 2 * CountingConvention::ALL.len() + 2];
        for automaton in &self.automata {
            let mut row = vec![automaton.name.clone(), automaton.alphabet_size.to_string()];
            let mut values = Vec::new();
            for report in &automaton.conventions {
                values.push(report.state_count);
                values.push(report.annotation_size);
            }
            values.push(automaton.collapsed.state_count);
            values.push(automaton.collapsed.annotation_size);
            if automaton.name.starts_with("channel") {
                for (sum, value) in channel_sums.iter_mut().zip(&values) {
                    *sum += value;
                }
            }
            row.extend(values.iter().map(u64::to_string));
            rows.push(row);
        }
        let mut total_row = vec![format!("channels combined (ell={})", self.ell), "54".into()];
        total_row.extend(channel_sums.iter().map(u64::to_string));
        rows.push(total_row);

        let widths: Vec<usize> = (0..rows[0].len())
            .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for row in &rows {
            let mut line = String::new();
            for (cell, width) in row.iter().zip(&widths) {
                line.push_str(&format!("{cell:<width$}  "));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}
