//! Shared corpus generators and independent reference oracles for the
//! integration tests.
//!
//! Everything here is deliberately written from first principles — the
//! convex hull, the candidate-vertex intersection and the run-table
//! oracle do not reuse the library's polygon or estimator internals, so
//! agreement between the two routes is meaningful.

#![allow(dead_code)] // each test target uses its own subset

use std::collections::{BTreeMap, BTreeSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use svest::decomposition::{AggregationFunction, AggregationSuite};
use svest::estimator::EstimatePair;
use svest::hybrid::geometry::{ratio, Point2, Rational, RationalPolygon};
use svest::machine::{enumerate_runs, MachineDefinition};
use svest::{EnumerationBudget, FiniteStateMachine, SymbolId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------
// Machine corpus
// ---------------------------------------------------------------------

fn state_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("s{i}")).collect()
}

fn symbol_names(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("w{i}")).collect()
}

fn build(states: Vec<String>, alphabet: Vec<String>, transitions: BTreeSet<(usize, usize, usize)>) -> FiniteStateMachine {
    let transitions = transitions
        .into_iter()
        .map(|(s, k, t)| (states[s].clone(), alphabet[k].clone(), states[t].clone()))
        .collect();
    MachineDefinition { states, alphabet, transitions, initial: None }
        .build()
        .expect("generated machines are well-formed and non-blocking")
}

/// A random non-blocking machine with up to 8 states and 6 symbols.
pub fn random_machine(rng: &mut ChaCha8Rng) -> FiniteStateMachine {
    let n = rng.gen_range(2..=8);
    let m = rng.gen_range(1..=6);
    let mut transitions: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for s in 0..n {
        for _ in 0..rng.gen_range(1..=3) {
            transitions.insert((s, rng.gen_range(0..m), rng.gen_range(0..n)));
        }
    }
    build(state_names(n), symbol_names(m), transitions)
}

/// A random non-blocking machine in which every symbol's transition
/// relation is injective (no two sources map onto one target with the
/// same symbol), so the alphabet always partitions into chains.
pub fn random_chain_machine(rng: &mut ChaCha8Rng) -> FiniteStateMachine {
    let n = rng.gen_range(2..=8);
    let m = rng.gen_range(1..=6);
    let mut transitions: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    // Per symbol: which states are already someone's target.
    let mut used_targets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m];

    // One outgoing transition per state keeps the machine non-blocking;
    // m*n target slots always suffice for n sources.
    for s in 0..n {
        let mut symbols: Vec<usize> = (0..m).collect();
        symbols.shuffle(rng);
        let k = *symbols
            .iter()
            .find(|&&k| used_targets[k].len() < n)
            .expect("some symbol always has a free target slot");
        let targets: Vec<usize> = (0..n).filter(|t| !used_targets[k].contains(t)).collect();
        let t = targets[rng.gen_range(0..targets.len())];
        used_targets[k].insert(t);
        transitions.insert((s, k, t));
    }

    // Extra transitions wherever injectivity leaves room.
    for _ in 0..rng.gen_range(0..=2 * n) {
        let k = rng.gen_range(0..m);
        let free: Vec<usize> = (0..n).filter(|t| !used_targets[k].contains(t)).collect();
        if free.is_empty() {
            continue;
        }
        let t = free[rng.gen_range(0..free.len())];
        used_targets[k].insert(t);
        transitions.insert((rng.gen_range(0..n), k, t));
    }
    build(state_names(n), symbol_names(m), transitions)
}

/// A deterministic input/state/output machine: per input a permutation of
/// the states, per state a fixed output, symbols `u<i>y<j>` pairing the
/// applied input with the emitted output.  Comes with a consistent suite
/// that keeps the input in every coordinate and splits only the output.
pub struct IsoMachine {
    pub machine: FiniteStateMachine,
    pub suite: AggregationSuite,
}

pub fn random_iso_machine(rng: &mut ChaCha8Rng, p: usize) -> IsoMachine {
    let n = rng.gen_range(2..=6);
    let inputs = rng.gen_range(1..=3);
    let outputs = rng.gen_range(2..=4);

    let output_of: Vec<usize> = (0..n).map(|_| rng.gen_range(0..outputs)).collect();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    for _ in 0..inputs {
        let mut permutation: Vec<usize> = (0..n).collect();
        permutation.shuffle(rng);
        maps.push(permutation);
    }

    let states = state_names(n);
    let mut alphabet = Vec::new();
    for i in 1..=inputs {
        for j in 1..=outputs {
            alphabet.push(format!("u{i}y{j}"));
        }
    }
    let mut transitions = BTreeSet::new();
    for s in 0..n {
        for (i, map) in maps.iter().enumerate() {
            transitions.insert((s, i * outputs + output_of[s], map[s]));
        }
    }
    let machine = build(states, alphabet.clone(), transitions);

    // Output digits in the smallest base with base^p >= outputs; the
    // input index is kept verbatim, so the tuple of coarse symbols pins
    // the original symbol (observers share the input and each coarsens
    // only the output digits).
    let mut base = 1usize;
    while base.pow(p as u32) < outputs {
        base += 1;
    }
    let mut functions = Vec::new();
    for k in 1..=p {
        let mut map = BTreeMap::new();
        for (index, token) in alphabet.iter().enumerate() {
            let input = index / outputs;
            let output = index % outputs;
            let digit = (output / base.pow((k - 1) as u32)) % base;
            map.insert(
                SymbolId::new(token.clone()),
                SymbolId::new(format!("u{}.g{k}.{digit}", input + 1)),
            );
        }
        functions.push(AggregationFunction::new(k, map).expect("nonempty map"));
    }
    let suite = AggregationSuite::new(functions).expect("shared alphabet");
    IsoMachine { machine, suite }
}

/// A random consistent suite over `alphabet`: every symbol receives a
/// distinct tuple of per-coordinate digits, so the tuple map is injective
/// while individual coordinates may merge many symbols.
pub fn random_consistent_suite(
    rng: &mut ChaCha8Rng,
    alphabet: &[SymbolId],
    p: usize,
) -> AggregationSuite {
    let n = alphabet.len();
    let mut bases: Vec<usize> = (0..p).map(|_| rng.gen_range(1..=n.max(2))).collect();
    while bases.iter().product::<usize>() < n {
        let k = rng.gen_range(0..p);
        bases[k] += 1;
    }
    let capacity = bases.iter().product::<usize>();
    let codes = rand::seq::index::sample(rng, capacity, n);

    let mut functions = Vec::new();
    let mut stride = 1usize;
    for (k, &base) in bases.iter().enumerate() {
        let mut map = BTreeMap::new();
        for (symbol, code) in alphabet.iter().zip(codes.iter()) {
            let digit = (code / stride) % base;
            map.insert(symbol.clone(), SymbolId::new(format!("v{}.{digit}", k + 1)));
        }
        stride *= base;
        functions.push(AggregationFunction::new(k + 1, map).expect("nonempty map"));
    }
    AggregationSuite::new(functions).expect("shared alphabet")
}

// ---------------------------------------------------------------------
// String enumeration and the run-table oracle
// ---------------------------------------------------------------------

/// Every string over `alphabet` of length 1..=`max_len`, in length-major
/// lexicographic order.
pub fn all_strings(alphabet: &[SymbolId], max_len: usize) -> Vec<Vec<SymbolId>> {
    let mut strings: Vec<Vec<SymbolId>> = Vec::new();
    let mut level: Vec<Vec<SymbolId>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * alphabet.len());
        for prefix in &level {
            for symbol in alphabet {
                let mut extended = prefix.clone();
                extended.push(symbol.clone());
                next.push(extended);
            }
        }
        strings.extend(next.iter().cloned());
        level = next;
    }
    strings
}

/// Reference estimates for *every* string up to `max_len`, computed in
/// one pass over all runs: a string's compatible set collects the states
/// each matching run is in after reading it, the predicted set the states
/// one step later.  Strings absent from the table are infeasible.
pub fn oracle_table(
    machine: &FiniteStateMachine,
    max_len: usize,
) -> BTreeMap<Vec<SymbolId>, EstimatePair> {
    let runs = enumerate_runs(machine, max_len, EnumerationBudget(20_000_000))
        .expect("corpus machines stay within the enumeration budget");
    let mut table: BTreeMap<Vec<SymbolId>, EstimatePair> = BTreeMap::new();
    for run in &runs {
        for len in 1..=max_len {
            let entry = table.entry(run.symbols[..len].to_vec()).or_default();
            entry.compatible.insert(run.states[len - 1].clone());
            entry.predicted.insert(run.states[len].clone());
        }
    }
    table
}

// ---------------------------------------------------------------------
// Independent polygon oracle
// ---------------------------------------------------------------------

fn cross(o: &Point2, a: &Point2, b: &Point2) -> Rational {
    &(&(&a.0 - &o.0) * &(&b.1 - &o.1)) - &(&(&a.1 - &o.1) * &(&b.0 - &o.0))
}

/// Andrew's monotone-chain convex hull; duplicates and collinear points
/// are dropped, so the result is a strictly convex counterclockwise ring
/// (or the two extremes / one point / nothing for degenerate input).
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let zero = Rational::default();
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= zero
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= zero
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// A random polygon: the hull of up to eight random points with small
/// rational coordinates.  Degenerate results (segments, points) are kept
/// — the estimation pipeline produces those too.
pub fn random_polygon(rng: &mut ChaCha8Rng) -> RationalPolygon {
    let count = rng.gen_range(1..=8);
    let denominators = [1i64, 1, 2, 3];
    let coordinate = |rng: &mut ChaCha8Rng| {
        ratio(rng.gen_range(-30..=30), denominators[rng.gen_range(0..denominators.len())])
    };
    let points: Vec<Point2> =
        (0..count).map(|_| (coordinate(rng), coordinate(rng))).collect();
    RationalPolygon::from_vertices(convex_hull(&points))
        .expect("a convex hull is a valid vertex chain")
}

fn edges(polygon: &RationalPolygon) -> Vec<(Point2, Point2)> {
    let v = polygon.vertices();
    match v.len() {
        0 | 1 => Vec::new(),
        2 => vec![(v[0].clone(), v[1].clone())],
        n => (0..n).map(|i| (v[i].clone(), v[(i + 1) % n].clone())).collect(),
    }
}

fn diff(a: &Point2, b: &Point2) -> Point2 {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn cross2(a: &Point2, b: &Point2) -> Rational {
    &(&a.0 * &b.1) - &(&a.1 * &b.0)
}

/// All intersection points of two closed segments: one point for a proper
/// crossing or touch, the overlap extremes for collinear overlap.
fn segment_points(a: &(Point2, Point2), b: &(Point2, Point2)) -> Vec<Point2> {
    let zero = Rational::default();
    let one = Rational::from_integer(1.into());
    let r = diff(&a.1, &a.0);
    let d = diff(&b.1, &b.0);
    let offset = diff(&b.0, &a.0);
    let denominator = cross2(&r, &d);
    if denominator != zero {
        let t = &cross2(&offset, &d) / &denominator;
        let s = &cross2(&offset, &r) / &denominator;
        if t >= zero && t <= one && s >= zero && s <= one {
            return vec![(&a.0 .0 + &(&t * &r.0), &a.0 .1 + &(&t * &r.1))];
        }
        return Vec::new();
    }
    if cross2(&offset, &r) != zero {
        return Vec::new(); // parallel, not collinear
    }
    // Collinear: overlap of the parameter intervals along r.
    let length = &(&r.0 * &r.0) + &(&r.1 * &r.1);
    let project = |p: &Point2| {
        let v = diff(p, &a.0);
        &(&(&v.0 * &r.0) + &(&v.1 * &r.1)) / &length
    };
    let (mut b_lo, mut b_hi) = (project(&b.0), project(&b.1));
    if b_lo > b_hi {
        std::mem::swap(&mut b_lo, &mut b_hi);
    }
    let lo = if b_lo > zero { b_lo } else { zero.clone() };
    let hi = if b_hi < one { b_hi } else { one };
    if lo > hi {
        return Vec::new();
    }
    let at = |t: &Rational| (&a.0 .0 + &(t * &r.0), &a.0 .1 + &(t * &r.1));
    vec![at(&lo), at(&hi)]
}

/// Candidate-vertex polygon intersection: vertices of each polygon inside
/// the other plus all pairwise edge intersections, hulled.  Slow but
/// independently derived from the textbook characterization of convex
/// intersection vertices.
pub fn slow_intersection(a: &RationalPolygon, b: &RationalPolygon) -> RationalPolygon {
    let mut candidates: Vec<Point2> = Vec::new();
    for v in a.vertices() {
        if b.contains(v) {
            candidates.push(v.clone());
        }
    }
    for v in b.vertices() {
        if a.contains(v) {
            candidates.push(v.clone());
        }
    }
    for ea in edges(a) {
        for eb in edges(b) {
            candidates.extend(segment_points(&ea, &eb));
        }
    }
    RationalPolygon::from_vertices(convex_hull(&candidates))
        .expect("a convex hull is a valid vertex chain")
}
