//! Decentralized estimation: per-observer estimates fused by intersection.
//!
//! Every observer runs the plain estimator on its own relabelled machine
//! and only sees its own coarse symbols.  Intersecting the observer
//! estimates always over-approximates the monolithic estimate; when the
//! suite comes from a chain partition the fusion is exact on every
//! feasible string, which `verify_exactness` sweeps exhaustively.
//!
//! ```bash
//! cargo run --example decentralized_fusion
//! ```

use std::sync::Arc;

use svest::decentralized::{run_trace, verify_exactness};
use svest::decomposition::{chain_partition, synthesize_suite};
use svest::machine::samples;
use svest::{EnumerationBudget, SignalString};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let machine = Arc::new(samples::m2());
    let partition = chain_partition(&machine)?;
    let suite = synthesize_suite(&partition, 2)?;

    let w = SignalString::parse("a1,a2,b1", 0)?;
    println!("observed {w} through two aggregated views:\n");
    println!("{:<4}  {:<8}  {:<14}  {:<14}  {}", "t", "symbol", "fused chi", "monolithic", "exact");
    for (t, step) in run_trace(&machine, &suite, &w, true)?.iter().enumerate() {
        println!(
            "{:<4}  {:<8}  {:<14}  {:<14}  {}",
            t,
            step.symbol.as_str(),
            step.fused_chi.to_string(),
            step.monolithic_chi.as_ref().expect("compare mode").to_string(),
            step.exact.expect("compare mode")
        );
    }

    let report = verify_exactness(&machine, &suite, 5, EnumerationBudget::default())?;
    println!(
        "\nexhaustive sweep: {} feasible strings up to length {} — exact: {}",
        report.strings_checked, report.max_length, report.exact
    );

    // A suite that merges symbols across blocks loses exactness; the
    // sweep reports the first counterexample it finds.
    let coarse = synthesize_suite(&partition, 1)?;
    let coarse = svest::decomposition::AggregationSuite::new(
        coarse
            .functions()
            .iter()
            .map(|f| {
                let map = f
                    .domain()
                    .map(|s| {
                        let merged = if s.as_str().starts_with('a') { "any_a" } else { "any_b" };
                        (s.clone(), svest::SymbolId::new(merged))
                    })
                    .collect();
                svest::decomposition::AggregationFunction::new(f.index(), map)
            })
            .collect::<Result<_, _>>()?,
    )?;
    let report = verify_exactness(&machine, &coarse, 5, EnumerationBudget::default())?;
    println!("\nmerging across blocks: exact: {}", report.exact);
    if let Some(counterexample) = report.counterexample {
        println!("  first counterexample: {}", counterexample.string);
        println!("  fused chi:      {}", counterexample.fused.compatible);
        println!("  monolithic chi: {}", counterexample.monolithic.compatible);
    }
    Ok(())
}
