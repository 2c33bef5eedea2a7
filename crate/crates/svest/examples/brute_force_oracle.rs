//! The exhaustive reference the estimator is tested against.
//!
//! `enumerate_runs` lists every run of a given length; projecting out the
//! runs whose emitted symbols match an observation gives a reference
//! estimate that is exact by construction.  This example enumerates the
//! runs of a small machine, then sweeps every string up to length three
//! and confirms the recursive estimator agrees with the reference on all
//! of them.
//!
//! ```bash
//! cargo run --example brute_force_oracle
//! ```

use svest::estimator::{brute_force_estimate, estimate};
use svest::machine::{enumerate_runs, samples};
use svest::{EnumerationBudget, SignalString, SymbolId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let machine = samples::m1();

    println!("all two-step runs of the sample machine:");
    for run in enumerate_runs(&machine, 2, EnumerationBudget::default())? {
        let states: Vec<&str> = run.states.iter().map(|s| s.as_str()).collect();
        let symbols: Vec<&str> = run.symbols.iter().map(|s| s.as_str()).collect();
        println!("  {}  emits  {}", states.join(" -> "), symbols.join(","));
    }

    let alphabet = machine.alphabet().to_vec();
    let mut strings: Vec<Vec<SymbolId>> = alphabet.iter().map(|s| vec![s.clone()]).collect();
    let mut frontier = strings.clone();
    for _ in 1..3 {
        let mut next = Vec::new();
        for string in &frontier {
            for symbol in &alphabet {
                let mut extended = string.clone();
                extended.push(symbol.clone());
                next.push(extended);
            }
        }
        strings.extend(next.iter().cloned());
        frontier = next;
    }

    let mut feasible = 0;
    for symbols in &strings {
        let w = SignalString::new(symbols.clone(), 0)?;
        let fast = estimate(&machine, &w)?;
        let slow = brute_force_estimate(&machine, &w, 0, EnumerationBudget::default())?;
        assert_eq!(fast, slow, "disagreement on {w}");
        if !fast.compatible.is_empty() {
            feasible += 1;
        }
    }
    println!(
        "\nchecked {} strings up to length 3: estimator == oracle on all, {} feasible",
        strings.len(),
        feasible
    );
    Ok(())
}
