//! Online estimation: feed observations one at a time.
//!
//! `EstimatorState` carries the prediction between observations, so each
//! new symbol costs one intersection and one successor image instead of
//! reprocessing the whole string.  The emitted pairs are identical to
//! batch estimation of every prefix.
//!
//! ```bash
//! cargo run --example incremental_estimation
//! ```

use std::sync::Arc;

use svest::estimator::{estimate, EstimatorState};
use svest::machine::samples;
use svest::{SignalString, SymbolId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let machine = Arc::new(samples::m1());
    let observed: Vec<SymbolId> =
        ["a", "a", "b", "a", "b"].into_iter().map(SymbolId::new).collect();

    let mut estimator = EstimatorState::new(machine.clone());
    println!("{:<4}  {:<7}  {:<14}  {}", "t", "symbol", "chi", "rho");
    for (t, symbol) in observed.iter().enumerate() {
        let pair = estimator.observe(symbol)?;
        println!(
            "{:<4}  {:<7}  {:<14}  {}",
            t,
            symbol.as_str(),
            pair.compatible.to_string(),
            pair.predicted
        );

        // Same answer as estimating the prefix from scratch.
        let prefix = SignalString::new(observed[..=t].to_vec(), 0)?;
        assert_eq!(pair, estimate(&machine, &prefix)?);
    }
    println!("\nevery step matched the batch estimate of its prefix");
    Ok(())
}
