//! Set-valued state estimation for one observed string.
//!
//! Given a machine and a string of observed symbols, the estimator
//! returns two sets: the states the machine could have been in when the
//! last symbol was emitted (`chi`) and the states it can be in now
//! (`rho`).  The result is cross-checked against exhaustive run
//! enumeration.
//!
//! ```bash
//! cargo run --example estimate_string
//! ```

use svest::estimator::{brute_force_estimate, estimate};
use svest::machine::samples;
use svest::{EnumerationBudget, SignalString};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let machine = samples::m1();
    let w = SignalString::parse("a,a,b", 0)?;

    let pair = estimate(&machine, &w)?;
    println!("observed:  a,a,b");
    println!("chi (compatible now): {}", pair.compatible);
    println!("rho (predicted next): {}", pair.predicted);

    // The recursion must agree with brute-force enumeration of all runs
    // that could have produced the observation.
    let reference = brute_force_estimate(&machine, &w, 0, EnumerationBudget::default())?;
    println!("oracle chi:           {}", reference.compatible);
    println!("oracle rho:           {}", reference.predicted);
    assert_eq!(pair, reference);
    println!("estimator and oracle agree");
    Ok(())
}
