//! From a chain partition to a consistent aggregation suite.
//!
//! Each observer sees the alphabet through an aggregation function that
//! merges symbols into coarser codes.  A suite is *consistent* when any
//! two distinct symbols differ under at least one observer, so the tuple
//! of coarse observations pins down the original symbol.  Suites
//! synthesized from a chain partition keep every code inside one chain
//! block, which is what makes decentralized estimation exact.
//!
//! ```bash
//! cargo run --example synthesize_decomposition
//! ```

use svest::decomposition::{aggregate_string, invert_string, chain_partition, synthesize_suite};
use svest::machine::samples;
use svest::SignalString;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let machine = samples::m2();
    let partition = chain_partition(&machine)?;
    let suite = synthesize_suite(&partition, 2)?;

    for function in suite.functions() {
        println!("observer {}:", function.index());
        for symbol in function.domain() {
            println!("  {}  ->  {}", symbol, function.apply(symbol)?);
        }
    }

    let check = suite.check_consistency();
    println!("\nconsistent: {}", check.consistent);

    let w = SignalString::parse("a1,a2,b1", 0)?;
    for function in suite.functions() {
        let v = aggregate_string(function, &w)?;
        let preimages = invert_string(function, &v)?;
        println!(
            "\nobserver {} sees {} as {} ({} preimage strings):",
            function.index(),
            w,
            v,
            preimages.total()
        );
        for candidate in preimages {
            let marker = if candidate == w { "  <- the original" } else { "" };
            println!("  {candidate}{marker}");
        }
    }
    Ok(())
}
