//! Partitioning an alphabet into non-deterministic chains.
//!
//! A block of symbols forms a non-deterministic chain when no state emits
//! two different symbols of the block and no state is reached by the
//! block from two different sources.  Machines whose alphabet splits into
//! such blocks admit exact decentralized estimation; machines with a
//! funnel do not, and the partition reports the offending transitions.
//!
//! ```bash
//! cargo run --example chain_partition
//! ```

use svest::decomposition::chain_partition;
use svest::machine::samples;

fn main() {
    let decomposable = samples::m2();
    match chain_partition(&decomposable) {
        Ok(partition) => {
            println!("four-state machine decomposes into {} blocks:", partition.len());
            for (j, block) in partition.blocks.iter().enumerate() {
                let symbols: Vec<&str> = block.symbols.iter().map(|s| s.as_str()).collect();
                println!(
                    "  block {}: {{{}}} covering {} transitions",
                    j + 1,
                    symbols.join(", "),
                    block.transitions.len()
                );
                for transition in &block.transitions {
                    println!(
                        "    {} --{}--> {}",
                        transition.source, transition.symbol, transition.target
                    );
                }
            }
        }
        Err(error) => println!("unexpected: {error}"),
    }

    println!();
    let funnel = samples::m1();
    match chain_partition(&funnel) {
        Ok(_) => println!("unexpected: the funnel machine decomposed"),
        Err(error) => {
            println!("three-state machine is rejected with a witness:");
            println!("  {error}");
        }
    }
}
