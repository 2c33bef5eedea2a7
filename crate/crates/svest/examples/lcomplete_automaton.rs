//! Window automata: precomputing every estimate up to a window length.
//!
//! The automaton's states are the feasible observation windows of length
//! at most ℓ, each annotated with its estimate.  Short windows extend
//! until they reach length ℓ, after which the window slides.  Online
//! estimation then costs one table lookup per observed symbol.
//!
//! ```bash
//! cargo run --example lcomplete_automaton
//! ```

use svest::lcomplete::{
    build_lcomplete, complexity_report, CountingConvention, OnlineEstimator,
};
use svest::machine::samples;
use svest::{EnumerationBudget, SymbolId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let machine = samples::m1();
    let automaton = build_lcomplete(&machine, 2, EnumerationBudget::default())?;

    println!(
        "window automaton for ell = {}: {} states, {} transitions\n",
        automaton.ell(),
        automaton.states().len(),
        automaton.transition_count()
    );
    for (index, state) in automaton.states().iter().enumerate() {
        let slide = if automaton.is_slide_reachable(index) { "  (slide-reachable)" } else { "" };
        println!("  [{}] {:<6} chi = {}{}", index, state.label(), state.annotation, slide);
    }

    println!("\ntransitions:");
    for (from, symbol, to) in automaton.transitions() {
        println!(
            "  {:<6} --{}--> {}",
            automaton.states()[from].label(),
            symbol,
            automaton.states()[to].label()
        );
    }

    println!("\ncomplexity by counting convention:");
    for convention in CountingConvention::ALL {
        let report = complexity_report(&automaton, convention);
        println!(
            "  {:<10}  states: {:>3}   annotation entries: {:>3}",
            convention.to_string(),
            report.state_count,
            report.annotation_size
        );
    }

    // Online replay: each observed symbol is one lookup.
    let observed: Vec<SymbolId> = ["a", "a", "b", "b"].into_iter().map(SymbolId::new).collect();
    let mut estimator = OnlineEstimator::new(&automaton);
    println!("\nreplaying a,a,b,b:");
    for symbol in &observed {
        let annotation = estimator.observe(symbol);
        match estimator.sink() {
            None => println!("  {}: chi = {}", symbol, annotation),
            Some(sink) => {
                println!("  {}: infeasible (stuck since step {})", symbol, sink.time);
            }
        }
    }
    Ok(())
}
