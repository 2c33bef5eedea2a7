//! Validate machine definitions before building them.
//!
//! A definition can be structurally sound (`buildable`) while still
//! carrying findings worth surfacing: states that block because they
//! have no outgoing transition, states no transition ever reaches, or
//! references to undeclared names.
//!
//! ```bash
//! cargo run --example validate_machine
//! ```

use svest::machine::MachineDefinition;

fn report(label: &str, definition: &MachineDefinition) {
    let report = definition.validate();
    println!("{label}:");
    println!("  clean:     {}", report.is_clean());
    println!("  buildable: {}", report.is_buildable());
    for state in &report.blocking_states {
        println!("  blocking state:     {state}");
    }
    for state in &report.sourceless_states {
        println!("  sourceless state:   {state}");
    }
    for finding in &report.dangling_references {
        println!("  dangling reference: {finding}");
    }
    println!();
}

fn main() {
    let clean = MachineDefinition {
        states: vec!["s1".into(), "s2".into(), "s3".into()],
        alphabet: vec!["a".into(), "b".into()],
        transitions: vec![
            ("s1".into(), "a".into(), "s2".into()),
            ("s2".into(), "a".into(), "s3".into()),
            ("s2".into(), "b".into(), "s1".into()),
            ("s3".into(), "b".into(), "s1".into()),
        ],
        initial: None,
    };
    report("well-formed machine", &clean);

    let questionable = MachineDefinition {
        states: vec!["s1".into(), "s2".into(), "dead".into()],
        alphabet: vec!["a".into()],
        transitions: vec![
            ("s1".into(), "a".into(), "s2".into()),
            ("s2".into(), "a".into(), "s1".into()),
            ("dead".into(), "a".into(), "ghost".into()),
        ],
        initial: None,
    };
    report("definition with findings", &questionable);

    match questionable.build() {
        Ok(_) => println!("built anyway"),
        Err(error) => println!("build refused: {error}"),
    }
}
