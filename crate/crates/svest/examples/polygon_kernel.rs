//! The exact geometry kernel behind the hybrid-system annotations.
//!
//! Estimates for the two-tank plant are convex polygons with rational
//! vertices, so intersection and affine images are computed exactly —
//! no epsilon tolerances anywhere.  This example clips two squares,
//! pushes the result through the tank dynamics, and then performs one
//! symbolic estimation step from complete ignorance.
//!
//! ```bash
//! cargo run --example polygon_kernel
//! ```

use svest::hybrid::{integer, ratio, symbolic_step, RationalPolygon, SymbolicEstimate};
use svest::hybrid::{TwoTankModel, TwoTankSymbol};

fn show(label: &str, polygon: &RationalPolygon) {
    println!("{label}: {polygon}");
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let unit = RationalPolygon::rect(integer(0), integer(0), integer(2), integer(2));
    let shifted = RationalPolygon::rect(integer(1), integer(1), integer(3), integer(3));
    let overlap = unit.intersect(&shifted);
    show("square A", &unit);
    show("square B", &shifted);
    show("A ∩ B", &overlap);

    // Diamond clipped against a half-open corner: vertices stay rational.
    let diamond = RationalPolygon::from_vertices(vec![
        (integer(1), integer(0)),
        (integer(2), integer(1)),
        (integer(1), integer(2)),
        (integer(0), integer(1)),
    ])?;
    show("diamond ∩ A", &diamond.intersect(&unit));
    let skew = diamond.affine_image(
        &svest::hybrid::Mat2::new(ratio(2, 5), ratio(1, 4), ratio(1, 4), ratio(2, 5)),
        &(integer(7), integer(7)),
    )?;
    show("diamond through the tank dynamics", &skew);

    // One symbolic step: inflow level 2 on both channels, both tanks
    // reading the lowest band.
    let model = TwoTankModel::new();
    let symbol = TwoTankSymbol::new(2, 2, 1, 1)?;
    let (compatible, predicted) = symbolic_step(&model, &SymbolicEstimate::full(&model), &symbol)?;
    println!("\nafter observing {symbol}:");
    show("  compatible region", &compatible.region);
    show("  one-step prediction", &predicted.region);
    Ok(())
}
