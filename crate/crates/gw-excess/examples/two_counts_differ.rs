//! Two admissible inputs over the same field whose enriched counts differ:
//! the classical count is 16 for both, but the quadratic enrichment is
//! 2(<1> + <-1>) for one and a nonsquare-discriminant form for the other.
//! Invariance of number fails for the enriched count.
//!
//!     cargo run --release --example two_counts_differ

use gw_excess::excess::{run_excess, samples};
use gw_excess::gw::Equality;

fn main() {
    let a = run_excess(&samples::f31_square_disc()).unwrap();
    let b = run_excess(&samples::f31_nonsquare_disc()).unwrap();

    for (name, report) in [("first", &a), ("second", &b)] {
        let inv = report.gw_b.invariants().unwrap();
        println!(
            "{name} input: class of B = {} — rank {}, disc {} ({})",
            report.gw_b,
            inv.rank,
            inv.disc,
            if inv.disc_is_square == Some(true) { "square" } else { "nonsquare" },
        );
    }

    println!(
        "\nclassical ranks agree: {} = {}",
        a.gw_euler.rank(),
        b.gw_euler.rank()
    );
    match a.gw_euler.is_equal(&b.gw_euler).unwrap() {
        Equality::Unequal => println!("enriched counts differ: no invariance of number"),
        other => println!("unexpected comparison outcome: {other:?}"),
    }
}
