//! Congruence-diagonalize the 9 x 9 bilinear form of a sample input over
//! F_61 and read off its GW class, reproducing an interactive
//! computer-algebra session for the same matrix.
//!
//!     cargo run --release --example diagonalize_form

use gw_excess::excess::{run_excess, samples};
use gw_excess::gw::GwClass;

fn main() {
    let input = samples::f61_session();
    let report = run_excess(&input).unwrap();

    let (p, d) = report.bprime_gram.congruence_diagonalize().unwrap();
    println!("diagonal of P^T B' P over {} (balanced representatives):", input.field());
    let diag: Vec<String> = (0..d.rows())
        .map(|i| d.at(i, i).balanced().unwrap().to_string())
        .collect();
    println!("  [{}]", diag.join(", "));

    // exactness: re-multiply and compare
    assert_eq!(p.transpose().mul(&report.bprime_gram).unwrap().mul(&p).unwrap(), d);

    let (class, radical) = GwClass::from_gram(&report.bprime_gram).unwrap();
    let inv = class.invariants().unwrap();
    println!(
        "class {} with {radical} radical dimensions; rank {}, disc {} ({})",
        class,
        inv.rank,
        inv.disc,
        if inv.disc_is_square == Some(true) { "square" } else { "nonsquare" },
    );
}
