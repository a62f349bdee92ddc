//! GW-class arithmetic: invariants, Witt reduction, and transfers along
//! finite field extensions via trace forms on the power basis.
//!
//!     cargo run --release --example gw_transfer

use gw_excess::gw::GwClass;
use gw_excess::Field;

fn main() {
    // F_9 = F_3[t]/(t^2 + 1): the transfer of <1> is the hyperbolic form
    let f9 = Field::extension(3, vec![1, 0, 1]).unwrap();
    let one = GwClass::from_diagonal(f9.clone(), &[f9.one()]).unwrap();
    let down = one.transfer().unwrap();
    println!("transfer of <1> from {f9} to F3: {down}");

    // a rank-1 class over F_27 transfers to a rank-3 class over F_3
    let f27 = Field::build_extension(3, 3, 0).unwrap();
    let t = f27.generator().unwrap();
    let c = GwClass::from_diagonal(f27.clone(), &[t]).unwrap();
    let down = c.transfer().unwrap();
    let inv = down.invariants().unwrap();
    println!(
        "transfer of <t> from {f27}: {down} — rank {}, disc {}, {} hyperbolic",
        inv.rank, inv.disc, inv.hyperbolic_copies
    );

    // virtual classes and Witt reduction over the rationals
    let q = Field::rationals();
    let a = GwClass::from_diagonal(q.clone(), &[q.from_i64(2), q.from_i64(-2), q.from_i64(18)]).unwrap();
    let reduced = a.witt_reduce().unwrap();
    println!(
        "<2> + <-2> + <18> over Q reduces to {} plus {} hyperbolic copies",
        reduced.residue, reduced.hyperbolic_copies
    );
}
