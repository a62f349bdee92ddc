//! Walk the full excess-bundle pipeline on a sample 5 x 3 matrix of linear
//! forms over F_31: principal minors, socle and trace functional, the 9 x 9
//! form B', its descent B, and the GW-valued Euler number.
//!
//!     cargo run --release --example excess_euler_number

use gw_excess::excess::{run_excess, samples};

fn main() {
    let input = samples::f31_square_disc();
    println!("matrix M over {} (rows are quadric coefficients):", input.field());
    for i in 0..5 {
        let row: Vec<String> = (0..3).map(|j| input.matrix().at(i, j).to_string()).collect();
        println!("  [{}]", row.join(" | "));
    }

    let report = run_excess(&input).expect("sample input is admissible");

    println!("\nprincipal minor determinants:");
    for (i, f) in report.f.iter().enumerate() {
        println!("  f_{i} = {f}");
    }
    println!(
        "\nArtinian quotient dims by degree: {:?} (total {})",
        report.quotient_dims, report.total_quotient_dim
    );
    println!("socle element E = {}", report.socle);

    println!("\nB' on k[x,y,z]_1^3 (radical dimension {}):", report.radical_dim);
    print!("{}", report.bprime_gram);
    println!("\nB on a complement of im M^T:");
    print!("{}", report.b_gram);

    let inv = report.gw_b.invariants().unwrap();
    println!(
        "\nclass of B: {} — rank {}, discriminant {} ({})",
        report.gw_b,
        inv.rank,
        inv.disc,
        if inv.disc_is_square == Some(true) { "square" } else { "nonsquare" },
    );
    println!(
        "Euler number of the excess bundle (rank {}): {}",
        report.gw_euler.rank(),
        report.gw_euler
    );
    println!("predicted point-count class: {}", report.theorem_rhs);
}
