//! Residual-intersection data for the plane ideal J = (xy, x^3): split into
//! saturation I = (x) and residual K = (y, x^2), check freeness of the
//! conormal module, resolve I^2/JI by the modified Koszul complex, and
//! scalarize the multiplication form I/J x I/J -> I^2/JI, which is always
//! hyperbolic here.
//!
//!     cargo run --release --example residual_multiplication_form

use gw_excess::ideals::GradedIdeal;
use gw_excess::poly::Poly;
use gw_excess::residual::{
    conormal_freeness_check, kos_prime_homology, mult_form, scalarize, split_ideal,
};
use gw_excess::Field;

fn main() {
    let field = Field::prime(31).unwrap();
    let x = Poly::var(field.clone(), 2, 0);
    let y = Poly::var(field.clone(), 2, 1);
    let xy = x.mul(&y).unwrap();
    let x3 = x.mul(&x).unwrap().mul(&x).unwrap();
    let j = GradedIdeal::new(field.clone(), 2, vec![xy, x3]).unwrap();

    let dmax = 10;
    let split = split_ideal(&j, dmax).unwrap();
    let gens = |ps: &[Poly]| ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
    println!("J = (xy, x^3) in k[x,y], k = {field}");
    println!("saturation I = ({})", gens(&split.i_gens));
    println!("residual   K = J : I = ({})", gens(&split.k_gens));

    let free = conormal_freeness_check(&j, &split.k_pieces, j.gens(), dmax).unwrap();
    println!("J/KJ free on the generator images: {free}");

    let kos = kos_prime_homology(j.gens(), &split.i_gens, 1, dmax).unwrap();
    let positive_vanishes = kos.homology.iter().all(|(&(n, _), &dim)| n == 0 || dim == 0);
    println!("modified Koszul complex (t = 1) has vanishing positive homology: {positive_vanishes}");

    let form = mult_form(&j, &split, dmax).unwrap();
    println!("I/J basis: {}", gens(&form.ij_basis));
    println!("I^2/JI basis: {}", gens(&form.i2ji_basis));
    println!("multiplication tensor:");
    for (i, u) in form.ij_basis.iter().enumerate() {
        for (jj, v) in form.ij_basis.iter().enumerate() {
            let coords: Vec<String> = form.gram[i][jj].iter().map(|c| c.to_string()).collect();
            println!("  {u} * {v} -> ({})", coords.join(", "));
        }
    }

    // any functional with a unit on x^3 scalarizes to the hyperbolic form
    let lambda = vec![field.from_i64(7), field.from_i64(5)];
    let (gram, class, radical) = scalarize(&form, &lambda).unwrap();
    println!("scalarized by lambda = (7, 5):");
    print!("{gram}");
    println!("class {class} with radical {radical}");
}
