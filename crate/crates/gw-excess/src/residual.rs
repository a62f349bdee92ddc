//! Residual-intersection computations for homogeneous ideals, degree by
//! degree: splitting J into its saturation I and the residual K = J : I,
//! freeness of the conormal module J/KJ, homology of modified Koszul
//! complexes, and the multiplication form I/J x I/J -> I^2/JI with its
//! scalarizations.

use std::collections::BTreeMap;

use crate::field::{Elem, Field};
use crate::gw::GwClass;
use crate::ideals::{
    default_stab_bound, ideal_piece, ideal_quotient_piece, multiplication_matrix,
    saturation_pieces_up_to, GradedIdeal, GradedSubspace,
};
use crate::linalg::DenseMatrix;
use crate::poly::{graded_dim, GradedBasis, Poly};
use crate::{Error, Result};

/// J split into its saturation I and residual K = J : I, as per-degree
/// subspaces with generators extracted by the minimal-new-elements rule.
#[derive(Clone, Debug)]
pub struct SplitIdeal {
    pub dmax: u32,
    pub i_pieces: Vec<GradedSubspace>,
    pub i_gens: Vec<Poly>,
    pub k_pieces: Vec<GradedSubspace>,
    pub k_gens: Vec<Poly>,
}

/// Per-degree span of products g * (pieces at matching degrees), i.e. the
/// degree-d piece of the product ideal (gens) * (table).
fn product_piece(
    field: &Field,
    nvars: usize,
    gens: &[Poly],
    table: &[GradedSubspace],
    d: u32,
) -> Result<GradedSubspace> {
    let gb = GradedBasis::new(nvars, d);
    let mut cols: Vec<Vec<Elem>> = Vec::new();
    for g in gens {
        let dg = g.homogeneous_degree()?;
        if dg > d {
            continue;
        }
        let src = &table[(d - dg) as usize];
        for f in src.basis_polys(field)? {
            cols.push(g.mul(&f)?.coefficient_vector(&gb)?);
        }
    }
    let mat = DenseMatrix::from_fn(field.clone(), gb.dim(), cols.len(), |i, j| cols[j][i].clone());
    GradedSubspace::from_span(nvars, d, field, mat)
}

/// Generators of an ideal given by a per-degree table: in each degree, basis
/// vectors not already in R_1 * (previous degree).
pub fn extract_generators(field: &Field, nvars: usize, pieces: &[GradedSubspace]) -> Result<Vec<Poly>> {
    let vars: Vec<Poly> = (0..nvars).map(|i| Poly::var(field.clone(), nvars, i)).collect();
    let mut gens: Vec<Poly> = Vec::new();
    for (d, piece) in pieces.iter().enumerate() {
        let d = d as u32;
        if piece.dim() == 0 {
            continue;
        }
        let from_below = if d == 0 {
            GradedSubspace::zero(field, nvars, 0)
        } else {
            product_piece(field, nvars, &vars, &pieces[..d as usize + 1], d)?
        };
        // pivots of [old | new] landing in the new block are fresh generators
        let aug = from_below.basis().hstack(piece.basis())?;
        let r = aug.rref();
        let gb = GradedBasis::new(nvars, d);
        for &c in &r.pivots {
            if c >= from_below.dim() {
                let col = piece.basis().col(c - from_below.dim());
                gens.push(Poly::from_coefficient_vector(field, &gb, &col)?);
            }
        }
    }
    Ok(gens)
}

/// Split J into saturation and residual, degree by degree up to dmax.
pub fn split_ideal(j: &GradedIdeal, dmax: u32) -> Result<SplitIdeal> {
    let field = j.field().clone();
    let nvars = j.nvars();
    let bound = default_stab_bound(j, dmax);
    let i_pieces = saturation_pieces_up_to(j, dmax, bound)?;
    let i_gens = extract_generators(&field, nvars, &i_pieces)?;
    let mut k_pieces = Vec::with_capacity(dmax as usize + 1);
    for d in 0..=dmax {
        k_pieces.push(ideal_quotient_piece(j, &i_gens, d)?);
    }
    let k_gens = extract_generators(&field, nvars, &k_pieces)?;
    Ok(SplitIdeal { dmax, i_pieces, i_gens, k_pieces, k_gens })
}

/// Check that J/KJ is free over R/K on the images of the given generators:
/// in every degree d <= dmax, the kernel of
///   (+)_i R_{d - deg a_i} -> J_d/(KJ)_d,  (x_i) -> sum x_i a_i
/// lies inside (+)_i K_{d - deg a_i}. Errors when the a_i fail to span J in
/// some degree.
pub fn conormal_freeness_check(
    j: &GradedIdeal,
    k_pieces: &[GradedSubspace],
    gens: &[Poly],
    dmax: u32,
) -> Result<bool> {
    let field = j.field().clone();
    let nvars = j.nvars();
    let degs: Vec<u32> = gens.iter().map(|g| g.homogeneous_degree()).collect::<Result<_>>()?;
    for d in 0..=dmax {
        // Phi: stacked multiplication maps, one block column per generator
        let mut phi: Option<DenseMatrix> = None;
        let mut block_sizes = Vec::new();
        for (g, &dg) in gens.iter().zip(&degs) {
            if dg > d {
                block_sizes.push(0);
                continue;
            }
            let mul = multiplication_matrix(g, d - dg)?;
            block_sizes.push(mul.cols());
            phi = Some(match phi {
                None => mul,
                Some(m) => m.hstack(&mul)?,
            });
        }
        let jd = ideal_piece(j, d)?;
        let Some(phi) = phi else {
            if jd.dim() != 0 {
                return Err(Error::Inadmissible(format!("generators do not span J in degree {d}")));
            }
            continue;
        };
        let span = GradedSubspace::from_span(nvars, d, &field, phi.clone())?;
        if !span.same_space(&jd)? {
            return Err(Error::Inadmissible(format!("generators do not span J in degree {d}")));
        }
        // (KJ)_d = sum over J-generators g of K_{d - deg g} * g
        let kj = product_piece(&field, nvars, j.gens(), k_pieces, d)?;
        let l = kj.basis().left_kernel();
        let kernel = l.mul(&phi)?.kernel_basis();
        if kernel.cols() == 0 {
            continue;
        }
        // block diagonal of the K pieces in matching degrees
        let total: usize = block_sizes.iter().sum();
        let mut blocks = DenseMatrix::zeros(field.clone(), total, 0);
        let mut offset = 0;
        for (&sz, &dg) in block_sizes.iter().zip(&degs) {
            if sz == 0 {
                continue;
            }
            let kb = k_pieces[(d - dg) as usize].basis();
            let mut block = DenseMatrix::zeros(field.clone(), total, kb.cols());
            for r in 0..kb.rows() {
                for c in 0..kb.cols() {
                    block.set(offset + r, c, kb.at(r, c).clone());
                }
            }
            blocks = blocks.hstack(&block)?;
            offset += sz;
        }
        let base_rank = blocks.rank();
        if blocks.hstack(&kernel)?.rank() != base_rank {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-degree homology dimensions of the modified Koszul complex
/// Kos'(a_1..a_s) with term n equal to I^(t+1-n) * Lambda^n, where I is given
/// by generators (I^j means the full ring for j <= 0).
#[derive(Clone, Debug)]
pub struct KosHomology {
    pub s: usize,
    pub t: i64,
    /// (homological index, internal degree) -> dim of the term.
    pub term_dims: BTreeMap<(usize, u32), usize>,
    /// (homological index, internal degree) -> dim H_n.
    pub homology: BTreeMap<(usize, u32), usize>,
}

pub fn kos_prime_homology(a: &[Poly], i_gens: &[Poly], t: i64, dmax: u32) -> Result<KosHomology> {
    if a.is_empty() {
        return Err(Error::InvalidInput("empty generator list".into()));
    }
    let field = a[0].field().clone();
    let nvars = a[0].nvars();
    let s = a.len();
    let degs: Vec<u32> = a.iter().map(|g| g.homogeneous_degree()).collect::<Result<_>>()?;

    // power tables (I^j)_d for 0 <= j <= t+1, d <= dmax
    let jmax = (t + 1).max(0) as usize;
    let mut powers: Vec<Vec<GradedSubspace>> = Vec::with_capacity(jmax + 1);
    powers.push((0..=dmax).map(|d| GradedSubspace::full(&field, nvars, d)).collect());
    for j in 1..=jmax {
        let prev = &powers[j - 1];
        let table: Vec<GradedSubspace> =
            (0..=dmax).map(|d| product_piece(&field, nvars, i_gens, prev, d)).collect::<Result<_>>()?;
        powers.push(table);
    }
    let power_piece = |j: i64, d: u32| -> &GradedSubspace { &powers[j.max(0) as usize][d as usize] };

    // subsets of {0..s-1} of size n, in lexicographic order
    let subsets_of = |n: usize| -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, s: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for i in start..s {
                cur.push(i);
                rec(i + 1, s, n, cur, out);
                cur.pop();
            }
        }
        rec(0, s, n, &mut cur, &mut out);
        out
    };

    let mut term_dims = BTreeMap::new();
    let mut homology = BTreeMap::new();

    for d in 0..=dmax {
        // per homological index: block-diagonal basis over the subsets, plus
        // the block layout in the term's ambient space (+)_S R_{d - deg S}
        struct Term {
            subsets: Vec<Vec<usize>>,
            offsets: Vec<usize>, // ambient offset per subset
            ambient: usize,
            basis: DenseMatrix, // ambient rows x term dim
        }
        let mut terms: Vec<Term> = Vec::new();
        for n in 0..=s {
            let subsets = subsets_of(n);
            let mut offsets = Vec::with_capacity(subsets.len());
            let mut ambient = 0usize;
            let mut bases: Vec<Option<&GradedSubspace>> = Vec::new();
            for sub in &subsets {
                let degsum: u32 = sub.iter().map(|&i| degs[i]).sum();
                offsets.push(ambient);
                if degsum > d {
                    bases.push(None);
                    continue;
                }
                let dd = d - degsum;
                ambient += graded_dim(nvars, dd);
                bases.push(Some(power_piece(t + 1 - n as i64, dd)));
            }
            let total_dim: usize = bases.iter().flatten().map(|b| b.dim()).sum();
            let mut basis = DenseMatrix::zeros(field.clone(), ambient, total_dim);
            let mut col = 0;
            for (k, b) in bases.iter().enumerate() {
                let Some(b) = b else { continue };
                for c in 0..b.dim() {
                    for r in 0..b.ambient_dim() {
                        basis.set(offsets[k] + r, col, b.basis().at(r, c).clone());
                    }
                    col += 1;
                }
            }
            term_dims.insert((n, d), total_dim);
            terms.push(Term { subsets, offsets, ambient, basis });
        }

        // differential matrices X_n : T_n -> T_{n-1} in the chosen bases
        let mut x_mats: Vec<DenseMatrix> = Vec::new(); // x_mats[n-1] = X_n
        for n in 1..=s {
            let src = &terms[n];
            let dst = &terms[n - 1];
            // ambient differential applied to each basis column of src
            let sub_index: BTreeMap<&[usize], usize> =
                dst.subsets.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
            let mut image = DenseMatrix::zeros(field.clone(), dst.ambient, src.basis.cols());
            // walk src blocks
            let mut col_base = 0usize;
            for sub in src.subsets.iter() {
                let degsum: u32 = sub.iter().map(|&i| degs[i]).sum();
                if degsum > d {
                    continue;
                }
                let dd = d - degsum;
                let block = power_piece(t + 1 - n as i64, dd);
                let ncols = block.dim();
                if ncols == 0 {
                    continue;
                }
                for (r, &gen_idx) in sub.iter().enumerate() {
                    let mut target: Vec<usize> = sub.clone();
                    target.remove(r);
                    let ti = sub_index[target.as_slice()];
                    let mul = multiplication_matrix(&a[gen_idx], dd)?;
                    // sign (-1)^r
                    for c in 0..ncols {
                        let v = mul.mul_vec(&block.basis().col(c))?;
                        for (row, val) in v.into_iter().enumerate() {
                            if val.is_zero() {
                                continue;
                            }
                            let signed = if r % 2 == 1 { val.neg() } else { val };
                            let cur = image.at(dst.offsets[ti] + row, col_base + c).clone();
                            image.set(dst.offsets[ti] + row, col_base + c, cur + signed);
                        }
                    }
                }
                col_base += ncols;
            }
            // express image columns in the destination basis
            let mut x = DenseMatrix::zeros(field.clone(), dst.basis.cols(), src.basis.cols());
            for c in 0..src.basis.cols() {
                let col = image.col(c);
                let sol = dst.basis.solve(&col)?.ok_or_else(|| {
                    Error::Internal("differential does not preserve the subcomplex".into())
                })?;
                for (r, v) in sol.into_iter().enumerate() {
                    x.set(r, c, v);
                }
            }
            x_mats.push(x);
        }
        // complex property and homology dims
        for n in 1..s {
            let prod = x_mats[n - 1].mul(&x_mats[n])?;
            if !prod.is_zero() {
                return Err(Error::Internal("differentials do not compose to zero".into()));
            }
        }
        for n in 0..=s {
            let dim_n = term_dims[&(n, d)];
            let rank_out = if n == 0 { 0 } else { x_mats[n - 1].rank() };
            let rank_in = if n == s { 0 } else { x_mats[n].rank() };
            homology.insert((n, d), dim_n - rank_out - rank_in);
        }
    }

    Ok(KosHomology { s, t, term_dims, homology })
}

/// The multiplication form I/J (x) I/J -> I^2/JI: chosen per-degree bases of
/// both modules, and the coordinate vector of every basis product.
#[derive(Clone, Debug)]
pub struct ModuleForm {
    pub ij_basis: Vec<Poly>,
    pub i2ji_basis: Vec<Poly>,
    /// gram[a][b] = coordinates of ij_basis[a] * ij_basis[b] in i2ji_basis.
    pub gram: Vec<Vec<Vec<Elem>>>,
}

/// Per-degree complement basis of `small` inside `big`, as polynomials.
fn complement_basis(
    field: &Field,
    small: &GradedSubspace,
    big: &GradedSubspace,
) -> Result<Vec<Poly>> {
    if !big.contains(small)? {
        return Err(Error::Internal("expected containment of graded pieces".into()));
    }
    let aug = small.basis().hstack(big.basis())?;
    let r = aug.rref();
    let gb = GradedBasis::new(big.nvars(), big.degree());
    let mut out = Vec::new();
    for &c in &r.pivots {
        if c >= small.dim() {
            out.push(Poly::from_coefficient_vector(field, &gb, &big.basis().col(c - small.dim()))?);
        }
    }
    Ok(out)
}

pub fn mult_form(j: &GradedIdeal, split: &SplitIdeal, dmax: u32) -> Result<ModuleForm> {
    let field = j.field().clone();
    let nvars = j.nvars();

    // I/J pieces
    let mut ij_basis: Vec<Poly> = Vec::new();
    let mut ij_dims = Vec::new();
    for d in 0..=dmax {
        let jd = ideal_piece(j, d)?;
        let id = &split.i_pieces[d as usize];
        let cb = complement_basis(&field, &jd, id)?;
        ij_dims.push(cb.len());
        ij_basis.extend(cb);
    }
    // I^2 and JI pieces
    let i2: Vec<GradedSubspace> =
        (0..=dmax).map(|d| product_piece(&field, nvars, &split.i_gens, &split.i_pieces, d)).collect::<Result<_>>()?;
    let ji: Vec<GradedSubspace> =
        (0..=dmax).map(|d| product_piece(&field, nvars, j.gens(), &split.i_pieces, d)).collect::<Result<_>>()?;
    let mut i2ji_basis: Vec<Poly> = Vec::new();
    let mut i2ji_dims = Vec::new();
    for d in 0..=dmax {
        let cb = complement_basis(&field, &ji[d as usize], &i2[d as usize])?;
        i2ji_dims.push(cb.len());
        i2ji_basis.extend(cb);
    }
    // finite-dimensionality guard: the top degrees must already vanish
    for tail in 0..2.min(dmax as usize) {
        let d = dmax as usize - tail;
        if ij_dims[d] != 0 || i2ji_dims[d] != 0 {
            return Err(Error::Inadmissible(format!(
                "I/J or I^2/JI is still nonzero in degree {d}; raise the degree bound"
            )));
        }
    }

    // the Gram tensor, reducing each product against [i2ji | JI] in its degree
    let mut gram = vec![vec![Vec::new(); ij_basis.len()]; ij_basis.len()];
    for (x, u) in ij_basis.iter().enumerate() {
        for (y, v) in ij_basis.iter().enumerate() {
            let prod = u.mul(v)?;
            let d = u.homogeneous_degree()? + v.homogeneous_degree()?;
            if d > dmax {
                return Err(Error::Inadmissible(format!(
                    "product degree {d} exceeds the degree bound {dmax}"
                )));
            }
            let gb = GradedBasis::new(nvars, d);
            let pvec = prod.coefficient_vector(&gb)?;
            // coordinates: those basis elements of I^2/JI in this degree
            let in_degree: Vec<usize> = i2ji_basis
                .iter()
                .enumerate()
                .filter(|(_, b)| b.homogeneous_degree().unwrap() == d)
                .map(|(i, _)| i)
                .collect();
            let mut cols = DenseMatrix::zeros(field.clone(), gb.dim(), 0);
            for &i in &in_degree {
                let v = i2ji_basis[i].coefficient_vector(&gb)?;
                let col = DenseMatrix::from_fn(field.clone(), gb.dim(), 1, |r, _| v[r].clone());
                cols = cols.hstack(&col)?;
            }
            let combined = cols.hstack(ji[d as usize].basis())?;
            let sol = combined
                .solve(&pvec)?
                .ok_or_else(|| Error::Internal("product does not lie in I^2".into()))?;
            let mut coords = vec![field.zero(); i2ji_basis.len()];
            for (k, &i) in in_degree.iter().enumerate() {
                coords[i] = sol[k].clone();
            }
            gram[x][y] = coords;
        }
    }
    // symmetry of the tensor
    for x in 0..ij_basis.len() {
        for y in 0..x {
            if gram[x][y] != gram[y][x] {
                return Err(Error::Internal("multiplication tensor is not symmetric".into()));
            }
        }
    }
    Ok(ModuleForm { ij_basis, i2ji_basis, gram })
}

/// Scalarize the multiplication form by a functional on the I^2/JI basis and
/// diagonalize. Degenerate scalarizations are reported, not rejected.
pub fn scalarize(form: &ModuleForm, lambda: &[Elem]) -> Result<(DenseMatrix, GwClass, usize)> {
    if lambda.len() != form.i2ji_basis.len() {
        return Err(Error::Dimension("functional length must match the I^2/JI basis".into()));
    }
    let field = match form.ij_basis.first() {
        Some(p) => p.field().clone(),
        None => lambda
            .first()
            .map(|e| e.field().clone())
            .ok_or_else(|| Error::InvalidInput("empty form and functional".into()))?,
    };
    let n = form.ij_basis.len();
    let gram = DenseMatrix::from_fn(field.clone(), n, n, |i, j| {
        let mut acc = field.zero();
        for (c, l) in form.gram[i][j].iter().zip(lambda) {
            if c.is_zero() || l.is_zero() {
                continue;
            }
            acc = acc + c.clone() * l.clone();
        }
        acc
    });
    let (class, radical) = GwClass::from_gram(&gram)?;
    Ok((gram, class, radical))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw::Equality;

    fn fixture(field: &Field) -> GradedIdeal {
        let x = Poly::var(field.clone(), 2, 0);
        let y = Poly::var(field.clone(), 2, 1);
        let xy = x.mul(&y).unwrap();
        let x3 = x.mul(&x).unwrap().mul(&x).unwrap();
        GradedIdeal::new(field.clone(), 2, vec![xy, x3]).unwrap()
    }

    #[test]
    fn split_xy_x3() {
        let field = Field::prime(31).unwrap();
        let j = fixture(&field);
        let split = split_ideal(&j, 10).unwrap();
        // I = (x): dims d in each degree d; single generator x
        for d in 0..=10usize {
            assert_eq!(split.i_pieces[d].dim(), d, "I degree {d}");
        }
        assert_eq!(split.i_gens.len(), 1);
        assert_eq!(split.i_gens[0], Poly::var(field.clone(), 2, 0));
        // K = (y, x^2): degree-1 piece {y}, full from degree 2 on
        assert_eq!(split.k_pieces[0].dim(), 0);
        assert_eq!(split.k_pieces[1].dim(), 1);
        for d in 2..=10usize {
            assert_eq!(split.k_pieces[d].dim(), d + 1, "K degree {d}");
        }
        let kg: Vec<String> = split.k_gens.iter().map(|g| g.to_string()).collect();
        assert_eq!(kg, vec!["y", "x^2"]);
        // containments: J_d inside K_d and I_d; K_e * I_{d-e} inside J_d
        for d in 0..=8u32 {
            let jd = ideal_piece(&j, d).unwrap();
            assert!(split.k_pieces[d as usize].contains(&jd).unwrap());
            assert!(split.i_pieces[d as usize].contains(&jd).unwrap());
            for e in 0..=d {
                let gb = GradedBasis::new(2, d);
                for kp in split.k_pieces[e as usize].basis_polys(&field).unwrap() {
                    for ip in split.i_pieces[(d - e) as usize].basis_polys(&field).unwrap() {
                        let prod = kp.mul(&ip).unwrap();
                        assert!(jd
                            .contains_vector(&prod.coefficient_vector(&gb).unwrap())
                            .unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn split_saturated_ideal_is_identity() {
        // J = (x) is saturated: I = J and K = (1)
        let field = Field::prime(31).unwrap();
        let x = Poly::var(field.clone(), 2, 0);
        let j = GradedIdeal::new(field.clone(), 2, vec![x]).unwrap();
        let split = split_ideal(&j, 6).unwrap();
        for d in 0..=6u32 {
            assert!(split.i_pieces[d as usize]
                .same_space(&ideal_piece(&j, d).unwrap())
                .unwrap());
            assert_eq!(split.k_pieces[d as usize].dim(), graded_dim(2, d));
        }
    }

    #[test]
    fn conormal_freeness_fixture() {
        let field = Field::prime(31).unwrap();
        let j = fixture(&field);
        let split = split_ideal(&j, 10).unwrap();
        assert!(conormal_freeness_check(&j, &split.k_pieces, j.gens(), 10).unwrap());

        // deliberately wrong K = (y): the kernel witness x*(x^2) - x^2*(x)
        // escapes it in some degree
        let y = Poly::var(field.clone(), 2, 1);
        let ky = GradedIdeal::new(field.clone(), 2, vec![y]).unwrap();
        let wrong: Vec<GradedSubspace> = (0..=10).map(|d| ideal_piece(&ky, d).unwrap()).collect();
        assert!(!conormal_freeness_check(&j, &wrong, j.gens(), 10).unwrap());
    }

    #[test]
    fn kos_prime_fixture_resolves() {
        // a = (xy, x^3), I = (x), t = 1: positive homology vanishes and H_0
        // matches dim (I^2/JI)_d for all degrees <= 10
        let field = Field::prime(31).unwrap();
        let j = fixture(&field);
        let split = split_ideal(&j, 10).unwrap();
        let kos = kos_prime_homology(j.gens(), &split.i_gens, 1, 10).unwrap();
        let form = mult_form(&j, &split, 10).unwrap();
        let mut i2ji_dims = vec![0usize; 11];
        for b in &form.i2ji_basis {
            i2ji_dims[b.homogeneous_degree().unwrap() as usize] += 1;
        }
        for d in 0..=10u32 {
            assert_eq!(kos.homology[&(1, d)], 0, "H_1 degree {d}");
            assert_eq!(kos.homology[&(2, d)], 0, "H_2 degree {d}");
            assert_eq!(kos.homology[&(0, d)], i2ji_dims[d as usize], "H_0 degree {d}");
        }
    }

    #[test]
    fn kos_classical_regular_sequence() {
        // t = -1 turns Kos' into the ordinary Koszul complex; for the regular
        // sequence (x^2, y^3) positive homology vanishes
        let field = Field::prime(31).unwrap();
        let x = Poly::var(field.clone(), 2, 0);
        let y = Poly::var(field.clone(), 2, 1);
        let a = vec![
            x.mul(&x).unwrap(),
            y.mul(&y).unwrap().mul(&y).unwrap(),
        ];
        let kos = kos_prime_homology(&a, &[], -1, 8).unwrap();
        for d in 0..=8u32 {
            assert_eq!(kos.homology[&(1, d)], 0);
            assert_eq!(kos.homology[&(2, d)], 0);
        }
        // and H_0 = dims of R/(x^2,y^3): total dimension 6
        let total: usize = (0..=8u32).map(|d| kos.homology[&(0, d)]).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn kos_single_generator() {
        // s = 1, a = (x), I = (x), t = 1: H_0 per degree = dim I^2/(x * I)
        // = dim (x^2)/(x^2) = 0 except bookkeeping at low degrees
        let field = Field::prime(31).unwrap();
        let x = Poly::var(field.clone(), 2, 0);
        let kos = kos_prime_homology(&[x.clone()], &[x.clone()], 1, 6).unwrap();
        for d in 0..=6u32 {
            assert_eq!(kos.homology[&(0, d)], 0, "degree {d}");
        }
    }

    #[test]
    fn mult_form_fixture() {
        let field = Field::prime(31).unwrap();
        let j = fixture(&field);
        let split = split_ideal(&j, 10).unwrap();
        let form = mult_form(&j, &split, 10).unwrap();
        let names: Vec<String> = form.ij_basis.iter().map(|p| p.to_string()).collect();
        assert_eq!(names, vec!["x", "x^2"]);
        let names: Vec<String> = form.i2ji_basis.iter().map(|p| p.to_string()).collect();
        assert_eq!(names, vec!["x^2", "x^3"]);
        // x*x = x^2, x*x^2 = x^3, x^2*x^2 = 0 in I^2/JI
        let one = field.one();
        let zero = field.zero();
        assert_eq!(form.gram[0][0], vec![one.clone(), zero.clone()]);
        assert_eq!(form.gram[0][1], vec![zero.clone(), one.clone()]);
        assert_eq!(form.gram[1][0], vec![zero.clone(), one.clone()]);
        assert_eq!(form.gram[1][1], vec![zero.clone(), zero.clone()]);
    }

    #[test]
    fn scalarize_fixture_is_hyperbolic() {
        for field in [Field::prime(31).unwrap(), Field::rationals()] {
            let j = fixture(&field);
            let split = split_ideal(&j, 10).unwrap();
            let form = mult_form(&j, &split, 10).unwrap();
            // any functional with lambda(x^3) != 0 gives the hyperbolic form
            for (l2, l3) in [(0i64, 1i64), (5, 3), (17, -1), (0, -4)] {
                let lambda = vec![field.from_i64(l2), field.from_i64(l3)];
                let (_, class, radical) = scalarize(&form, &lambda).unwrap();
                assert_eq!(radical, 0);
                let h = GwClass::hyperbolic(field.clone(), 1).unwrap();
                assert_eq!(class.is_equal(&h).unwrap(), Equality::Equal, "lambda = ({l2},{l3})");
            }
            // lambda = 0: everything is radical
            let lambda = vec![field.zero(), field.zero()];
            let (_, class, radical) = scalarize(&form, &lambda).unwrap();
            assert_eq!(radical, 2);
            assert_eq!(class.rank(), 0);
            // lambda(x^3) = 0, lambda(x^2) != 0: rank 1 degenerate
            let lambda = vec![field.one(), field.zero()];
            let (_, class, radical) = scalarize(&form, &lambda).unwrap();
            assert_eq!(radical, 1);
            assert_eq!(class.rank(), 1);
        }
    }
}
