//! The excess-bundle pipeline: from an n x (n-2) matrix M of linear forms in
//! x, y, z (equivalently, n quadrics in P^n vanishing on the plane
//! {x_3 = ... = x_n = 0}) to the bilinear forms B' and B, the GW class of the
//! excess bundle's Euler number, and the predicted point-count class.
//!
//! Outline, for n odd with m = (n-1)/2:
//!  - f_0, f_1, f_2 are the determinants of the three principal (n-2) x (n-2)
//!    minors of M; the pipeline requires them to have no common projective
//!    zero, so k[x,y,z]/(f_0,f_1,f_2) is Artinian with one-dimensional top
//!    piece in degree 3(n-3), generated by the socle E.
//!  - lambda is the functional on degree 3(n-3) killing the ideal with
//!    lambda(E) = 1.
//!  - B' on the (n-2) copies of the degree-(m-1) forms has Gram entries
//!    (+/-) lambda(h h' * det M^v[rows 1,n-1,n] * det M^l[rows 1,2,n]),
//!    sign (-1)^(v+l); it vanishes on the image of M^T and descends to a
//!    nondegenerate form B whose class, padded with hyperbolic copies up to
//!    rank C(n,2) + n + 1, is the Euler number of the excess bundle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Elem, Field};
use crate::gw::GwClass;
use crate::ideals::{artinian_test, ideal_piece, quotient_dim, socle_element, GradedIdeal};
use crate::linalg::DenseMatrix;
use crate::poly::{binomial, GradedBasis, Homogeneity, Poly, PolyMatrix};
use crate::{Error, Result};

/// An admissible-shape input: n odd, M an n x (n-2) matrix of linear forms
/// in exactly three variables.
#[derive(Clone, Debug)]
pub struct ExcessInput {
    field: Field,
    n: usize,
    matrix: PolyMatrix,
}

impl ExcessInput {
    pub fn new(field: Field, n: usize, matrix: PolyMatrix) -> Result<Self> {
        if n < 3 || n % 2 == 0 {
            return Err(Error::InvalidInput(format!("n must be odd and >= 3, got {n}")));
        }
        if field.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if matrix.rows() != n || matrix.cols() != n - 2 {
            return Err(Error::Dimension(format!(
                "matrix must be {} x {}, got {} x {}",
                n,
                n - 2,
                matrix.rows(),
                matrix.cols()
            )));
        }
        if matrix.nvars() != 3 || matrix.field() != &field {
            return Err(Error::InvalidInput("matrix entries must be forms in 3 variables".into()));
        }
        for i in 0..n {
            for j in 0..n - 2 {
                match matrix.at(i, j).homogeneity() {
                    Homogeneity::Zero | Homogeneity::Degree(1) => {}
                    _ => {
                        return Err(Error::Degree(format!(
                            "matrix entry ({i},{j}) is not a linear form"
                        )))
                    }
                }
            }
        }
        Ok(ExcessInput { field, n, matrix })
    }

    /// Convenience constructor from integer coefficient triples, row-major.
    pub fn from_coeffs(field: &Field, n: usize, rows: &[[[i64; 3]; 3]]) -> Result<Self> {
        if rows.len() != n || n != 5 {
            return Err(Error::Dimension("from_coeffs expects n = 5 with 5 rows".into()));
        }
        let mut entries = Vec::with_capacity(n * (n - 2));
        for row in rows {
            for coeffs in row {
                let elems: Vec<Elem> = coeffs.iter().map(|&c| field.from_i64(c)).collect();
                entries.push(Poly::linear_form(field, &elems)?);
            }
        }
        let m = PolyMatrix::new(field.clone(), 3, n, n - 2, entries)?;
        ExcessInput::new(field.clone(), n, m)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// m = (n-1)/2.
    pub fn m_param(&self) -> u32 {
        ((self.n - 1) / 2) as u32
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    /// The flat quadrics Q_i = sum_j M_ij * x_j in n+1 variables. Note the
    /// zero locus of this particular lift always contains the complementary
    /// plane x_0 = x_1 = x_2 = 0, so it is never a general member of the
    /// family; see [`ExcessInput::lift_quadrics_seeded`] for verification.
    pub fn lift_quadrics(&self) -> Result<Vec<Poly>> {
        let zero = vec![0u64; (self.n - 2) * (self.n - 2)];
        (0..self.n).map(|i| self.lift_row(i, &zero)).collect()
    }

    /// Quadrics restricting to M whose high-variable parts are drawn from a
    /// seeded generator: Q_i = sum_j (M_ij + R_ij(x_3..x_n)) * x_j with the
    /// R_ij random linear forms. Restriction to the plane kills every R
    /// term, so `quadrics_to_m` recovers M exactly; the extra terms break the
    /// degeneracy of the flat lift.
    pub fn lift_quadrics_seeded(&self, seed: u64) -> Result<Vec<Poly>> {
        let q = self
            .field
            .order()
            .ok_or_else(|| Error::Unsupported("seeded lifts need a finite field".into()))?;
        // domain-separated from the matrix-search stream for the same seed
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x517c_c1b7_2722_0a95);
        let mut out = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            let picks: Vec<u64> = (0..(self.n - 2) * (self.n - 2)).map(|_| rng.gen_range(0..q)).collect();
            out.push(picks);
        }
        let mut quadrics = Vec::with_capacity(self.n);
        for (i, picks) in out.iter().enumerate() {
            quadrics.push(self.lift_row(i, picks)?);
        }
        Ok(quadrics)
    }

    /// Row i of a lift: picks supplies, column-major per j, the coefficients
    /// of x_3..x_n in R_ij.
    fn lift_row(&self, i: usize, picks: &[u64]) -> Result<Poly> {
        let nv = self.n + 1;
        let field = &self.field;
        let embed: Vec<Poly> = (0..3).map(|v| Poly::var(field.clone(), nv, v)).collect();
        let mut q = Poly::zero(field.clone(), nv);
        for j in 0..self.n - 2 {
            let mut form = self.matrix.at(i, j).substitute(&embed)?;
            for (k, &c) in picks[j * (self.n - 2)..(j + 1) * (self.n - 2)].iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let coeff = field.from_index(c)?;
                let term = Poly::var(field.clone(), nv, k + 3).scale(&coeff)?;
                form = form.add(&term)?;
            }
            let xj = Poly::var(field.clone(), nv, j + 3);
            q = q.add(&form.mul(&xj)?)?;
        }
        Ok(q)
    }
}

/// Recover M from n quadrics vanishing on the plane: M_ij is the x,y,z part
/// of the coefficient form of x_{j+3} in Q_i. Any monomial with two
/// high-index variables dies under the restriction, so the splitting choice
/// does not matter; a monomial supported entirely on x,y,z means the quadric
/// does not vanish on the plane and is rejected.
pub fn quadrics_to_m(field: &Field, n: usize, quadrics: &[Poly]) -> Result<PolyMatrix> {
    if quadrics.len() != n {
        return Err(Error::Dimension(format!("expected {n} quadrics, got {}", quadrics.len())));
    }
    let nv = n + 1;
    let mut entries = vec![Poly::zero(field.clone(), 3); n * (n - 2)];
    for (i, q) in quadrics.iter().enumerate() {
        if q.nvars() != nv {
            return Err(Error::Dimension(format!("quadric {i} must have {nv} variables")));
        }
        match q.homogeneity() {
            Homogeneity::Zero => {}
            Homogeneity::Degree(2) => {}
            _ => return Err(Error::Degree(format!("input {i} is not a quadric"))),
        }
        for (mono, c) in q.terms() {
            let exps = mono.exps();
            let high: Vec<usize> = (3..nv).filter(|&v| exps[v] > 0).collect();
            match high.len() {
                0 => {
                    return Err(Error::Inadmissible(format!(
                        "quadric {i} does not vanish on the plane (term {mono})"
                    )))
                }
                _ => {
                    // x_a * x_j with a <= 2 < j contributes c*x_a to column j;
                    // x_j * x_k or x_j^2 with j,k >= 3 is killed by restriction
                    if high.len() == 1 && exps[high[0]] == 1 {
                        let j = high[0];
                        let a = (0..3).find(|&a| exps[a] > 0).expect("degree-2 monomial");
                        let col = j - 3;
                        let term = Poly::monomial(
                            field.clone(),
                            crate::poly::Monomial::var(3, a),
                            c.clone(),
                        )?;
                        entries[i * (n - 2) + col] = entries[i * (n - 2) + col].add(&term)?;
                    }
                }
            }
        }
    }
    PolyMatrix::new(field.clone(), 3, n, n - 2, entries)
}

/// The three principal minors and their determinants f_0, f_1, f_2: N_0 drops
/// the last two rows of M, N_1 the first and last, N_2 the first two.
pub fn principal_minors(input: &ExcessInput) -> Result<([PolyMatrix; 3], [Poly; 3])> {
    let n = input.n;
    let m = &input.matrix;
    let n0 = m.submatrix_rows(0..n - 2);
    let n1 = m.submatrix_rows(1..n - 1);
    let n2 = m.submatrix_rows(2..n);
    let f0 = n0.det()?;
    let f1 = n1.det()?;
    let f2 = n2.det()?;
    Ok(([n0, n1, n2], [f0, f1, f2]))
}

/// The trace functional on degree-3(n-3) forms: the unique linear functional
/// vanishing on the ideal piece (f_0,f_1,f_2)_{3(n-3)} with value 1 on the
/// socle E.
pub fn trace_functional(f: &[Poly; 3], socle: &Poly) -> Result<Vec<Elem>> {
    let field = f[0].field().clone();
    let deg = f[0].homogeneous_degree()?;
    let socle_degree = 3 * (deg - 1);
    let gb = GradedBasis::new(3, socle_degree);
    let ideal = GradedIdeal::new(field.clone(), 3, f.to_vec())?;
    if quotient_dim(&ideal, socle_degree)? != 1 {
        return Err(Error::Inadmissible(
            "quotient is not one-dimensional in the socle degree".into(),
        ));
    }
    let piece = ideal_piece(&ideal, socle_degree)?;
    // rows: basis vectors of the ideal piece (lambda kills them), then E
    // (lambda sends it to 1)
    let mut system = piece.basis().transpose();
    let e_vec = socle.coefficient_vector(&gb)?;
    let e_row = DenseMatrix::from_fn(field.clone(), 1, gb.dim(), |_, j| e_vec[j].clone());
    system = system.vstack(&e_row)?;
    let mut rhs = vec![field.zero(); system.rows()];
    rhs[system.rows() - 1] = field.one();
    let lambda = system
        .solve(&rhs)?
        .ok_or_else(|| Error::Inadmissible("socle element lies in the ideal".into()))?;
    Ok(lambda)
}

/// Apply a functional on the degree-3(n-3) basis to a form of that degree.
fn apply_functional(lambda: &[Elem], gb: &GradedBasis, p: &Poly) -> Result<Elem> {
    let v = p.coefficient_vector(gb)?;
    let field = p.field();
    let mut acc = field.zero();
    for (c, l) in v.iter().zip(lambda) {
        if c.is_zero() || l.is_zero() {
            continue;
        }
        acc = acc.add(&c.mul(l)?)?;
    }
    Ok(acc)
}

/// Gram matrix of B' over the basis {x^alpha e_v}, ordered slot-major with
/// graded-lex monomials inside each slot. Entry at ((v,alpha),(l,alpha')) is
/// (-1)^(v+l) lambda(x^alpha x^alpha' det M^v[1,n-1,n] det M^l[1,2,n]).
pub fn bprime_gram(input: &ExcessInput, lambda: &[Elem]) -> Result<DenseMatrix> {
    let n = input.n;
    let field = input.field.clone();
    let mp = input.m_param();
    let h_basis = GradedBasis::new(3, mp - 1);
    let socle_deg = 3 * (n as u32 - 3);
    let socle_basis = GradedBasis::new(3, socle_deg);
    let m = &input.matrix;

    // det M with rows {1, n-1, n} (resp. {1, 2, n}) and one column removed
    let rows_f = [0usize, n - 2, n - 1];
    let rows_g = [0usize, 1, n - 1];
    let mut fmin = Vec::with_capacity(n - 2);
    let mut gmin = Vec::with_capacity(n - 2);
    for v in 0..n - 2 {
        fmin.push(m.minor_removing(&rows_f, &[v]).det()?);
        gmin.push(m.minor_removing(&rows_g, &[v]).det()?);
    }

    let dim_h = h_basis.dim();
    let size = (n - 2) * dim_h;
    let mut gram = DenseMatrix::zeros(field.clone(), size, size);
    for v in 0..n - 2 {
        for l in 0..n - 2 {
            let prod = fmin[v].mul(&gmin[l])?;
            if !prod.is_zero() {
                // total degree bookkeeping: 2(m-1) from h, h' plus 2(n-3)
                // from the minors must give the socle degree 3(n-3)
                debug_assert_eq!(prod.homogeneous_degree().unwrap() + 2 * (mp - 1), socle_deg);
            }
            let negate = (v + l) % 2 == 1;
            for (a, ma) in h_basis.monomials().iter().enumerate() {
                for (b, mb) in h_basis.monomials().iter().enumerate() {
                    let shifted = prod.mul_monomial(&ma.mul(mb));
                    let mut val = apply_functional(lambda, &socle_basis, &shifted)?;
                    if negate {
                        val = val.neg();
                    }
                    gram.set(v * dim_h + a, l * dim_h + b, val);
                }
            }
        }
    }
    if !gram.is_symmetric() {
        return Err(Error::Internal("B' failed the exact symmetry check".into()));
    }
    Ok(gram)
}

/// Coordinate matrix of the image of M^T : R_{m-2}^n -> R_{m-1}^{n-2} inside
/// the B' domain (columns span the image).
pub fn mt_image(input: &ExcessInput) -> Result<DenseMatrix> {
    let n = input.n;
    let field = input.field.clone();
    let mp = input.m_param();
    let h_basis = GradedBasis::new(3, mp - 1);
    let dim_h = h_basis.dim();
    let size = (n - 2) * dim_h;
    if mp < 2 {
        return Ok(DenseMatrix::zeros(field, size, 0));
    }
    let src_basis = GradedBasis::new(3, mp - 2);
    let mut cols: Vec<Vec<Elem>> = Vec::new();
    for i in 0..n {
        for mono in src_basis.monomials() {
            let mut col = vec![field.zero(); size];
            for v in 0..n - 2 {
                let entry = input.matrix.at(i, v).mul_monomial(mono);
                let coeffs = entry.coefficient_vector(&h_basis)?;
                for (a, c) in coeffs.into_iter().enumerate() {
                    col[v * dim_h + a] = c;
                }
            }
            cols.push(col);
        }
    }
    Ok(DenseMatrix::from_fn(field, size, cols.len(), |r, c| cols[c][r].clone()))
}

/// Restrict B' to a complement of the image of M^T, checking that B'
/// vanishes on the image in both slots. Returns the restricted Gram and the
/// standard-coordinate indices of the chosen complement.
pub fn quotient_form(bprime: &DenseMatrix, image: &DenseMatrix) -> Result<(DenseMatrix, Vec<usize>)> {
    let n = bprime.rows();
    if bprime.mul(image)?.is_zero() == false || image.transpose().mul(bprime)?.is_zero() == false {
        return Err(Error::Internal("B' does not vanish on the image of M^T".into()));
    }
    // extend the image to a full basis: pivot columns of [image | I] past the
    // image block pick the complement coordinates
    let id = DenseMatrix::identity(bprime.field().clone(), n);
    let aug = image.hstack(&id)?;
    let r = aug.rref();
    let complement: Vec<usize> = r
        .pivots
        .iter()
        .filter(|&&c| c >= image.cols())
        .map(|&c| c - image.cols())
        .collect();
    let b = DenseMatrix::from_fn(bprime.field().clone(), complement.len(), complement.len(), |i, j| {
        bprime.at(complement[i], complement[j]).clone()
    });
    if b.rank() != bprime.rank() {
        return Err(Error::Internal("restriction to the complement changed the rank".into()));
    }
    Ok((b, complement))
}

/// Everything the pipeline computes for one admissible input.
#[derive(Clone, Debug)]
pub struct ExcessReport {
    pub input: ExcessInput,
    pub minors: [PolyMatrix; 3],
    pub f: [Poly; 3],
    pub cover_ok: bool,
    /// dim (R/(f_0,f_1,f_2))_d for d = 0..=3(n-3).
    pub quotient_dims: Vec<usize>,
    pub total_quotient_dim: usize,
    pub socle: Poly,
    /// The trace functional on the degree-3(n-3) monomial basis.
    pub trace_functional: Vec<Elem>,
    pub bprime_gram: DenseMatrix,
    pub mt_image: DenseMatrix,
    pub b_gram: DenseMatrix,
    pub quotient_coords: Vec<usize>,
    pub gw_b: GwClass,
    pub radical_dim: usize,
    pub gw_euler: GwClass,
    /// C(n,2) + n + 1.
    pub expected_rank: i64,
    pub theorem_rhs: GwClass,
}

/// Run the full pipeline. Fails with `Inadmissible` when the minors do not
/// cover the plane (naming any identically-zero f_i).
pub fn run_excess(input: &ExcessInput) -> Result<ExcessReport> {
    let n = input.n;
    let field = input.field.clone();
    let (minors, f) = principal_minors(input)?;
    let vanished: Vec<usize> = (0..3).filter(|&i| f[i].is_zero()).collect();
    if !vanished.is_empty() {
        return Err(Error::Inadmissible(format!(
            "cover check failed: f_{vanished:?} identically zero"
        )));
    }
    if !artinian_test(&f[0], &f[1], &f[2])? {
        return Err(Error::Inadmissible(
            "cover check failed: f_0, f_1, f_2 have a common projective zero".into(),
        ));
    }

    let socle_deg = 3 * (n as u32 - 3);
    let ideal = GradedIdeal::new(field.clone(), 3, f.to_vec())?;
    let quotient_dims: Vec<usize> = (0..=socle_deg)
        .map(|d| quotient_dim(&ideal, d))
        .collect::<Result<_>>()?;
    let total_quotient_dim: usize = quotient_dims.iter().sum();
    if total_quotient_dim != (n - 2).pow(3) {
        return Err(Error::Internal(format!(
            "Artinian quotient has dimension {total_quotient_dim}, expected {}",
            (n - 2).pow(3)
        )));
    }

    let socle = socle_element(&f[0], &f[1], &f[2])?;
    let lambda = trace_functional(&f, &socle)?;
    let bprime = bprime_gram(input, &lambda)?;
    let image = mt_image(input)?;
    let (b_gram, quotient_coords) = quotient_form(&bprime, &image)?;

    let (gw_b, radical_dim_b) = GwClass::from_gram(&b_gram)?;
    if radical_dim_b != 0 {
        return Err(Error::Internal("B is degenerate on the quotient".into()));
    }
    let radical_dim = bprime.rows() - bprime.rank();
    let expected_rank = (binomial(n, 2) + n + 1) as i64;
    let deficit = expected_rank - gw_b.rank();
    if deficit < 0 || deficit % 2 != 0 {
        return Err(Error::Internal(format!(
            "rank parity failure: rank(B) = {}, expected Euler rank {expected_rank}",
            gw_b.rank()
        )));
    }
    let gw_euler = gw_b.add(&GwClass::hyperbolic(field.clone(), (deficit / 2) as usize)?)?;
    let rhs = GwClass::hyperbolic(field.clone(), 1 << (n - 1))?.sub(&gw_euler)?;

    Ok(ExcessReport {
        input: input.clone(),
        minors,
        f,
        cover_ok: true,
        quotient_dims,
        total_quotient_dim,
        socle,
        trace_functional: lambda,
        bprime_gram: bprime,
        mt_image: image,
        b_gram,
        quotient_coords,
        gw_b,
        radical_dim,
        gw_euler,
        expected_rank,
        theorem_rhs: rhs,
    })
}

/// Rejection-sample a uniformly random admissible input; deterministic given
/// the seed. Returns the input and the number of attempts.
pub fn random_admissible_input(
    field: &Field,
    n: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<(ExcessInput, usize)> {
    let q = field
        .order()
        .ok_or_else(|| Error::Unsupported("random inputs need a finite field".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let entries: Vec<Poly> = (0..n * (n - 2))
            .map(|_| {
                let coeffs: Vec<Elem> = (0..3)
                    .map(|_| field.from_index(rng.gen_range(0..q)).expect("finite field"))
                    .collect();
                Poly::linear_form(field, &coeffs)
            })
            .collect::<Result<_>>()?;
        let m = PolyMatrix::new(field.clone(), 3, n, n - 2, entries)?;
        let input = ExcessInput::new(field.clone(), n, m)?;
        let (_, f) = principal_minors(&input)?;
        if f.iter().all(|fi| !fi.is_zero()) && artinian_test(&f[0], &f[1], &f[2])? {
            return Ok((input, attempt));
        }
    }
    Err(Error::Inadmissible(format!(
        "no admissible input found within {max_attempts} attempts"
    )))
}

/// The three sample matrices exercised throughout the examples and tests.
pub mod samples {
    use super::*;

    pub fn f31_square_disc() -> ExcessInput {
        let f = Field::prime(31).unwrap();
        ExcessInput::from_coeffs(
            &f,
            5,
            &[
                [[-15, -8, -14], [-2, -2, 10], [12, -5, -10]],
                [[-8, -14, -2], [10, -12, 13], [-15, -15, 13]],
                [[5, 11, 14], [-11, -10, -5], [14, -2, 3]],
                [[7, -2, -4], [-10, 0, 10], [4, -5, -4]],
                [[5, -10, 2], [-12, 6, 7], [8, -10, -11]],
            ],
        )
        .unwrap()
    }

    pub fn f31_nonsquare_disc() -> ExcessInput {
        let f = Field::prime(31).unwrap();
        ExcessInput::from_coeffs(
            &f,
            5,
            &[
                [[3, -8, 0], [-12, 9, 3], [4, -12, 6]],
                [[2, -7, 8], [9, 2, -5], [14, -9, -4]],
                [[-11, -3, -2], [4, -5, 10], [-13, 8, 8]],
                [[-11, 15, 15], [-15, 10, -14], [13, 10, 11]],
                [[-15, 14, -8], [8, -6, 3], [8, -3, -3]],
            ],
        )
        .unwrap()
    }

    pub fn f61_session() -> ExcessInput {
        let f = Field::prime(61).unwrap();
        ExcessInput::from_coeffs(
            &f,
            5,
            &[
                [[20, 4, -21], [5, -30, -24], [18, 11, -20]],
                [[-16, -22, 5], [-2, 20, -25], [-7, 25, 23]],
                [[28, -7, 26], [30, 21, 7], [27, -24, -30]],
                [[5, -12, -2], [1, -26, 24], [14, 18, 0]],
                [[21, 2, 1], [2, -14, -4], [8, 26, 27]],
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw::Equality;

    #[test]
    fn quadrics_roundtrip() {
        let input = samples::f31_square_disc();
        let quadrics = input.lift_quadrics().unwrap();
        let m = quadrics_to_m(input.field(), 5, &quadrics).unwrap();
        assert_eq!(&m, input.matrix());
    }

    #[test]
    fn quadrics_to_m_shapes() {
        let f = Field::prime(31).unwrap();
        // Q_1 = x_0 * x_3 contributes the row (x, 0, 0); Q with a term x_3*x_4
        // contributes nothing; a term x^2 on the plane is rejected
        let nv = 6;
        let q1 = Poly::from_terms(
            f.clone(),
            nv,
            vec![(crate::poly::Monomial::new(vec![1, 0, 0, 1, 0, 0]), f.one())],
        )
        .unwrap();
        let q_cross = Poly::from_terms(
            f.clone(),
            nv,
            vec![(crate::poly::Monomial::new(vec![0, 0, 0, 1, 1, 0]), f.one())],
        )
        .unwrap();
        let zero = Poly::zero(f.clone(), nv);
        let m = quadrics_to_m(&f, 5, &[q1, q_cross, zero.clone(), zero.clone(), zero]).unwrap();
        assert_eq!(m.at(0, 0), &Poly::var(f.clone(), 3, 0));
        assert!(m.at(0, 1).is_zero());
        for j in 0..3 {
            assert!(m.at(1, j).is_zero());
        }

        let bad = Poly::from_terms(
            f.clone(),
            nv,
            vec![(crate::poly::Monomial::new(vec![2, 0, 0, 0, 0, 0]), f.one())],
        )
        .unwrap();
        let zero = Poly::zero(f.clone(), nv);
        assert!(matches!(
            quadrics_to_m(&f, 5, &[bad, zero.clone(), zero.clone(), zero.clone(), zero]),
            Err(Error::Inadmissible(_))
        ));
    }

    #[test]
    fn minors_are_cubics_passing_cover() {
        for input in [samples::f31_square_disc(), samples::f31_nonsquare_disc(), samples::f61_session()] {
            let (_, f) = principal_minors(&input).unwrap();
            for fi in &f {
                assert_eq!(fi.homogeneous_degree().unwrap(), 3);
            }
            assert!(artinian_test(&f[0], &f[1], &f[2]).unwrap());
        }
    }

    #[test]
    fn trace_functional_on_cubes() {
        // lambda for (x^3,y^3,z^3): 1 on x^2y^2z^2, 0 on ideal monomials
        let f = Field::prime(31).unwrap();
        let pow3 = |v: usize| {
            let mut e = vec![0u32; 3];
            e[v] = 3;
            Poly::from_terms(f.clone(), 3, vec![(crate::poly::Monomial::new(e), f.one())]).unwrap()
        };
        let fs = [pow3(0), pow3(1), pow3(2)];
        let socle = socle_element(&fs[0], &fs[1], &fs[2]).unwrap();
        let lambda = trace_functional(&fs, &socle).unwrap();
        let gb = GradedBasis::new(3, 6);
        let check = |exps: Vec<u32>, expect: i64| {
            let p = Poly::from_terms(f.clone(), 3, vec![(crate::poly::Monomial::new(exps), f.one())]).unwrap();
            assert_eq!(apply_functional(&lambda, &gb, &p).unwrap(), f.from_i64(expect));
        };
        check(vec![2, 2, 2], 1); // E itself
        check(vec![3, 3, 0], 0); // x^3 y^3 in the ideal
        check(vec![4, 2, 0], 0); // x^4 y^2 = x^3 * xy^2 in the ideal
        check(vec![6, 0, 0], 0);
    }

    #[test]
    fn f31_square_disc_pipeline() {
        let report = run_excess(&samples::f31_square_disc()).unwrap();
        assert_eq!(report.quotient_dims, vec![1, 3, 6, 7, 6, 3, 1]);
        assert_eq!(report.total_quotient_dim, 27);
        assert_eq!(report.bprime_gram.rows(), 9);
        assert_eq!(report.radical_dim, 5);
        assert_eq!(report.b_gram.rows(), 4);
        let inv = report.gw_b.invariants().unwrap();
        assert_eq!(inv.rank, 4);
        // disc is the class of 70 = 8 mod 31, a square
        assert_eq!(inv.disc_is_square, Some(true));
        // Euler number: 2H plus 6 more hyperbolic copies, rank 16
        assert_eq!(report.gw_euler.rank(), 16);
        let expect = GwClass::hyperbolic(report.input.field().clone(), 8).unwrap();
        assert_eq!(report.gw_euler.is_equal(&expect).unwrap(), Equality::Equal);
        // theorem right-hand side has rank 2^5 - 16 = 16
        assert_eq!(report.theorem_rhs.rank(), 16);
    }

    #[test]
    fn f31_nonsquare_disc_pipeline() {
        let report = run_excess(&samples::f31_nonsquare_disc()).unwrap();
        let inv = report.gw_b.invariants().unwrap();
        assert_eq!(inv.rank, 4);
        assert_eq!(inv.disc_is_square, Some(false));
        // matches <-2> + <3> + <-14> + <4> at the (rank, disc) level
        let f = report.input.field().clone();
        let printed = GwClass::from_diagonal(
            f.clone(),
            &[f.from_i64(-2), f.from_i64(3), f.from_i64(-14), f.from_i64(4)],
        )
        .unwrap();
        assert_eq!(report.gw_b.is_equal(&printed).unwrap(), Equality::Equal);
    }

    #[test]
    fn f61_session_pipeline() {
        let report = run_excess(&samples::f61_session()).unwrap();
        assert_eq!(report.radical_dim, 5);
        let f = report.input.field().clone();
        let printed = GwClass::from_diagonal(
            f.clone(),
            &[f.from_i64(-1), f.from_i64(-11), f.from_i64(-29), f.from_i64(-12)],
        )
        .unwrap();
        assert_eq!(report.gw_b.is_equal(&printed).unwrap(), Equality::Equal);
    }

    #[test]
    fn inadmissible_input_is_rejected() {
        // two proportional rows kill f_0
        let f = Field::prime(31).unwrap();
        let row = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        let input = ExcessInput::from_coeffs(&f, 5, &[row, row, row, row, row]).unwrap();
        assert!(matches!(run_excess(&input), Err(Error::Inadmissible(_))));
    }

    #[test]
    fn random_admissible_is_deterministic() {
        let f = Field::prime(31).unwrap();
        let (a, attempts_a) = random_admissible_input(&f, 5, 7, 1000).unwrap();
        let (b, attempts_b) = random_admissible_input(&f, 5, 7, 1000).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        assert_eq!(attempts_a, attempts_b);
        let report = run_excess(&a).unwrap();
        assert_eq!(report.gw_euler.rank(), 16);
    }
}
