//! Dense exact linear algebra over any [`Field`]: row reduction, kernels,
//! solving, and congruence diagonalization of symmetric matrices.
//!
//! Pivoting is deterministic (first nonzero by row-major scan); arithmetic is
//! exact, so there are no numerical concerns and every result can be
//! re-multiplied and checked entrywise.

use crate::field::{Elem, Field};
use crate::{Error, Result};

/// A dense row-major matrix with entries in a single field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DenseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Result of row reduction.
pub struct Rref {
    pub matrix: DenseMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl DenseMatrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        for e in &data {
            if e.field() != &field {
                return Err(Error::FieldMismatch("matrix entry".into()));
            }
        }
        Ok(DenseMatrix { field, rows, cols, data })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        DenseMatrix { field, rows, cols, data }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = m.field.one();
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { field, rows, cols, data }
    }

    /// Small-integer constructor, mostly for tests.
    pub fn from_i64(field: &Field, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Self::from_fn(field.clone(), rows, cols, |i, j| field.from_i64(entries[i * cols + j]))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> DenseMatrix {
        Self::from_fn(self.field.clone(), self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.cols {
            return Err(Error::Dimension("matrix-vector size mismatch".into()));
        }
        let mut out = vec![self.field.zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if a.is_zero() || v[j].is_zero() {
                    continue;
                }
                out[i] = out[i].clone() + a.clone() * v[j].clone();
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation [self | other].
    pub fn hstack(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack row mismatch".into()));
        }
        Ok(Self::from_fn(self.field.clone(), self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        }))
    }

    /// Vertical concatenation [self; other].
    pub fn vstack(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack column mismatch".into()));
        }
        Ok(Self::from_fn(self.field.clone(), self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self.at(i, j).clone()
            } else {
                other.at(i - self.rows, j).clone()
            }
        }))
    }

    pub fn columns(&self, idx: &[usize]) -> DenseMatrix {
        Self::from_fn(self.field.clone(), self.rows, idx.len(), |i, j| self.at(i, idx[j]).clone())
    }

    /// Reduced row echelon form with unit pivots.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // first nonzero entry in column c at or below row r
            let Some(pr) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(r * m.cols + j, pr * m.cols + j);
                }
            }
            let inv = m.at(r, c).inv().expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.at(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c).clone();
                for j in c..m.cols {
                    let v = m.at(i, j).clone() - f.clone() * m.at(r, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots, rank: r }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Columns spanning the kernel of self (as a map on column vectors).
    pub fn kernel_basis(&self) -> DenseMatrix {
        let Rref { matrix: r, pivots, .. } = self.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut out = Self::zeros(self.field.clone(), self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            *out.at_mut(fc, k) = self.field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                *out.at_mut(pc, k) = -r.at(row, fc);
            }
        }
        out
    }

    /// Solve M x = b; free variables are set to 0. None when b is not in the
    /// column span.
    pub fn solve(&self, b: &[Elem]) -> Result<Option<Vec<Elem>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension("solve: rhs length mismatch".into()));
        }
        let bm = DenseMatrix::from_fn(self.field.clone(), self.rows, 1, |i, _| b[i].clone());
        let aug = self.hstack(&bm)?;
        let Rref { matrix: r, pivots, .. } = aug.rref();
        if pivots.contains(&self.cols) {
            return Ok(None); // pivot in the augmented column: inconsistent
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.at(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Rows spanning {y : y^T self = 0}.
    pub fn left_kernel(&self) -> DenseMatrix {
        self.transpose().kernel_basis().transpose()
    }

    /// Determinant by Gaussian elimination with exact division.
    pub fn determinant(&self) -> Result<Elem> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m.at(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if pr != c {
                for j in 0..n {
                    m.data.swap(c * n + j, pr * n + j);
                }
                det = det.neg();
            }
            let pivot = m.at(c, c).clone();
            det = det * &pivot;
            for i in c + 1..n {
                if m.at(i, c).is_zero() {
                    continue;
                }
                let f = m.at(i, c).div(&pivot)?;
                for j in c..n {
                    let v = m.at(i, j).clone() - f.clone() * m.at(c, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Congruence diagonalization of a symmetric matrix: returns (P, D) with
    /// P^T * self * P = D, D diagonal, P invertible.
    ///
    /// Symmetric Gaussian elimination over the trailing block: diagonal pivots
    /// are taken in index order; when every diagonal entry of the working
    /// block vanishes but some off-diagonal entry G_ij is nonzero, row/column
    /// j is added to row/column i (making the (i,i) entry 2*G_ij, nonzero in
    /// characteristic != 2) and elimination continues.
    pub fn congruence_diagonalize(&self) -> Result<(DenseMatrix, DenseMatrix)> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if self.field.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        let n = self.rows;
        let mut g = self.clone();
        let mut p = DenseMatrix::identity(self.field.clone(), n);

        // col j += c * col i, and the same on rows, tracked in P
        let col_row_add = |g: &mut DenseMatrix, p: &mut DenseMatrix, j: usize, i: usize, c: &Elem| {
            for r in 0..n {
                let v = g.at(r, j).clone() + c.clone() * g.at(r, i).clone();
                g.set(r, j, v);
            }
            for r in 0..n {
                let v = g.at(j, r).clone() + c.clone() * g.at(i, r).clone();
                g.set(j, r, v);
            }
            for r in 0..n {
                let v = p.at(r, j).clone() + c.clone() * p.at(r, i).clone();
                p.set(r, j, v);
            }
        };
        let swap = |g: &mut DenseMatrix, p: &mut DenseMatrix, i: usize, j: usize| {
            for r in 0..n {
                let a = g.at(r, i).clone();
                let b = g.at(r, j).clone();
                g.set(r, i, b);
                g.set(r, j, a);
            }
            for r in 0..n {
                let a = g.at(i, r).clone();
                let b = g.at(j, r).clone();
                g.set(i, r, b);
                g.set(j, r, a);
            }
            for r in 0..n {
                let a = p.at(r, i).clone();
                let b = p.at(r, j).clone();
                p.set(r, i, b);
                p.set(r, j, a);
            }
        };

        for k in 0..n {
            if g.at(k, k).is_zero() {
                // smallest diagonal index in the working block with a nonzero entry
                if let Some(i) = (k + 1..n).find(|&i| !g.at(i, i).is_zero()) {
                    swap(&mut g, &mut p, k, i);
                } else {
                    // all diagonals vanish; first nonzero off-diagonal, row-major
                    let mut found = None;
                    'scan: for i in k..n {
                        for j in i + 1..n {
                            if !g.at(i, j).is_zero() {
                                found = Some((i, j));
                                break 'scan;
                            }
                        }
                    }
                    let Some((i, j)) = found else {
                        break; // working block is zero
                    };
                    let one = self.field.one();
                    col_row_add(&mut g, &mut p, i, j, &one);
                    debug_assert!(!g.at(i, i).is_zero());
                    if i != k {
                        swap(&mut g, &mut p, k, i);
                    }
                }
            }
            let pivot = g.at(k, k).clone();
            for r in k + 1..n {
                if g.at(r, k).is_zero() {
                    continue;
                }
                let c = -(g.at(r, k).clone().div(&pivot)?);
                col_row_add(&mut g, &mut p, r, k, &c);
            }
        }
        // g is now diagonal
        for i in 0..n {
            for j in 0..n {
                if i != j && !g.at(i, j).is_zero() {
                    return Err(Error::Internal("diagonalization left an off-diagonal entry".into()));
                }
            }
        }
        Ok((p, g))
    }
}

impl std::fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn rref_basics() {
        let f31 = f(31);
        let id = DenseMatrix::identity(f31.clone(), 4);
        let r = id.rref();
        assert_eq!(r.rank, 4);
        assert_eq!(r.pivots, vec![0, 1, 2, 3]);
        assert_eq!(r.matrix, id);

        let z = DenseMatrix::zeros(f31.clone(), 3, 5);
        assert_eq!(z.rref().rank, 0);

        let m = DenseMatrix::from_i64(&f31, 2, 2, &[1, 2, 2, 4]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_and_solve() {
        let f5 = f(5);
        let id = DenseMatrix::identity(f5.clone(), 3);
        assert_eq!(id.kernel_basis().cols(), 0);

        let z = DenseMatrix::zeros(f5.clone(), 2, 4);
        assert_eq!(z.kernel_basis().cols(), 4);

        let m = DenseMatrix::from_i64(&f5, 1, 2, &[1, 1]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.mul(&k).unwrap().is_zero());
        assert_eq!(k.at(0, 0).clone() + k.at(1, 0).clone(), f5.zero());

        // solve(I, b) = b
        let b = vec![f5.from_i64(1), f5.from_i64(2), f5.from_i64(3)];
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);
        // solve(0, b != 0) has no solution
        let z22 = DenseMatrix::zeros(f5.clone(), 2, 2);
        assert!(z22.solve(&[f5.one(), f5.zero()]).unwrap().is_none());
        // 2x = 1 over F5 -> x = 3
        let m = DenseMatrix::from_i64(&f5, 1, 1, &[2]);
        assert_eq!(m.solve(&[f5.one()]).unwrap().unwrap(), vec![f5.from_i64(3)]);
    }

    #[test]
    fn kernel_solve_rref_consistency_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for p in [3u64, 5, 31] {
            let fp = f(p);
            for _ in 0..25 {
                let rows = rng.gen_range(1..6);
                let cols = rng.gen_range(1..6);
                let m = DenseMatrix::from_fn(fp.clone(), rows, cols, |_, _| {
                    fp.from_i64(rng.gen_range(0..p as i64))
                });
                let k = m.kernel_basis();
                assert!(m.mul(&k).unwrap().is_zero());
                assert_eq!(k.cols(), cols - m.rank());
                // b in the column span is always solvable
                let x: Vec<Elem> = (0..cols).map(|_| fp.from_i64(rng.gen_range(0..p as i64))).collect();
                let b = m.mul_vec(&x).unwrap();
                let sol = m.solve(&b).unwrap().expect("b is in the image");
                assert_eq!(m.mul_vec(&sol).unwrap(), b);
            }
        }
    }

    #[test]
    fn diagonalize_hyperbolic_plane() {
        let f5 = f(5);
        let g = DenseMatrix::from_i64(&f5, 2, 2, &[0, 1, 1, 0]);
        let (p, d) = g.congruence_diagonalize().unwrap();
        assert_eq!(p.transpose().mul(&g).unwrap().mul(&p).unwrap(), d);
        let d0 = d.at(0, 0);
        let d1 = d.at(1, 1);
        assert!(!d0.is_zero() && !d1.is_zero());
        // entries have classes <2> and <-2>: product class is -4 ~ -1
        let prod = d0.clone() * d1.clone();
        assert_eq!(
            prod.square_class().unwrap(),
            f5.from_i64(-1).square_class().unwrap()
        );
    }

    #[test]
    fn diagonalize_zero_matrix() {
        let f31 = f(31);
        let g = DenseMatrix::zeros(f31.clone(), 3, 3);
        let (p, d) = g.congruence_diagonalize().unwrap();
        assert_eq!(p, DenseMatrix::identity(f31.clone(), 3));
        assert!(d.is_zero());
    }

    #[test]
    fn diagonalize_rejects() {
        let f31 = f(31);
        let g = DenseMatrix::from_i64(&f31, 2, 2, &[0, 1, 2, 0]);
        assert!(matches!(g.congruence_diagonalize(), Err(Error::NotSymmetric)));
        let f2 = f(2);
        let g = DenseMatrix::from_i64(&f2, 1, 1, &[1]);
        assert!(matches!(g.congruence_diagonalize(), Err(Error::CharacteristicTwo)));
    }

    #[test]
    fn diagonalize_random_soundness() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [3u64, 31] {
            let fp = f(p);
            for _ in 0..30 {
                let n = rng.gen_range(1..7);
                let mut g = DenseMatrix::zeros(fp.clone(), n, n);
                for i in 0..n {
                    for j in 0..=i {
                        let v = fp.from_i64(rng.gen_range(0..p as i64));
                        g.set(i, j, v.clone());
                        g.set(j, i, v);
                    }
                }
                let (pm, d) = g.congruence_diagonalize().unwrap();
                assert_eq!(pm.transpose().mul(&g).unwrap().mul(&pm).unwrap(), d);
                assert_eq!(pm.rank(), n, "P must be invertible");
                assert_eq!(d.rank(), g.rank());
            }
        }
    }
}
