//! Sparse homogeneous multivariate polynomials over an exact field, graded
//! monomial bases with a fixed ordering, formal derivatives, and determinants
//! of matrices of forms.
//!
//! The global monomial order is graded lexicographic with x0 > x1 > ...; all
//! graded bases and coefficient vectors use it, so every Gram matrix in the
//! crate is reproducible bit for bit.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::{Elem, Field};
use crate::{Error, Result};

/// A monomial: exponent vector plus cached total degree.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial { exps: vec![0; nvars], degree: 0 }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Monomial { exps, degree: self.degree + other.degree }
    }

    /// Divide by x_i once; None if the exponent is zero.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        if self.exps[i] == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[i] -= 1;
        Some(Monomial { exps, degree: self.degree - 1 })
    }
}

impl Ord for Monomial {
    /// Degree first, then lexicographic with x0 heaviest: within one degree,
    /// x0^d sorts before x1^d etc., so basis lists read in the natural order.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree.cmp(&other.degree).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn var_name(nvars: usize, i: usize) -> String {
    if nvars <= 4 {
        ["x", "y", "z", "w"][i].to_string()
    } else {
        format!("x{i}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return write!(f, "1");
        }
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            write!(f, "{}", var_name(self.nvars(), i))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// The ordered monomial basis of the degree-d graded piece of a polynomial
/// ring, with index lookup.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    nvars: usize,
    degree: u32,
    monomials: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
}

impl GradedBasis {
    pub fn new(nvars: usize, degree: u32) -> Self {
        let mut monomials = Vec::with_capacity(graded_dim(nvars, degree));
        let mut current = vec![0u32; nvars];
        enumerate_monomials(nvars, degree, 0, &mut current, &mut monomials);
        let index = monomials.iter().cloned().zip(0..).collect();
        GradedBasis { nvars, degree, monomials, index }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &Monomial {
        &self.monomials[i]
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// dim k[x_1..x_nvars]_d = C(d + nvars - 1, nvars - 1).
pub fn graded_dim(nvars: usize, degree: u32) -> usize {
    binomial(degree as usize + nvars - 1, nvars - 1)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

fn enumerate_monomials(nvars: usize, remaining: u32, pos: usize, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if pos == nvars - 1 {
        current[pos] = remaining;
        out.push(Monomial::new(current.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        enumerate_monomials(nvars, remaining - e, pos + 1, current, out);
    }
    current[pos] = 0;
}

/// Homogeneity status of a polynomial.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Homogeneity {
    Zero,
    Degree(u32),
    Inhomogeneous,
}

/// A sparse multivariate polynomial. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Elem>,
}

impl Poly {
    pub fn zero(field: Field, nvars: usize) -> Self {
        Poly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, c: Elem) -> Result<Self> {
        Self::constant_n(field, 1, c)
    }

    pub fn constant_n(field: Field, nvars: usize, c: Elem) -> Result<Self> {
        if c.field() != &field {
            return Err(Error::FieldMismatch("constant coefficient".into()));
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(nvars), c);
        }
        Ok(Poly { field, nvars, terms })
    }

    pub fn var(field: Field, nvars: usize, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(nvars, i), field.one());
        Poly { field, nvars, terms }
    }

    pub fn monomial(field: Field, m: Monomial, c: Elem) -> Result<Self> {
        if c.field() != &field {
            return Err(Error::FieldMismatch("monomial coefficient".into()));
        }
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Ok(Poly { field, nvars, terms })
    }

    pub fn from_terms(field: Field, nvars: usize, terms: impl IntoIterator<Item = (Monomial, Elem)>) -> Result<Self> {
        let mut p = Poly::zero(field, nvars);
        for (m, c) in terms {
            if m.nvars() != nvars {
                return Err(Error::Dimension("monomial variable count".into()));
            }
            p.add_term(m, c)?;
        }
        Ok(p)
    }

    /// The linear form c0*x0 + c1*x1 + ... in `coeffs.len()` variables.
    pub fn linear_form(field: &Field, coeffs: &[Elem]) -> Result<Self> {
        let nvars = coeffs.len();
        let mut p = Poly::zero(field.clone(), nvars);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(nvars, i), c.clone())?;
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Elem) -> Result<()> {
        if c.field() != &self.field {
            return Err(Error::FieldMismatch("polynomial coefficient".into()));
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c)?;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut deg = None;
        for m in self.terms.keys() {
            match deg {
                None => deg = Some(m.degree()),
                Some(d) if d == m.degree() => {}
                Some(_) => return Homogeneity::Inhomogeneous,
            }
        }
        match deg {
            None => Homogeneity::Zero,
            Some(d) => Homogeneity::Degree(d),
        }
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Result<u32> {
        match self.homogeneity() {
            Homogeneity::Degree(d) => Ok(d),
            Homogeneity::Zero => Err(Error::ZeroInput("homogeneous_degree")),
            Homogeneity::Inhomogeneous => Err(Error::Degree("polynomial is not homogeneous".into())),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        Poly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_compatible(other)?;
        let mut out = Poly::zero(self.field.clone(), self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Elem) -> Result<Poly> {
        if c.field() != &self.field {
            return Err(Error::FieldMismatch("scalar".into()));
        }
        if c.is_zero() {
            return Ok(Poly::zero(self.field.clone(), self.nvars));
        }
        let mut terms = BTreeMap::new();
        for (m, v) in &self.terms {
            terms.insert(m.clone(), v.mul(c)?);
        }
        Ok(Poly { field: self.field.clone(), nvars: self.nvars, terms })
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        let terms = self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect();
        Poly { field: self.field.clone(), nvars: self.nvars, terms }
    }

    fn check_compatible(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("polynomial operands".into()));
        }
        if self.nvars != other.nvars {
            return Err(Error::Dimension("polynomial variable counts differ".into()));
        }
        Ok(())
    }

    /// Formal partial derivative with respect to x_i.
    pub fn partial_derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.field.clone(), self.nvars);
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            let factor = self.field.from_i64(e as i64);
            let coeff = c.mul(&factor).expect("same field");
            if coeff.is_zero() {
                continue; // characteristic divides the exponent
            }
            out.add_term(m.div_var(i).unwrap(), coeff).unwrap();
        }
        out
    }

    /// Substitute a polynomial for every variable. All assignment entries must
    /// share a field and variable count (which become those of the result).
    pub fn substitute(&self, assignment: &[Poly]) -> Result<Poly> {
        if assignment.len() != self.nvars {
            return Err(Error::Dimension("substitution must cover all variables".into()));
        }
        let out_field = assignment
            .first()
            .map(|p| p.field.clone())
            .unwrap_or_else(|| self.field.clone());
        let out_nvars = assignment.first().map(|p| p.nvars).unwrap_or(self.nvars);
        // cache powers of each assignment polynomial
        let one = Poly::constant_n(out_field.clone(), out_nvars, out_field.one())?;
        let mut powers: Vec<Vec<Poly>> = assignment.iter().map(|p| vec![one.clone(), p.clone()]).collect();
        let mut out = Poly::zero(out_field.clone(), out_nvars);
        for (m, c) in &self.terms {
            let mut term = Poly::constant_n(out_field.clone(), out_nvars, coerce(&out_field, c)?)?;
            for (v, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[v].len() <= e as usize {
                    let next = powers[v].last().unwrap().mul(&assignment[v])?;
                    powers[v].push(next);
                }
                term = term.mul(&powers[v][e as usize])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Evaluate at a point.
    pub fn eval(&self, point: &[Elem]) -> Result<Elem> {
        if point.len() != self.nvars {
            return Err(Error::Dimension("evaluation point must cover all variables".into()));
        }
        let out_field = point.first().map(|e| e.field().clone()).unwrap_or_else(|| self.field.clone());
        let mut acc = out_field.zero();
        for (m, c) in &self.terms {
            let mut term = coerce(&out_field, c)?;
            for (v, &e) in m.exps().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                term = term.mul(&point[v].pow(e as i64)?)?;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Coefficient vector against a graded basis. The polynomial must be
    /// homogeneous of the basis degree (or zero).
    pub fn coefficient_vector(&self, basis: &GradedBasis) -> Result<Vec<Elem>> {
        match self.homogeneity() {
            Homogeneity::Zero => {}
            Homogeneity::Degree(d) if d == basis.degree() => {}
            _ => {
                return Err(Error::Degree(format!(
                    "polynomial is not homogeneous of degree {}",
                    basis.degree()
                )))
            }
        }
        if self.nvars != basis.nvars() {
            return Err(Error::Dimension("basis variable count".into()));
        }
        let mut v = vec![self.field.zero(); basis.dim()];
        for (m, c) in &self.terms {
            let i = basis
                .index_of(m)
                .ok_or_else(|| Error::Internal("monomial missing from graded basis".into()))?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    /// Rebuild a polynomial from a coefficient vector over a graded basis.
    pub fn from_coefficient_vector(field: &Field, basis: &GradedBasis, v: &[Elem]) -> Result<Poly> {
        if v.len() != basis.dim() {
            return Err(Error::Dimension("coefficient vector length".into()));
        }
        let mut p = Poly::zero(field.clone(), basis.nvars());
        for (i, c) in v.iter().enumerate() {
            p.add_term(basis.monomial(i).clone(), c.clone())?;
        }
        Ok(p)
    }
}

/// Move a coefficient into a target field: identical fields pass through, and
/// prime-field residues lift into extensions of the same characteristic.
fn coerce(target: &Field, c: &Elem) -> Result<Elem> {
    if c.field() == target {
        return Ok(c.clone());
    }
    if let Some(r) = c.residue() {
        if target.characteristic() == c.field().characteristic() {
            return Ok(target.from_i64(r as i64));
        }
    }
    Err(Error::FieldMismatch("cannot coerce coefficient".into()))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest monomials first reads more naturally
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.degree() == 0 {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}{m}")?;
            }
        }
        Ok(())
    }
}

/// A matrix of polynomials over one field and variable count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    field: Field,
    nvars: usize,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(field: Field, nvars: usize, rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension("polynomial matrix entry count".into()));
        }
        for e in &entries {
            if e.field() != &field || e.nvars() != nvars {
                return Err(Error::FieldMismatch("polynomial matrix entry".into()));
            }
        }
        Ok(PolyMatrix { field, nvars, rows, cols, entries })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.at(i, j).clone());
            }
        }
        PolyMatrix {
            field: self.field.clone(),
            nvars: self.nvars,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Submatrix with the given rows and columns removed.
    pub fn minor_removing(&self, removed_rows: &[usize], removed_cols: &[usize]) -> PolyMatrix {
        let keep_rows: Vec<usize> = (0..self.rows).filter(|r| !removed_rows.contains(r)).collect();
        let keep_cols: Vec<usize> = (0..self.cols).filter(|c| !removed_cols.contains(c)).collect();
        let mut entries = Vec::with_capacity(keep_rows.len() * keep_cols.len());
        for &i in &keep_rows {
            for &j in &keep_cols {
                entries.push(self.at(i, j).clone());
            }
        }
        PolyMatrix {
            field: self.field.clone(),
            nvars: self.nvars,
            rows: keep_rows.len(),
            cols: keep_cols.len(),
            entries,
        }
    }

    pub fn submatrix_rows(&self, rows: std::ops::Range<usize>) -> PolyMatrix {
        let mut entries = Vec::new();
        for i in rows.clone() {
            for j in 0..self.cols {
                entries.push(self.at(i, j).clone());
            }
        }
        PolyMatrix {
            field: self.field.clone(),
            nvars: self.nvars,
            rows: rows.len(),
            cols: self.cols,
            entries,
        }
    }

    /// Exact determinant by cofactor expansion along the sparsest row.
    pub fn det(&self) -> Result<Poly> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.det_rec(&idx, &idx))
    }

    fn det_rec(&self, rows: &[usize], cols: &[usize]) -> Poly {
        let n = rows.len();
        if n == 0 {
            return Poly::constant_n(self.field.clone(), self.nvars, self.field.one()).unwrap();
        }
        if n == 1 {
            return self.at(rows[0], cols[0]).clone();
        }
        // expand along the row with the fewest stored terms
        let (ri, _) = rows
            .iter()
            .enumerate()
            .map(|(k, &r)| (k, cols.iter().map(|&c| self.at(r, c).num_terms()).sum::<usize>()))
            .min_by_key(|&(k, t)| (t, k))
            .unwrap();
        let r = rows[ri];
        let sub_rows: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
        let mut acc = Poly::zero(self.field.clone(), self.nvars);
        for (k, &c) in cols.iter().enumerate() {
            let e = self.at(r, c);
            if e.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let cof = self.det_rec(&sub_rows, &sub_cols);
            let signed = if (ri + k) % 2 == 0 { cof } else { cof.neg() };
            acc = acc.add(&e.mul(&signed).unwrap()).unwrap();
        }
        acc
    }
}
