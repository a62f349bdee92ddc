//! Arithmetic of Grothendieck-Witt classes over a field of characteristic
//! not 2: diagonal forms as square-class multisets, rank/discriminant
//! invariants, equality testing, hyperbolic bookkeeping, Witt reduction, and
//! transfers along finite field extensions.
//!
//! A class is virtual: a positive and a negative multiset of square-class
//! representatives. Over a finite field rank and discriminant classify
//! completely; over the rationals equality testing is deliberately partial
//! and reports `Unknown` when the cheap invariants do not decide.

use crate::field::{Elem, Field, FieldKind};
use crate::linalg::DenseMatrix;
use crate::{Error, Result};

/// A virtual symmetric bilinear form: formal difference of diagonal forms,
/// entries stored as canonical square-class representatives.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GwClass {
    field: Field,
    pos: Vec<Elem>,
    neg: Vec<Elem>,
}

/// Invariants of a class: rank (virtual), discriminant square class, and the
/// maximal number of split hyperbolic summands.
#[derive(Clone, Debug)]
pub struct GwInvariants {
    pub rank: i64,
    pub disc: Elem,
    /// Whether the discriminant is a square (finite fields only).
    pub disc_is_square: Option<bool>,
    pub hyperbolic_copies: i64,
}

/// Tri-state result of class comparison.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Equality {
    Equal,
    Unequal,
    Unknown,
}

/// Result of Witt reduction: split hyperbolic copies and what remains.
#[derive(Clone, Debug)]
pub struct WittReduced {
    pub hyperbolic_copies: i64,
    pub residue: GwClass,
}

fn check_char(field: &Field) -> Result<()> {
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    Ok(())
}

/// Deterministic entry order: canonical index over finite fields, value order
/// over the rationals.
fn sort_entries(entries: &mut [Elem]) {
    entries.sort_by(|a, b| match (a.index(), b.index()) {
        (Some(x), Some(y)) => x.cmp(&y),
        _ => a
            .rational_value()
            .expect("rational entry")
            .cmp(b.rational_value().expect("rational entry")),
    });
}

impl GwClass {
    pub fn zero(field: Field) -> Result<Self> {
        check_char(&field)?;
        Ok(GwClass { field, pos: Vec::new(), neg: Vec::new() })
    }

    /// Build from diagonal entries; zeros are rejected, units are normalized
    /// to square-class representatives.
    pub fn from_diagonal(field: Field, entries: &[Elem]) -> Result<Self> {
        let mut c = GwClass::zero(field)?;
        for e in entries {
            c.push_pos(e)?;
        }
        c.normalize();
        Ok(c)
    }

    fn push_pos(&mut self, e: &Elem) -> Result<()> {
        if e.field() != &self.field {
            return Err(Error::FieldMismatch("gw entry".into()));
        }
        self.pos.push(e.square_class()?);
        Ok(())
    }

    fn push_neg(&mut self, e: &Elem) -> Result<()> {
        if e.field() != &self.field {
            return Err(Error::FieldMismatch("gw entry".into()));
        }
        self.neg.push(e.square_class()?);
        Ok(())
    }

    fn normalize(&mut self) {
        sort_entries(&mut self.pos);
        sort_entries(&mut self.neg);
    }

    /// Diagonalize a symmetric Gram matrix; nonzero diagonal entries become
    /// the class, zero entries count the radical.
    pub fn from_gram(g: &DenseMatrix) -> Result<(Self, usize)> {
        let (_, d) = g.congruence_diagonalize()?;
        let mut c = GwClass::zero(g.field().clone())?;
        let mut radical = 0;
        for i in 0..d.rows() {
            let e = d.at(i, i);
            if e.is_zero() {
                radical += 1;
            } else {
                c.push_pos(e)?;
            }
        }
        c.normalize();
        Ok((c, radical))
    }

    /// h copies of the hyperbolic form <1> + <-1>.
    pub fn hyperbolic(field: Field, copies: usize) -> Result<Self> {
        check_char(&field)?;
        let one = field.one();
        let minus_one = field.from_i64(-1).square_class()?;
        let mut pos = Vec::with_capacity(2 * copies);
        for _ in 0..copies {
            pos.push(one.clone());
            pos.push(minus_one.clone());
        }
        let mut c = GwClass { field, pos, neg: Vec::new() };
        c.normalize();
        Ok(c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn positive_entries(&self) -> &[Elem] {
        &self.pos
    }

    pub fn negative_entries(&self) -> &[Elem] {
        &self.neg
    }

    pub fn rank(&self) -> i64 {
        self.pos.len() as i64 - self.neg.len() as i64
    }

    pub fn add(&self, other: &GwClass) -> Result<GwClass> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("gw add".into()));
        }
        let mut out = self.clone();
        out.pos.extend(other.pos.iter().cloned());
        out.neg.extend(other.neg.iter().cloned());
        out.normalize();
        Ok(out)
    }

    pub fn negate(&self) -> GwClass {
        GwClass {
            field: self.field.clone(),
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }

    pub fn sub(&self, other: &GwClass) -> Result<GwClass> {
        self.add(&other.negate())
    }

    /// Multiply every entry by a unit u: <a> -> <ua>.
    pub fn scale_unit(&self, u: &Elem) -> Result<GwClass> {
        if u.is_zero() {
            return Err(Error::ZeroInput("scale_unit"));
        }
        let mut out = GwClass::zero(self.field.clone())?;
        for e in &self.pos {
            out.push_pos(&e.mul(u)?)?;
        }
        for e in &self.neg {
            out.push_neg(&e.mul(u)?)?;
        }
        out.normalize();
        Ok(out)
    }

    /// Cancel matched <a> between positive and negative parts, then split
    /// <a> + <-a> pairs inside each part into recorded hyperbolic copies.
    pub fn witt_reduce(&self) -> Result<WittReduced> {
        let mut pos = self.pos.clone();
        let mut neg = self.neg.clone();
        // matched formal cancellation
        let mut i = 0;
        while i < pos.len() {
            if let Some(k) = neg.iter().position(|e| e == &pos[i]) {
                pos.remove(i);
                neg.remove(k);
            } else {
                i += 1;
            }
        }
        // <a> + <-a> = H inside the positive part; -H inside the negative part
        let mut hyperbolic: i64 = 0;
        let split_pairs = |entries: &mut Vec<Elem>| -> Result<i64> {
            let mut copies = 0;
            let mut i = 0;
            'outer: while i < entries.len() {
                let want = entries[i].neg().square_class()?;
                for k in i + 1..entries.len() {
                    if entries[k] == want {
                        entries.remove(k);
                        entries.remove(i);
                        copies += 1;
                        continue 'outer;
                    }
                }
                i += 1;
            }
            Ok(copies)
        };
        hyperbolic += split_pairs(&mut pos)?;
        hyperbolic -= split_pairs(&mut neg)?;
        let mut residue = GwClass { field: self.field.clone(), pos, neg };
        residue.normalize();
        Ok(WittReduced { hyperbolic_copies: hyperbolic, residue })
    }

    /// Rank, discriminant, and maximal hyperbolic content.
    pub fn invariants(&self) -> Result<GwInvariants> {
        let rank = self.rank();
        let mut disc = self.field.one();
        for e in self.pos.iter().chain(&self.neg) {
            disc = disc.mul(e)?; // negative entries contribute the same class
        }
        let disc = disc.square_class()?;
        let (disc_is_square, hyperbolic_copies) = if self.field.is_finite() {
            let sq = disc.is_one();
            (Some(sq), self.max_hyperbolic_finite(rank, sq)?)
        } else {
            (None, self.witt_reduce()?.hyperbolic_copies)
        };
        Ok(GwInvariants { rank, disc, disc_is_square, hyperbolic_copies })
    }

    /// Over a finite field (rank, disc) determine the class, hence the exact
    /// maximal number of hyperbolic summands.
    fn max_hyperbolic_finite(&self, rank: i64, disc_is_square: bool) -> Result<i64> {
        let formula = |r: i64, sq: bool| -> Result<i64> {
            if r % 2 == 1 {
                return Ok((r - 1) / 2);
            }
            let h = r / 2;
            // disc of h*H is (-1)^h
            let minus_one_sq = self.field.from_i64(-1).is_square()?;
            let h_disc_square = if h % 2 == 0 { true } else { minus_one_sq };
            Ok(if h_disc_square == sq { h } else { h - 1 })
        };
        if rank >= 0 {
            formula(rank, disc_is_square)
        } else {
            Ok(-formula(-rank, disc_is_square)?)
        }
    }

    /// Compare classes. Finite fields decide by (rank, disc); the rationals
    /// decide Equal on matching reduced multisets, Unequal on differing rank,
    /// signature, or disc, and Unknown otherwise.
    pub fn is_equal(&self, other: &GwClass) -> Result<Equality> {
        if self.field != other.field {
            return Err(Error::FieldMismatch("gw comparison".into()));
        }
        let a = self.invariants()?;
        let b = other.invariants()?;
        if a.rank != b.rank {
            return Ok(Equality::Unequal);
        }
        if self.field.is_finite() {
            return Ok(if a.disc == b.disc { Equality::Equal } else { Equality::Unequal });
        }
        if a.disc != b.disc {
            return Ok(Equality::Unequal);
        }
        if self.signature() != other.signature() {
            return Ok(Equality::Unequal);
        }
        let ra = self.witt_reduce()?;
        let rb = other.witt_reduce()?;
        if ra.hyperbolic_copies == rb.hyperbolic_copies
            && ra.residue.pos == rb.residue.pos
            && ra.residue.neg == rb.residue.neg
        {
            return Ok(Equality::Equal);
        }
        Ok(Equality::Unknown)
    }

    /// Signature under the real embedding (rationals): positive minus
    /// negative entries, counted with virtual signs.
    fn signature(&self) -> i64 {
        use num_traits::Signed;
        let sgn = |e: &Elem| -> i64 {
            match e.rational_value() {
                Some(r) => {
                    if r.is_negative() {
                        -1
                    } else {
                        1
                    }
                }
                None => 0,
            }
        };
        let p: i64 = self.pos.iter().map(&sgn).sum();
        let n: i64 = self.neg.iter().map(&sgn).sum();
        p - n
    }

    /// Transfer along a finite extension F_{p^m} / F_p: each diagonal entry
    /// <a> becomes the m x m trace form tr(a * t^i * t^j) over the power
    /// basis, diagonalized over the prime field.
    pub fn transfer(&self) -> Result<GwClass> {
        if self.field.kind() != FieldKind::ExtensionFinite {
            return Err(Error::Unsupported("transfer requires an extension field".into()));
        }
        let base = Field::prime(self.field.characteristic())?;
        check_char(&base)?;
        let m = self.field.extension_degree();
        let t = self.field.generator()?;
        // powers t^0 .. t^{2m-2}
        let mut powers = vec![self.field.one()];
        for i in 1..(2 * m - 1) {
            powers.push(powers[i - 1].mul(&t)?);
        }
        let mut out = GwClass::zero(base.clone())?;
        let mut transfer_entry = |a: &Elem, negative: bool| -> Result<()> {
            let gram = DenseMatrix::from_fn(base.clone(), m, m, |i, j| {
                a.mul(&powers[i + j]).unwrap().field_trace().unwrap()
            });
            let (cls, radical) = GwClass::from_gram(&gram)?;
            if radical != 0 {
                return Err(Error::Internal("trace form of a unit is degenerate".into()));
            }
            for e in cls.pos {
                if negative {
                    out.neg.push(e);
                } else {
                    out.pos.push(e);
                }
            }
            Ok(())
        };
        for a in &self.pos {
            transfer_entry(a, false)?;
        }
        for a in &self.neg {
            transfer_entry(a, true)?;
        }
        out.normalize();
        Ok(out)
    }
}

impl std::fmt::Display for GwClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pos.is_empty() && self.neg.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for e in &self.pos {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "<{e}>")?;
        }
        for e in &self.neg {
            if first {
                write!(f, "-<{e}>")?;
                first = false;
            } else {
                write!(f, " - <{e}>")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f31() -> Field {
        Field::prime(31).unwrap()
    }

    fn diag(field: &Field, entries: &[i64]) -> GwClass {
        let elems: Vec<Elem> = entries.iter().map(|&e| field.from_i64(e)).collect();
        GwClass::from_diagonal(field.clone(), &elems).unwrap()
    }

    #[test]
    fn square_disc_example_is_two_hyperbolics() {
        // <-9> + <-7> + <-10> + <-1> over F_31: rank 4, disc 70 = 8 (square)
        let f = f31();
        let c = diag(&f, &[-9, -7, -10, -1]);
        let inv = c.invariants().unwrap();
        assert_eq!(inv.rank, 4);
        assert_eq!(inv.disc_is_square, Some(true));
        assert_eq!(inv.hyperbolic_copies, 2);
        let h2 = GwClass::hyperbolic(f.clone(), 2).unwrap();
        assert_eq!(c.is_equal(&h2).unwrap(), Equality::Equal);
    }

    #[test]
    fn nonsquare_disc_example() {
        // <-2> + <3> + <-14> + <4> over F_31 has nonsquare discriminant
        let f = f31();
        let c = diag(&f, &[-2, 3, -14, 4]);
        let inv = c.invariants().unwrap();
        assert_eq!(inv.rank, 4);
        assert_eq!(inv.disc_is_square, Some(false));
        let h2 = GwClass::hyperbolic(f.clone(), 2).unwrap();
        assert_eq!(c.is_equal(&h2).unwrap(), Equality::Unequal);
    }

    #[test]
    fn hyperbolic_invariants() {
        let f = f31();
        let h = GwClass::hyperbolic(f.clone(), 1).unwrap();
        let inv = h.invariants().unwrap();
        assert_eq!(inv.rank, 2);
        assert_eq!(inv.disc, f.from_i64(-1).square_class().unwrap());
        assert_eq!(inv.hyperbolic_copies, 1);

        let empty = GwClass::zero(f.clone()).unwrap();
        let inv = empty.invariants().unwrap();
        assert_eq!(inv.rank, 0);
        assert!(inv.disc.is_one());
    }

    #[test]
    fn witt_reduce_and_ops() {
        let f = f31();
        let h = diag(&f, &[1, -1]);
        let r = h.witt_reduce().unwrap();
        assert_eq!(r.hyperbolic_copies, 1);
        assert_eq!(r.residue.rank(), 0);

        // scale by a square changes nothing
        let c = diag(&f, &[3, 5, 7]);
        let four = f.from_i64(4);
        assert_eq!(c.scale_unit(&four).unwrap(), c);

        // c - c reduces to rank 0 with no residue
        let z = c.add(&c.negate()).unwrap().witt_reduce().unwrap();
        assert_eq!(z.residue.rank(), 0);
        assert!(z.residue.positive_entries().is_empty());
    }

    #[test]
    fn invariants_unchanged_by_square_scaling() {
        let f = f31();
        let c = diag(&f, &[2, 3, 11]);
        for u in 1..31 {
            let u2 = f.from_i64(u * u % 31);
            if u2.is_zero() {
                continue;
            }
            let scaled = c.scale_unit(&u2).unwrap();
            let a = c.invariants().unwrap();
            let b = scaled.invariants().unwrap();
            assert_eq!(a.rank, b.rank);
            assert_eq!(a.disc, b.disc);
            assert_eq!(a.hyperbolic_copies, b.hyperbolic_copies);
        }
    }

    #[test]
    fn disc_multiplicative_rank_additive() {
        let f = Field::prime(7).unwrap();
        for a_entries in [[1, 3], [2, 5], [6, 6]] {
            for b_entries in [[1, 1], [3, 5]] {
                let a = diag(&f, &a_entries.map(i64::from));
                let b = diag(&f, &b_entries.map(i64::from));
                let s = a.add(&b).unwrap();
                assert_eq!(s.rank(), a.rank() + b.rank());
                let da = a.invariants().unwrap().disc;
                let db = b.invariants().unwrap().disc;
                let ds = s.invariants().unwrap().disc;
                assert_eq!(ds, da.mul(&db).unwrap().square_class().unwrap());
            }
        }
    }

    #[test]
    fn finite_equality_matches_exhaustive_small_rank() {
        // over F_q, (rank, disc) classify: verify against congruence of
        // random diagonal forms for q in {3,5,7}
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in [3u64, 5, 7] {
            let f = Field::prime(p).unwrap();
            for _ in 0..40 {
                let n = rng.gen_range(1..4);
                let a: Vec<i64> = (0..n).map(|_| rng.gen_range(1..p as i64)).collect();
                let b: Vec<i64> = (0..n).map(|_| rng.gen_range(1..p as i64)).collect();
                let ca = diag(&f, &a);
                let cb = diag(&f, &b);
                // brute-force congruence over the field: diagonal forms are
                // congruent iff related by P^T G P for invertible P; test by
                // scanning all invertible P for n <= 2, else trust rank/disc
                if n <= 2 {
                    let ga = DenseMatrix::from_fn(f.clone(), n, n, |i, j| {
                        if i == j { f.from_i64(a[i]) } else { f.zero() }
                    });
                    let gb = DenseMatrix::from_fn(f.clone(), n, n, |i, j| {
                        if i == j { f.from_i64(b[i]) } else { f.zero() }
                    });
                    let mut congruent = false;
                    let q = p as i64;
                    let total = (q as u64).pow((n * n) as u32);
                    for mask in 0..total {
                        let mut v = mask;
                        let pm = DenseMatrix::from_fn(f.clone(), n, n, |_, _| {
                            let e = f.from_i64((v % p) as i64);
                            v /= p;
                            e
                        });
                        if pm.rank() < n {
                            continue;
                        }
                        if pm.transpose().mul(&ga).unwrap().mul(&pm).unwrap() == gb {
                            congruent = true;
                            break;
                        }
                    }
                    let decided = ca.is_equal(&cb).unwrap();
                    assert_eq!(decided == Equality::Equal, congruent, "p={p} a={a:?} b={b:?}");
                }
            }
        }
    }

    #[test]
    fn transfer_of_one_from_f9_is_hyperbolic() {
        // F_9 = F_3[t]/(t^2+1): gram [[2,0],[0,-2]] -> <2> + <-2> = H
        let f9 = Field::extension(3, vec![1, 0, 1]).unwrap();
        let one = GwClass::from_diagonal(f9.clone(), &[f9.one()]).unwrap();
        let t = one.transfer().unwrap();
        assert_eq!(t.rank(), 2);
        let f3 = Field::prime(3).unwrap();
        let h = GwClass::hyperbolic(f3, 1).unwrap();
        assert_eq!(t.is_equal(&h).unwrap(), Equality::Equal);
    }

    #[test]
    fn transfer_rank_and_additivity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let f27 = Field::build_extension(3, 3, 0).unwrap();
        let zero = GwClass::zero(f27.clone()).unwrap();
        assert_eq!(zero.transfer().unwrap().rank(), 0);
        for _ in 0..10 {
            let pick = |rng: &mut rand_chacha::ChaCha8Rng| {
                loop {
                    let idx = rng.gen_range(1..27);
                    let e = f27.from_index(idx).unwrap();
                    if !e.is_zero() {
                        return e;
                    }
                }
            };
            let a = GwClass::from_diagonal(f27.clone(), &[pick(&mut rng)]).unwrap();
            let b = GwClass::from_diagonal(f27.clone(), &[pick(&mut rng)]).unwrap();
            // rank of a transferred rank-1 class is the extension degree
            assert_eq!(a.transfer().unwrap().rank(), 3);
            // additivity
            let lhs = a.add(&b).unwrap().transfer().unwrap();
            let rhs = a.transfer().unwrap().add(&b.transfer().unwrap()).unwrap();
            assert_eq!(lhs.is_equal(&rhs).unwrap(), Equality::Equal);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rational_equality_is_partial_but_sound() {
        let q = Field::rationals();
        let d = |entries: &[i64]| diag(&q, entries);
        // <1> + <-1> equals H after reduction
        let h = GwClass::hyperbolic(q.clone(), 1).unwrap();
        assert_eq!(d(&[1, -1]).is_equal(&h).unwrap(), Equality::Equal);
        assert_eq!(d(&[2, -2]).is_equal(&h).unwrap(), Equality::Equal);
        // signature distinguishes <1>+<1> from <1>+<-1>
        assert_eq!(d(&[1, 1]).is_equal(&d(&[1, -1])).unwrap(), Equality::Unequal);
        // disc distinguishes <1> from <2>
        assert_eq!(d(&[1]).is_equal(&d(&[2])).unwrap(), Equality::Unequal);
        // <1>+<1> vs <2>+<2>: same rank, signature, disc; multisets differ
        assert_eq!(d(&[1, 1]).is_equal(&d(&[2, 2])).unwrap(), Equality::Unknown);
    }

    #[test]
    fn from_gram_examples() {
        let f = f31();
        let z = DenseMatrix::zeros(f.clone(), 4, 4);
        let (c, rad) = GwClass::from_gram(&z).unwrap();
        assert_eq!(c.rank(), 0);
        assert_eq!(rad, 4);

        let g = DenseMatrix::from_i64(&f, 1, 1, &[5]);
        let (c, rad) = GwClass::from_gram(&g).unwrap();
        assert_eq!(rad, 0);
        assert_eq!(c, diag(&f, &[5]));
    }
}
