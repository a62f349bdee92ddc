//! Exact field arithmetic: prime fields F_p, extensions F_{p^m} given by an
//! explicit monic irreducible modulus, and arbitrary-precision rationals.
//!
//! A [`Field`] is a cheaply cloneable handle (an `Arc` around the descriptor);
//! elements carry their field so the usual operators work. Representatives are
//! canonical: residues in `[0, p)`, coefficient vectors reduced mod the
//! modulus, fully reduced fractions. Equality of elements is equality of
//! representatives.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldKind {
    PrimeFinite,
    ExtensionFinite,
    Rationals,
}

#[derive(PartialEq, Eq, Debug)]
struct FieldInner {
    kind: FieldKind,
    p: u64,
    m: usize,
    /// Monic modulus over F_p, ascending degree, length m+1. Empty unless m > 1.
    modulus: Vec<u64>,
}

/// A field descriptor handle. Cloning is cheap; equality is structural.
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Field {}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::PrimeFinite => write!(f, "F{}", self.0.p),
            FieldKind::ExtensionFinite => {
                write!(f, "F{}^{} (mod ", self.0.p, self.0.m)?;
                let mut first = true;
                for (i, &c) in self.0.modulus.iter().enumerate().rev() {
                    if c == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match i {
                        0 => write!(f, "{c}")?,
                        1 => write!(f, "{}t", if c == 1 { String::new() } else { c.to_string() })?,
                        _ => write!(f, "{}t^{i}", if c == 1 { String::new() } else { c.to_string() })?,
                    }
                }
                write!(f, ")")
            }
        }
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldInner {
            kind: FieldKind::Rationals,
            p: 0,
            m: 1,
            modulus: Vec::new(),
        }))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field(Arc::new(FieldInner {
            kind: FieldKind::PrimeFinite,
            p,
            m: 1,
            modulus: Vec::new(),
        })))
    }

    /// Extension field F_{p^m} with the given monic modulus (ascending
    /// coefficients, length m+1). The modulus must be irreducible over F_p.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 3 {
            return Err(Error::InvalidInput(
                "extension modulus must have degree >= 2".into(),
            ));
        }
        let modulus: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        let m = modulus.len() - 1;
        if modulus[m] != 1 {
            return Err(Error::InvalidInput("modulus must be monic".into()));
        }
        if !upoly_is_irreducible(&modulus, p) {
            return Err(Error::InvalidInput("modulus is not irreducible".into()));
        }
        Ok(Field(Arc::new(FieldInner {
            kind: FieldKind::ExtensionFinite,
            p,
            m,
            modulus,
        })))
    }

    /// Build F_{p^m} with a deterministic-from-seed monic irreducible modulus.
    pub fn build_extension(p: u64, m: usize, seed: u64) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::InvalidInput("extension degree must be >= 1".into()));
        }
        if m == 1 {
            return Field::prime(p);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 16) ^ (m as u64));
        loop {
            let mut modulus: Vec<u64> = (0..m).map(|_| rng.gen_range(0..p)).collect();
            if modulus[0] == 0 {
                modulus[0] = 1 + rng.gen_range(0..p - 1);
            }
            modulus.push(1);
            if upoly_is_irreducible(&modulus, p) {
                return Field::extension(p, modulus);
            }
        }
    }

    pub fn kind(&self) -> FieldKind {
        self.0.kind
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn extension_degree(&self) -> usize {
        self.0.m
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_finite(&self) -> bool {
        self.0.kind != FieldKind::Rationals
    }

    /// p^m for finite fields, None for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self.0.kind {
            FieldKind::Rationals => None,
            _ => Some(self.0.p.pow(self.0.m as u32)),
        }
    }

    pub fn zero(&self) -> Elem {
        self.from_u64_repr(0)
    }

    pub fn one(&self) -> Elem {
        self.from_u64_repr(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        match self.0.kind {
            FieldKind::Rationals => Elem {
                field: self.clone(),
                repr: Scalar::Rat(BigRational::from(BigInt::from(n))),
            },
            _ => {
                let p = self.0.p as i64;
                let r = ((n % p) + p) % p;
                self.from_u64_repr(r as u64)
            }
        }
    }

    fn from_u64_repr(&self, r: u64) -> Elem {
        match self.0.kind {
            FieldKind::Rationals => Elem {
                field: self.clone(),
                repr: Scalar::Rat(BigRational::from(BigInt::from(r))),
            },
            FieldKind::PrimeFinite => Elem {
                field: self.clone(),
                repr: Scalar::Fp(r % self.0.p),
            },
            FieldKind::ExtensionFinite => {
                let mut c = vec![0u64; self.0.m];
                c[0] = r % self.0.p;
                Elem {
                    field: self.clone(),
                    repr: Scalar::Ext(c),
                }
            }
        }
    }

    /// Extension element from coefficients (ascending powers of the generator).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<Elem> {
        match self.0.kind {
            FieldKind::ExtensionFinite => {
                if coeffs.len() > self.0.m {
                    return Err(Error::InvalidInput(format!(
                        "coefficient vector longer than extension degree {}",
                        self.0.m
                    )));
                }
                let p = self.0.p as i64;
                let mut c = vec![0u64; self.0.m];
                for (i, &x) in coeffs.iter().enumerate() {
                    c[i] = (((x % p) + p) % p) as u64;
                }
                Ok(Elem {
                    field: self.clone(),
                    repr: Scalar::Ext(c),
                })
            }
            _ => Err(Error::Unsupported(
                "from_coeffs requires an extension field".into(),
            )),
        }
    }

    pub fn rational(&self, num: i64, den: i64) -> Result<Elem> {
        match self.0.kind {
            FieldKind::Rationals => {
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(Elem {
                    field: self.clone(),
                    repr: Scalar::Rat(BigRational::new(BigInt::from(num), BigInt::from(den))),
                })
            }
            _ => {
                let d = self.from_i64(den);
                self.from_i64(num).div(&d)
            }
        }
    }

    /// The power-basis generator t of an extension field.
    pub fn generator(&self) -> Result<Elem> {
        match self.0.kind {
            FieldKind::ExtensionFinite => {
                let mut c = vec![0u64; self.0.m];
                c[1] = 1;
                Ok(Elem {
                    field: self.clone(),
                    repr: Scalar::Ext(c),
                })
            }
            _ => Err(Error::Unsupported("generator requires an extension field".into())),
        }
    }

    /// Element with the given canonical index (digits base p, constant
    /// coefficient least significant). Finite fields only.
    pub fn from_index(&self, idx: u64) -> Result<Elem> {
        match self.0.kind {
            FieldKind::PrimeFinite => Ok(self.from_u64_repr(idx % self.0.p)),
            FieldKind::ExtensionFinite => {
                let p = self.0.p;
                let mut c = vec![0u64; self.0.m];
                let mut v = idx;
                for ci in c.iter_mut() {
                    *ci = v % p;
                    v /= p;
                }
                Ok(Elem {
                    field: self.clone(),
                    repr: Scalar::Ext(c),
                })
            }
            FieldKind::Rationals => Err(Error::Unsupported("from_index requires a finite field".into())),
        }
    }

    /// All field elements in canonical-index order. Finite fields only.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let q = self.order().ok_or_else(|| {
            Error::Unsupported("cannot enumerate an infinite field".into())
        })?;
        (0..q).map(|i| self.from_index(i)).collect()
    }

    /// The least-index quadratic non-residue. Finite fields of odd order.
    pub fn non_residue(&self) -> Result<Elem> {
        let q = self
            .order()
            .ok_or_else(|| Error::Unsupported("non_residue requires a finite field".into()))?;
        if self.0.p == 2 {
            return Err(Error::CharacteristicTwo);
        }
        for i in 1..q {
            let a = self.from_index(i)?;
            if !a.is_square()? {
                return Ok(a);
            }
        }
        Err(Error::Internal("no non-residue found".into()))
    }

    fn check_same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(format!("{self} vs {other}")))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Scalar {
    Fp(u64),
    Ext(Vec<u64>),
    Rat(BigRational),
}

/// A field element with canonical representative.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Elem {
    field: Field,
    repr: Scalar,
}

impl Elem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Scalar::Fp(r) => *r == 0,
            Scalar::Ext(c) => c.iter().all(|&x| x == 0),
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Scalar::Fp(r) => *r == 1,
            Scalar::Ext(c) => c[0] == 1 && c[1..].iter().all(|&x| x == 0),
            Scalar::Rat(r) => r.is_one(),
        }
    }

    /// Residue for prime-field elements.
    pub fn residue(&self) -> Option<u64> {
        match &self.repr {
            Scalar::Fp(r) => Some(*r),
            _ => None,
        }
    }

    /// Coefficient vector for extension-field elements.
    pub fn coeffs(&self) -> Option<&[u64]> {
        match &self.repr {
            Scalar::Ext(c) => Some(c),
            _ => None,
        }
    }

    pub fn rational_value(&self) -> Option<&BigRational> {
        match &self.repr {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Canonical index of a finite-field element: coefficient digits base p.
    pub fn index(&self) -> Option<u64> {
        match &self.repr {
            Scalar::Fp(r) => Some(*r),
            Scalar::Ext(c) => {
                let p = self.field.0.p;
                let mut v = 0u64;
                for &ci in c.iter().rev() {
                    v = v * p + ci;
                }
                Some(v)
            }
            Scalar::Rat(_) => None,
        }
    }

    /// Representative in the symmetric range (-p/2, p/2] for display.
    pub fn balanced(&self) -> Option<i64> {
        let r = self.residue()? as i64;
        let p = self.field.0.p as i64;
        Some(if r > p / 2 { r - p } else { r })
    }

    pub fn add(&self, other: &Elem) -> Result<Elem> {
        self.field.check_same(&other.field)?;
        let repr = match (&self.repr, &other.repr) {
            (Scalar::Fp(a), Scalar::Fp(b)) => Scalar::Fp(addmod(*a, *b, self.field.0.p)),
            (Scalar::Ext(a), Scalar::Ext(b)) => {
                let p = self.field.0.p;
                Scalar::Ext(a.iter().zip(b).map(|(&x, &y)| addmod(x, y, p)).collect())
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => unreachable!("repr kind fixed by field"),
        };
        Ok(Elem {
            field: self.field.clone(),
            repr,
        })
    }

    pub fn sub(&self, other: &Elem) -> Result<Elem> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Elem {
        let repr = match &self.repr {
            Scalar::Fp(a) => Scalar::Fp(negmod(*a, self.field.0.p)),
            Scalar::Ext(c) => {
                let p = self.field.0.p;
                Scalar::Ext(c.iter().map(|&x| negmod(x, p)).collect())
            }
            Scalar::Rat(r) => Scalar::Rat(-r),
        };
        Elem {
            field: self.field.clone(),
            repr,
        }
    }

    pub fn mul(&self, other: &Elem) -> Result<Elem> {
        self.field.check_same(&other.field)?;
        let repr = match (&self.repr, &other.repr) {
            (Scalar::Fp(a), Scalar::Fp(b)) => Scalar::Fp(mulmod(*a, *b, self.field.0.p)),
            (Scalar::Ext(a), Scalar::Ext(b)) => Scalar::Ext(ext_mul(
                a,
                b,
                &self.field.0.modulus,
                self.field.0.p,
            )),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => unreachable!("repr kind fixed by field"),
        };
        Ok(Elem {
            field: self.field.clone(),
            repr,
        })
    }

    pub fn inv(&self) -> Result<Elem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match &self.repr {
            Scalar::Fp(a) => Scalar::Fp(powmod(*a, self.field.0.p - 2, self.field.0.p)),
            Scalar::Ext(_) => {
                // a^(q-2) = a^{-1} in F_q
                let q = self.field.order().unwrap();
                return self.pow_u64(q - 2);
            }
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
        };
        Ok(Elem {
            field: self.field.clone(),
            repr,
        })
    }

    pub fn div(&self, other: &Elem) -> Result<Elem> {
        self.mul(&other.inv()?)
    }

    fn pow_u64(&self, mut e: u64) -> Result<Elem> {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: i64) -> Result<Elem> {
        if e >= 0 {
            self.pow_u64(e as u64)
        } else {
            self.inv()?.pow_u64((-e) as u64)
        }
    }

    /// Whether a nonzero element is a square in its field.
    pub fn is_square(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroInput("is_square"));
        }
        match &self.repr {
            Scalar::Rat(r) => {
                if r.is_negative() {
                    return Ok(false);
                }
                Ok(is_perfect_square(r.numer()) && is_perfect_square(r.denom()))
            }
            _ => {
                let q = self.field.order().unwrap();
                if self.field.0.p == 2 {
                    return Ok(true);
                }
                Ok(self.pow_u64((q - 1) / 2)?.is_one())
            }
        }
    }

    /// Canonical representative of the square class a (k^x)^2: 1 or the least
    /// non-residue over finite fields, the signed squarefree part over Q.
    pub fn square_class(&self) -> Result<Elem> {
        if self.is_zero() {
            return Err(Error::ZeroInput("square_class"));
        }
        match &self.repr {
            Scalar::Rat(r) => {
                let sf = squarefree_part(&(r.numer() * r.denom()))?;
                Ok(Elem {
                    field: self.field.clone(),
                    repr: Scalar::Rat(BigRational::from(sf)),
                })
            }
            _ => {
                if self.is_square()? {
                    Ok(self.field.one())
                } else {
                    self.field.non_residue()
                }
            }
        }
    }

    /// Trace to the prime field: sum of a^{p^i} for i = 0..m-1.
    pub fn field_trace(&self) -> Result<Elem> {
        match &self.repr {
            Scalar::Ext(_) => {
                let p = self.field.0.p;
                let m = self.field.0.m;
                let mut acc = self.clone();
                let mut frob = self.clone();
                for _ in 1..m {
                    frob = frob.pow_u64(p)?;
                    acc = acc.add(&frob)?;
                }
                let c = match &acc.repr {
                    Scalar::Ext(c) => c,
                    _ => unreachable!(),
                };
                debug_assert!(c[1..].iter().all(|&x| x == 0), "trace must land in F_p");
                if c[1..].iter().any(|&x| x != 0) {
                    return Err(Error::Internal("field trace did not land in the prime field".into()));
                }
                Ok(Field::prime(p)?.from_u64_repr(c[0]))
            }
            _ => Err(Error::Unsupported(
                "field_trace requires an extension field".into(),
            )),
        }
    }

    /// Frobenius x -> x^p.
    pub fn frobenius(&self) -> Result<Elem> {
        match self.field.0.kind {
            FieldKind::Rationals => Err(Error::Unsupported("frobenius requires a finite field".into())),
            _ => self.pow_u64(self.field.0.p),
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Scalar::Fp(r) => write!(f, "{r}"),
            Scalar::Rat(r) => write!(f, "{r}"),
            Scalar::Ext(c) => {
                if self.is_zero() {
                    return write!(f, "0");
                }
                let mut first = true;
                for (i, &ci) in c.iter().enumerate() {
                    if ci == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, "+")?;
                    }
                    first = false;
                    match i {
                        0 => write!(f, "{ci}")?,
                        1 if ci == 1 => write!(f, "t")?,
                        1 => write!(f, "{ci}t")?,
                        _ if ci == 1 => write!(f, "t^{i}")?,
                        _ => write!(f, "{ci}t^{i}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

// ---- modular arithmetic on u64 residues (p < 2^32) ----

#[inline]
fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn negmod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn ext_mul(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let m = a.len();
    let mut prod = vec![0u64; 2 * m - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = addmod(prod[i + j], mulmod(ai, bj, p), p);
        }
    }
    // reduce by the monic modulus
    for i in (m..2 * m - 1).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for (j, &mj) in modulus.iter().enumerate().take(m) {
            let idx = i - m + j;
            prod[idx] = addmod(prod[idx], negmod(mulmod(c, mj, p), p), p);
        }
    }
    prod.truncate(m);
    prod
}

// ---- primality ----

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

// ---- univariate polynomials over F_p (internal, for irreducibility) ----

fn upoly_trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn upoly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    upoly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = powmod(b[db], p - 2, p);
    while r.len() > db {
        let c = mulmod(*r.last().unwrap(), lead_inv, p);
        let shift = r.len() - 1 - db;
        for (j, &bj) in b.iter().enumerate() {
            let idx = shift + j;
            r[idx] = addmod(r[idx], negmod(mulmod(c, bj, p), p), p);
        }
        upoly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn upoly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    upoly_trim(&mut a);
    upoly_trim(&mut b);
    while !b.is_empty() {
        let r = upoly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn upoly_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = addmod(prod[i + j], mulmod(ai, bj, p), p);
        }
    }
    upoly_trim(&mut prod);
    if prod.is_empty() {
        return prod;
    }
    upoly_rem(&prod, f, p)
}

/// x^(p^k) mod f, by repeated p-th powering.
fn upoly_frobenius_power(f: &[u64], p: u64, k: usize) -> Vec<u64> {
    let mut x = vec![0u64, 1];
    x = upoly_rem(&x, f, p);
    for _ in 0..k {
        // raise to the p-th power by square-and-multiply
        let mut acc = vec![1u64];
        let mut base = x.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = upoly_mulmod(&acc, &base, f, p);
            }
            base = upoly_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        x = acc;
    }
    x
}

/// x^(p^k) - x reduced mod f.
fn frobenius_minus_x(f: &[u64], p: u64, k: usize) -> Vec<u64> {
    let mut diff = upoly_frobenius_power(f, p, k);
    if diff.len() < 2 {
        diff.resize(2, 0);
    }
    diff[1] = addmod(diff[1], negmod(1, p), p);
    upoly_trim(&mut diff);
    diff
}

/// Irreducibility over F_p: x^(p^m) = x mod f, and gcd(x^(p^(m/l)) - x, f) = 1
/// for every prime l dividing m.
fn upoly_is_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    if !frobenius_minus_x(f, p, m).is_empty() {
        return false;
    }
    let mut rem = m;
    let mut l = 2;
    let mut prime_divisors = Vec::new();
    while l * l <= rem {
        if rem % l == 0 {
            prime_divisors.push(l);
            while rem % l == 0 {
                rem /= l;
            }
        }
        l += 1;
    }
    if rem > 1 {
        prime_divisors.push(rem);
    }
    for l in prime_divisors {
        let diff = frobenius_minus_x(f, p, m / l);
        if diff.is_empty() {
            return false;
        }
        if upoly_gcd(f, &diff, p).len() != 1 {
            return false;
        }
    }
    true
}

// ---- rational square classes ----

fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &(&s * &s) == n
}

/// Signed squarefree part of a nonzero integer.
fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    let mut sf = if n.is_negative() {
        BigInt::from(-1)
    } else {
        BigInt::one()
    };
    let mut n = n.abs();
    let bound = 1_000_000u64;
    let mut d = 2u64;
    while BigInt::from(d) * BigInt::from(d) <= n && d <= bound {
        let bd = BigInt::from(d);
        let mut e = 0u32;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e % 2 == 1 {
            sf *= &bd;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        if is_perfect_square(&n) {
            // all remaining prime exponents even
        } else if n < BigInt::from(10u64).pow(18) {
            // cofactor below bound^3 with all prime factors > bound is squarefree
            sf *= &n;
        } else {
            return Err(Error::Unsupported(
                "square-class factorization exceeds the trial-division bound".into(),
            ));
        }
    }
    Ok(sf)
}

// ---- operator sugar (panics on field mismatch / division by zero; the
// checked methods above are the error-reporting path) ----

macro_rules! binop {
    ($trait:ident, $fn:ident, $method:ident) => {
        impl std::ops::$trait<&Elem> for &Elem {
            type Output = Elem;
            fn $fn(self, rhs: &Elem) -> Elem {
                self.$method(rhs).expect("field mismatch")
            }
        }
        impl std::ops::$trait<Elem> for Elem {
            type Output = Elem;
            fn $fn(self, rhs: Elem) -> Elem {
                (&self).$method(&rhs).expect("field mismatch")
            }
        }
        impl std::ops::$trait<&Elem> for Elem {
            type Output = Elem;
            fn $fn(self, rhs: &Elem) -> Elem {
                (&self).$method(rhs).expect("field mismatch")
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl std::ops::Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem::neg(self)
    }
}
impl std::ops::Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_mul() {
        let f31 = Field::prime(31).unwrap();
        let a = f31.from_i64(15);
        assert_eq!(a.mul(&a).unwrap(), f31.from_i64(8)); // 225 mod 31 = 8
    }

    #[test]
    fn inv_identity() {
        let f61 = Field::prime(61).unwrap();
        assert_eq!(f61.one().inv().unwrap(), f61.one());
        for i in 1..61 {
            let a = f61.from_i64(i);
            assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn f9_generator_squares_to_minus_one() {
        // F_9 = F_3[t]/(t^2+1)
        let f9 = Field::extension(3, vec![1, 0, 1]).unwrap();
        let t = f9.generator().unwrap();
        assert_eq!(t.mul(&t).unwrap(), f9.from_i64(-1));
    }

    #[test]
    fn squares_in_f31() {
        let f31 = Field::prime(31).unwrap();
        assert!(f31.from_i64(8).is_square().unwrap()); // 70 = 8 mod 31
        assert!(f31.from_i64(70).is_square().unwrap());
        assert!(f31.one().is_square().unwrap());
        assert!(!f31.from_i64(-1).is_square().unwrap()); // 31 = 3 mod 4
        assert_eq!(f31.from_i64(70).square_class().unwrap(), f31.one());
    }

    #[test]
    fn square_class_f5() {
        // squares mod 5 are {1,4}; least non-residue is 2
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.from_i64(3).square_class().unwrap(), f5.from_i64(2));
        assert_eq!(f5.one().square_class().unwrap(), f5.one());
        assert!(f5.zero().square_class().is_err());
    }

    #[test]
    fn square_count_small_fields() {
        // exactly (q-1)/2 nonzero squares for odd q <= 121
        for field in [
            Field::prime(3).unwrap(),
            Field::prime(5).unwrap(),
            Field::prime(7).unwrap(),
            Field::prime(11).unwrap(),
            Field::build_extension(3, 2, 0).unwrap(),
            Field::build_extension(5, 2, 0).unwrap(),
            Field::build_extension(11, 2, 0).unwrap(),
            Field::build_extension(3, 4, 0).unwrap(),
        ] {
            let q = field.order().unwrap();
            let squares = field
                .elements()
                .unwrap()
                .iter()
                .filter(|a| !a.is_zero() && a.is_square().unwrap())
                .count() as u64;
            assert_eq!(squares, (q - 1) / 2, "field {field}");
        }
    }

    #[test]
    fn square_class_multiplicative() {
        for field in [Field::prime(7).unwrap(), Field::build_extension(3, 2, 1).unwrap()] {
            let elems = field.elements().unwrap();
            for a in elems.iter().filter(|a| !a.is_zero()) {
                for b in elems.iter().filter(|b| !b.is_zero()) {
                    let ab = a.mul(b).unwrap();
                    let lhs = ab.is_square().unwrap();
                    let rhs = a.is_square().unwrap() == b.is_square().unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn square_class_kills_squares() {
        let f31 = Field::prime(31).unwrap();
        for a in 1..31 {
            for s in 1..31 {
                let a = f31.from_i64(a);
                let s = f31.from_i64(s);
                let scaled = s.mul(&s).unwrap().mul(&a).unwrap();
                assert_eq!(scaled.square_class().unwrap(), a.square_class().unwrap());
            }
        }
    }

    #[test]
    fn trace_f9_over_f3() {
        let f9 = Field::extension(3, vec![1, 0, 1]).unwrap();
        let t = f9.generator().unwrap();
        // t + t^3 = t - t = 0
        assert!(t.field_trace().unwrap().is_zero());
        assert!(f9.zero().field_trace().unwrap().is_zero());
        // base-field element c has trace m*c
        let f3 = Field::prime(3).unwrap();
        let c = f9.from_i64(2);
        assert_eq!(c.field_trace().unwrap(), f3.from_i64(4));
    }

    #[test]
    fn trace_linearity() {
        let f25 = Field::build_extension(5, 2, 7).unwrap();
        let elems = f25.elements().unwrap();
        for a in elems.iter().take(12) {
            for b in elems.iter().take(12) {
                for c in 0..5 {
                    let c_el = f25.from_i64(c);
                    let lhs = (c_el.mul(a).unwrap().add(b).unwrap()).field_trace().unwrap();
                    let f5 = Field::prime(5).unwrap();
                    let rhs = f5
                        .from_i64(c)
                        .mul(&a.field_trace().unwrap())
                        .unwrap()
                        .add(&b.field_trace().unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn build_extension_deterministic() {
        let a = Field::build_extension(3, 2, 5).unwrap();
        let b = Field::build_extension(3, 2, 5).unwrap();
        assert_eq!(a.modulus(), b.modulus());
        assert!(Field::build_extension(4, 2, 0).is_err());
        assert_eq!(Field::build_extension(3, 1, 0).unwrap(), Field::prime(3).unwrap());
        // degree-2 modulus over F_3 must have no root in F_3
        let f = Field::build_extension(3, 2, 11).unwrap();
        let md = f.modulus();
        for x in 0..3u64 {
            let val = (md[0] + md[1] * x + md[2] * x * x) % 3;
            assert_ne!(val, 0);
        }
    }

    #[test]
    fn rationals_basics() {
        let q = Field::rationals();
        let half = q.rational(1, 2).unwrap();
        let two = q.from_i64(2);
        assert!(half.mul(&two).unwrap().is_one());
        assert!(q.rational(4, 9).unwrap().is_square().unwrap());
        assert!(!q.rational(-4, 9).unwrap().is_square().unwrap());
        assert!(!q.rational(8, 9).unwrap().is_square().unwrap());
        // signed squarefree part
        assert_eq!(q.rational(8, 9).unwrap().square_class().unwrap(), q.from_i64(2));
        assert_eq!(q.rational(-12, 1).unwrap().square_class().unwrap(), q.from_i64(-3));
        assert_eq!(q.rational(1, 18).unwrap().square_class().unwrap(), q.from_i64(2));
    }

    #[test]
    fn mismatch_and_zero_errors() {
        let f3 = Field::prime(3).unwrap();
        let f5 = Field::prime(5).unwrap();
        assert!(f3.one().add(&f5.one()).is_err());
        assert!(f3.one().div(&f3.zero()).is_err());
        assert!(f3.zero().is_square().is_err());
    }
}
