//! Arithmetic in small finite fields GF(q).
//!
//! Elements are stored as a canonical integer in `[0, q)`: the coefficient
//! vector of the element as a polynomial over GF(p), packed base `p` with the
//! constant term in the least significant digit. Prime fields use plain
//! modular arithmetic; extension fields use exp/log tables built from a fixed
//! irreducible modulus, so encodings are stable across runs.
//!
//! Fixed moduli (coefficients listed from the constant term upward):
//!
//! | q | modulus      |
//! |---|--------------|
//! | 4 | x^2 + x + 1  |
//! | 8 | x^3 + x + 1  |
//! | 9 | x^2 + 2x + 2 |
//!
//! Every other extension field uses the smallest monic irreducible polynomial
//! in encoding order.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_Q: u32 = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u32),
    #[error("field order {0} exceeds the supported maximum {MAX_Q}")]
    TooLarge(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields (GF({0}) vs GF({1}))")]
    FieldMismatch(u32, u32),
    #[error("{0} is not an element encoding of GF({1})")]
    InvalidElement(u32, u32),
}

struct FieldInner {
    q: u32,
    p: u32,
    e: u32,
    modulus: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)`, doubled to skip a reduction in `mul`.
    exp: Vec<u16>,
    log: Vec<u16>,
    /// Only populated for extension fields; prime fields add directly.
    add: Vec<u16>,
    neg: Vec<u16>,
}

/// A finite field GF(q). Cheap to clone; tables are shared.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.q.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

/// Returns `(p, e)` with `q = p^e`, or `None` if `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        // q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn default_modulus(q: u32) -> Option<Vec<u32>> {
    match q {
        4 => Some(vec![1, 1, 1]),
        8 => Some(vec![1, 1, 0, 1]),
        9 => Some(vec![2, 2, 1]),
        _ => None,
    }
}

// Polynomials over GF(p), coefficient vectors from the constant term upward.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let f = r[r.len() - 1] * lead_inv % p;
        for (i, &c) in b.iter().enumerate() {
            let t = &mut r[shift + i];
            *t = (*t + p * p - f * c % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_rem(&out, m, p)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u32;
    let mut base = a % p;
    let mut exp = p - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            r = r * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    r
}

fn digits(mut rep: u32, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(rep % p);
        rep /= p;
    }
    out
}

fn undigits(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub fn is_irreducible_over_prime(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    if deg == 0 || modulus[deg] == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let mut cand = digits(low, p, d);
            cand.push(1);
            if poly_rem(modulus, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn search_modulus(p: u32, e: u32) -> Vec<u32> {
    (0..p.pow(e))
        .map(|low| {
            let mut m = digits(low, p, e as usize);
            m.push(1);
            m
        })
        .find(|m| m[0] != 0 && is_irreducible_over_prime(m, p))
        .expect("an irreducible polynomial exists in every degree")
}

impl Field {
    pub fn new(q: u32) -> Result<Field, GfError> {
        let (p, e) = prime_power(q).ok_or(GfError::NotAPrimePower(q))?;
        if q > MAX_Q {
            return Err(GfError::TooLarge(q));
        }
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            default_modulus(q).unwrap_or_else(|| search_modulus(p, e))
        };
        debug_assert!(e == 1 || is_irreducible_over_prime(&modulus, p));

        let n = q as usize;
        let mul_raw = |a: u32, b: u32| -> u32 {
            if e == 1 {
                a * b % p
            } else {
                let r = poly_mulmod(
                    &digits(a, p, e as usize),
                    &digits(b, p, e as usize),
                    &modulus,
                    p,
                );
                undigits(&r, p)
            }
        };

        // Smallest element of multiplicative order q-1.
        let mut exp = Vec::new();
        for g in 1..q {
            let mut powers = Vec::with_capacity(n - 1);
            let mut x = 1u32;
            loop {
                powers.push(x as u16);
                x = mul_raw(x, g);
                if x == 1 {
                    break;
                }
            }
            if powers.len() == n - 1 {
                exp = powers;
                break;
            }
        }
        let mut log = vec![0u16; n];
        for (i, &x) in exp.iter().enumerate() {
            log[x as usize] = i as u16;
        }
        let doubled: Vec<u16> = exp.iter().chain(exp.iter()).copied().collect();

        let (add, neg) = if e == 1 {
            (Vec::new(), (0..q).map(|a| ((p - a) % p) as u16).collect())
        } else {
            let mut add = vec![0u16; n * n];
            for a in 0..q {
                let da = digits(a, p, e as usize);
                for b in 0..q {
                    let db = digits(b, p, e as usize);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    add[a as usize * n + b as usize] = undigits(&s, p) as u16;
                }
            }
            let neg = (0..q)
                .map(|a| {
                    let d: Vec<u32> = digits(a, p, e as usize)
                        .iter()
                        .map(|&c| (p - c) % p)
                        .collect();
                    undigits(&d, p) as u16
                })
                .collect();
            (add, neg)
        };

        Ok(Field(Arc::new(FieldInner {
            q,
            p,
            e,
            modulus,
            exp: doubled,
            log,
            add,
            neg,
        })))
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    /// Modulus coefficients over GF(p), constant term first (length e+1).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn is_binary(&self) -> bool {
        self.0.q == 2
    }

    /// The element used to build the exp/log tables.
    pub fn primitive_element(&self) -> u16 {
        self.0.exp[1]
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        let f = &*self.0;
        if f.e == 1 {
            let s = a as u32 + b as u32;
            (if s >= f.p { s - f.p } else { s }) as u16
        } else {
            f.add[a as usize * f.q as usize + b as usize]
        }
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let f = &*self.0;
        if f.e == 1 {
            return (a as u32 * b as u32 % f.p) as u16;
        }
        f.exp[f.log[a as usize] as usize + f.log[b as usize] as usize]
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u16) -> Option<u16> {
        if a == 0 {
            return None;
        }
        let f = &*self.0;
        let l = f.log[a as usize] as usize;
        Some(f.exp[(f.q as usize - 1 - l) % (f.q as usize - 1)])
    }

    pub fn pow(&self, a: u16, k: u64) -> u16 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let f = &*self.0;
        let order = f.q as u64 - 1;
        f.exp[((f.log[a as usize] as u64 * (k % order)) % order) as usize]
    }

    pub fn element(&self, rep: u32) -> Result<FieldElement, GfError> {
        if rep >= self.0.q {
            return Err(GfError::InvalidElement(rep, self.0.q));
        }
        Ok(FieldElement {
            field: self.clone(),
            rep: rep as u16,
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            rep: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            rep: 1,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.q).map(move |r| FieldElement {
            field: self.clone(),
            rep: r as u16,
        })
    }
}

/// A field element carrying its field, for checked arithmetic at API edges.
/// Hot loops work on raw `u16` encodings through [`Field`] directly.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    rep: u16,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.rep, self.field.q())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rep(&self) -> u16 {
        self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep == 0
    }

    fn check(&self, other: &FieldElement) -> Result<(), GfError> {
        if self.field != other.field {
            return Err(GfError::FieldMismatch(self.field.q(), other.field.q()));
        }
        Ok(())
    }

    fn with(&self, rep: u16) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            rep,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.rep, other.rep)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        Ok(self.with(self.field.sub(self.rep, other.rep)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.rep, other.rep)))
    }

    pub fn neg(&self) -> FieldElement {
        self.with(self.field.neg(self.rep))
    }

    pub fn inv(&self) -> Result<FieldElement, GfError> {
        self.field
            .inv(self.rep)
            .map(|r| self.with(r))
            .ok_or(GfError::DivisionByZero)
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, GfError> {
        self.check(other)?;
        self.mul(&other.inv()?)
    }

    /// Multiplicative order; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        if self.rep == 0 {
            return None;
        }
        let mut x = self.rep;
        let mut n = 1;
        while x != 1 {
            x = self.field.mul(x, self.rep);
            n += 1;
        }
        Some(n)
    }
}
