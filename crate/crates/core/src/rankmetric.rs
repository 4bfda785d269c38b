//! Rank-metric codes: Gabidulin MRD codes, rank distance, minimum distance
//! verification and block-diagonal composition.
//!
//! A linear code is stored by a GF(q)-basis of matrices. Codeword `i` is the
//! combination whose coefficient vector is the base-q expansion of `i`, most
//! significant digit first, so index 0 is the zero matrix and indices follow
//! the lexicographic order of coefficient vectors.

use std::collections::HashSet;

use num_bigint::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::gf::Field;
use crate::linalg::{bits, FqMatrix, LinalgError};
use crate::qcomb;

/// Largest code that is ever materialized or enumerated.
pub const MATERIALIZE_CAP: u64 = 1 << 24;
/// Largest code checked pair by pair in exhaustive mode.
pub const PAIRWISE_CAP: u64 = 1 << 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RankError {
    #[error("minimum distance {delta} must lie in 1..={max}")]
    InvalidDistance { delta: usize, max: usize },
    #[error("cardinalities differ ({0} vs {1})")]
    CardinalityMismatch(String, String),
    #[error("code of size {0} exceeds the limit {1}")]
    TooLarge(String, u64),
    #[error("codeword shape {got:?} does not match {expected:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("code is not linear")]
    NotLinear,
    #[error("block at ({r0},{c0}) does not fit in {rows}x{cols}")]
    DoesNotFit {
        r0: usize,
        c0: usize,
        rows: usize,
        cols: usize,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `d_r(A, B) = rk(A - B)`.
pub fn rank_distance(a: &FqMatrix, b: &FqMatrix) -> Result<usize, RankError> {
    if a.shape() != b.shape() {
        return Err(RankError::ShapeMismatch {
            expected: a.shape(),
            got: b.shape(),
        });
    }
    Ok(a.sub(b)?.rank())
}

/// GF(q^n) as polynomials over GF(q) modulo a fixed monic irreducible.
#[derive(Debug, Clone)]
pub struct ExtField {
    base: Field,
    n: usize,
    /// Low-order coefficients of the monic modulus (degree `n` term implied).
    modulus: Vec<u16>,
}

impl ExtField {
    /// Uses the smallest monic irreducible of degree `n` in encoding order
    /// (coefficient vectors read as base-q numbers, constant term least significant).
    pub fn new(base: &Field, n: usize) -> ExtField {
        assert!(n >= 1);
        let q = base.q() as u64;
        let total = q.checked_pow(n as u32).expect("extension degree too large");
        for r in 0..total {
            let low = digits(r, q, n);
            let mut poly = low.clone();
            poly.push(1);
            if is_irreducible(base, &poly) {
                return ExtField {
                    base: base.clone(),
                    n,
                    modulus: low,
                };
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Full modulus, constant term first.
    pub fn modulus(&self) -> Vec<u16> {
        let mut m = self.modulus.clone();
        m.push(1);
        m
    }

    /// The polynomial basis element `x^j`, `j < n`.
    pub fn basis(&self, j: usize) -> Vec<u16> {
        let mut e = vec![0; self.n];
        e[j] = 1;
        e
    }

    pub fn add(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| self.base.add(x, y))
            .collect()
    }

    pub fn mul(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        let f = &self.base;
        let n = self.n;
        let mut prod = vec![0u16; 2 * n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = f.add(prod[i + j], f.mul(x, y));
            }
        }
        for d in (n..2 * n).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus.iter().enumerate() {
                prod[d - n + i] = f.sub(prod[d - n + i], f.mul(c, m));
            }
        }
        prod.truncate(n);
        prod
    }

    pub fn pow(&self, a: &[u16], mut e: u64) -> Vec<u16> {
        let mut result = vec![0; self.n];
        result[0] = 1;
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        result
    }

    /// `a^(q^i)`.
    pub fn frobenius(&self, a: &[u16], i: usize) -> Vec<u16> {
        let q = self.base.q() as u64;
        (0..i).fold(a.to_vec(), |acc, _| self.pow(&acc, q))
    }
}

fn digits(mut r: u64, q: u64, n: usize) -> Vec<u16> {
    (0..n)
        .map(|_| {
            let d = (r % q) as u16;
            r /= q;
            d
        })
        .collect()
}

fn degree(p: &[u16]) -> Option<usize> {
    p.iter().rposition(|&c| c != 0)
}

fn poly_rem(f: &Field, a: &[u16], m: &[u16]) -> Vec<u16> {
    let mut r = a.to_vec();
    let dm = degree(m).expect("nonzero modulus");
    let lead_inv = f.inv(m[dm]).expect("nonzero lead");
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        for i in 0..=dm {
            r[dr - dm + i] = f.sub(r[dr - dm + i], f.mul(c, m[i]));
        }
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
fn is_irreducible(f: &Field, poly: &[u16]) -> bool {
    let n = poly.len() - 1;
    let q = f.q() as u64;
    for d in 1..=n / 2 {
        for r in 0..q.pow(d as u32) {
            let mut div = digits(r, q, d);
            div.push(1);
            if degree(&poly_rem(f, poly, &div)).is_none() {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone)]
enum Repr {
    Explicit(Vec<FqMatrix>),
    Linear(Vec<FqMatrix>),
}

/// A rank-metric code of `m x n` matrices with a claimed minimum distance.
#[derive(Debug, Clone)]
pub struct RankCode {
    field: Field,
    m: usize,
    n: usize,
    delta: usize,
    linear: bool,
    repr: Repr,
}

/// Method for [`RankCode::verify_min_rank_distance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Linear,
}

impl RankCode {
    /// Explicit code. Linearity is spot-checked: sums and scalar multiples
    /// of the first 64 codewords with every codeword must stay in the code.
    pub fn explicit(
        field: &Field,
        m: usize,
        n: usize,
        delta: usize,
        codewords: Vec<FqMatrix>,
    ) -> Result<RankCode, RankError> {
        for c in &codewords {
            if c.shape() != (m, n) {
                return Err(RankError::ShapeMismatch {
                    expected: (m, n),
                    got: c.shape(),
                });
            }
            if c.field() != field {
                return Err(LinalgError::FieldMismatch.into());
            }
        }
        let set: HashSet<&FqMatrix> = codewords.iter().collect();
        let zero = FqMatrix::zeros(field, m, n);
        let linear = set.contains(&zero)
            && codewords.iter().take(64).all(|a| {
                (1..field.q() as u16).all(|s| set.contains(&a.scale(s)))
                    && codewords
                        .iter()
                        .all(|b| set.contains(&a.add(b).expect("same shape")))
            });
        Ok(RankCode {
            field: field.clone(),
            m,
            n,
            delta,
            linear,
            repr: Repr::Explicit(codewords),
        })
    }

    /// The code `{0}`; its claimed distance is meaningless and set to `min(m, n)`.
    pub fn zero(field: &Field, m: usize, n: usize) -> RankCode {
        RankCode::single(FqMatrix::zeros(field, m, n))
    }

    /// A one-word code.
    pub fn single(word: FqMatrix) -> RankCode {
        let (m, n) = word.shape();
        let linear = word.is_zero();
        RankCode {
            field: word.field().clone(),
            m,
            n,
            delta: m.min(n),
            linear,
            repr: Repr::Explicit(vec![word]),
        }
    }

    /// Linear code spanned over GF(q) by `basis`, which must be independent.
    pub fn from_basis(
        field: &Field,
        m: usize,
        n: usize,
        delta: usize,
        basis: Vec<FqMatrix>,
    ) -> Result<RankCode, RankError> {
        for b in &basis {
            if b.shape() != (m, n) {
                return Err(RankError::ShapeMismatch {
                    expected: (m, n),
                    got: b.shape(),
                });
            }
        }
        Ok(RankCode {
            field: field.clone(),
            m,
            n,
            delta,
            linear: true,
            repr: Repr::Linear(basis),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn claimed_distance(&self) -> usize {
        self.delta
    }

    pub fn is_linear(&self) -> bool {
        self.linear
    }

    /// GF(q)-basis when the code is generator backed.
    pub fn generator_basis(&self) -> Option<&[FqMatrix]> {
        match &self.repr {
            Repr::Linear(b) => Some(b),
            Repr::Explicit(_) => None,
        }
    }

    pub fn size(&self) -> BigInt {
        match &self.repr {
            Repr::Explicit(c) => BigInt::from(c.len()),
            Repr::Linear(b) => qcomb::pow(self.field.q(), b.len() as u64),
        }
    }

    /// Size as `u64`, if it fits.
    pub fn size_u64(&self) -> Option<u64> {
        match &self.repr {
            Repr::Explicit(c) => Some(c.len() as u64),
            Repr::Linear(b) => (self.field.q() as u64).checked_pow(b.len() as u32),
        }
    }

    /// Codeword by message index; `None` when out of range.
    pub fn codeword(&self, index: u64) -> Option<FqMatrix> {
        if index >= self.size_u64()? {
            return None;
        }
        match &self.repr {
            Repr::Explicit(c) => Some(c[index as usize].clone()),
            Repr::Linear(basis) => {
                let q = self.field.q() as u64;
                let mut out = FqMatrix::zeros(&self.field, self.m, self.n);
                let mut rest = index;
                for b in basis.iter().rev() {
                    out.add_scaled(b, (rest % q) as u16);
                    rest /= q;
                }
                Some(out)
            }
        }
    }

    /// All codewords in index order.
    pub fn codewords(&self) -> Result<Vec<FqMatrix>, RankError> {
        match &self.repr {
            Repr::Explicit(c) => Ok(c.clone()),
            Repr::Linear(_) => {
                let size = self.checked_size(MATERIALIZE_CAP)?;
                Ok((0..size)
                    .into_par_iter()
                    .map(|i| self.codeword(i).expect("in range"))
                    .collect())
            }
        }
    }

    fn checked_size(&self, cap: u64) -> Result<u64, RankError> {
        match self.size_u64() {
            Some(s) if s <= cap => Ok(s),
            _ => Err(RankError::TooLarge(self.size().to_string(), cap)),
        }
    }

    /// Exact minimum rank distance; `None` for a code with fewer than two words.
    pub fn verify_min_rank_distance(&self, mode: VerifyMode) -> Result<Option<usize>, RankError> {
        match mode {
            VerifyMode::Exhaustive => {
                self.checked_size(PAIRWISE_CAP)?;
                let words = self.codewords()?;
                Ok((0..words.len())
                    .into_par_iter()
                    .filter_map(|i| {
                        words[i + 1..]
                            .iter()
                            .map(|b| words[i].sub(b).expect("same shape").rank())
                            .min()
                    })
                    .min())
            }
            VerifyMode::Linear => {
                if !self.linear {
                    return Err(RankError::NotLinear);
                }
                self.checked_size(MATERIALIZE_CAP)?;
                match &self.repr {
                    Repr::Explicit(c) => {
                        Ok(c.iter().filter(|w| !w.is_zero()).map(|w| w.rank()).min())
                    }
                    Repr::Linear(basis) => Ok(min_rank_linear(&self.field, basis, self.m, self.n)),
                }
            }
        }
    }

    /// Places every codeword at `(r0, c0)` inside a zero `rows x cols` matrix.
    pub fn pad(
        &self,
        rows: usize,
        cols: usize,
        r0: usize,
        c0: usize,
    ) -> Result<RankCode, RankError> {
        if r0 + self.m > rows || c0 + self.n > cols {
            return Err(RankError::DoesNotFit { r0, c0, rows, cols });
        }
        let place = |w: &FqMatrix| {
            let mut big = FqMatrix::zeros(&self.field, rows, cols);
            big.set_block(r0, c0, w);
            big
        };
        let repr = match &self.repr {
            Repr::Explicit(c) => Repr::Explicit(c.iter().map(place).collect()),
            Repr::Linear(b) => Repr::Linear(b.iter().map(place).collect()),
        };
        Ok(RankCode {
            field: self.field.clone(),
            m: rows,
            n: cols,
            delta: self.delta,
            linear: self.linear,
            repr,
        })
    }
}

/// Minimum rank over all nonzero GF(p)-combinations of `basis`, where each
/// GF(q)-basis matrix is expanded by the GF(p)-basis `x^e` of GF(q). A p-ary
/// odometer adds one generator per digit step, since adding it p times wraps.
fn min_rank_linear(field: &Field, basis: &[FqMatrix], m: usize, n: usize) -> Option<usize> {
    let p = field.characteristic() as u64;
    let e = field.degree();
    // x^j in GF(q) is encoded as p^j
    let gens: Vec<FqMatrix> = basis
        .iter()
        .flat_map(|b| (0..e).map(move |j| b.scale((p as u16).pow(j))))
        .collect();
    let len = gens.len();
    if len == 0 {
        return None;
    }
    let packed = field.is_binary() && n <= 64;
    let total = p.pow(len as u32);
    // the low `split` digits run inside a chunk
    let split = (0..=len)
        .rev()
        .find(|&s| p.pow(s as u32) <= 1 << 16)
        .unwrap_or(0);
    let chunk = p.pow(split as u32);
    let chunks = total / chunk;
    let low = &gens[len - split..];
    let high = &gens[..len - split];
    (0..chunks)
        .into_par_iter()
        .filter_map(|c| {
            let mut start = FqMatrix::zeros(field, m, n);
            let mut rest = c;
            for g in high.iter().rev() {
                start.add_scaled(g, (rest % p) as u16);
                rest /= p;
            }
            if packed {
                let low_bits: Vec<Vec<u64>> = low.iter().map(|g| g.to_bits()).collect();
                odometer_bits(start.to_bits(), &low_bits, c == 0)
            } else {
                odometer_dense(start, low, p, c == 0)
            }
        })
        .min()
}

fn odometer_bits(mut cur: Vec<u64>, gens: &[Vec<u64>], skip_first: bool) -> Option<usize> {
    let mut best = if skip_first {
        None
    } else {
        Some(bits::rank(&cur))
    };
    let len = gens.len();
    let mut counter: u64 = 0;
    let end = 1u64 << len;
    while counter + 1 < end {
        counter += 1;
        // binary odometer: the lowest set bit of the counter is the digit that moves
        let pos = counter.trailing_zeros() as usize;
        for (r, g) in cur.iter_mut().zip(&gens[len - 1 - pos]) {
            *r ^= g;
        }
        let rk = bits::rank(&cur);
        best = Some(best.map_or(rk, |b: usize| b.min(rk)));
        if best == Some(1) {
            break;
        }
    }
    best
}

fn odometer_dense(mut cur: FqMatrix, gens: &[FqMatrix], p: u64, skip_first: bool) -> Option<usize> {
    let mut best = if skip_first { None } else { Some(cur.rank()) };
    let len = gens.len();
    let mut digits = vec![0u64; len];
    loop {
        let mut pos = len;
        loop {
            if pos == 0 {
                return best;
            }
            pos -= 1;
            cur.add_scaled(&gens[pos], 1);
            digits[pos] += 1;
            if digits[pos] < p {
                break;
            }
            digits[pos] = 0;
        }
        let rk = cur.rank();
        best = Some(best.map_or(rk, |b: usize| b.min(rk)));
        if best == Some(1) {
            return best;
        }
    }
}

/// Gabidulin MRD code of `m x n` matrices with minimum rank distance `delta`.
///
/// With `N = max(m, n)` and `K = min(m, n) - delta + 1`, codewords evaluate
/// `f(x) = Σ_{i<K} a_i x^{q^i}` over GF(q^N) at `1, x, ..., x^{min-1}`. The
/// matrix has the GF(q)-coordinates of `f(g_t)` as column `t` and is
/// transposed when `m < n`. Basis element `i * N + j` sets `a_i = x^j`.
pub fn gabidulin(field: &Field, m: usize, n: usize, delta: usize) -> Result<RankCode, RankError> {
    let lo = m.min(n);
    if delta == 0 || delta > lo {
        return Err(RankError::InvalidDistance { delta, max: lo });
    }
    let big = m.max(n);
    let ext = ExtField::new(field, big);
    let k = lo - delta + 1;
    let points: Vec<Vec<u16>> = (0..lo).map(|t| ext.basis(t)).collect();
    let frob: Vec<Vec<Vec<u16>>> = (0..k)
        .map(|i| points.iter().map(|g| ext.frobenius(g, i)).collect())
        .collect();
    let mut basis = Vec::with_capacity(k * big);
    for frob_i in &frob {
        for j in 0..big {
            let bj = ext.basis(j);
            let mut mat = FqMatrix::zeros(field, big, lo);
            for (t, g) in frob_i.iter().enumerate() {
                for (r, &c) in ext.mul(&bj, g).iter().enumerate() {
                    mat.set(r, t, c);
                }
            }
            basis.push(if m < n { mat.transpose() } else { mat });
        }
    }
    RankCode::from_basis(field, m, n, delta, basis)
}

/// Block-diagonal composition `[[A_i, 0], [0, B_i]]` pairing codewords by index.
///
/// Two generator-backed codes with bases of equal length compose basis by
/// basis and stay generator backed; otherwise both are materialized.
pub fn block_compose(a: &RankCode, b: &RankCode) -> Result<RankCode, RankError> {
    if a.field != b.field {
        return Err(LinalgError::FieldMismatch.into());
    }
    if a.size() != b.size() {
        return Err(RankError::CardinalityMismatch(
            a.size().to_string(),
            b.size().to_string(),
        ));
    }
    let (rows, cols) = (a.m + b.m, a.n + b.n);
    let diag = |x: &FqMatrix, y: &FqMatrix| {
        let mut w = FqMatrix::zeros(&a.field, rows, cols);
        w.set_block(0, 0, x);
        w.set_block(a.m, a.n, y);
        w
    };
    let delta = a.delta + b.delta;
    if let (Repr::Linear(ba), Repr::Linear(bb)) = (&a.repr, &b.repr) {
        let basis = ba.iter().zip(bb).map(|(x, y)| diag(x, y)).collect();
        return RankCode::from_basis(&a.field, rows, cols, delta, basis);
    }
    let words = a
        .codewords()?
        .iter()
        .zip(&b.codewords()?)
        .map(|(x, y)| diag(x, y))
        .collect();
    let mut out = RankCode::explicit(&a.field, rows, cols, delta, words)?;
    out.linear &= a.linear && b.linear;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    /// Independent oracle: every pair, dense rank.
    fn brute_min_distance(words: &[FqMatrix]) -> Option<usize> {
        let mut best = None;
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                let d = words[i].sub(&words[j]).unwrap().rref().1.len();
                best = Some(best.map_or(d, |b: usize| b.min(d)));
            }
        }
        best
    }

    #[test]
    fn rank_distance_basics() {
        let f = gf(2);
        let i2 = FqMatrix::identity(&f, 2);
        let z = FqMatrix::zeros(&f, 2, 2);
        assert_eq!(rank_distance(&i2, &i2).unwrap(), 0);
        assert_eq!(rank_distance(&i2, &z).unwrap(), 2);
        assert!(matches!(
            rank_distance(&i2, &FqMatrix::zeros(&f, 2, 3)),
            Err(RankError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn rank_distance_is_a_metric_on_samples() {
        let f = gf(3);
        let words = gabidulin(&f, 2, 3, 1).unwrap().codewords().unwrap();
        for a in words.iter().step_by(37) {
            for b in words.iter().step_by(53) {
                let dab = rank_distance(a, b).unwrap();
                assert_eq!(dab, rank_distance(b, a).unwrap());
                for c in words.iter().step_by(71) {
                    assert!(rank_distance(a, c).unwrap() <= dab + rank_distance(b, c).unwrap());
                }
            }
        }
    }

    #[test]
    fn extension_field_is_a_field() {
        for (q, n) in [(2, 3), (2, 5), (3, 2), (4, 2), (2, 1)] {
            let f = gf(q);
            let e = ExtField::new(&f, n);
            let size = (q as u64).pow(n as u32);
            let elems: Vec<Vec<u16>> = (0..size).map(|r| digits(r, q as u64, n)).collect();
            // every nonzero element satisfies a^(Q-1) = 1
            let one = e.pow(&elems[1], 0);
            for a in &elems[1..] {
                assert_eq!(e.pow(a, size - 1), one, "q={q} n={n}");
            }
            // Frobenius is additive
            for a in elems.iter().take(8) {
                for b in elems.iter().take(8) {
                    assert_eq!(
                        e.frobenius(&e.add(a, b), 1),
                        e.add(&e.frobenius(a, 1), &e.frobenius(b, 1))
                    );
                }
            }
        }
        assert_eq!(ExtField::new(&gf(2), 3).modulus(), vec![1, 1, 0, 1]);
        assert_eq!(ExtField::new(&gf(2), 2).modulus(), vec![1, 1, 1]);
    }

    #[test]
    fn small_gabidulin_codes() {
        let f = gf(2);
        let c = gabidulin(&f, 3, 3, 2).unwrap();
        assert_eq!(c.size_u64(), Some(64));
        let words = c.codewords().unwrap();
        assert_eq!(words.iter().collect::<HashSet<_>>().len(), 64);
        assert_eq!(brute_min_distance(&words), Some(2));
        assert_eq!(
            c.verify_min_rank_distance(VerifyMode::Exhaustive).unwrap(),
            Some(2)
        );
        assert_eq!(
            c.verify_min_rank_distance(VerifyMode::Linear).unwrap(),
            Some(2)
        );
        assert!(c.codeword(0).unwrap().is_zero());
        assert_eq!(c.codeword(64), None);

        let big = gabidulin(&f, 5, 5, 3).unwrap();
        assert_eq!(big.size_u64(), Some(1 << 15));
        assert_eq!(
            big.verify_min_rank_distance(VerifyMode::Linear).unwrap(),
            Some(3)
        );

        let rep = gabidulin(&gf(3), 2, 4, 2).unwrap();
        assert_eq!(rep.size_u64(), Some(81));
        assert_eq!(rep.shape(), (2, 4));

        assert_eq!(
            gabidulin(&f, 3, 3, 0).unwrap_err(),
            RankError::InvalidDistance { delta: 0, max: 3 }
        );
        assert_eq!(
            gabidulin(&f, 2, 3, 3).unwrap_err(),
            RankError::InvalidDistance { delta: 3, max: 2 }
        );
    }

    #[test]
    fn gabidulin_is_mrd_for_all_small_parameters() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let f = gf(q);
            for m in 1..=6 {
                for n in 1..=6 {
                    for delta in 1..=m.min(n) {
                        let exp = (m.max(n) * (m.min(n) - delta + 1)) as u32;
                        let Some(size) = (q as u64).checked_pow(exp).filter(|&s| s <= 1 << 16)
                        else {
                            continue;
                        };
                        let c = gabidulin(&f, m, n, delta).unwrap();
                        assert_eq!(c.size_u64(), Some(size));
                        assert_eq!(
                            c.verify_min_rank_distance(VerifyMode::Linear).unwrap(),
                            Some(delta),
                            "q={q} {m}x{n} d={delta}"
                        );
                        if size <= 256 {
                            let words = c.codewords().unwrap();
                            assert_eq!(brute_min_distance(&words), (size > 1).then_some(delta));
                            assert_eq!(words.iter().collect::<HashSet<_>>().len() as u64, size);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn explicit_codes() {
        let f = gf(2);
        let zero = RankCode::zero(&f, 2, 3);
        assert_eq!(
            zero.verify_min_rank_distance(VerifyMode::Exhaustive)
                .unwrap(),
            None
        );
        assert_eq!(
            zero.verify_min_rank_distance(VerifyMode::Linear).unwrap(),
            None
        );
        let words = gabidulin(&f, 2, 2, 1).unwrap().codewords().unwrap();
        let lin = RankCode::explicit(&f, 2, 2, 1, words.clone()).unwrap();
        assert!(lin.is_linear());
        let nonlin = RankCode::explicit(&f, 2, 2, 1, words[1..].to_vec()).unwrap();
        assert!(!nonlin.is_linear());
        assert_eq!(
            nonlin
                .verify_min_rank_distance(VerifyMode::Linear)
                .unwrap_err(),
            RankError::NotLinear
        );
        let too_big = gabidulin(&f, 4, 4, 1).unwrap();
        assert!(matches!(
            too_big.verify_min_rank_distance(VerifyMode::Exhaustive),
            Err(RankError::TooLarge(..))
        ));
    }

    #[test]
    fn block_composition() {
        let f = gf(2);
        let a = gabidulin(&f, 1, 2, 1).unwrap();
        let b = gabidulin(&f, 2, 1, 1).unwrap();
        let c = block_compose(&a, &b).unwrap();
        assert_eq!(c.shape(), (3, 3));
        assert_eq!(c.size_u64(), Some(4));
        let words = c.codewords().unwrap();
        assert!(brute_min_distance(&words).unwrap() >= 2);
        for w in &words {
            assert!(w.submatrix(1, 0, 2, 2).is_zero());
        }

        let l1 = gabidulin(&f, 1, 2, 1).unwrap();
        let pair = block_compose(&l1, &l1).unwrap();
        assert_eq!(pair.shape(), (2, 4));
        assert_eq!(
            pair.verify_min_rank_distance(VerifyMode::Exhaustive)
                .unwrap(),
            Some(2)
        );
        for w in pair.codewords().unwrap() {
            assert!(w.submatrix(1, 0, 1, 2).is_zero());
        }

        let single = block_compose(
            &RankCode::single(FqMatrix::identity(&f, 2)),
            &RankCode::zero(&f, 1, 1),
        )
        .unwrap();
        assert_eq!(single.size_u64(), Some(1));
        assert_eq!(
            single.codeword(0).unwrap().submatrix(0, 0, 2, 2),
            FqMatrix::identity(&f, 2)
        );

        let mismatch = block_compose(&a, &gabidulin(&f, 2, 2, 1).unwrap());
        assert!(matches!(mismatch, Err(RankError::CardinalityMismatch(..))));

        // mixed explicit / generator inputs pair by index
        let explicit = RankCode::explicit(&f, 1, 2, 1, a.codewords().unwrap()).unwrap();
        let mixed = block_compose(&explicit, &b).unwrap();
        assert_eq!(mixed.codewords().unwrap(), words);
    }

    #[test]
    fn composed_distance_is_additive_bound() {
        for q in [2u32, 3] {
            let f = gf(q);
            let a = gabidulin(&f, 2, 2, 2).unwrap();
            let b = gabidulin(&f, 1, 2, 1).unwrap();
            let c = block_compose(&a, &b).unwrap();
            let words = c.codewords().unwrap();
            assert!(brute_min_distance(&words).unwrap() >= 3);
        }
    }

    #[test]
    fn padding() {
        let f = gf(2);
        let a = gabidulin(&f, 2, 2, 2).unwrap();
        let padded = a.pad(3, 4, 1, 2).unwrap();
        assert_eq!(padded.shape(), (3, 4));
        for (w, small) in padded
            .codewords()
            .unwrap()
            .iter()
            .zip(a.codewords().unwrap())
        {
            assert_eq!(w.submatrix(1, 2, 2, 2), small);
            assert_eq!(w.rank(), small.rank());
        }
        assert!(matches!(
            a.pad(2, 2, 1, 0),
            Err(RankError::DoesNotFit { .. })
        ));
    }
}
