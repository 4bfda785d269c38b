//! Packed GF(2) rows: column `j` of a row lives in bit `63 - j`, so comparing
//! rows as integers compares them lexicographically by entry and the highest
//! set bit is the pivot.

#[inline]
pub fn bit(col: usize) -> u64 {
    1u64 << (63 - col)
}

#[inline]
pub fn pivot_col(row: u64) -> usize {
    row.leading_zeros() as usize
}

#[inline]
fn top(row: u64) -> u64 {
    1u64 << (63 - row.leading_zeros())
}

/// Inserts `x` into an echelon basis kept sorted by decreasing pivot bit.
/// Returns whether the rank grew.
#[inline]
pub fn insert(basis: &mut Vec<u64>, mut x: u64) -> bool {
    let mut pos = basis.len();
    for (i, &b) in basis.iter().enumerate() {
        if x == 0 {
            return false;
        }
        if top(b) < top(x) {
            pos = i;
            break;
        }
        if x & top(b) != 0 {
            x ^= b;
        }
    }
    if x == 0 {
        return false;
    }
    // Rows after `pos` have lower pivots than x; reduce x against them too.
    for &b in &basis[pos..] {
        if x & top(b) != 0 {
            x ^= b;
        }
    }
    basis.insert(pos, x);
    true
}

/// Reduced row echelon form of the span of `rows`; zero rows are dropped.
pub fn rref(rows: &[u64]) -> Vec<u64> {
    let mut basis = Vec::with_capacity(rows.len());
    for &r in rows {
        insert(&mut basis, r);
    }
    back_substitute(&mut basis);
    basis
}

/// Clears each pivot bit from every other row of an echelon basis.
pub fn back_substitute(basis: &mut [u64]) {
    for i in (0..basis.len()).rev() {
        let t = top(basis[i]);
        let bi = basis[i];
        for b in basis[..i].iter_mut() {
            if *b & t != 0 {
                *b ^= bi;
            }
        }
    }
}

pub fn rank(rows: &[u64]) -> usize {
    let mut basis = Vec::with_capacity(rows.len());
    rows.iter().filter(|&&r| insert(&mut basis, r)).count()
}

/// `dim(U ∩ W)` for RREF bases `u` and `w` (any row order for `w`).
#[inline]
pub fn intersection_dim(u: &[u64], w: &[u64]) -> usize {
    let mut rest: [u64; 64] = [0; 64];
    let mut n = 0;
    for &x in w {
        let mut x = x;
        for &b in u {
            if x & top(b) != 0 {
                x ^= b;
            }
        }
        if x != 0 {
            rest[n] = x;
            n += 1;
        }
    }
    // rank of the reduced W rows
    let mut independent = 0;
    let rows = &mut rest[..n];
    for i in 0..rows.len() {
        let x = rows[i];
        if x == 0 {
            continue;
        }
        independent += 1;
        let t = top(x);
        for y in rows[i + 1..].iter_mut() {
            if *y & t != 0 {
                *y ^= x;
            }
        }
    }
    w.len() - independent
}

/// Row vector times matrix, `x · M`, with `M` given by its packed rows.
#[inline]
pub fn vec_mul(mut x: u64, m: &[u64]) -> u64 {
    let mut out = 0;
    while x != 0 {
        let c = pivot_col(x);
        out ^= m[c];
        x &= !bit(c);
    }
    out
}
