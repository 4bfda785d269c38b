//! Enumeration of Grassmannians in a fixed, documented order.
//!
//! Subspaces are produced in lexicographic order of their canonical RREF
//! matrices read row by row, which is also the `Ord` order of [`Subspace`].
//! Callers that index into the enumeration (the random extension search does)
//! rely on this order being stable.

use crate::gf::Field;
use crate::linalg::{bits, FqMatrix, Subspace};

struct Walk<'a, F: FnMut(&[u16])> {
    q: u16,
    v: usize,
    k: usize,
    entries: Vec<u16>,
    emit: &'a mut F,
}

impl<F: FnMut(&[u16])> Walk<'_, F> {
    /// Columns strictly after `after` that may still host a pivot.
    fn room(forbidden: u128, after: Option<usize>, v: usize) -> usize {
        let start = after.map_or(0, |a| a + 1);
        (start..v)
            .filter(|&c| forbidden & (1u128 << c) == 0)
            .count()
    }

    /// `row_pivot`: pivot of the current row if already placed;
    /// `prev_pivot`: pivot of the previous row; `forbidden`: columns where
    /// an earlier row has a nonzero non-pivot entry.
    fn go(
        &mut self,
        i: usize,
        c: usize,
        row_pivot: Option<usize>,
        prev_pivot: Option<usize>,
        forbidden: u128,
    ) {
        if i == self.k {
            (self.emit)(&self.entries);
            return;
        }
        if c == self.v {
            if let Some(p) = row_pivot {
                self.go(i + 1, 0, None, Some(p), forbidden);
            }
            return;
        }
        let at = i * self.v + c;
        let remaining_rows = self.k - i;
        match row_pivot {
            None => {
                let pivot_allowed =
                    prev_pivot.is_none_or(|p| c > p) && forbidden & (1u128 << c) == 0;
                // value 0: the pivot comes later
                if Self::room(forbidden, Some(c.max(prev_pivot.unwrap_or(0))), self.v)
                    >= remaining_rows
                {
                    self.entries[at] = 0;
                    self.go(i, c + 1, None, prev_pivot, forbidden);
                }
                // value 1: pivot here
                if pivot_allowed && Self::room(forbidden, Some(c), self.v) >= remaining_rows - 1 {
                    self.entries[at] = 1;
                    self.go(i, c + 1, Some(c), prev_pivot, forbidden);
                    self.entries[at] = 0;
                }
            }
            Some(p) => {
                debug_assert!(c > p);
                self.entries[at] = 0;
                self.go(i, c + 1, row_pivot, prev_pivot, forbidden);
                let blocked = forbidden | (1u128 << c);
                if Self::room(blocked, Some(p), self.v) >= remaining_rows - 1 {
                    for x in 1..self.q {
                        self.entries[at] = x;
                        self.go(i, c + 1, row_pivot, prev_pivot, blocked);
                    }
                    self.entries[at] = 0;
                }
            }
        }
    }
}

/// Calls `f` on the row-major RREF entries of every `k`-subspace of `F_q^v`,
/// in lexicographic order. Requires `v <= 128`.
pub fn for_each_rref(field: &Field, v: usize, k: usize, mut f: impl FnMut(&[u16])) {
    assert!(v <= 128, "enumeration supports v <= 128");
    if k > v {
        return;
    }
    let mut walk = Walk {
        q: field.q() as u16,
        v,
        k,
        entries: vec![0; k * v],
        emit: &mut f,
    };
    walk.go(0, 0, None, None, 0);
}

/// Visits every `k`-subspace of `F_q^v` in canonical order.
pub fn for_each_subspace(field: &Field, v: usize, k: usize, mut f: impl FnMut(Subspace)) {
    let packed = field.is_binary() && v <= 64;
    for_each_rref(field, v, k, |entries| {
        let s = if packed {
            let rows = entries
                .chunks(v.max(1))
                .take(k)
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(_, &x)| x != 0)
                        .fold(0u64, |acc, (j, _)| acc | bits::bit(j))
                })
                .collect();
            Subspace::from_canonical_packed(field, v, rows)
        } else {
            Subspace::from_rows(
                &FqMatrix::from_data(field, k, v, entries.to_vec()).expect("rref entries"),
            )
        };
        f(s)
    });
}

/// All `k`-subspaces of `F_q^v`, in canonical order.
pub fn grassmannian(field: &Field, v: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    for_each_subspace(field, v, k, |s| out.push(s));
    out
}
