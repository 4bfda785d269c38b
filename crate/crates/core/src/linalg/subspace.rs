use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::gf::Field;
use crate::linalg::{bits, FqMatrix, LinalgError};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Rows {
    /// GF(2) with `v <= 64`: one packed word per basis row.
    Bits(Box<[u64]>),
    /// Everything else: `dim * v` entries, row-major.
    Dense(Box<[u16]>),
}

/// A subspace of `F_q^v`, stored as its canonical RREF basis (no zero rows).
///
/// Equality, hashing and ordering all go through the canonical basis, so two
/// values are equal exactly when they span the same space. The order is the
/// lexicographic order of the RREF entries read row by row.
#[derive(Clone)]
pub struct Subspace {
    field: Field,
    v: usize,
    rows: Rows,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.v == other.v && self.rows == other.rows
    }
}

impl Eq for Subspace {}

impl Hash for Subspace {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.v.hash(state);
        self.rows.hash(state);
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .q()
            .cmp(&other.field.q())
            .then(self.v.cmp(&other.v))
            .then(self.dim().cmp(&other.dim()))
            .then_with(|| self.rows.cmp(&other.rows))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(q={}, v={}, dim={}; ",
            self.field.q(),
            self.v,
            self.dim()
        )?;
        let b = self.basis();
        let rows: Vec<String> = (0..b.rows())
            .map(|r| {
                b.row(r)
                    .iter()
                    .map(|x| char::from_digit(*x as u32, 36).unwrap_or('?'))
                    .collect()
            })
            .collect();
        write!(f, "[{}])", rows.join(" "))
    }
}

/// Binary indicator of the pivot columns of a subspace's canonical basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PivotVector(Vec<bool>);

impl PivotVector {
    pub fn new(bits: Vec<bool>) -> PivotVector {
        PivotVector(bits)
    }

    pub fn from_positions(len: usize, positions: &[usize]) -> PivotVector {
        let mut b = vec![false; len];
        for &p in positions {
            b[p] = true;
        }
        PivotVector(b)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn positions(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn hamming(&self, other: &PivotVector) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }
}

impl std::str::FromStr for PivotVector {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(LinalgError::Parse(format!("pivot vector symbol {other:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(PivotVector)
    }
}

impl fmt::Display for PivotVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

fn packs(field: &Field, v: usize) -> bool {
    field.is_binary() && v <= 64
}

impl Subspace {
    /// Row space of `rows`; the result may have smaller dimension than the
    /// number of rows.
    pub fn from_rows(rows: &FqMatrix) -> Subspace {
        let field = rows.field().clone();
        let v = rows.cols();
        if packs(&field, v) {
            return Subspace {
                field,
                v,
                rows: Rows::Bits(bits::rref(&rows.to_bits()).into()),
            };
        }
        let (r, pivots) = rows.rref();
        let k = pivots.len();
        Subspace {
            field,
            v,
            rows: Rows::Dense(r.data()[..k * v].into()),
        }
    }

    /// Row space of the given vectors in `F_q^v`.
    pub fn span<R: AsRef<[u16]>>(
        field: &Field,
        v: usize,
        vectors: &[R],
    ) -> Result<Subspace, LinalgError> {
        let mut data = Vec::with_capacity(vectors.len() * v);
        for x in vectors {
            let x = x.as_ref();
            if x.len() != v {
                return Err(LinalgError::AmbientMismatch(v, x.len()));
            }
            data.extend_from_slice(x);
        }
        Ok(Subspace::from_rows(&FqMatrix::from_data(
            field,
            vectors.len(),
            v,
            data,
        )?))
    }

    pub(crate) fn from_packed(field: &Field, v: usize, rows: Vec<u64>) -> Subspace {
        debug_assert!(packs(field, v));
        Subspace {
            field: field.clone(),
            v,
            rows: Rows::Bits(bits::rref(&rows).into()),
        }
    }

    /// Wraps rows that are already a canonical RREF basis (packed GF(2)).
    pub(crate) fn from_canonical_packed(field: &Field, v: usize, rows: Vec<u64>) -> Subspace {
        debug_assert_eq!(bits::rref(&rows), rows);
        Subspace {
            field: field.clone(),
            v,
            rows: Rows::Bits(rows.into()),
        }
    }

    pub fn zero(field: &Field, v: usize) -> Subspace {
        let rows = if packs(field, v) {
            Rows::Bits(Box::new([]))
        } else {
            Rows::Dense(Box::new([]))
        };
        Subspace {
            field: field.clone(),
            v,
            rows,
        }
    }

    pub fn whole(field: &Field, v: usize) -> Subspace {
        Subspace::from_rows(&FqMatrix::identity(field, v))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.v
    }

    pub fn dim(&self) -> usize {
        match &self.rows {
            Rows::Bits(r) => r.len(),
            Rows::Dense(d) => d.len().checked_div(self.v).unwrap_or(0),
        }
    }

    pub(crate) fn packed(&self) -> Option<&[u64]> {
        match &self.rows {
            Rows::Bits(r) => Some(r),
            Rows::Dense(_) => None,
        }
    }

    /// The canonical basis as a `dim × v` matrix in RREF.
    pub fn basis(&self) -> FqMatrix {
        match &self.rows {
            Rows::Bits(r) => FqMatrix::from_bits(&self.field, r, self.v),
            Rows::Dense(d) => FqMatrix::from_data(&self.field, self.dim(), self.v, d.to_vec())
                .expect("canonical basis"),
        }
    }

    /// Canonical basis rows as digit strings.
    pub fn to_strings(&self) -> Vec<String> {
        let b = self.basis();
        (0..b.rows())
            .map(|r| {
                b.row(r)
                    .iter()
                    .map(|&x| char::from_digit(x as u32, 36).unwrap_or('?'))
                    .collect()
            })
            .collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        match &self.rows {
            Rows::Bits(r) => r.iter().map(|&x| bits::pivot_col(x)).collect(),
            Rows::Dense(d) => d
                .chunks(self.v)
                .map(|row| {
                    row.iter()
                        .position(|&x| x != 0)
                        .expect("basis rows are nonzero")
                })
                .collect(),
        }
    }

    pub fn pivot_vector(&self) -> PivotVector {
        PivotVector::from_positions(self.v, &self.pivots())
    }

    fn check(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.v != other.v {
            return Err(LinalgError::AmbientMismatch(self.v, other.v));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        if let (Some(a), Some(b)) = (self.packed(), other.packed()) {
            let rows: Vec<u64> = a.iter().chain(b).copied().collect();
            return Ok(Subspace::from_packed(&self.field, self.v, rows));
        }
        Ok(Subspace::from_rows(&self.basis().vstack(&other.basis())?))
    }

    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize, LinalgError> {
        self.check(other)?;
        Ok(self.intersection_dim_unchecked(other))
    }

    /// `dim(U ∩ W)` without the field/ambient check, for hot loops over
    /// values already known to be compatible.
    #[inline]
    pub fn intersection_dim_unchecked(&self, other: &Subspace) -> usize {
        if let (Some(a), Some(b)) = (self.packed(), other.packed()) {
            return bits::intersection_dim(a, b);
        }
        let total = self
            .basis()
            .vstack(&other.basis())
            .expect("same ambient")
            .rank();
        self.dim() + other.dim() - total
    }

    /// `dim(U+W) - dim(U ∩ W)`.
    pub fn distance(&self, other: &Subspace) -> Result<usize, LinalgError> {
        let i = self.intersection_dim(other)?;
        Ok(self.dim() + other.dim() - 2 * i)
    }

    /// `U ∩ W` via the Zassenhaus sum-intersection algorithm.
    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check(other)?;
        let v = self.v;
        let (a, b) = (self.basis(), other.basis());
        let zeros = FqMatrix::zeros(&self.field, b.rows(), v);
        let top = a.hstack(&a)?;
        let bottom = b.hstack(&zeros)?;
        let (r, pivots) = top.vstack(&bottom)?.rref();
        let rows: Vec<Vec<u16>> = (0..pivots.len())
            .filter(|&i| pivots[i] >= v)
            .map(|i| r.row(i)[v..].to_vec())
            .collect();
        Subspace::span(&self.field, v, &rows)
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, LinalgError> {
        Ok(self.intersection_dim(other)? == other.dim())
    }

    pub fn contains_vector(&self, x: &[u16]) -> Result<bool, LinalgError> {
        let line = Subspace::span(&self.field, self.v, &[x])?;
        self.contains(&line)
    }

    /// Span of the first `m` canonical basis rows; a fixed choice of an
    /// `m`-dimensional subspace of `self`.
    pub fn select(&self, m: usize) -> Result<Subspace, LinalgError> {
        if m > self.dim() {
            return Err(LinalgError::DimensionTooLarge {
                requested: m,
                available: self.dim(),
            });
        }
        let rows = match &self.rows {
            Rows::Bits(r) => Rows::Bits(r[..m].into()),
            Rows::Dense(d) => Rows::Dense(d[..m * self.v].into()),
        };
        // A prefix of an RREF basis is still canonical.
        Ok(Subspace {
            field: self.field.clone(),
            v: self.v,
            rows,
        })
    }

    /// Complement obtained by adding standard unit vectors `e_0, e_1, ...` in
    /// order whenever they enlarge the span; returns the span of the added
    /// vectors.
    pub fn complement_through(&self) -> Subspace {
        let v = self.v;
        let mut acc = self.clone();
        let mut added: Vec<Vec<u16>> = Vec::new();
        for j in 0..v {
            if acc.dim() == v {
                break;
            }
            let mut e = vec![0u16; v];
            e[j] = 1;
            let line = Subspace::span(&self.field, v, &[&e]).expect("unit vector");
            if acc.intersection_dim_unchecked(&line) == 0 {
                acc = acc.sum(&line).expect("same ambient");
                added.push(e);
            }
        }
        Subspace::span(&self.field, v, &added).expect("unit vectors")
    }

    /// A complement of `inner` inside `self`, built greedily from the
    /// canonical basis rows of `self`. `inner` must be contained in `self`.
    pub fn complement_within(&self, inner: &Subspace) -> Result<Subspace, LinalgError> {
        if !self.contains(inner)? {
            return Err(LinalgError::NotContained);
        }
        let basis = self.basis();
        let mut acc = inner.clone();
        let mut picked = Vec::new();
        for r in 0..basis.rows() {
            let row = basis.row(r).to_vec();
            let line = Subspace::span(&self.field, self.v, &[&row])?;
            if acc.intersection_dim_unchecked(&line) == 0 {
                acc = acc.sum(&line)?;
                picked.push(row);
            }
        }
        Subspace::span(&self.field, self.v, &picked)
    }

    /// Orthogonal complement under the standard dot product.
    pub fn orthogonal_complement(&self) -> Subspace {
        let v = self.v;
        let f = &self.field;
        let basis = self.basis();
        let pivots = self.pivots();
        let free: Vec<usize> = (0..v).filter(|c| !pivots.contains(c)).collect();
        // For RREF rows r_i with pivot p_i, the null space is spanned by one
        // vector per free column j: e_j - sum_i r_i[j] e_{p_i}.
        let rows: Vec<Vec<u16>> = free
            .iter()
            .map(|&j| {
                let mut x = vec![0u16; v];
                x[j] = 1;
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = f.neg(basis.get(i, j));
                }
                x
            })
            .collect();
        Subspace::span(f, v, &rows).expect("null space basis")
    }

    /// Image under `x ↦ x · g` for a `v × v` matrix `g`.
    pub fn apply(&self, g: &FqMatrix) -> Result<Subspace, LinalgError> {
        if g.shape() != (self.v, self.v) {
            return Err(LinalgError::ShapeMismatch {
                expected: (self.v, self.v),
                got: g.shape(),
            });
        }
        if self.packed().is_some() {
            return Ok(self.apply_packed(&g.to_bits()));
        }
        Ok(Subspace::from_rows(&self.basis().mul(g)?))
    }

    /// Image under a packed GF(2) matrix; see [`Subspace::apply`].
    #[inline]
    pub(crate) fn apply_packed(&self, g: &[u64]) -> Subspace {
        let r = self.packed().expect("packed subspace");
        let rows: Vec<u64> = r.iter().map(|&x| bits::vec_mul(x, g)).collect();
        Subspace::from_packed(&self.field, self.v, rows)
    }

    /// Every vector of the subspace; for small tests only.
    pub fn vectors(&self) -> Vec<Vec<u16>> {
        let f = &self.field;
        let q = f.q() as usize;
        let b = self.basis();
        let k = b.rows();
        let total = q.pow(k as u32);
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut x = vec![0u16; self.v];
            let mut rest = idx;
            for r in 0..k {
                let c = (rest % q) as u16;
                rest /= q;
                if c != 0 {
                    for (xj, &bj) in x.iter_mut().zip(b.row(r)) {
                        *xj = f.add(*xj, f.mul(c, bj));
                    }
                }
            }
            out.push(x);
        }
        out
    }

    /// Whether `U ∩ Γ = {0}`.
    pub fn avoids(&self, gamma: &Subspace) -> Result<bool, LinalgError> {
        Ok(self.intersection_dim(gamma)? == 0)
    }
}

/// The `(v-k)`-dimensional subspace of vectors whose first `k` coordinates
/// vanish.
pub fn gamma(field: &Field, v: usize, k: usize) -> Result<Subspace, LinalgError> {
    if k > v {
        return Err(LinalgError::DimensionTooLarge {
            requested: k,
            available: v,
        });
    }
    let mut m = FqMatrix::zeros(field, v - k, v);
    for i in 0..v - k {
        m.set(i, k + i, 1);
    }
    Ok(Subspace::from_rows(&m))
}
