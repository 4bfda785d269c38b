//! Constant dimension codes: lifting, Echelon–Ferrers assembly, exact
//! verification and the `S_t` diagnostics relative to the special flat Γ.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::gf::Field;
use crate::linalg::{bits, gamma, grassmannian, FqMatrix, LinalgError, PivotVector, Subspace};
use crate::qcomb;
use crate::rankmetric::{block_compose, gabidulin, RankCode, RankError, MATERIALIZE_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CdcError {
    #[error("codeword {index} has dimension {dim}, expected {k}")]
    DimensionMismatch { index: usize, dim: usize, k: usize },
    #[error("codeword {index} lives in F_q^{got}, expected F_q^{v}")]
    AmbientMismatch { index: usize, got: usize, v: usize },
    #[error("codeword {0} is over a different field")]
    FieldMismatch(usize),
    #[error("pivot vector {index} has length {len} and weight {weight}, expected {v} and {k}")]
    WeightMismatch {
        index: usize,
        len: usize,
        weight: usize,
        v: usize,
        k: usize,
    },
    #[error("subcode {cell} is {got:?}, expected {expected:?}")]
    SubcodeShape {
        cell: usize,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("subcode {cell} writes a nonzero entry at row {row}, column {col}, left of the pivot")]
    ShapeViolation { cell: usize, row: usize, col: usize },
    #[error("skeleton and subcode lists differ in length ({0} vs {1})")]
    CellCount(usize, usize),
    #[error("codeword {index} meets Γ in dimension {t} < {min}")]
    ProfileViolation { index: usize, t: usize, min: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A set of `k`-subspaces of `F_q^v` with a claimed minimum distance.
/// Codewords are kept sorted in canonical order and deduplicated.
#[derive(Debug, Clone)]
pub struct Cdc {
    field: Field,
    v: usize,
    k: usize,
    claimed_d: usize,
    codewords: Vec<Subspace>,
    duplicates: usize,
    verified: bool,
    pub provenance: Vec<String>,
}

/// Outcome of [`verify_cdc`]. `witness` indexes a pair at minimum distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub min_distance: Option<usize>,
    pub witness: Option<(usize, usize)>,
    pub claimed: usize,
    pub route: Route,
}

impl Verification {
    pub fn meets_claim(&self) -> bool {
        self.min_distance.is_none_or(|d| d >= self.claimed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Pairwise,
    Subspaces,
}

impl Cdc {
    pub fn new(
        field: &Field,
        v: usize,
        k: usize,
        claimed_d: usize,
        words: Vec<Subspace>,
    ) -> Result<Cdc, CdcError> {
        for (index, w) in words.iter().enumerate() {
            if w.field() != field {
                return Err(CdcError::FieldMismatch(index));
            }
            if w.ambient_dim() != v {
                return Err(CdcError::AmbientMismatch {
                    index,
                    got: w.ambient_dim(),
                    v,
                });
            }
            if w.dim() != k {
                return Err(CdcError::DimensionMismatch {
                    index,
                    dim: w.dim(),
                    k,
                });
            }
        }
        let mut codewords = words;
        let before = codewords.len();
        codewords.par_sort_unstable();
        codewords.dedup();
        let duplicates = before - codewords.len();
        Ok(Cdc {
            field: field.clone(),
            v,
            k,
            claimed_d,
            codewords,
            duplicates,
            verified: false,
            provenance: Vec::new(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn claimed_d(&self) -> usize {
        self.claimed_d
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn codewords(&self) -> &[Subspace] {
        &self.codewords
    }

    pub fn contains(&self, u: &Subspace) -> bool {
        self.codewords.binary_search(u).is_ok()
    }

    /// Number of duplicate inputs dropped by [`Cdc::new`].
    pub fn duplicates_removed(&self) -> usize {
        self.duplicates
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Runs [`verify_cdc`] and sets the verified flag when the claim holds.
    pub fn verify(&mut self) -> Verification {
        let report = verify_cdc(self);
        self.verified = report.meets_claim();
        report
    }

    /// Union with `other`; the claimed distance is the smaller of the two.
    pub fn union(&self, other: &Cdc) -> Result<Cdc, CdcError> {
        let words = self
            .codewords
            .iter()
            .chain(&other.codewords)
            .cloned()
            .collect();
        let mut out = Cdc::new(
            &self.field,
            self.v,
            self.k,
            self.claimed_d.min(other.claimed_d),
            words,
        )?;
        out.provenance = self
            .provenance
            .iter()
            .chain(&other.provenance)
            .cloned()
            .collect();
        Ok(out)
    }

    /// Orthogonal complements of all codewords: a `(v, M, d; v-k)` code.
    pub fn dual(&self) -> Cdc {
        let words = self
            .codewords
            .par_iter()
            .map(Subspace::orthogonal_complement)
            .collect();
        let mut out = Cdc::new(&self.field, self.v, self.v - self.k, self.claimed_d, words)
            .expect("complements share dimension");
        out.provenance = self.provenance.clone();
        out.provenance.push("dual".into());
        out
    }

    pub fn with_claimed_d(mut self, d: usize) -> Cdc {
        self.claimed_d = d;
        self.verified = false;
        self
    }
}

/// `{rowspan(I_k | A) : A ∈ mrd}` with claimed distance `2δ`.
pub fn lift(mrd: &RankCode) -> Result<Cdc, CdcError> {
    let (k, n) = mrd.shape();
    let field = mrd.field();
    let id = FqMatrix::identity(field, k);
    let words: Vec<Subspace> = mrd
        .codewords()?
        .par_iter()
        .map(|a| Subspace::from_rows(&id.hstack(a).expect("k rows")))
        .collect();
    let mut c = Cdc::new(field, k + n, k, 2 * mrd.claimed_distance(), words)?;
    c.provenance.push(format!(
        "lift of a {k}x{n} rank-metric code with d_r = {}",
        mrd.claimed_distance()
    ));
    Ok(c)
}

/// The lifted Gabidulin code with pivot vector `1_k 0_{v-k}` and distance `d`.
pub fn standard_lmrd(field: &Field, v: usize, k: usize, d: usize) -> Result<Cdc, CdcError> {
    if !d.is_multiple_of(2) || d < 2 || d / 2 > k.min(v - k) {
        return Err(CdcError::InvalidParameters(format!(
            "no LMRD for v={v} k={k} d={d}"
        )));
    }
    lift(&gabidulin(field, k, v - k, d / 2)?)
}

/// Number of `t`-subspaces a single `k`-space contributes to the subspace index.
fn index_cost(q: u32, k: usize, t: usize) -> f64 {
    qcomb::q_binomial(k as i64, t as i64, q)
        .to_string()
        .parse::<f64>()
        .unwrap_or(f64::INFINITY)
}

/// Exact minimum distance and a witness pair.
///
/// Uses whichever is cheaper: all pairs, or an index of the `t`-subspaces
/// of every codeword (a shared `t`-subspace means intersection dimension at
/// least `t`). Both routes give identical results.
pub fn verify_cdc(c: &Cdc) -> Verification {
    let n = c.len() as f64;
    let t0 = start_level(c);
    let pair_cost = n * (n - 1.0) / 2.0;
    let index = 3.0 * n * index_cost(c.field.q(), c.k, t0) * 8.0;
    if index < pair_cost {
        verify_by_subspaces(c)
    } else {
        verify_pairwise(c)
    }
}

fn start_level(c: &Cdc) -> usize {
    (c.k + 1)
        .saturating_sub(c.claimed_d / 2)
        .clamp(1, c.k.max(1))
}

fn result(c: &Cdc, max_meet: Option<(usize, (usize, usize))>, route: Route) -> Verification {
    Verification {
        min_distance: max_meet.map(|(m, _)| 2 * (c.k - m)),
        witness: max_meet.map(|(_, w)| w),
        claimed: c.claimed_d,
        route,
    }
}

/// Every pair; stops early once some pair meets in dimension `k - 1`.
pub fn verify_pairwise(c: &Cdc) -> Verification {
    let words = &c.codewords;
    if words.len() < 2 {
        return result(c, None, Route::Pairwise);
    }
    let ceiling = c.k.saturating_sub(1);
    let best = (0..words.len())
        .into_par_iter()
        .filter_map(|i| {
            let mut best: Option<(usize, (usize, usize))> = None;
            for j in i + 1..words.len() {
                let m = words[i].intersection_dim_unchecked(&words[j]);
                if best.is_none_or(|(b, _)| m > b) {
                    best = Some((m, (i, j)));
                    if m == ceiling {
                        break;
                    }
                }
            }
            best
        })
        .reduce_with(|a, b| {
            if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                b
            } else {
                a
            }
        });
    result(c, best, Route::Pairwise)
}

/// Subspace-index route.
pub fn verify_by_subspaces(c: &Cdc) -> Verification {
    if c.len() < 2 {
        return result(c, None, Route::Subspaces);
    }
    if c.k == 0 {
        return result(c, Some((0, (0, 1))), Route::Subspaces);
    }
    let t0 = start_level(c);
    let hit = |t: usize| shared_subspace(c, t);
    let best = match hit(t0) {
        Some(w) => {
            let mut best = (t0, w);
            for t in t0 + 1..c.k {
                match hit(t) {
                    Some(w) => best = (t, w),
                    None => break,
                }
            }
            best
        }
        None => {
            let mut found = None;
            for t in (1..t0).rev() {
                if let Some(w) = hit(t) {
                    found = Some((t, w));
                    break;
                }
            }
            found.unwrap_or((0, (0, 1)))
        }
    };
    // report the pair's true meet, which may exceed the level it was found at
    let (i, j) = best.1;
    let m = c.codewords[i].intersection_dim_unchecked(&c.codewords[j]);
    debug_assert!(m >= best.0);
    result(c, Some((m, (i, j))), Route::Subspaces)
}

/// A pair of codewords sharing some `t`-subspace, if any. The index keys are
/// hashes; every hash match is confirmed by an exact intersection.
fn shared_subspace(c: &Cdc, t: usize) -> Option<(usize, usize)> {
    let coeffs = grassmannian(&c.field, c.k, t);
    let keys: Vec<Vec<u64>> = c
        .codewords
        .par_iter()
        .map(|u| subspaces_of(u, &coeffs).iter().map(hash_of).collect())
        .collect();
    let mut seen: HashMap<u64, u32> = HashMap::with_capacity(keys.iter().map(Vec::len).sum());
    let mut best: Option<(usize, usize)> = None;
    for (j, ks) in keys.iter().enumerate() {
        for &key in ks {
            if let Some(&i) = seen.get(&key) {
                let i = i as usize;
                if i != j && c.codewords[i].intersection_dim_unchecked(&c.codewords[j]) >= t {
                    let pair = (i, j);
                    if best.is_none_or(|b| pair < b) {
                        best = Some(pair);
                    }
                }
            } else {
                seen.insert(key, j as u32);
            }
        }
    }
    best
}

fn hash_of(s: &Subspace) -> u64 {
    let mut h = DefaultHasher::new();
    s.hash(&mut h);
    h.finish()
}

/// All subspaces of `u` spanned by `C · basis(u)` for each `C` in `coeffs`,
/// the subspaces of `F_q^{dim u}` of one dimension.
pub fn subspaces_of(u: &Subspace, coeffs: &[Subspace]) -> Vec<Subspace> {
    if let Some(rows) = u.packed() {
        return coeffs
            .iter()
            .map(|cf| {
                let c = cf.packed().expect("binary coefficients pack");
                let combined: Vec<u64> = c.iter().map(|&x| bits::vec_mul(x, rows)).collect();
                Subspace::from_canonical_packed(u.field(), u.ambient_dim(), bits::rref(&combined))
            })
            .collect();
    }
    let b = u.basis();
    coeffs
        .iter()
        .map(|cf| Subspace::from_rows(&cf.basis().mul(&b).expect("dim u columns")))
        .collect()
}

/// Echelon–Ferrers assembly. Cell `i` places each codeword of `subcodes[i]`
/// (a `k x (v-k)` matrix) into the non-pivot columns of the RREF matrix with
/// pivots `skeleton[i]`, in column order.
///
/// The claimed distance is the smaller of the minimum Hamming distance of the
/// skeleton and `2δ_i` over cells with more than one codeword.
pub fn echelon_ferrers(
    field: &Field,
    skeleton: &[PivotVector],
    subcodes: &[RankCode],
) -> Result<Cdc, CdcError> {
    if skeleton.len() != subcodes.len() {
        return Err(CdcError::CellCount(skeleton.len(), subcodes.len()));
    }
    let Some(first) = skeleton.first() else {
        return Err(CdcError::InvalidParameters("empty skeleton".into()));
    };
    let (v, k) = (first.len(), first.weight());
    for (index, p) in skeleton.iter().enumerate() {
        if p.len() != v || p.weight() != k {
            return Err(CdcError::WeightMismatch {
                index,
                len: p.len(),
                weight: p.weight(),
                v,
                k,
            });
        }
    }
    let mut claimed = 2 * k.min(v - k);
    for i in 0..skeleton.len() {
        for j in i + 1..skeleton.len() {
            claimed = claimed.min(skeleton[i].hamming(&skeleton[j]));
        }
    }
    let mut words = Vec::new();
    for (cell, (pv, code)) in skeleton.iter().zip(subcodes).enumerate() {
        if code.shape() != (k, v - k) {
            return Err(CdcError::SubcodeShape {
                cell,
                expected: (k, v - k),
                got: code.shape(),
            });
        }
        if code.size_u64().is_none_or(|s| s > 1) {
            claimed = claimed.min(2 * code.claimed_distance());
        }
        let pivots = pv.positions();
        let free: Vec<usize> = (0..v).filter(|c| !pv.bits()[*c]).collect();
        let check = |m: &FqMatrix| -> Result<(), CdcError> {
            for (row, &p) in pivots.iter().enumerate() {
                for (j, &col) in free.iter().enumerate() {
                    if col < p && m.get(row, j) != 0 {
                        return Err(CdcError::ShapeViolation { cell, row, col });
                    }
                }
            }
            Ok(())
        };
        // a linear code fits iff its basis does
        match code.generator_basis() {
            Some(basis) => basis.iter().try_for_each(check)?,
            None => code.codewords()?.iter().try_for_each(check)?,
        }
        if code.size_u64().is_none_or(|s| s > MATERIALIZE_CAP) {
            return Err(RankError::TooLarge(code.size().to_string(), MATERIALIZE_CAP).into());
        }
        let cell_words: Vec<Subspace> = code
            .codewords()?
            .par_iter()
            .map(|m| {
                let mut full = FqMatrix::zeros(field, k, v);
                for (row, &p) in pivots.iter().enumerate() {
                    full.set(row, p, 1);
                    for (j, &col) in free.iter().enumerate() {
                        full.set(row, col, m.get(row, j));
                    }
                }
                Subspace::from_rows(&full)
            })
            .collect();
        words.extend(cell_words);
    }
    let mut c = Cdc::new(field, v, k, claimed, words)?;
    c.provenance.push(format!(
        "echelon-ferrers with pivot vectors {}",
        skeleton
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    ));
    Ok(c)
}

fn blocks(widths: &[usize], on: &[bool]) -> PivotVector {
    PivotVector::new(
        widths
            .iter()
            .zip(on)
            .flat_map(|(&w, &b)| std::iter::repeat_n(b, w))
            .collect(),
    )
}

/// `(6l, q^{3l(l+1)} + q^{2l} + q^l + 1, 4l; 3l)_q`.
pub fn family_6l(field: &Field, l: usize) -> Result<Cdc, CdcError> {
    if l == 0 {
        return Err(CdcError::InvalidParameters("l must be at least 1".into()));
    }
    let w = [l; 6];
    let (k, n) = (3 * l, 3 * l);
    let skeleton = vec![
        blocks(&w, &[true, true, true, false, false, false]),
        blocks(&w, &[true, false, false, true, true, false]),
        blocks(&w, &[false, true, false, true, false, true]),
        blocks(&w, &[false, false, true, false, true, true]),
    ];
    let lmrd = gabidulin(field, k, n, 2 * l)?;
    let second = block_compose(
        &gabidulin(field, l, 2 * l, l)?,
        &gabidulin(field, 2 * l, l, l)?,
    )?;
    let third =
        block_compose(&gabidulin(field, l, l, l)?, &gabidulin(field, l, l, l)?)?.pad(k, n, 0, l)?;
    let fourth = RankCode::zero(field, k, n);
    let mut c = echelon_ferrers(field, &skeleton, &[lmrd, second, third, fourth])?;
    c.provenance
        .push(format!("family 6l, q={}, l={l}", field.q()));
    Ok(c)
}

/// `(6+3l, q^{6+4l} + q^{2+l} + 1, 4+2l; 3+l)_q`.
pub fn family_6_3l(field: &Field, l: usize) -> Result<Cdc, CdcError> {
    if l == 0 {
        return Err(CdcError::InvalidParameters("l must be at least 1".into()));
    }
    let w = [1, 1 + l, 1, 1 + l, 1, 1 + l];
    let (k, n) = (3 + l, 3 + 2 * l);
    let skeleton = vec![
        blocks(&w, &[true, true, true, false, false, false]),
        blocks(&w, &[true, false, false, true, true, false]),
        blocks(&w, &[false, false, true, false, true, true]),
    ];
    let lmrd = gabidulin(field, k, n, 2 + l)?;
    let second = block_compose(
        &gabidulin(field, 1, 2 + l, 1)?,
        &gabidulin(field, 2 + l, 1 + l, 1 + l)?,
    )?;
    let third = RankCode::zero(field, k, n);
    let mut c = echelon_ferrers(field, &skeleton, &[lmrd, second, third])?;
    c.provenance
        .push(format!("family 6+3l, q={}, l={l}", field.q()));
    Ok(c)
}

/// Histogram of `dim(U ∩ Γ)` over codewords outside the standard LMRD.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StProfile {
    /// Codewords with pivot vector `1_k 0_{v-k}`.
    pub lmrd_count: usize,
    /// `t -> |S_t|` for `d/2 <= t <= k`.
    pub counts: BTreeMap<usize, usize>,
}

impl StProfile {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }
}

pub fn st_profile(c: &Cdc) -> Result<StProfile, CdcError> {
    let (v, k) = (c.v, c.k);
    let g = gamma(&c.field, v, k)?;
    let lmrd_pv = PivotVector::from_positions(v, &(0..k).collect::<Vec<_>>());
    let lo = c.claimed_d / 2;
    let mut counts: BTreeMap<usize, usize> = (lo..=k).map(|t| (t, 0)).collect();
    let mut lmrd_count = 0;
    for (index, u) in c.codewords.iter().enumerate() {
        if u.pivot_vector() == lmrd_pv {
            lmrd_count += 1;
            continue;
        }
        let t = u.intersection_dim_unchecked(&g);
        if t < lo {
            return Err(CdcError::ProfileViolation { index, t, min: lo });
        }
        *counts.entry(t).or_default() += 1;
    }
    Ok(StProfile { lmrd_count, counts })
}

/// Pairs checked against `d_S(A∩Γ, B∩Γ) >= d_S(A,B) - 2k + a + b` with
/// `a = dim(A∩Γ)`, `b = dim(B∩Γ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeetRelationReport {
    pub pairs: u64,
    pub violations: u64,
}

/// Checks the relation on every pair with `a + b > 0`; when `a = b = 0` the
/// right side is at most `0` and the pair holds trivially.
pub fn meet_relation_check(c: &Cdc) -> Result<MeetRelationReport, CdcError> {
    let g = gamma(&c.field, c.v, c.k)?;
    let k = c.k as i64;
    let meets: Vec<(usize, Subspace)> = c
        .codewords
        .par_iter()
        .map(|u| u.intersection(&g).map(|m| (m.dim(), m)))
        .collect::<Result<_, _>>()?;
    let touching: Vec<usize> = (0..meets.len()).filter(|&i| meets[i].0 > 0).collect();
    let (pairs, violations) = touching
        .par_iter()
        .map(|&i| {
            let (a, ga) = &meets[i];
            let a_word = &c.codewords[i];
            let mut pairs = 0u64;
            let mut bad = 0u64;
            for (j, (b, gb)) in meets.iter().enumerate() {
                // pairs inside `touching` are visited once, from the lower index
                if j == i || (*b > 0 && j < i) {
                    continue;
                }
                pairs += 1;
                let ds = 2 * (k - a_word.intersection_dim_unchecked(&c.codewords[j]) as i64);
                let dg = (*a + *b) as i64 - 2 * ga.intersection_dim_unchecked(gb) as i64;
                if dg < ds - 2 * k + (*a + *b) as i64 {
                    bad += 1;
                }
            }
            (pairs, bad)
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    Ok(MeetRelationReport { pairs, violations })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    /// Dimension of the covered subspaces, `k - d/2 + 1`.
    pub c: usize,
    /// `q^{c(v-k)} [k, c]_q`.
    pub expected: u64,
    /// Distinct `c`-subspaces found inside codewords.
    pub covered: usize,
    /// Largest number of codewords containing one such subspace.
    pub max_multiplicity: usize,
    /// All avoiding subspaces of `F_q^v`, enumerated directly.
    pub avoiding: usize,
    pub exact: bool,
}

/// Checks that every `(k-d/2+1)`-subspace meeting Γ trivially lies in exactly
/// one codeword. Enumerates the whole Grassmannian, so keep parameters small.
pub fn lemma4_coverage_check(m: &Cdc) -> Result<CoverageReport, CdcError> {
    let (v, k, q) = (m.v, m.k, m.field.q());
    let c = (k + 1)
        .checked_sub(m.claimed_d / 2)
        .filter(|&c| c >= 1 && c <= k)
        .ok_or_else(|| {
            CdcError::InvalidParameters(format!(
                "k - d/2 + 1 out of range for k={k} d={}",
                m.claimed_d
            ))
        })?;
    let g = gamma(&m.field, v, k)?;
    let coeffs = grassmannian(&m.field, k, c);
    let mut multiplicity: HashMap<Subspace, usize> = HashMap::new();
    for u in &m.codewords {
        for s in subspaces_of(u, &coeffs) {
            if s.avoids(&g)? {
                *multiplicity.entry(s).or_default() += 1;
            }
        }
    }
    let avoiding: Vec<Subspace> = grassmannian(&m.field, v, c)
        .into_iter()
        .filter(|s| s.avoids(&g).expect("same ambient"))
        .collect();
    let expected = qcomb::count_avoiding(v as i64, (v - k) as i64, c as i64, q);
    let expected: u64 = expected
        .try_into()
        .map_err(|_| CdcError::InvalidParameters("count overflow".into()))?;
    let max_multiplicity = multiplicity.values().copied().max().unwrap_or(0);
    let exact = max_multiplicity == 1
        && multiplicity.len() == avoiding.len()
        && avoiding.iter().all(|s| multiplicity.contains_key(s))
        && avoiding.len() as u64 == expected;
    Ok(CoverageReport {
        c,
        expected,
        covered: multiplicity.len(),
        max_multiplicity,
        avoiding: avoiding.len(),
        exact,
    })
}
