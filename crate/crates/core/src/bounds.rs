//! Upper bounds for constant dimension codes that contain a lifted MRD code,
//! with an `A_q(v, d; k)` resolver for the recursive summands.
//!
//! Everything is exact: integers and rationals throughout, one floor at the end.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf::prime_power;
use crate::qcomb::{pow, q_binomial, q_int, ratio};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("{0}")]
    PreconditionViolated(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("q = {0} is not a prime power")]
    InvalidField(u32),
}

fn pre(ok: bool, what: &str) -> Result<(), BoundsError> {
    if ok {
        Ok(())
    } else {
        Err(BoundsError::PreconditionViolated(format!(
            "{what} violated"
        )))
    }
}

/// Code parameters `(q, v, d, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Params {
    pub q: u32,
    pub v: i64,
    pub d: i64,
    pub k: i64,
}

impl Params {
    pub fn new(q: u32, v: i64, d: i64, k: i64) -> Params {
        Params { q, v, d, k }
    }

    /// Checks `q` and `2 <= d/2 <= k <= v/2` with `d` even.
    pub fn check_standard(&self) -> Result<(), BoundsError> {
        if prime_power(self.q).is_none() {
            return Err(BoundsError::InvalidField(self.q));
        }
        pre(self.d % 2 == 0, "d even")?;
        pre(2 <= self.d / 2, "2 ≤ d/2")?;
        pre(self.d / 2 <= self.k, "d/2 ≤ k")?;
        pre(2 * self.k <= self.v, "k ≤ v/2")
    }

    /// `q^{(v-k)(k-d/2+1)}`, the size of the lifted MRD code.
    pub fn lmrd_size(&self) -> BigInt {
        pow(
            self.q,
            ((self.v - self.k) * (self.k - self.d / 2 + 1)) as u64,
        )
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{}({},{};{})", self.q, self.v, self.d, self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Rule {
    Trivial,
    Singleton,
    PartialSpread,
    Prop1,
    Prop2 {
        c: i64,
        y: i64,
    },
    /// `k < d <= 2v/3`: the `prop1` bound.
    Prop0Case1,
    /// `k < d`, `v < 3d/2`: LMRD size plus one.
    Prop0Case2,
    /// `d <= k < 3d/2`: the `prop2` bound at the optimal `(c, y)`.
    Prop0Case3,
    SeededTable,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Trivial => write!(f, "trivial"),
            Rule::Singleton => write!(f, "Singleton bound"),
            Rule::PartialSpread => write!(f, "partial spread size"),
            Rule::Prop1 => write!(f, "LMRD plus S_t caps"),
            Rule::Prop2 { c, y } => write!(f, "split bound (c={c}, y={y})"),
            Rule::Prop0Case1 => write!(f, "k < d ≤ 2v/3: LMRD plus S_t caps"),
            Rule::Prop0Case2 => write!(f, "k < d, v < 3d/2: LMRD size + 1"),
            Rule::Prop0Case3 => write!(f, "d ≤ k < 3d/2: split bound at optimal (c, y)"),
            Rule::SeededTable => write!(f, "seeded table"),
        }
    }
}

fn big_as_string<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// An upper bound together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub params: Params,
    #[serde(serialize_with = "big_as_string")]
    pub value: BigInt,
    pub rule: Rule,
    pub notes: Vec<String>,
    pub sub_resolutions: Vec<BoundReport>,
}

impl BoundReport {
    pub fn new(params: Params, value: BigInt, rule: Rule) -> BoundReport {
        BoundReport {
            params,
            value,
            rule,
            notes: Vec::new(),
            sub_resolutions: Vec::new(),
        }
    }

    /// Indented human-readable trace.
    pub fn trace(&self) -> String {
        let mut out = String::new();
        self.trace_into(&mut out, 0);
        out
    }

    fn trace_into(&self, out: &mut String, depth: usize) {
        let pad = "  ".repeat(depth);
        out.push_str(&format!(
            "{pad}{} ≤ {}  [{}]\n",
            self.params, self.value, self.rule
        ));
        for n in &self.notes {
            out.push_str(&format!("{pad}  note: {n}\n"));
        }
        for s in &self.sub_resolutions {
            s.trace_into(out, depth + 1);
        }
    }
}

/// Singleton bound `[v-d/2+1, max(k, v-k)]_q`.
pub fn singleton(p: Params) -> Result<BigInt, BoundsError> {
    pre(p.d / 2 <= p.k.min(p.v - p.k), "d/2 ≤ min{k,v−k}")?;
    Ok(q_binomial(p.v - p.d / 2 + 1, p.k.max(p.v - p.k), p.q))
}

/// Exact partial spread size `(q^v - q^{k+r})/(q^k - 1) + 1` for `d = 2k`.
pub fn partial_spread(p: Params) -> Result<BigInt, BoundsError> {
    pre(p.d == 2 * p.k, "d = 2k")?;
    pre(1 <= p.k && 2 * p.k <= p.v, "0 < k ≤ v/2")?;
    let r = p.v % p.k;
    let rq = q_int(r, p.q).expect("r >= 0");
    if rq >= BigInt::from(p.k) {
        return Err(BoundsError::NotApplicable(format!(
            "[{r}]_{} = {rq} is not below k = {}",
            p.q, p.k
        )));
    }
    Ok((pow(p.q, p.v as u64) - pow(p.q, (p.k + r) as u64)) / (pow(p.q, p.k as u64) - 1) + 1)
}

/// Upper bound on a constant dimension code size, cited.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeededBound {
    #[serde(serialize_with = "big_as_string")]
    pub value: BigInt,
    pub citation: String,
}

/// A known lower bound row for codes containing an LMRD.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LowerBoundRecord {
    pub params: Params,
    /// `log_q #M`.
    pub lmrd_exponent: u32,
    /// Upper bound on the extension beyond `#M`, as printed.
    pub lmrd_bound_excess: &'static str,
    /// Previous best known lower bound minus `#M`.
    pub previous_excess: u64,
    pub previous_source: &'static str,
    /// Subcode used for the extension, up to embedding in Γ.
    pub subcode: &'static str,
    /// Best known lower bound minus `#M`.
    pub best_excess: u64,
}

impl LowerBoundRecord {
    pub fn best(&self) -> BigInt {
        pow(self.params.q, self.lmrd_exponent as u64) + self.best_excess
    }
}

/// Lower bounds obtained by extending LMRD codes; never used for upper bounds.
pub fn lower_bound_table() -> Vec<LowerBoundRecord> {
    let row = |v, d, k, e, excess, prev, src, sub, best| LowerBoundRecord {
        params: Params::new(2, v, d, k),
        lmrd_exponent: e,
        lmrd_bound_excess: excess,
        previous_excess: prev,
        previous_source: src,
        subcode: sub,
        best_excess: best,
    };
    vec![
        row(
            10,
            6,
            5,
            15,
            "155",
            122,
            "earlier LMRD extension",
            "[Γ choose 3]",
            155,
        ),
        row(
            11,
            6,
            4,
            14,
            "A_2(7,4;3) ≤ 381",
            285,
            "subspace code tables",
            "(7,333,4;3)_2",
            333,
        ),
        row(
            11,
            6,
            5,
            18,
            "1395",
            852,
            "subspace code tables",
            "[Γ choose 3]",
            1334,
        ),
        row(
            12,
            6,
            4,
            16,
            "A_2(8,4;3) ≤ 1493",
            1144,
            "subspace code tables",
            "(8,1326,4;3)_2",
            1303,
        ),
        row(
            12,
            6,
            5,
            21,
            "11811",
            7232,
            "subspace code tables",
            "[Γ choose 3]",
            7925,
        ),
        row(
            13,
            6,
            4,
            18,
            "A_2(9,4;3) ≤ 6205",
            4747,
            "earlier construction",
            "(9,5986,4;3)_2",
            5753,
        ),
    ]
}

/// Resolves `A_q(v, d; k)` to an upper bound. Precedence: trivial cases,
/// then `k -> v-k`, then the smallest of seeded table, exact partial spread
/// and Singleton (ties go to the earlier rule).
#[derive(Debug, Clone)]
pub struct AqResolver {
    seeded: BTreeMap<Params, SeededBound>,
}

impl Default for AqResolver {
    fn default() -> Self {
        let mut r = AqResolver::empty();
        let cite = "best known upper bound from the subspace code tables";
        r.seed(Params::new(2, 7, 4, 3), BigInt::from(381), cite);
        r.seed(Params::new(2, 8, 4, 3), BigInt::from(1493), cite);
        r.seed(Params::new(2, 9, 4, 3), BigInt::from(6205), cite);
        r
    }
}

impl AqResolver {
    pub fn empty() -> AqResolver {
        AqResolver {
            seeded: BTreeMap::new(),
        }
    }

    /// Adds an upper bound; `p.k` is normalized to `min(k, v-k)`.
    pub fn seed(&mut self, p: Params, value: BigInt, citation: &str) {
        let k = p.k.min(p.v - p.k);
        self.seeded.insert(
            Params { k, ..p },
            SeededBound {
                value,
                citation: citation.to_string(),
            },
        );
    }

    pub fn seeded(&self) -> impl Iterator<Item = (&Params, &SeededBound)> {
        self.seeded.iter()
    }

    pub fn resolve(&self, q: u32, v: i64, d: i64, k: i64) -> BoundReport {
        let query = Params::new(q, v, d, k);
        if k < 0 || k > v {
            return BoundReport::new(query, BigInt::zero(), Rule::Trivial);
        }
        let mut notes = Vec::new();
        let mut d = d;
        if d % 2 != 0 {
            notes.push(format!("odd d = {d} replaced by {}", d + 1));
            d += 1;
        }
        let finish = |value, rule, notes: Vec<String>| BoundReport {
            notes,
            ..BoundReport::new(query, value, rule)
        };
        if d <= 2 {
            return finish(q_binomial(v, k, q), Rule::Trivial, notes);
        }
        let mut k = k;
        if 2 * k > v {
            notes.push(format!("A_q({v},{d};{k}) = A_q({v},{d};{})", v - k));
            k = v - k;
        }
        if 2 * k < d {
            return finish(BigInt::one(), Rule::Trivial, notes);
        }
        let p = Params::new(q, v, d, k);
        let mut best = (singleton(p).expect("d/2 <= k <= v-k here"), Rule::Singleton);
        if let Ok(ps) = partial_spread(p) {
            if ps <= best.0 {
                best = (ps, Rule::PartialSpread);
            }
        }
        if let Some(s) = self.seeded.get(&p) {
            if s.value <= best.0 {
                notes.push(format!("seeded: {}", s.citation));
                best = (s.value.clone(), Rule::SeededTable);
            }
        }
        finish(best.0, best.1, notes)
    }
}

/// `q^{(v-k)(k-d/2+1)} + A_q(v-k, 2(d-k); d/2)`, for `k < d`.
pub fn prop1_bound(p: Params, r: &AqResolver) -> Result<BoundReport, BoundsError> {
    p.check_standard()?;
    pre(p.k < p.d, "k < d")?;
    let sub = r.resolve(p.q, p.v - p.k, 2 * (p.d - p.k), p.d / 2);
    let mut rep = BoundReport::new(p, p.lmrd_size() + &sub.value, Rule::Prop1);
    rep.sub_resolutions.push(sub);
    Ok(rep)
}

/// Middle summand of the `prop2` bound as an exact rational.
pub fn prop2_middle(p: Params, c: i64, y: i64) -> BigRational {
    let (q, v, d, k) = (p.q, p.v, p.d, p.k);
    let num = q_binomial(v - k, y, q) * q_binomial(k, c, q) * pow(q, (c * (v - k - d / 2)) as u64);
    let den = q_binomial(k - d / 2, c, q) * q_binomial(d / 2, y, q);
    ratio(num, den)
}

fn check_prop2(p: Params, c: i64, y: i64) -> Result<(), BoundsError> {
    p.check_standard()?;
    pre(1 <= y, "1 ≤ y")?;
    pre(y <= p.d / 2, "y ≤ d/2")?;
    pre(1 <= c, "1 ≤ c")?;
    pre(c <= (p.k - p.d / 2).min(p.d / 2), "c ≤ min{k−d/2,d/2}")?;
    pre(p.k - p.d / 2 < c + y, "k−d/2+1 ≤ c+y")
}

/// LMRD size + middle summand + `A_q(v-k, d-2(c-1); k-c+1)`,
/// floored once.
pub fn prop2_bound(p: Params, c: i64, y: i64, r: &AqResolver) -> Result<BoundReport, BoundsError> {
    check_prop2(p, c, y)?;
    let sub = r.resolve(p.q, p.v - p.k, p.d - 2 * (c - 1), p.k - c + 1);
    let exact = BigRational::from_integer(p.lmrd_size())
        + prop2_middle(p, c, y)
        + BigRational::from_integer(sub.value.clone());
    let mut rep = BoundReport::new(p, exact.floor().to_integer(), Rule::Prop2 { c, y });
    if !exact.is_integer() {
        rep.notes.push(format!("exact value {exact} floored"));
    }
    rep.sub_resolutions.push(sub);
    Ok(rep)
}

/// `c = max(1, k-d+1)`, `y = max(1, k-d/2+1-c)`; exists iff `d/2 < k < 3d/2`.
pub fn optimal_cy(p: Params) -> Result<(i64, i64), BoundsError> {
    let (d, k) = (p.d, p.k);
    if !(d < 2 * k && 2 * k < 3 * d) {
        return Err(BoundsError::NotApplicable(format!(
            "no admissible c unless d/2 < k < 3d/2 (d={d}, k={k})"
        )));
    }
    let c = 1.max(k - d + 1);
    let y = 1.max(k - d / 2 + 1 - c);
    Ok((c, y))
}

/// Closed form of the `d <= k < 3d/2` case, evaluated directly.
pub fn prop0_closed_form(p: Params, r: &AqResolver) -> BigRational {
    let (q, v, d, k) = (p.q, p.v, p.d, p.k);
    let middle = ratio(
        q_binomial(v - k, d / 2, q)
            * q_binomial(k, d - 1, q)
            * pow(q, ((k - d + 1) * (v - k - d / 2)) as u64),
        q_binomial(k - d / 2, d / 2 - 1, q),
    );
    let third = r.resolve(q, v - k, 3 * d - 2 * k, d).value;
    BigRational::from_integer(p.lmrd_size() + third) + middle
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Prop0Outcome {
    Bound(BoundReport),
    /// `k >= 3d/2`: no bound for LMRD-containing codes is known.
    NoLmrdBoundKnown,
}

/// Dispatches over the four parameter regions.
pub fn prop0_bound(p: Params, r: &AqResolver) -> Result<Prop0Outcome, BoundsError> {
    p.check_standard()?;
    let (v, d, k) = (p.v, p.d, p.k);
    if 2 * k >= 3 * d {
        return Ok(Prop0Outcome::NoLmrdBoundKnown);
    }
    let mut rep = if k < d && 2 * v < 3 * d {
        BoundReport::new(p, p.lmrd_size() + 1, Rule::Prop0Case2)
    } else if k < d {
        let inner = prop1_bound(p, r)?;
        let mut rep = BoundReport::new(p, inner.value.clone(), Rule::Prop0Case1);
        rep.sub_resolutions.push(inner);
        rep
    } else {
        let (c, y) = optimal_cy(p)?;
        let inner = prop2_bound(p, c, y, r)?;
        let mut rep = BoundReport::new(p, inner.value.clone(), Rule::Prop0Case3);
        let closed = prop0_closed_form(p, r);
        if closed.floor().to_integer() != inner.value {
            rep.notes.push(format!(
                "closed form gives {closed}, split bound gives {}",
                inner.value
            ));
        }
        rep.sub_resolutions.push(inner);
        rep
    };
    if d == 2 * k {
        if let Ok(exact) = partial_spread(Params::new(p.q, v, d, k)) {
            if exact == rep.value {
                rep.notes.push("equals A_q(v,d;k) (partial spread)".into());
            }
        }
    }
    Ok(Prop0Outcome::Bound(rep))
}

/// `#S_t <= A_q(v-k, d-2(k-t); t)` for `max(d/2, k-d/2+1) <= t <= k`.
pub fn st_cap(p: Params, t: i64, r: &AqResolver) -> Result<BoundReport, BoundsError> {
    p.check_standard()?;
    pre(
        t <= p.k && t >= (p.d / 2).max(p.k - p.d / 2 + 1),
        "max{d/2,k−d/2+1} ≤ t ≤ k",
    )?;
    Ok(r.resolve(p.q, p.v - p.k, p.d - 2 * (p.k - t), t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    NoLmrdBound,
    Prop2Best,
    Prop1Best,
    TrivialBound,
}

pub fn classify_region(p: Params) -> Region {
    let (v, d, k) = (p.v, p.d, p.k);
    if 2 * k >= 3 * d {
        Region::NoLmrdBound
    } else if d <= k {
        Region::Prop2Best
    } else if 2 * v >= 3 * d {
        Region::Prop1Best
    } else {
        Region::TrivialBound
    }
}

/// Parameters with `d` even and `2 <= d/2 <= k <= v/2`, for `v <= v_max`.
pub fn standard_grid(q: u32, v_max: i64) -> impl Iterator<Item = Params> {
    (4..=v_max).flat_map(move |v| {
        (2..=v / 2).flat_map(move |k| (2..=k).map(move |h| Params::new(q, v, 2 * h, k)))
    })
}

/// `f(y) = [v-k, y]_q / [d/2, y]_q` is non-decreasing on `1 <= y <= d/2`.
pub fn lemma8_violations(q: u32, v_max: i64) -> Vec<String> {
    let mut bad = Vec::new();
    for p in standard_grid(q, v_max) {
        let f = |y| ratio(q_binomial(p.v - p.k, y, q), q_binomial(p.d / 2, y, q));
        for y in 1..p.d / 2 {
            if f(y) > f(y + 1) {
                bad.push(format!("{p}: f({y}) > f({})", y + 1));
            }
        }
    }
    bad
}

/// Resolver monotonicity `A_q(v,d;k) <= A_q(v,d-2;k-1)`, split into pairs
/// where both sides resolve by exact rules and the rest.
pub fn lemma9_violations(q: u32, v_max: i64, r: &AqResolver) -> (Vec<String>, Vec<String>) {
    let exact = |rule: &Rule| matches!(rule, Rule::Trivial | Rule::PartialSpread);
    let (mut strict, mut loose) = (Vec::new(), Vec::new());
    for v in 1..=v_max {
        for k in 1..=v {
            for d in (4..=2 * v).step_by(2) {
                let lhs = r.resolve(q, v, d, k);
                let rhs = r.resolve(q, v, d - 2, k - 1);
                if lhs.value > rhs.value {
                    let msg = format!(
                        "{} = {} > {} = {}",
                        lhs.params, lhs.value, rhs.params, rhs.value
                    );
                    if exact(&lhs.rule) && exact(&rhs.rule) {
                        strict.push(msg);
                    } else {
                        loose.push(msg);
                    }
                }
            }
        }
    }
    (strict, loose)
}

/// `f(c) <= f(c+1)` for the middle summand with `y(c+1) ∈ {y(c), y(c)-1}`.
pub fn lemma10_violations(q: u32, v_max: i64) -> Vec<String> {
    let mut bad = Vec::new();
    for p in standard_grid(q, v_max).filter(|p| p.v - p.k >= 2) {
        let h = p.d / 2;
        for c in 0..=(p.k - h - 2) {
            for y0 in 0..=h {
                for y1 in [y0, y0 - 1] {
                    if y1 < 0 {
                        continue;
                    }
                    if prop2_middle(p, c, y0) > prop2_middle(p, c + 1, y1) {
                        bad.push(format!("{p}: f({c}) > f({}) with y = {y0}, {y1}", c + 1));
                    }
                }
            }
        }
    }
    bad
}

/// Under `2 <= d/2 < k < d <= 2v/3` and `k + d/2 <= v`, the `prop2`
/// middle summand at `c = 1, y = k - d/2` dominates `A_q(v-k, 2(d-k); d/2)`.
pub fn lemma11_violations(q: u32, v_max: i64, r: &AqResolver) -> Vec<String> {
    let mut bad = Vec::new();
    for p in standard_grid(q, v_max) {
        let h = p.d / 2;
        if !(h < p.k && p.k < p.d && 3 * p.d <= 2 * p.v && p.k + h <= p.v) {
            continue;
        }
        let a = r.resolve(q, p.v - p.k, 2 * (p.d - p.k), h);
        let f = prop2_middle(p, 1, p.k - h);
        if BigRational::from_integer(a.value.clone()) > f {
            bad.push(format!("{p}: {} = {} exceeds {f}", a.params, a.value));
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn res() -> AqResolver {
        AqResolver::default()
    }

    fn p(q: u32, v: i64, d: i64, k: i64) -> Params {
        Params::new(q, v, d, k)
    }

    #[test]
    fn singleton_values() {
        assert_eq!(singleton(p(2, 10, 6, 5)).unwrap(), b(97155));
        assert_eq!(singleton(p(2, 7, 4, 3)).unwrap(), b(651));
        assert_eq!(singleton(p(2, 5, 2, 2)).unwrap(), q_binomial(5, 3, 2));
        assert!(singleton(p(2, 5, 8, 2)).is_err());
    }

    #[test]
    fn partial_spreads() {
        assert_eq!(partial_spread(p(2, 7, 6, 3)).unwrap(), b(17));
        assert!(matches!(
            partial_spread(p(2, 8, 6, 3)),
            Err(BoundsError::NotApplicable(_))
        ));
        // k | v: a spread
        assert_eq!(partial_spread(p(2, 8, 8, 4)).unwrap(), b((256 - 1) / 15));
        assert_eq!(partial_spread(p(3, 6, 6, 3)).unwrap(), b((729 - 1) / 26));
    }

    #[test]
    fn resolver_rules() {
        let r = res();
        let a = r.resolve(2, 7, 4, 3);
        assert_eq!(
            (a.value.clone(), a.rule.clone()),
            (b(381), Rule::SeededTable)
        );
        assert_eq!(r.resolve(2, 7, 4, 4).value, b(381));
        assert_eq!(r.resolve(2, 5, 2, 4).value, b(31));
        assert_eq!(r.resolve(2, 5, 6, 2).value, b(1));
        assert_eq!(r.resolve(2, 5, 2, 7).value, b(0));
        assert_eq!(r.resolve(2, 5, 2, -1).value, b(0));
        let odd = r.resolve(2, 7, 5, 3);
        assert_eq!(odd.value, r.resolve(2, 7, 6, 3).value);
        assert!(odd.notes[0].contains("odd d"));
        assert_eq!(r.resolve(2, 7, 6, 3).rule, Rule::PartialSpread);
        assert_eq!(AqResolver::empty().resolve(2, 7, 4, 3).value, b(651));
    }

    #[test]
    fn prop1_values() {
        let r = res();
        assert_eq!(prop1_bound(p(2, 6, 4, 3), &r).unwrap().value, b(71));
        assert_eq!(
            prop1_bound(p(2, 10, 6, 5), &r).unwrap().value,
            b(32768 + 155)
        );
        assert_eq!(
            prop1_bound(p(2, 11, 6, 4), &r).unwrap().value,
            b(16384 + 381)
        );
        assert_eq!(
            prop1_bound(p(2, 12, 6, 4), &r).unwrap().value,
            b(65536 + 1493)
        );
        assert_eq!(
            prop1_bound(p(2, 13, 6, 4), &r).unwrap().value,
            b((1 << 18) + 6205)
        );
        assert!(prop1_bound(p(2, 10, 4, 5), &r).is_err());
    }

    #[test]
    fn table_excess_matches_prop1() {
        let r = res();
        for rec in lower_bound_table() {
            let bound = prop1_bound(rec.params, &r).unwrap().value;
            let m = rec.params.lmrd_size();
            assert_eq!(m, pow(2, rec.lmrd_exponent as u64));
            let excess = (bound - &m).to_string();
            assert!(
                rec.lmrd_bound_excess.ends_with(&excess),
                "{} vs {excess}",
                rec.lmrd_bound_excess
            );
            assert!(rec.best() <= m + b(excess.parse().unwrap()));
        }
    }

    /// Independent rational oracle for the `prop2` bound, built from the product
    /// formula of the q-binomial rather than `q_binomial`.
    fn gauss(v: i64, k: i64, q: i64) -> BigRational {
        if k < 0 || k > v {
            return BigRational::zero();
        }
        let mut acc = BigRational::one();
        for i in 0..k {
            let qq = BigInt::from(q);
            let num =
                num_traits::pow(qq.clone(), v as usize) - num_traits::pow(qq.clone(), i as usize);
            let den = num_traits::pow(qq.clone(), k as usize) - num_traits::pow(qq, i as usize);
            acc *= ratio(num, den);
        }
        acc
    }

    #[test]
    fn prop2_against_oracle() {
        let r = res();
        let pr = p(2, 10, 4, 5);
        let rep = prop2_bound(pr, 2, 2, &r).unwrap();
        let third = r.resolve(2, 5, 2, 4).value;
        let oracle = BigRational::from_integer(pow(2, 20))
            + gauss(5, 2, 2) * gauss(5, 2, 2) / (gauss(3, 2, 2) * gauss(2, 2, 2))
                * BigRational::from_integer(pow(2, 2 * 3))
            + BigRational::from_integer(third);
        assert_eq!(rep.value, oracle.floor().to_integer());
        for pr in standard_grid(3, 12) {
            for c in 1..=pr.k {
                for y in 1..=pr.d / 2 {
                    let Ok(rep) = prop2_bound(pr, c, y, &r) else {
                        continue;
                    };
                    let (q, v, d, k) = (3, pr.v, pr.d, pr.k);
                    let third = r.resolve(3, v - k, d - 2 * (c - 1), k - c + 1).value;
                    let exact = gauss(v - k, y, q) * gauss(k, c, q)
                        / (gauss(k - d / 2, c, q) * gauss(d / 2, y, q))
                        * BigRational::from_integer(pow(3, (c * (v - k - d / 2)) as u64))
                        + BigRational::from_integer(pr.lmrd_size() + third);
                    assert_eq!(rep.value, exact.floor().to_integer());
                }
            }
        }
    }

    #[test]
    fn prop2_preconditions() {
        let r = res();
        let pr = p(2, 10, 4, 5);
        let e = prop2_bound(pr, 4, 2, &r).unwrap_err();
        assert_eq!(e.to_string(), "c ≤ min{k−d/2,d/2} violated");
        assert!(prop2_bound(pr, 0, 2, &r).is_err());
        assert!(prop2_bound(pr, 1, 1, &r).is_err());
        assert!(prop2_bound(pr, 1, 3, &r).is_err());
    }

    #[test]
    fn optimal_choice() {
        assert_eq!(optimal_cy(p(2, 10, 4, 5)).unwrap(), (2, 2));
        assert_eq!(optimal_cy(p(2, 12, 6, 6)).unwrap(), (1, 3));
        assert_eq!(optimal_cy(p(2, 16, 8, 8)).unwrap(), (1, 4));
        assert!(optimal_cy(p(2, 14, 4, 6)).is_err());
    }

    #[test]
    fn prop0_dispatch() {
        let r = res();
        let bound = |pr| match prop0_bound(pr, &r).unwrap() {
            Prop0Outcome::Bound(b) => b,
            Prop0Outcome::NoLmrdBoundKnown => panic!("no bound for {pr}"),
        };
        let a = bound(p(2, 10, 6, 5));
        assert_eq!(
            (a.value.clone(), a.rule.clone()),
            (b(32923), Rule::Prop0Case1)
        );
        let s = bound(p(2, 8, 8, 4));
        assert_eq!((s.value.clone(), s.rule.clone()), (b(17), Rule::Prop0Case2));
        assert_eq!(s.value, partial_spread(p(2, 8, 8, 4)).unwrap());
        let c = bound(p(2, 10, 4, 5));
        assert_eq!(c.rule, Rule::Prop0Case3);
        assert_eq!(
            c.value,
            prop2_bound(p(2, 10, 4, 5), 2, 2, &r).unwrap().value
        );
        assert_eq!(
            prop0_bound(p(2, 14, 4, 6), &r).unwrap(),
            Prop0Outcome::NoLmrdBoundKnown
        );
        let spread = bound(p(2, 7, 6, 3));
        assert_eq!(spread.value, b(17));
        assert!(spread.notes.iter().any(|n| n.contains("partial spread")));
    }

    #[test]
    fn prop0_closed_form_agrees_and_is_optimal() {
        for q in [2, 3] {
            let r = res();
            for pr in standard_grid(q, 14) {
                let Prop0Outcome::Bound(rep) = prop0_bound(pr, &r).unwrap() else {
                    continue;
                };
                assert!(
                    rep.notes.iter().all(|n| !n.contains("closed form")),
                    "{pr}: {:?}",
                    rep.notes
                );
                if pr.k < pr.d {
                    assert!(rep.value <= prop1_bound(pr, &r).unwrap().value);
                }
                for c in 1..=pr.k {
                    for y in 1..=pr.d / 2 {
                        if let Ok(p2) = prop2_bound(pr, c, y, &r) {
                            assert!(rep.value <= p2.value, "{pr} c={c} y={y}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn st_caps() {
        let r = res();
        let pr = p(2, 10, 6, 5);
        let caps: Vec<BigInt> = (3..=5).map(|t| st_cap(pr, t, &r).unwrap().value).collect();
        assert_eq!(caps, vec![b(155), b(1), b(1)]);
        assert!(st_cap(pr, 2, &r).is_err());
        assert!(st_cap(pr, 6, &r).is_err());
    }

    #[test]
    fn regions() {
        assert_eq!(classify_region(p(2, 10, 6, 5)), Region::Prop1Best);
        assert_eq!(classify_region(p(2, 10, 4, 5)), Region::Prop2Best);
        assert_eq!(classify_region(p(2, 10, 8, 4)), Region::TrivialBound);
        assert_eq!(classify_region(p(2, 14, 4, 6)), Region::NoLmrdBound);
    }

    #[test]
    fn lemma_grids() {
        let r = res();
        for q in [2, 3] {
            assert!(lemma8_violations(q, 14).is_empty());
            assert!(lemma10_violations(q, 14).is_empty());
            assert!(lemma11_violations(q, 14, &r).is_empty());
            let (strict, _) = lemma9_violations(q, 14, &r);
            assert!(strict.is_empty(), "{strict:?}");
        }
    }

    #[test]
    fn report_rendering() {
        let r = res();
        let rep = prop1_bound(p(2, 11, 6, 4), &r).unwrap();
        let t = rep.trace();
        assert!(t.contains("A_2(11,6;4) ≤ 16765"));
        assert!(t.contains("A_2(7,4;3) ≤ 381"));
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["value"], "16765");
        assert_eq!(json["rule"]["name"], "prop1");
    }
}
