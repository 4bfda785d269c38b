//! Exact q-analog combinatorics over arbitrary-precision integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QcombError {
    #[error("argument {0} must be non-negative")]
    NegativeArgument(i64),
    #[error("q = {0} must be at least 2")]
    InvalidBase(u32),
}

pub fn pow(q: u32, e: u64) -> BigInt {
    num_traits::pow(BigInt::from(q), e as usize)
}

/// `[x]_q = (q^x - 1)/(q - 1)`.
pub fn q_int(x: i64, q: u32) -> Result<BigInt, QcombError> {
    if x < 0 {
        return Err(QcombError::NegativeArgument(x));
    }
    Ok((pow(q, x as u64) - 1) / BigInt::from(q - 1))
}

/// `[x]_q! = [1]_q [2]_q ... [x]_q`.
pub fn q_factorial(x: i64, q: u32) -> Result<BigInt, QcombError> {
    if x < 0 {
        return Err(QcombError::NegativeArgument(x));
    }
    Ok((1..=x).map(|i| q_int(i, q).expect("positive")).product())
}

/// Gaussian binomial coefficient: the number of `k`-subspaces of `F_q^v`;
/// zero outside `0 <= k <= v`.
pub fn q_binomial(v: i64, k: i64, q: u32) -> BigInt {
    if k < 0 || v < 0 || k > v {
        return BigInt::zero();
    }
    let k = k.min(v - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let qb = BigInt::from(q);
    for i in 0..k {
        num *= num_traits::pow(qb.clone(), (v - i) as usize) - 1;
        den *= num_traits::pow(qb.clone(), (i + 1) as usize) - 1;
    }
    num / den
}

/// Number of `c`-subspaces inside a `w`-dimensional space that meet a fixed
/// `u`-dimensional subspace trivially: `q^{uc} [w-u, c]_q`.
pub fn count_avoiding(w: i64, u: i64, c: i64, q: u32) -> BigInt {
    if c < 0 || u < 0 || c > w - u {
        return BigInt::zero();
    }
    pow(q, (u * c) as u64) * q_binomial(w - u, c, q)
}

pub fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

/// Rational enclosure of `μ(q) = Π_{i≥1} (1 - q^{-i})^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuApprox {
    pub q: u32,
    pub terms: u32,
    pub lower: BigRational,
    pub upper: BigRational,
}

impl MuApprox {
    pub fn lower_f64(&self) -> f64 {
        self.lower.to_f64().unwrap_or(f64::NAN)
    }

    pub fn upper_f64(&self) -> f64 {
        self.upper.to_f64().unwrap_or(f64::NAN)
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }
}

/// The partial product over `i <= terms` is a lower bound since every factor
/// exceeds one. With `x_i = q^{-i}` and `Π(1 - x_i) >= 1 - Σ x_i`, the tail
/// is at most `1 / (1 - q^{-terms}/(q-1))`.
pub fn mu(q: u32, terms: u32) -> Result<MuApprox, QcombError> {
    if q < 2 {
        return Err(QcombError::InvalidBase(q));
    }
    let terms = terms.max(1);
    let mut lower = BigRational::one();
    for i in 1..=terms {
        let qi = pow(q, i as u64);
        lower *= ratio(qi.clone(), qi - 1);
    }
    let tail_sum = ratio(BigInt::one(), pow(q, terms as u64) * BigInt::from(q - 1));
    let upper = &lower / (BigRational::one() - tail_sum);
    Ok(MuApprox {
        q,
        terms,
        lower,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn q_integers() {
        assert_eq!(q_int(0, 2).unwrap(), b(0));
        assert_eq!(q_int(1, 5).unwrap(), b(1));
        assert_eq!(q_int(3, 2).unwrap(), b(7));
        assert_eq!(q_int(-1, 2).unwrap_err(), QcombError::NegativeArgument(-1));
        assert_eq!(q_factorial(3, 2).unwrap(), b(21));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(q_binomial(4, 2, 2), b(35));
        assert_eq!(q_binomial(7, 3, 2), b(11811));
        assert_eq!(q_binomial(9, 0, 3), b(1));
        assert_eq!(q_binomial(3, 5, 2), b(0));
        assert_eq!(q_binomial(3, -1, 2), b(0));
        assert_eq!(q_binomial(8, 5, 2), b(97155));
    }

    #[test]
    fn binomial_matches_factorial_form() {
        for q in [2, 3, 4, 5] {
            for v in 0..=10 {
                for k in 0..=v {
                    let f = q_factorial(v, q).unwrap()
                        / (q_factorial(k, q).unwrap() * q_factorial(v - k, q).unwrap());
                    assert_eq!(q_binomial(v, k, q), f);
                }
            }
        }
    }

    #[test]
    fn pascal_symmetry_and_sandwich() {
        for q in [2u32, 3, 4, 5] {
            let m = mu(q, 64).unwrap();
            for v in 0..=12i64 {
                for k in 0..=v {
                    let g = q_binomial(v, k, q);
                    assert_eq!(g, q_binomial(v, v - k, q));
                    if v >= 1 {
                        let rhs = q_binomial(v - 1, k, q) * pow(q, k as u64)
                            + q_binomial(v - 1, k - 1, q);
                        assert_eq!(g, rhs, "Pascal at q={q} v={v} k={k}");
                    }
                    let low = pow(q, (k * (v - k)) as u64);
                    assert!(low <= g);
                    let g_rat = BigRational::from_integer(g);
                    assert!(g_rat <= &m.upper * BigRational::from_integer(low));
                }
            }
        }
    }

    #[test]
    fn avoid_counts() {
        assert_eq!(count_avoiding(6, 3, 2, 2), b(448));
        assert_eq!(count_avoiding(6, 0, 2, 2), q_binomial(6, 2, 2));
        assert_eq!(count_avoiding(6, 3, 4, 2), b(0));
    }

    #[test]
    fn avoid_counts_match_enumeration() {
        use crate::gf::Field;
        use crate::linalg::{gamma, grassmannian};
        for q in [2u32, 3] {
            let f = Field::new(q).unwrap();
            for w in 0..=6i64 {
                for u in 0..=w {
                    let fixed = gamma(&f, w as usize, (w - u) as usize).unwrap();
                    assert_eq!(fixed.dim() as i64, u);
                    for c in 0..=w {
                        let brute = grassmannian(&f, w as usize, c as usize)
                            .iter()
                            .filter(|s| s.avoids(&fixed).unwrap())
                            .count();
                        assert_eq!(
                            count_avoiding(w, u, c, q),
                            b(brute as i64),
                            "q={q} w={w} u={u} c={c}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mu_table_values() {
        let reported = [
            (2, 3.46),
            (3, 1.79),
            (4, 1.45),
            (5, 1.32),
            (7, 1.20),
            (8, 1.16),
            (9, 1.14),
        ];
        let mut prev = f64::INFINITY;
        for (q, val) in reported {
            let m = mu(q, 64).unwrap();
            assert!(m.lower <= m.upper);
            assert!(
                (m.lower_f64() - val).abs() < 0.005 + 1e-9,
                "mu({q}) = {}",
                m.lower_f64()
            );
            assert!(m.upper_f64() < prev);
            prev = m.lower_f64();
        }
        let coarse = mu(2, 4).unwrap();
        let fine = mu(2, 20).unwrap();
        assert!(fine.width() < coarse.width());
        assert!(coarse.lower <= fine.lower && fine.upper <= coarse.upper);
    }
}
