//! Randomized extension of the standard LMRD by codewords meeting Γ in at
//! least `d/2` dimensions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::SearchError;
use crate::cdc::{self, Cdc};
use crate::linalg::{bits, gamma, grassmannian, FqMatrix, Subspace};

#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Subcode of dimension `d/2`, either inside Γ ⊂ F_q^v or in F_q^{v-k}
    /// (then embedded into Γ by prefixing `k` zeros).
    pub subcode: Cdc,
    pub n_max: usize,
    pub r_max: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    #[serde(skip)]
    pub extension: Cdc,
    /// Accepted codewords per restart.
    pub per_restart: Vec<usize>,
    pub best_restart: usize,
}

/// Embeds `e` into Γ and checks it is a `(v-k, #E, 2(d-k); d/2)_q` code.
pub fn embed_subcode(e: &Cdc, v: usize, k: usize, d: usize) -> Result<Vec<Subspace>, SearchError> {
    let invalid = |why: String| Err(SearchError::InvalidSubcode(why));
    if e.k() != d / 2 {
        return invalid(format!(
            "subcode dimension {} is not d/2 = {}",
            e.k(),
            d / 2
        ));
    }
    let need = 2 * d.saturating_sub(k);
    if let Some(m) = cdc::verify_cdc(e).min_distance {
        if m < need {
            return invalid(format!(
                "subcode minimum distance {m} is below 2(d-k) = {need}"
            ));
        }
    }
    let gam = gamma(e.field(), v, k)?;
    if e.v() == v {
        for (i, u) in e.codewords().iter().enumerate() {
            if !gam.contains(u)? {
                return invalid(format!("codeword {i} does not lie in Γ"));
            }
        }
        return Ok(e.codewords().to_vec());
    }
    if e.v() != v - k {
        return invalid(format!(
            "subcode ambient dimension {} is neither v = {v} nor v-k = {}",
            e.v(),
            v - k
        ));
    }
    let f = e.field();
    Ok(e.codewords()
        .iter()
        .map(|u| {
            Subspace::from_rows(
                &FqMatrix::zeros(f, u.dim(), k)
                    .hstack(&u.basis())
                    .expect("same rows"),
            )
        })
        .collect())
}

/// Randomized extension of the standard LMRD. Restart `n` draws from ChaCha8 seeded with `seed` on stream
/// `n`, so results do not depend on the number of threads. For each `U` in
/// the subcode, candidates `W = U ⊕ rowspan(T_σ(r) · M)` are tried in a
/// lazily drawn random order; `W` is rejected if it meets an accepted
/// codeword in more than `k - d/2` dimensions. With `k < d` at most one `W`
/// is accepted per `U`. The largest restart wins, ties to the earliest.
pub fn extend_lmrd(
    cfg: &SearchConfig,
    v: usize,
    k: usize,
    d: usize,
) -> Result<SearchOutcome, SearchError> {
    if !d.is_multiple_of(2) || d < 4 || d / 2 > k || 2 * k > v {
        return Err(SearchError::InvalidParameters(format!(
            "need d even and 2 ≤ d/2 ≤ k ≤ v/2 (v={v} k={k} d={d})"
        )));
    }
    let field = cfg.subcode.field().clone();
    let e = embed_subcode(&cfg.subcode, v, k, d)?;
    let h = d / 2;
    let max_meet = k - h;
    let t_list = grassmannian(&field, v - h, k - h);
    let n_max = cfg.n_max.max(1);
    let r_max = cfg.r_max.max(1);
    let steps = r_max.min(t_list.len());
    let complements: Vec<FqMatrix> = e.iter().map(|u| u.complement_through().basis()).collect();
    let packed = e.first().is_some_and(|u| u.packed().is_some());
    let t_bits: Vec<Vec<u64>> = if packed {
        t_list
            .iter()
            .map(|t| t.packed().expect("binary").to_vec())
            .collect()
    } else {
        Vec::new()
    };
    let m_bits: Vec<Vec<u64>> = if packed {
        complements.iter().map(FqMatrix::to_bits).collect()
    } else {
        Vec::new()
    };

    let run = |n: usize| -> Vec<Subspace> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(n as u64);
        let mut order: Vec<usize> = (0..t_list.len()).collect();
        let mut accepted: Vec<Subspace> = Vec::new();
        for (ui, u) in e.iter().enumerate() {
            for r in 0..steps {
                let j = rng.random_range(r..order.len());
                order.swap(r, j);
                let ti = order[r];
                let w = if packed {
                    let mut rows: Vec<u64> = u.packed().expect("binary").to_vec();
                    rows.extend(t_bits[ti].iter().map(|&x| bits::vec_mul(x, &m_bits[ui])));
                    Subspace::from_packed(&field, v, rows)
                } else {
                    let extra = t_list[ti]
                        .basis()
                        .mul(&complements[ui])
                        .expect("v-d/2 columns");
                    u.sum(&Subspace::from_rows(&extra)).expect("same ambient")
                };
                if accepted
                    .iter()
                    .any(|z| z.intersection_dim_unchecked(&w) > max_meet)
                {
                    continue;
                }
                accepted.push(w);
                if k < d {
                    break;
                }
            }
        }
        accepted
    };

    let results: Vec<Vec<Subspace>> = (0..n_max).into_par_iter().map(run).collect();
    let per_restart: Vec<usize> = results.iter().map(Vec::len).collect();
    let best_restart = (0..n_max).fold(0, |b, i| {
        if per_restart[i] > per_restart[b] {
            i
        } else {
            b
        }
    });
    let words = results.into_iter().nth(best_restart).unwrap_or_default();
    let gam = gamma(&field, v, k)?;
    if let Some(i) = words
        .iter()
        .position(|w| w.dim() != k || w.intersection_dim_unchecked(&gam) < h)
    {
        return Err(SearchError::VerificationFailed(format!(
            "candidate {i} has the wrong shape"
        )));
    }
    let mut extension = Cdc::new(&field, v, k, d, words)?;
    if !cdc::verify_cdc(&extension).meets_claim() {
        return Err(SearchError::VerificationFailed(
            "accepted codewords are too close".into(),
        ));
    }
    extension.provenance.push(format!(
        "random extension search: seed {}, n_max {n_max}, r_max {r_max}, best restart {best_restart}",
        cfg.seed
    ));
    Ok(SearchOutcome {
        extension,
        per_restart,
        best_restart,
    })
}
