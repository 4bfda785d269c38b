//! Orbits of a cyclic matrix group on subspaces meeting Γ in a fixed
//! dimension, conflict filtering and a greedy clique over compatible orbits.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::SearchError;
use crate::cdc::{self, Cdc, Verification};
use crate::gf::Field;
use crate::linalg::{gamma, grassmannian, FqMatrix, Subspace};
use crate::rankmetric::{gabidulin, VerifyMode};

/// Block-diagonal generator of the order-31 group: the same Singer cycle
/// generator of GF(2)^5 twice.
pub const RECORD_GENERATOR: [&str; 10] = [
    "0000100000",
    "1000000000",
    "0100100000",
    "0010000000",
    "0001000000",
    "0000000001",
    "0000010000",
    "0000001001",
    "0000000100",
    "0000000010",
];

/// Orbit representatives of the 155-codeword extension of the (10, 2^15, 6; 5)_2 LMRD.
pub const RECORD_REPRESENTATIVES: [[&str; 5]; 5] = [
    [
        "1000000000",
        "0011100010",
        "0000010000",
        "0000001100",
        "0000000001",
    ],
    [
        "1000000000",
        "0100001000",
        "0000010000",
        "0000000100",
        "0000000010",
    ],
    [
        "0100000000",
        "0010000001",
        "0000010001",
        "0000001010",
        "0000000101",
    ],
    [
        "1000000000",
        "0001100010",
        "0000010001",
        "0000001011",
        "0000000101",
    ],
    [
        "1000000000",
        "0000100011",
        "0000010000",
        "0000001001",
        "0000000111",
    ],
];

pub fn record_generator() -> FqMatrix {
    FqMatrix::from_strs(&Field::new(2).expect("GF(2)"), &RECORD_GENERATOR).expect("10x10")
}

pub fn record_representatives() -> Vec<Subspace> {
    let f = Field::new(2).expect("GF(2)");
    RECORD_REPRESENTATIVES
        .iter()
        .map(|rows| Subspace::from_rows(&FqMatrix::from_strs(&f, rows).expect("5x10")))
        .collect()
}

/// An orbit under `x -> x·G`; members are listed from the representative on,
/// each the image of the previous one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub representative: Subspace,
    pub members: Vec<Subspace>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `{U : dim U = k, dim(U ∩ Γ) = t}` with Γ the last `v-k` coordinates, in
/// canonical order. Each `U` is the row space of `[[P | G'], [0 | Y]]` with
/// `Y` a `t`-subspace of Γ, `P` a `(k-t)`-subspace of `F_q^k` and `G'` zero
/// in the pivot columns of `Y`; that stacked matrix is already in RREF.
pub fn meet_universe(field: &Field, v: usize, k: usize, t: usize) -> Vec<Subspace> {
    if k > v || t > k || t > v - k {
        return Vec::new();
    }
    let w = v - k;
    let s = k - t;
    let q = field.q() as u64;
    let heads = grassmannian(field, k, s);
    let tails = grassmannian(field, w, t);
    let mut out: Vec<Subspace> = tails
        .par_iter()
        .flat_map_iter(|y| {
            let yb = y.basis();
            let ypiv = y.pivots();
            let free: Vec<usize> = (0..w).filter(|c| !ypiv.contains(c)).collect();
            let cells = s * free.len();
            let count = q.pow(cells as u32);
            let mut local = Vec::with_capacity(heads.len() * count as usize);
            for p in &heads {
                let pb = p.basis();
                for mut idx in 0..count {
                    let mut m = FqMatrix::zeros(field, k, v);
                    m.set_block(0, 0, &pb);
                    m.set_block(s, k, &yb);
                    for r in 0..s {
                        for &c in &free {
                            m.set(r, k + c, (idx % q) as u16);
                            idx /= q;
                        }
                    }
                    local.push(Subspace::from_rows(&m));
                }
            }
            local
        })
        .collect();
    out.par_sort_unstable();
    out
}

/// Partitions `universe` into orbits of `<g>`. Orbits are sorted by their
/// representative, the least member in canonical order.
pub fn orbit_partition(g: &FqMatrix, universe: &[Subspace]) -> Result<Vec<Orbit>, SearchError> {
    g.inverse()?;
    let step = stepper(g);
    let index: HashMap<&Subspace, usize> =
        universe.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let mut seen = vec![false; universe.len()];
    let mut orbits = Vec::new();
    for (i, start) in universe.iter().enumerate() {
        if seen[i] {
            continue;
        }
        let mut members = vec![start.clone()];
        seen[i] = true;
        let mut cur = step(start)?;
        while &cur != start {
            let j = *index.get(&cur).ok_or(SearchError::NotInvariant)?;
            if seen[j] {
                return Err(SearchError::NotInvariant);
            }
            seen[j] = true;
            let next = step(&cur)?;
            members.push(cur);
            cur = next;
        }
        let representative = members.iter().min().expect("nonempty").clone();
        orbits.push(Orbit {
            representative,
            members,
        });
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));
    Ok(orbits)
}

fn stepper(g: &FqMatrix) -> impl Fn(&Subspace) -> Result<Subspace, SearchError> + '_ {
    let gb = (g.field().is_binary() && g.cols() <= 64).then(|| g.to_bits());
    move |u: &Subspace| match (&gb, u.packed()) {
        (Some(b), Some(_)) if u.ambient_dim() == g.rows() => Ok(u.apply_packed(b)),
        _ => Ok(u.apply(g)?),
    }
}

/// Orbit generated by `u`, with `u` first.
pub fn orbit_of(g: &FqMatrix, u: &Subspace) -> Result<Orbit, SearchError> {
    g.inverse()?;
    let step = stepper(g);
    let mut members = vec![u.clone()];
    let mut cur = step(u)?;
    while &cur != u {
        let next = step(&cur)?;
        members.push(cur);
        cur = next;
    }
    let representative = members.iter().min().expect("nonempty").clone();
    Ok(Orbit {
        representative,
        members,
    })
}

/// True if two members of the orbit meet in dimension above `max_meet`.
pub fn is_dirty(o: &Orbit, max_meet: usize) -> bool {
    let m = &o.members;
    (0..m.len())
        .any(|i| (i + 1..m.len()).any(|j| m[i].intersection_dim_unchecked(&m[j]) > max_meet))
}

/// Splits orbits into `(clean, dirty)`.
pub fn filter_conflicting_orbits(orbits: Vec<Orbit>, max_meet: usize) -> (Vec<Orbit>, Vec<Orbit>) {
    let flags: Vec<bool> = orbits.par_iter().map(|o| is_dirty(o, max_meet)).collect();
    let mut clean = Vec::new();
    let mut dirty = Vec::new();
    for (o, d) in orbits.into_iter().zip(flags) {
        if d {
            dirty.push(o);
        } else {
            clean.push(o);
        }
    }
    (clean, dirty)
}

/// Compatibility of two orbits of the same group: `dim(U ∩ W) <= max_meet`
/// for all members. Since `dim(gU ∩ gW) = dim(U ∩ W)`, fixing `U` to one
/// member of `a` suffices.
pub fn compatible(a: &Orbit, b: &Orbit, max_meet: usize) -> bool {
    let u = &a.members[0];
    b.members
        .iter()
        .all(|w| u.intersection_dim_unchecked(w) <= max_meet)
}

/// The same test over all member pairs, for checking the reduction.
pub fn compatible_full(a: &Orbit, b: &Orbit, max_meet: usize) -> bool {
    a.members.iter().all(|u| {
        b.members
            .iter()
            .all(|w| u.intersection_dim_unchecked(w) <= max_meet)
    })
}

/// Greedy clique search over orbits in the given order. A pass starts from
/// vertex `s` and adds every later vertex (wrapping around) compatible with
/// all chosen ones; passes run for `s = 0, 1, ...` until one reaches
/// `target` vertices or `max_starts` passes are spent. Returns indices.
pub fn greedy_clique(
    orbits: &[Orbit],
    max_meet: usize,
    target: usize,
    max_starts: usize,
) -> Option<Vec<usize>> {
    let n = orbits.len();
    if target == 0 {
        return Some(Vec::new());
    }
    let starts = max_starts.min(n);
    // passes are independent; take the first successful start in order
    (0..starts).into_par_iter().find_map_first(|s| {
        let mut chosen = vec![s];
        for off in 1..n {
            if chosen.len() == target {
                break;
            }
            let cand = (s + off) % n;
            if chosen
                .iter()
                .all(|&c| compatible(&orbits[c], &orbits[cand], max_meet))
            {
                chosen.push(cand);
            }
        }
        (chosen.len() >= target).then(|| {
            chosen.sort_unstable();
            chosen
        })
    })
}

/// Summary of an orbit computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitStats {
    pub universe: usize,
    pub orbits: usize,
    /// Orbit length -> count.
    pub lengths: Vec<(usize, usize)>,
    pub dirty: usize,
    pub clean: usize,
}

pub fn orbit_stats(universe: usize, clean: &[Orbit], dirty: &[Orbit]) -> OrbitStats {
    let mut lengths: HashMap<usize, usize> = HashMap::new();
    for o in clean.iter().chain(dirty) {
        *lengths.entry(o.len()).or_default() += 1;
    }
    let mut lengths: Vec<_> = lengths.into_iter().collect();
    lengths.sort_unstable();
    OrbitStats {
        universe,
        orbits: clean.len() + dirty.len(),
        lengths,
        dirty: dirty.len(),
        clean: clean.len(),
    }
}

/// Checks on a set of orbit representatives meant to extend the standard LMRD.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepresentativeCheck {
    pub orbit_lengths: Vec<usize>,
    pub all_clean: bool,
    pub pairwise_compatible: bool,
    pub union_size: usize,
    /// Every `t`-subspace of Γ is `U ∩ Γ` for exactly one member.
    pub covers_gamma_exactly_once: bool,
}

impl RepresentativeCheck {
    pub fn ok(&self) -> bool {
        self.all_clean && self.pairwise_compatible && self.covers_gamma_exactly_once
    }
}

pub fn check_representatives(
    g: &FqMatrix,
    reps: &[Subspace],
    k: usize,
    t: usize,
    max_meet: usize,
) -> Result<RepresentativeCheck, SearchError> {
    let orbits: Vec<Orbit> = reps
        .iter()
        .map(|u| orbit_of(g, u))
        .collect::<Result<_, _>>()?;
    let all_clean = orbits.iter().all(|o| !is_dirty(o, max_meet));
    let pairwise_compatible = (0..orbits.len())
        .all(|i| (i + 1..orbits.len()).all(|j| compatible_full(&orbits[i], &orbits[j], max_meet)));
    let members: Vec<&Subspace> = orbits.iter().flat_map(|o| &o.members).collect();
    let mut covers = false;
    if let Some(first) = members.first() {
        let (f, v) = (first.field().clone(), first.ambient_dim());
        let gam = gamma(&f, v, k)?;
        let mut hits: HashMap<Subspace, usize> = HashMap::new();
        for u in &members {
            *hits.entry(u.intersection(&gam)?).or_default() += 1;
        }
        let all = grassmannian(&f, v, t);
        let inside: Vec<&Subspace> = all
            .iter()
            .filter(|s| gam.contains(s).unwrap_or(false))
            .collect();
        covers = hits.len() == inside.len() && inside.iter().all(|s| hits.get(*s) == Some(&1));
    }
    let mut distinct = members.clone();
    distinct.sort();
    distinct.dedup();
    Ok(RepresentativeCheck {
        orbit_lengths: orbits.iter().map(Orbit::len).collect(),
        all_clean,
        pairwise_compatible,
        union_size: distinct.len(),
        covers_gamma_exactly_once: covers,
    })
}

/// How the record code's distance was established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecordVerification {
    /// Minimum rank distance of the Gabidulin code under the LMRD.
    pub mrd_min_rank: usize,
    /// Minimum over LMRD x extension pairs.
    pub cross_min: Option<usize>,
    pub cross_pairs: u64,
    /// Minimum inside the extension.
    pub extension: Verification,
    pub min_distance: usize,
}

/// Distance of `lmrd ∪ extension` where `lmrd` lifts a linear MRD code:
/// its internal distance is twice the minimum rank, so only pairs touching
/// the extension are compared.
pub fn verify_lmrd_extension(
    lmrd: &Cdc,
    mrd_min_rank: usize,
    extension: &Cdc,
) -> RecordVerification {
    let ext = extension.codewords();
    let cross_max = lmrd
        .codewords()
        .par_iter()
        .map(|m| {
            ext.iter()
                .map(|u| m.intersection_dim_unchecked(u))
                .max()
                .unwrap_or(0)
        })
        .max();
    let k = lmrd.k();
    let cross_min = if ext.is_empty() {
        None
    } else {
        cross_max.map(|m| 2 * (k - m))
    };
    let internal = cdc::verify_pairwise(extension);
    let min_distance = [Some(2 * mrd_min_rank), cross_min, internal.min_distance]
        .into_iter()
        .flatten()
        .min()
        .unwrap_or(0);
    RecordVerification {
        mrd_min_rank,
        cross_min,
        cross_pairs: (lmrd.len() * ext.len()) as u64,
        extension: internal,
        min_distance,
    }
}

/// Standard (10, 2^15, 6; 5)_2 LMRD plus the `G`-orbits of `reps`, with its
/// distance report. The code is returned whether or not it reaches 6.
pub fn lmrd_with_orbits(
    g: &FqMatrix,
    reps: &[Subspace],
) -> Result<(Cdc, RecordVerification), SearchError> {
    let f = Field::new(2)?;
    let mrd = gabidulin(&f, 5, 5, 3)?;
    let mrd_min_rank = mrd
        .verify_min_rank_distance(VerifyMode::Linear)?
        .unwrap_or(0);
    let lmrd = cdc::lift(&mrd)?;
    let mut words = Vec::new();
    for u in reps {
        words.extend(orbit_of(g, u)?.members);
    }
    let extension = Cdc::new(&f, 10, 5, 6, words)?;
    let report = verify_lmrd_extension(&lmrd, mrd_min_rank, &extension);
    let mut code = lmrd.union(&extension)?;
    code.provenance.push(format!(
        "LMRD plus {} orbits of length 31 under a block-diagonal Singer-cycle group",
        reps.len()
    ));
    Ok((code, report))
}

/// Orbit statistics and greedy clique for `k = 5`, `t = 3` in `F_2^10`
/// under [`record_generator`].
#[derive(Debug, Clone)]
pub struct ReferenceComputation {
    pub stats: OrbitStats,
    /// Representatives of the clique's orbits, in canonical order.
    pub clique: Vec<Subspace>,
}

pub fn reference_computation() -> Result<ReferenceComputation, SearchError> {
    let f = Field::new(2)?;
    let g = record_generator();
    let universe = meet_universe(&f, 10, 5, 3);
    let orbits = orbit_partition(&g, &universe)?;
    let (clean, dirty) = filter_conflicting_orbits(orbits, 2);
    let stats = orbit_stats(universe.len(), &clean, &dirty);
    let clique = greedy_clique(&clean, 2, 5, clean.len()).ok_or(SearchError::NotFound(5))?;
    Ok(ReferenceComputation {
        stats,
        clique: clique
            .iter()
            .map(|&i| clean[i].representative.clone())
            .collect(),
    })
}

/// The (10, 2^15 + 155, 6; 5)_2 code: the standard LMRD plus the five orbits
/// found by [`reference_computation`], verified before it is returned.
pub fn record_code() -> Result<(Cdc, RecordVerification), SearchError> {
    let reps = reference_computation()?.clique;
    let (mut code, report) = lmrd_with_orbits(&record_generator(), &reps)?;
    if report.min_distance < 6 || code.len() != 32923 {
        return Err(SearchError::VerificationFailed(format!(
            "size {} distance {}",
            code.len(),
            report.min_distance
        )));
    }
    code.provenance.push(format!(
        "verified: minimum distance {}",
        report.min_distance
    ));
    Ok((code, report))
}
