//! Matrices and subspaces over GF(q).

pub(crate) mod bits;
mod grassmannian;
mod matrix;
mod subspace;

use thiserror::Error;

pub use grassmannian::{for_each_rref, for_each_subspace, grassmannian};
pub use matrix::FqMatrix;
pub use subspace::{gamma, PivotVector, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("ambient dimensions differ ({0} vs {1})")]
    AmbientMismatch(usize, usize),
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("entry {0} is not an element of GF({1})")]
    InvalidEntry(u32, u32),
    #[error("requested dimension {requested} exceeds available {available}")]
    DimensionTooLarge { requested: usize, available: usize },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("subspace is not contained in the given space")]
    NotContained,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Reduced row echelon form of `m` with its pivot columns.
pub fn rref(m: &FqMatrix) -> (FqMatrix, Vec<usize>) {
    m.rref()
}

/// Subspace spanned by the rows of `rows`.
pub fn subspace_from_rows(rows: &FqMatrix) -> Subspace {
    Subspace::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::gf::Field;

    fn gf(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    /// Brute-force oracle: vectors as sets.
    fn vector_set(s: &Subspace) -> HashSet<Vec<u16>> {
        s.vectors().into_iter().collect()
    }

    fn brute_intersection_dim(a: &Subspace, b: &Subspace) -> usize {
        let q = a.field().q() as usize;
        let common = vector_set(a).intersection(&vector_set(b)).count();
        (common as f64).log(q as f64).round() as usize
    }

    #[test]
    fn rref_idempotent_and_row_space_preserving() {
        let f = gf(3);
        let m = FqMatrix::from_rows(&f, &[[1u32, 2, 0, 1], [2, 1, 0, 2], [0, 1, 1, 1]]).unwrap();
        let (r, _) = m.rref();
        assert_eq!(r.rref().0, r);
        let before = Subspace::span(
            &f,
            4,
            &(0..3).map(|i| m.row(i).to_vec()).collect::<Vec<_>>(),
        )
        .unwrap();
        let after = Subspace::span(
            &f,
            4,
            &(0..3).map(|i| r.row(i).to_vec()).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(vector_set(&before), vector_set(&after));
    }

    #[test]
    fn span_collapses_dependent_rows() {
        let f = gf(2);
        let s = Subspace::span(&f, 2, &[[1u16, 0], [1, 0]]).unwrap();
        assert_eq!(s.dim(), 1);
        let padded = FqMatrix::identity(&f, 3)
            .hstack(&FqMatrix::zeros(&f, 3, 3))
            .unwrap();
        assert_eq!(subspace_from_rows(&padded).dim(), 3);
    }

    #[test]
    fn grassmannian_counts_and_order() {
        let f = gf(2);
        let all = grassmannian(&f, 4, 2);
        assert_eq!(all.len(), 35);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(grassmannian(&f, 7, 3).len(), 11811);
        let zero = grassmannian(&f, 5, 0);
        assert_eq!(zero, vec![Subspace::zero(&f, 5)]);
        let f3 = gf(3);
        let all3 = grassmannian(&f3, 4, 2);
        assert_eq!(all3.len(), 130);
        assert!(all3.windows(2).all(|w| w[0] < w[1]));
        let f4 = gf(4);
        assert_eq!(grassmannian(&f4, 3, 1).len(), 21);
    }

    #[test]
    fn grassmannian_matches_rref_of_all_spans() {
        // Oracle: close the set of spans of all pairs of vectors in F_2^4.
        let f = gf(2);
        let whole = Subspace::whole(&f, 4).vectors();
        let mut spans = HashSet::new();
        for a in &whole {
            for b in &whole {
                let s = Subspace::span(&f, 4, &[a, b]).unwrap();
                if s.dim() == 2 {
                    spans.insert(s);
                }
            }
        }
        let enumerated: HashSet<_> = grassmannian(&f, 4, 2).into_iter().collect();
        assert_eq!(spans, enumerated);
    }

    #[test]
    fn subspace_distance_exhaustive_v4() {
        let f = gf(2);
        let all = grassmannian(&f, 4, 2);
        for a in &all {
            assert_eq!(a.distance(a).unwrap(), 0);
            for b in &all {
                let brute = brute_intersection_dim(a, b);
                assert_eq!(a.intersection_dim(b).unwrap(), brute);
                assert_eq!(a.distance(b).unwrap(), 2 * (2 - brute));
                assert_eq!(a.distance(b).unwrap(), b.distance(a).unwrap());
                assert_eq!(a.intersection(b).unwrap().dim(), brute);
                if a != b {
                    assert!(a.distance(b).unwrap() > 0);
                }
            }
        }
    }

    #[test]
    fn distinct_lines_are_at_distance_two() {
        let f = gf(2);
        let a = Subspace::span(&f, 2, &[[1u16, 0]]).unwrap();
        let b = Subspace::span(&f, 2, &[[1u16, 1]]).unwrap();
        assert_eq!(a.distance(&b).unwrap(), 2);
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let f = gf(2);
        let a = Subspace::whole(&f, 3);
        let b = Subspace::whole(&f, 4);
        assert_eq!(
            a.distance(&b).unwrap_err(),
            LinalgError::AmbientMismatch(3, 4)
        );
    }

    #[test]
    fn pivot_vectors() {
        let f = gf(3);
        let a = FqMatrix::from_rows(&f, &[[2u32, 1], [0, 1]]).unwrap();
        let u = Subspace::from_rows(&FqMatrix::identity(&f, 2).hstack(&a).unwrap());
        assert_eq!(u.pivot_vector().to_string(), "1100");
        let g = gamma(&f, 7, 3).unwrap();
        assert_eq!(g.pivot_vector().to_string(), "0001111");
        assert_eq!(Subspace::zero(&f, 3).pivot_vector().to_string(), "000");
    }

    #[test]
    fn gamma_shapes() {
        let f = gf(2);
        let g = gamma(&f, 10, 5).unwrap();
        assert_eq!(g.dim(), 5);
        let nonzero: Vec<_> = g
            .vectors()
            .into_iter()
            .filter(|x| x.iter().any(|&c| c != 0))
            .collect();
        assert_eq!(nonzero.len(), 31);
        assert!(nonzero.iter().all(|x| x[..5].iter().all(|&c| c == 0)));
        assert_eq!(gamma(&f, 6, 3).unwrap().dim(), 3);
        assert_eq!(gamma(&f, 6, 0).unwrap(), Subspace::whole(&f, 6));
    }

    #[test]
    fn avoiding_gamma() {
        let f = gf(2);
        let g = gamma(&f, 6, 3).unwrap();
        assert!(!g.avoids(&g).unwrap());
        let count = grassmannian(&f, 6, 2)
            .iter()
            .filter(|u| u.avoids(&g).unwrap())
            .count();
        assert_eq!(count, 448);
        // rowspan(I_k | A) always avoids Γ
        for a in &grassmannian(&f, 3, 2) {
            let lifted = FqMatrix::identity(&f, 3)
                .hstack(
                    &FqMatrix::from_data(&f, 3, 3, {
                        let mut d = a.basis().data().to_vec();
                        d.extend([0, 0, 0]);
                        d
                    })
                    .unwrap(),
                )
                .unwrap();
            assert!(Subspace::from_rows(&lifted).avoids(&g).unwrap());
        }
    }

    #[test]
    fn select_subspace() {
        let f = gf(2);
        let g = gamma(&f, 8, 3).unwrap();
        assert_eq!(g.select(5).unwrap(), g);
        assert_eq!(g.select(0).unwrap(), Subspace::zero(&f, 8));
        for m in 0..=5 {
            let s = g.select(m).unwrap();
            assert_eq!(g.intersection_dim(&s).unwrap(), m);
        }
        assert!(matches!(
            g.select(6),
            Err(LinalgError::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn complement_through_examples() {
        let f = gf(2);
        assert_eq!(
            Subspace::zero(&f, 4).complement_through(),
            Subspace::whole(&f, 4)
        );
        let g = gamma(&f, 6, 3).unwrap();
        let c = g.complement_through();
        let expected = Subspace::span(
            &f,
            6,
            &[
                [1u16, 0, 0, 0, 0, 0],
                [0, 1, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0],
            ],
        )
        .unwrap();
        assert_eq!(c, expected);
        for u in grassmannian(&gf(3), 4, 2) {
            let c = u.complement_through();
            assert_eq!(c.dim(), 2);
            assert_eq!(u.intersection_dim(&c).unwrap(), 0);
            assert_eq!(u.sum(&c).unwrap(), Subspace::whole(u.field(), 4));
        }
    }

    #[test]
    fn metric_axioms_and_duality_v4() {
        for q in [2, 3] {
            let f = gf(q);
            let all: Vec<Subspace> = (0..=4).flat_map(|k| grassmannian(&f, 4, k)).collect();
            for a in &all {
                let a_perp = a.orthogonal_complement();
                assert_eq!(a_perp.dim(), 4 - a.dim());
                assert_eq!(a_perp.orthogonal_complement(), *a);
                for b in &all {
                    let dab = a.distance(b).unwrap();
                    assert_eq!(a_perp.distance(&b.orthogonal_complement()).unwrap(), dab);
                    if q == 2 {
                        for c in &all {
                            assert!(a.distance(c).unwrap() <= dab + b.distance(c).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn hamming_of_pivots_bounds_distance_v5() {
        let f = gf(2);
        let all: Vec<Subspace> = (0..=5).flat_map(|k| grassmannian(&f, 5, k)).collect();
        let pv: Vec<PivotVector> = all.iter().map(|s| s.pivot_vector()).collect();
        for (i, a) in all.iter().enumerate() {
            assert_eq!(pv[i].weight(), a.dim());
            for (j, b) in all.iter().enumerate() {
                assert!(a.distance(b).unwrap() >= pv[i].hamming(&pv[j]));
            }
        }
    }

    #[test]
    fn avoiding_subspace_of_every_subspace() {
        // Every U contains a (dim U - dim(U∩Γ))-subspace meeting Γ trivially.
        let f = gf(2);
        let g = gamma(&f, 5, 2).unwrap();
        for k in 0..=5 {
            for u in grassmannian(&f, 5, k) {
                let meet = u.intersection(&g).unwrap();
                let part = u.complement_within(&meet).unwrap();
                assert_eq!(part.dim(), u.dim() - meet.dim());
                assert!(part.avoids(&g).unwrap());
                assert!(u.contains(&part).unwrap());
            }
        }
    }

    #[test]
    fn apply_generator() {
        let f = gf(2);
        let perm = FqMatrix::from_strs(&f, &["010", "001", "100"]).unwrap();
        let line = Subspace::span(&f, 3, &[[1u16, 0, 0]]).unwrap();
        let image = line.apply(&perm).unwrap();
        assert_eq!(image, Subspace::span(&f, 3, &[[0u16, 1, 0]]).unwrap());
        let f3 = gf(3);
        let m = FqMatrix::from_rows(&f3, &[[1u32, 1], [0, 2]]).unwrap();
        let l = Subspace::span(&f3, 2, &[[1u16, 0]]).unwrap();
        assert_eq!(
            l.apply(&m).unwrap(),
            Subspace::span(&f3, 2, &[[1u16, 1]]).unwrap()
        );
    }
}
