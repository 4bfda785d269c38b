use std::fmt;

use crate::gf::Field;
use crate::linalg::{bits, LinalgError};

/// A dense matrix over GF(q), row-major, entries as canonical encodings.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FqMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let line: String = self
                .row(r)
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(f, "  [{line}]")?;
        }
        Ok(())
    }
}

impl FqMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> FqMatrix {
        FqMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> FqMatrix {
        let mut m = FqMatrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_data(
        field: &Field,
        rows: usize,
        cols: usize,
        data: Vec<u16>,
    ) -> Result<FqMatrix, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::ShapeMismatch {
                expected: (rows, cols),
                got: (data.len(), 1),
            });
        }
        if let Some(&bad) = data.iter().find(|&&x| x as u32 >= field.q()) {
            return Err(LinalgError::InvalidEntry(bad as u32, field.q()));
        }
        Ok(FqMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from nested rows; all rows must share one length.
    pub fn from_rows<R: AsRef<[u32]>>(field: &Field, rows: &[R]) -> Result<FqMatrix, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(LinalgError::ShapeMismatch {
                    expected: (rows.len(), cols),
                    got: (rows.len(), r.len()),
                });
            }
            data.extend(r.iter().map(|&x| x as u16));
        }
        FqMatrix::from_data(field, rows.len(), cols, data)
    }

    /// Parses rows of digit strings such as `["110", "011"]`.
    pub fn from_strs(field: &Field, rows: &[&str]) -> Result<FqMatrix, LinalgError> {
        let parsed: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| {
                r.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| c.to_digit(36).unwrap_or(u32::MAX))
                    .collect()
            })
            .collect();
        FqMatrix::from_rows(field, &parsed)
    }

    pub(crate) fn from_bits(field: &Field, rows: &[u64], cols: usize) -> FqMatrix {
        let mut m = FqMatrix::zeros(field, rows.len(), cols);
        for (i, &r) in rows.iter().enumerate() {
            for j in 0..cols {
                if r & bits::bit(j) != 0 {
                    m.data[i * cols + j] = 1;
                }
            }
        }
        m
    }

    pub(crate) fn to_bits(&self) -> Vec<u64> {
        debug_assert!(self.field.is_binary() && self.cols <= 64);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .fold(0, |acc, (j, _)| acc | bits::bit(j))
            })
            .collect()
    }

    pub(crate) fn packable(&self) -> bool {
        self.field.is_binary() && self.cols <= 64
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: u16) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    fn check_same(&self, other: &FqMatrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.shape() != other.shape() {
            return Err(LinalgError::ShapeMismatch {
                expected: self.shape(),
                got: other.shape(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FqMatrix) -> Result<FqMatrix, LinalgError> {
        self.check_same(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(FqMatrix {
            data,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &FqMatrix) -> Result<FqMatrix, LinalgError> {
        self.check_same(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        Ok(FqMatrix {
            data,
            ..self.clone()
        })
    }

    pub fn scale(&self, s: u16) -> FqMatrix {
        let data = self.data.iter().map(|&a| self.field.mul(a, s)).collect();
        FqMatrix {
            data,
            ..self.clone()
        }
    }

    /// `self += s * other` in place; shapes must already agree.
    pub(crate) fn add_scaled(&mut self, other: &FqMatrix, s: u16) {
        let f = &self.field;
        if s == 1 {
            for (a, &b) in self.data.iter_mut().zip(&other.data) {
                *a = f.add(*a, b);
            }
        } else if s != 0 {
            for (a, &b) in self.data.iter_mut().zip(&other.data) {
                *a = f.add(*a, f.mul(b, s));
            }
        }
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix, LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                expected: (self.cols, other.cols),
                got: other.shape(),
            });
        }
        let f = &self.field;
        let mut out = FqMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(l, j)));
                }
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `(self | other)`.
    pub fn hstack(&self, other: &FqMatrix) -> Result<FqMatrix, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::ShapeMismatch {
                expected: (self.rows, other.cols),
                got: other.shape(),
            });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(FqMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn vstack(&self, other: &FqMatrix) -> Result<FqMatrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch {
                expected: (other.rows, self.cols),
                got: other.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FqMatrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Copy of the block starting at `(r0, c0)` with the given shape.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> FqMatrix {
        let mut m = FqMatrix::zeros(&self.field, rows, cols);
        for r in 0..rows {
            m.data[r * cols..(r + 1) * cols].copy_from_slice(&self.row(r0 + r)[c0..c0 + cols]);
        }
        m
    }

    /// Writes `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &FqMatrix) {
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    /// Unique reduced row echelon form and its pivot columns. The returned
    /// matrix keeps the input shape; rows past the rank are zero.
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        if self.packable() {
            let reduced = bits::rref(&self.to_bits());
            let pivots = reduced.iter().map(|&r| bits::pivot_col(r)).collect();
            let mut m = FqMatrix::from_bits(&self.field, &reduced, self.cols);
            m.rows = self.rows;
            m.data.resize(self.rows * self.cols, 0);
            return (m, pivots);
        }
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub(crate) fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let (rows, cols) = self.shape();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(i) = (r..rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if i != r {
                for j in 0..cols {
                    self.data.swap(i * cols + j, r * cols + j);
                }
            }
            let inv = f.inv(self.get(r, c)).expect("pivot is nonzero");
            for j in c..cols {
                let x = self.get(r, j);
                self.set(r, j, f.mul(x, inv));
            }
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let x = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.packable() {
            return bits::rank(&self.to_bits());
        }
        if self.field.is_binary() && self.rows <= 64 {
            return bits::rank(&self.transpose().to_bits());
        }
        self.clone().rref_in_place().len()
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<FqMatrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotInvertible);
        }
        let n = self.rows;
        let aug = self.hstack(&FqMatrix::identity(&self.field, n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::NotInvertible);
        }
        Ok(r.submatrix(0, n, n, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let f = gf(3);
        let i = FqMatrix::identity(&f, 3);
        assert_eq!(i.rref(), (i.clone(), vec![0, 1, 2]));
        let z = FqMatrix::zeros(&f, 2, 4);
        assert_eq!(z.rref(), (z.clone(), vec![]));
    }

    #[test]
    fn rref_hand_example_gf2() {
        let f = gf(2);
        let m = FqMatrix::from_strs(&f, &["110", "011"]).unwrap();
        let (r, p) = m.rref();
        assert_eq!(r, FqMatrix::from_strs(&f, &["101", "011"]).unwrap());
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn dense_and_packed_agree() {
        // GF(2) matrix with more than 64 columns goes through the dense path
        let f = gf(2);
        let rows: Vec<Vec<u32>> = (0..5)
            .map(|i| (0..70).map(|j| ((i * 7 + j * 3) % 5 == 0) as u32).collect())
            .collect();
        let m = FqMatrix::from_rows(&f, &rows).unwrap();
        let mut dense = m.clone();
        let p = dense.rref_in_place();
        let short = m.submatrix(0, 0, 5, 60);
        let mut short_dense = short.clone();
        let ps = short_dense.rref_in_place();
        assert_eq!(short.rref(), (short_dense, ps));
        assert_eq!(m.rank(), p.len());
    }

    #[test]
    fn inverse_roundtrip() {
        let f = gf(5);
        let m = FqMatrix::from_rows(&f, &[[1u32, 2], [3, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FqMatrix::identity(&f, 2));
        let singular = FqMatrix::from_rows(&f, &[[1u32, 2], [2, 4]]).unwrap();
        assert_eq!(singular.inverse().unwrap_err(), LinalgError::NotInvertible);
    }

    #[test]
    fn rejects_bad_entries() {
        let f = gf(3);
        assert!(matches!(
            FqMatrix::from_rows(&f, &[[0u32, 3]]),
            Err(LinalgError::InvalidEntry(3, 3))
        ));
        assert!(matches!(
            FqMatrix::from_rows(&f, &[vec![0u32, 1], vec![1]]),
            Err(LinalgError::ShapeMismatch { .. })
        ));
    }
}
