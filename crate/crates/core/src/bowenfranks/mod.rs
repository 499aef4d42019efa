//! Integer matrix algebra over arbitrary-precision integers: Smith normal
//! form with recorded unimodular transforms, fraction-free determinants, and
//! the Bowen-Franks group BF(A) = ℤⁿ/(I−A)ℤⁿ of a shift's adjacency matrix.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("entry list of length {len} does not fill a {rows}x{cols} matrix")]
    Shape { rows: usize, cols: usize, len: usize },
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}x{1} against {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
}

/// A dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct IntMatrixRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symbols: Option<Vec<String>>,
    matrix: Vec<Vec<i64>>,
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let matrix = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        i64::try_from(self.get(i, j).clone()).map_err(|_| {
                            serde::ser::Error::custom("matrix entry exceeds the i64 wire format")
                        })
                    })
                    .collect::<Result<Vec<i64>, S::Error>>()
            })
            .collect::<Result<Vec<_>, S::Error>>()?;
        IntMatrixRepr {
            symbols: None,
            matrix,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = IntMatrixRepr::deserialize(de)?;
        let rows = repr.matrix.len();
        let cols = repr.matrix.first().map_or(0, Vec::len);
        let entries: Vec<BigInt> = repr
            .matrix
            .iter()
            .flat_map(|row| row.iter().map(|&e| BigInt::from(e)))
            .collect();
        IntMatrix::new(rows, cols, entries).map_err(serde::de::Error::custom)
    }
}

impl IntMatrix {
    pub fn new(
        rows: usize,
        cols: usize,
        entries: Vec<BigInt>,
    ) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::Shape {
                rows,
                cols,
                len: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self, MatrixError> {
        IntMatrix::new(rows, cols, entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k).clone();
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = &a * other.get(k, j);
                    *out.get_mut(i, j) += add;
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::DimensionMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        IntMatrix::new(self.rows, self.cols, entries)
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    /// Fraction-free (Bareiss) determinant; exact over the integers.
    pub fn determinant(&self) -> Result<BigInt, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(swap) => {
                        for j in 0..n {
                            let idx_a = k * n + j;
                            let idx_b = swap * n + j;
                            a.entries.swap(idx_a, idx_b);
                        }
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j);
                    *a.get_mut(i, j) = num / &prev;
                }
                *a.get_mut(i, k) = BigInt::zero();
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Smith normal form d = u·a·v with unimodular u, v, non-negative diagonal,
/// and each diagonal entry dividing the next.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

/// Diagonalizes over ℤ by row/column reduction. The pivot is always a
/// smallest-absolute-value nonzero entry of the remaining block, ties broken
/// by row-major position, which makes the output deterministic.
pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let rows = a.rows();
    let cols = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let find_pivot = |d: &IntMatrix, k: usize| -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if d.get(i, j).is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if d.get(bi, bj).abs() <= d.get(i, j).abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    };

    let swap_rows = |m: &mut IntMatrix, a: usize, b: usize| {
        if a != b {
            for j in 0..m.cols {
                let i1 = a * m.cols + j;
                let i2 = b * m.cols + j;
                m.entries.swap(i1, i2);
            }
        }
    };
    let swap_cols = |m: &mut IntMatrix, a: usize, b: usize| {
        if a != b {
            for i in 0..m.rows {
                let i1 = i * m.cols + a;
                let i2 = i * m.cols + b;
                m.entries.swap(i1, i2);
            }
        }
    };
    // row_a -= q * row_b
    let row_sub = |m: &mut IntMatrix, a: usize, b: usize, q: &BigInt| {
        for j in 0..m.cols {
            let delta = q * m.get(b, j);
            *m.get_mut(a, j) -= delta;
        }
    };
    let col_sub = |m: &mut IntMatrix, a: usize, b: usize, q: &BigInt| {
        for i in 0..m.rows {
            let delta = q * m.get(i, b);
            *m.get_mut(i, a) -= delta;
        }
    };
    let row_add = |m: &mut IntMatrix, a: usize, b: usize| {
        for j in 0..m.cols {
            let delta = m.get(b, j).clone();
            *m.get_mut(a, j) += delta;
        }
    };
    let negate_row = |m: &mut IntMatrix, a: usize| {
        for j in 0..m.cols {
            let neg = -m.get(a, j).clone();
            *m.get_mut(a, j) = neg;
        }
    };

    for k in 0..rows.min(cols) {
        'pivot: loop {
            let Some((pi, pj)) = find_pivot(&d, k) else {
                break;
            };
            swap_rows(&mut d, k, pi);
            swap_rows(&mut u, k, pi);
            swap_cols(&mut d, k, pj);
            swap_cols(&mut v, k, pj);

            // clear the rest of column k and row k; truncated quotients
            // leave remainders smaller than the pivot, so the loop reruns
            // with a smaller pivot until both are clean
            let mut dirty = false;
            for i in 0..rows {
                if i != k && !d.get(i, k).is_zero() {
                    let q = d.get(i, k) / d.get(k, k);
                    if !q.is_zero() {
                        row_sub(&mut d, i, k, &q);
                        row_sub(&mut u, i, k, &q);
                    }
                    if !d.get(i, k).is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in 0..cols {
                if j != k && !d.get(k, j).is_zero() {
                    let q = d.get(k, j) / d.get(k, k);
                    if !q.is_zero() {
                        col_sub(&mut d, j, k, &q);
                        col_sub(&mut v, j, k, &q);
                    }
                    if !d.get(k, j).is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'pivot;
            }

            // divisibility: the pivot must divide the remaining block
            for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(d.get(i, j) % d.get(k, k)).is_zero() {
                        row_add(&mut d, k, i);
                        row_add(&mut u, k, i);
                        continue 'pivot;
                    }
                }
            }

            if d.get(k, k).is_negative() {
                negate_row(&mut d, k);
                negate_row(&mut u, k);
            }
            break;
        }
    }
    SnfResult { d, u, v }
}

/// A finitely-generated abelian group in invariant-factor form: factors
/// greater than 1 in divisibility order, with 0 encoding a free ℤ summand;
/// factors equal to 1 are dropped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianGroup {
    invariant_factors: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Number of elements when finite.
    pub fn order(&self) -> Option<BigInt> {
        if self.invariant_factors.iter().any(Zero::is_zero) {
            return None;
        }
        Some(self.invariant_factors.iter().product())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self
            .invariant_factors
            .iter()
            .map(|d| {
                if d.is_zero() {
                    "Z".to_string()
                } else {
                    format!("Z/{d}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BfError {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// The Bowen-Franks group BF(A) = ℤⁿ/(I−A)ℤⁿ, read off the Smith normal
/// form of I−A.
pub fn bf_group(a: &IntMatrix) -> Result<AbelianGroup, BfError> {
    if !a.is_square() {
        return Err(BfError::Matrix(MatrixError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        }));
    }
    let m = IntMatrix::identity(a.rows()).sub(a)?;
    let snf = smith_normal_form(&m);
    let invariant_factors = snf
        .d
        .diagonal()
        .into_iter()
        .filter(|f| !f.is_one())
        .collect();
    Ok(AbelianGroup { invariant_factors })
}

/// One line of the Bowen-Franks report.
#[derive(Debug, Clone, Serialize)]
pub struct BfReportEntry {
    pub matrix: Vec<Vec<i64>>,
    pub bf_invariant_factors: Vec<i64>,
    pub trivial: bool,
}

/// Computes BF groups for a list of adjacency matrices and flags the trivial
/// ones (for which any kernel statement about a representation into the
/// group holds vacuously).
pub fn bf_trivial_report(matrices: &[IntMatrix]) -> Result<Vec<BfReportEntry>, BfError> {
    matrices
        .iter()
        .map(|m| {
            let group = bf_group(m)?;
            Ok(BfReportEntry {
                matrix: (0..m.rows())
                    .map(|i| {
                        (0..m.cols())
                            .map(|j| i64::try_from(m.get(i, j).clone()).unwrap_or(i64::MAX))
                            .collect()
                    })
                    .collect(),
                bf_invariant_factors: group
                    .invariant_factors()
                    .iter()
                    .map(|f| i64::try_from(f.clone()).unwrap_or(i64::MAX))
                    .collect(),
                trivial: group.is_trivial(),
            })
        })
        .collect()
}

/// Checks every structural invariant of a Smith normal form against its
/// input: the transform identity, unimodularity, non-negative diagonal in a
/// divisibility chain, and zero off-diagonal entries.
pub fn snf_invariants_hold(a: &IntMatrix, snf: &SnfResult) -> bool {
    let product = match snf.u.mul(a).and_then(|ua| ua.mul(&snf.v)) {
        Ok(p) => p,
        Err(_) => return false,
    };
    if product != snf.d {
        return false;
    }
    let unimodular = |m: &IntMatrix| m.determinant().map(|d| d.abs().is_one()).unwrap_or(false);
    if !unimodular(&snf.u) || !unimodular(&snf.v) {
        return false;
    }
    for i in 0..snf.d.rows() {
        for j in 0..snf.d.cols() {
            if i != j && !snf.d.get(i, j).is_zero() {
                return false;
            }
        }
    }
    let diag = snf.d.diagonal();
    for w in diag.windows(2) {
        if w[0].is_negative() || w[1].is_negative() {
            return false;
        }
        if w[0].is_zero() {
            if !w[1].is_zero() {
                return false;
            }
        } else if !(&w[1] % &w[0]).is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, entries).unwrap()
    }

    fn diag_i64(snf: &SnfResult) -> Vec<i64> {
        snf.d
            .diagonal()
            .into_iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn snf_of_two_three_diagonal() {
        let a = m(2, 2, &[2, 0, 0, 3]);
        let snf = smith_normal_form(&a);
        assert_eq!(diag_i64(&snf), vec![1, 6]);
        assert!(snf_invariants_hold(&a, &snf));
    }

    #[test]
    fn snf_of_zero_and_identity() {
        let a = IntMatrix::zero(3, 3);
        let snf = smith_normal_form(&a);
        assert_eq!(diag_i64(&snf), vec![0, 0, 0]);
        assert!(snf_invariants_hold(&a, &snf));

        let id = IntMatrix::identity(4);
        let snf = smith_normal_form(&id);
        assert_eq!(diag_i64(&snf), vec![1, 1, 1, 1]);
        assert!(snf_invariants_hold(&id, &snf));
    }

    #[test]
    fn snf_handles_rectangular_input() {
        let a = m(2, 3, &[2, 4, 4, -6, 6, 12]);
        let snf = smith_normal_form(&a);
        assert!(snf_invariants_hold(&a, &snf));
        assert_eq!(diag_i64(&snf), vec![2, 6]);
    }

    #[test]
    fn bf_group_of_three_symbol_matrix_is_trivial() {
        let a = m(3, 3, &[1, 1, 0, 1, 1, 1, 1, 1, 1]);
        let ia = IntMatrix::identity(3).sub(&a).unwrap();
        assert_eq!(i64::try_from(ia.determinant().unwrap()).unwrap(), -1);
        let g = bf_group(&a).unwrap();
        assert!(g.is_trivial());
        assert_eq!(g.to_string(), "trivial");
    }

    #[test]
    fn bf_group_of_full_two_shift_is_trivial() {
        assert!(bf_group(&m(1, 1, &[2])).unwrap().is_trivial());
        // the two-vertex presentation of the same shift
        assert!(bf_group(&m(2, 2, &[1, 1, 1, 1])).unwrap().is_trivial());
    }

    #[test]
    fn bf_group_of_identity_is_free() {
        let g = bf_group(&IntMatrix::identity(3)).unwrap();
        assert_eq!(g.invariant_factors(), vec![BigInt::zero(); 3]);
        assert_eq!(g.to_string(), "Z + Z + Z");
        assert!(g.order().is_none());
    }

    #[test]
    fn bf_group_of_two_cycle_is_free_of_rank_one() {
        // I - A = [[1,-1],[-1,1]] is singular of rank 1
        let g = bf_group(&m(2, 2, &[0, 1, 1, 0])).unwrap();
        assert_eq!(g.invariant_factors(), &[BigInt::zero()]);
        assert_eq!(g.to_string(), "Z");
    }

    #[test]
    fn bf_group_rejects_non_square() {
        assert!(matches!(
            bf_group(&IntMatrix::zero(2, 3)),
            Err(BfError::Matrix(MatrixError::NonSquare { .. }))
        ));
    }

    #[test]
    fn group_order_matches_determinant() {
        for entries in [
            vec![3i64, 1, 0, 3],
            vec![2, 1, 1, 2],
            vec![5, 0, 0, 1],
            vec![4, 2, 2, 4],
        ] {
            let a = m(2, 2, &entries);
            let ia = IntMatrix::identity(2).sub(&a).unwrap();
            let det = ia.determinant().unwrap().abs();
            let g = bf_group(&a).unwrap();
            if let Some(order) = g.order() {
                assert_eq!(order, det);
            } else {
                assert!(det.is_zero());
            }
        }
    }

    #[test]
    fn snf_is_invariant_under_permutation() {
        let a = m(3, 3, &[2, 4, 4, -6, 6, 12, 10, -4, -16]);
        let permuted = m(3, 3, &[10, -4, -16, 2, 4, 4, -6, 6, 12]);
        let col_permuted = m(3, 3, &[4, 2, 4, 6, -6, 12, -4, 10, -16]);
        let d0 = diag_i64(&smith_normal_form(&a));
        assert_eq!(d0, diag_i64(&smith_normal_form(&permuted)));
        assert_eq!(d0, diag_i64(&smith_normal_form(&col_permuted)));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(
            m(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 10]).determinant().unwrap(),
            BigInt::from(-3)
        );
        assert_eq!(
            m(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]).determinant().unwrap(),
            BigInt::zero()
        );
        assert_eq!(m(0, 0, &[]).determinant().unwrap(), BigInt::one());
        assert!(m(2, 3, &[0; 6]).determinant().is_err());
    }

    #[test]
    fn report_shape() {
        let six = m(
            6,
            6,
            &[
                1, 1, 1, 0, 0, 0, //
                1, 1, 1, 0, 0, 0, //
                0, 0, 0, 1, 1, 1, //
                0, 0, 0, 1, 1, 0, //
                0, 0, 0, 1, 1, 1, //
                0, 1, 1, 0, 0, 0,
            ],
        );
        let report = bf_trivial_report(&[
            m(3, 3, &[1, 1, 0, 1, 1, 1, 1, 1, 1]),
            six,
            IntMatrix::identity(2),
        ])
        .unwrap();
        assert!(report[0].trivial);
        assert!(report[1].trivial);
        assert!(!report[2].trivial);
        assert_eq!(report[2].bf_invariant_factors, vec![0, 0]);
        let json = serde_json::to_string(&report[0]).unwrap();
        assert!(json.contains("\"bf_invariant_factors\":[]"));
        assert!(bf_trivial_report(&[]).unwrap().is_empty());
    }

    #[test]
    fn matrix_json_round_trip() {
        let a = m(2, 2, &[1, -2, 3, 4]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"matrix":[[1,-2],[3,4]]}"#);
        let back: IntMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        // the subshift-style shape with a symbols array is accepted
        let with_symbols: IntMatrix =
            serde_json::from_str(r#"{"symbols":["a","b"],"matrix":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(with_symbols, IntMatrix::identity(2));
    }
}
