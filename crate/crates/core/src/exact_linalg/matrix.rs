//! Dense labeled matrices with exact entries.

use std::fmt;

use num_traits::Signed;

use super::scalar::{Field, Gf, Rat, Ring};
use crate::error::{Error, Result};

/// Row-major matrix whose columns carry distinct edge labels.
///
/// Row operations never touch the labels; column permutations move labels
/// along with their columns. This mirrors how represented matroids behave:
/// row operations and labeled column swaps do not change the matroid.
#[derive(Clone, PartialEq, Debug)]
pub struct ExactMatrix<K> {
    nrows: usize,
    ncols: usize,
    data: Vec<K>,
    labels: Vec<String>,
}

pub type QMatrix = ExactMatrix<Rat>;

impl<K: Ring> ExactMatrix<K> {
    pub fn from_rows(rows: Vec<Vec<K>>, labels: Vec<String>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = labels.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != ncols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {ncols}",
                    r.len()
                )));
            }
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Schema(format!("duplicate column label `{l}`")));
            }
        }
        Ok(ExactMatrix {
            nrows,
            ncols,
            data: rows.into_iter().flatten().collect(),
            labels,
        })
    }

    /// n-by-n identity.
    pub fn identity(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { K::one() } else { K::zero() })
                    .collect()
            })
            .collect();
        Self::from_rows(rows, labels)
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn at(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.ncols + j] = v;
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, j: usize) -> &str {
        &self.labels[j]
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[K]> {
        (0..self.nrows).map(|i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<K> {
        (0..self.nrows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Submatrix on the given row and column index sets (in the given order).
    /// Column labels follow their columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.at(i, j).clone()))
            .collect();
        ExactMatrix {
            nrows: rows.len(),
            ncols: cols.len(),
            data,
            labels: cols.iter().map(|&j| self.labels[j].clone()).collect(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let all_rows: Vec<usize> = (0..self.nrows).collect();
        self.select(&all_rows, cols)
    }

    /// Column permutation as an explicit, label-carrying step.
    /// `perm[k]` is the old index of the column placed at position `k`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.ncols {
            return Err(Error::Dimension(format!(
                "permutation length {} does not match {} columns",
                perm.len(),
                self.ncols
            )));
        }
        let mut seen = vec![false; self.ncols];
        for &p in perm {
            if p >= self.ncols || seen[p] {
                return Err(Error::Domain("not a permutation".into()));
            }
            seen[p] = true;
        }
        Ok(self.select_columns(perm))
    }

    pub fn transpose_rows(&self) -> Vec<Vec<K>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    /// Fraction-free (Bareiss) determinant, exact in any integral domain with
    /// exact division. Rows are swapped as needed, with sign tracking.
    pub fn det(&self) -> Result<K> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of a {}x{} matrix",
                self.nrows, self.ncols
            )));
        }
        let n = self.nrows;
        if n == 0 {
            return Ok(K::one());
        }
        let mut a: Vec<Vec<K>> = self.transpose_rows();
        let mut sign_flip = false;
        let mut prev = K::one();
        for k in 0..n {
            let pivot_row = match (k..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => i,
                None => return Ok(K::zero()),
            };
            if pivot_row != k {
                a.swap(pivot_row, k);
                sign_flip = !sign_flip;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = num
                        .exact_div(&prev)
                        .expect("fraction-free elimination divides exactly");
                }
                a[i][k] = K::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign_flip { d.neg() } else { d })
    }
}

impl<K: Field> ExactMatrix<K> {
    /// Reduced row echelon form with zero rows removed.
    ///
    /// Pivoting is deterministic: scan columns left to right, pick the first
    /// not-yet-used row with a nonzero entry. Columns stay in place; swaps are
    /// a separate explicit step (`permute_columns`).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a: Vec<Vec<K>> = self.transpose_rows();
        let nrows = self.nrows;
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.ncols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][col].inv().expect("pivot is nonzero");
            for x in a[r].iter_mut() {
                *x = x.mul(&inv);
            }
            for i in 0..nrows {
                if i != r && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in 0..self.ncols {
                        a[i][j] = a[i][j].sub(&f.mul(&a[r][j]));
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        a.truncate(r);
        let m = ExactMatrix {
            nrows: r,
            ncols: self.ncols,
            data: a.into_iter().flatten().collect(),
            labels: self.labels.clone(),
        };
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Solve `A_B x = c` where `B` is a set of column indices forming a basis
    /// of the column space and `c` is the column at `target`. Returns the
    /// coordinate vector over `basis` (in the order given).
    pub fn coordinates_over(&self, basis: &[usize], target: usize) -> Option<Vec<K>> {
        let mut cols: Vec<usize> = basis.to_vec();
        cols.push(target);
        let sub = self.select_columns(&cols);
        let (red, pivots) = sub.rref();
        if pivots.len() != basis.len() || pivots.iter().enumerate().any(|(k, &p)| p != k) {
            return None;
        }
        Some(
            (0..basis.len())
                .map(|i| red.at(i, basis.len()).clone())
                .collect(),
        )
    }
}

impl QMatrix {
    /// Entrywise reduction mod p for matrices with entries in {-1, 0, 1}.
    pub fn cast_to_gf<const P: u32>(&self) -> Result<ExactMatrix<Gf<P>>> {
        let mut data = Vec::with_capacity(self.data.len());
        for (idx, x) in self.data.iter().enumerate() {
            if !super::scalar::is_signed_unit_or_zero(x) {
                return Err(Error::Domain(format!(
                    "entry {} at ({}, {}) is not in {{-1, 0, 1}}",
                    x,
                    idx / self.ncols,
                    idx % self.ncols
                )));
            }
            let v: i64 = if x.is_zero() {
                0
            } else if x.numer().is_negative() {
                -1
            } else {
                1
            };
            data.push(Gf::<P>::new(v));
        }
        Ok(ExactMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data,
            labels: self.labels.clone(),
        })
    }

    /// Integer grid copy when all entries are integers.
    pub fn to_integer_grid(&self) -> Option<Vec<Vec<i128>>> {
        let mut out = Vec::with_capacity(self.nrows);
        for i in 0..self.nrows {
            let mut row = Vec::with_capacity(self.ncols);
            for j in 0..self.ncols {
                let x = self.at(i, j);
                if !x.is_integer() {
                    return None;
                }
                row.push(i128::try_from(x.numer().clone()).ok()?);
            }
            out.push(row);
        }
        Some(out)
    }

    pub fn from_integer_rows(rows: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(super::scalar::rat_int).collect())
            .collect();
        Self::from_rows(rows, labels)
    }
}

impl<K: Ring> fmt::Display for ExactMatrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.labels.join(" "))?;
        for i in 0..self.nrows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Labels "c0", "c1", ... for ad hoc matrices.
pub fn anon_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("c{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::scalar::rat_int;

    fn qm(rows: Vec<Vec<i64>>) -> QMatrix {
        let n = rows.first().map_or(0, |r| r.len());
        QMatrix::from_integer_rows(rows, anon_labels(n)).unwrap()
    }

    #[test]
    fn det_examples() {
        // The U_{2,4} obstruction: a 2x2 subdeterminant equal to -2.
        assert_eq!(
            qm(vec![vec![1, 1], vec![1, -1]]).det().unwrap(),
            rat_int(-2)
        );
        assert_eq!(
            qm(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])
                .det()
                .unwrap(),
            rat_int(1)
        );
        assert_eq!(qm(vec![vec![1, 2], vec![2, 4]]).det().unwrap(), rat_int(0));
        // Needs a row swap.
        assert_eq!(qm(vec![vec![0, 1], vec![1, 0]]).det().unwrap(), rat_int(-1));
    }

    #[test]
    fn det_rejects_non_square() {
        assert!(matches!(
            qm(vec![vec![1, 0, 0], vec![0, 1, 0]]).det(),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn rref_identity() {
        let (r, piv) = qm(vec![vec![1, 0], vec![0, 1]]).rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r, qm(vec![vec![1, 0], vec![0, 1]]));
    }

    #[test]
    fn rref_removes_zero_rows_and_is_idempotent() {
        let m = qm(vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r.nrows(), 2);
        let (r2, piv2) = r.rref();
        assert_eq!(r, r2);
        assert_eq!(piv, piv2);
    }

    #[test]
    fn cast_to_field_examples() {
        let m = qm(vec![vec![1, -1], vec![0, 1]]);
        let f2 = m.cast_to_gf::<2>().unwrap();
        assert_eq!(f2.at(0, 1).residue(), 1);
        let f3 = m.cast_to_gf::<3>().unwrap();
        assert_eq!(f3.at(0, 1).residue(), 2);
        assert!(matches!(
            qm(vec![vec![2]]).cast_to_gf::<2>(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn coordinates_over_basis() {
        // column 2 = col0 - col1
        let m = qm(vec![vec![1, 0, 1], vec![0, 1, -1]]);
        let c = m.coordinates_over(&[0, 1], 2).unwrap();
        assert_eq!(c, vec![rat_int(1), rat_int(-1)]);
    }
}
