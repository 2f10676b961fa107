//! Total unimodularity by exhaustive subdeterminant enumeration.

use super::intmat::sub_det;
use super::matrix::QMatrix;
use super::scalar::{rat_int, Rat};
use crate::util::combinations;

/// Outcome of a total-unimodularity test.
#[derive(Clone, PartialEq, Debug)]
pub enum TuVerdict {
    TotallyUnimodular,
    /// An entry outside {-1, 0, 1}; such a matrix is trivially not TU.
    BadEntry {
        row: usize,
        col: usize,
        value: Rat,
    },
    /// A square submatrix with determinant outside {-1, 0, 1}.
    Violation {
        rows: Vec<usize>,
        cols: Vec<usize>,
        det: Rat,
    },
}

impl TuVerdict {
    pub fn is_tu(&self) -> bool {
        matches!(self, TuVerdict::TotallyUnimodular)
    }
}

/// True iff every square submatrix has determinant -1, 0 or 1.
///
/// Brute force in increasing submatrix size, short-circuiting on the first
/// violation. Intended for matrices with at most a dozen or so columns; the
/// 1x1 scan doubles as the entry precondition check.
pub fn is_totally_unimodular(m: &QMatrix) -> TuVerdict {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if !super::scalar::is_signed_unit_or_zero(m.at(i, j)) {
                return TuVerdict::BadEntry {
                    row: i,
                    col: j,
                    value: m.at(i, j).clone(),
                };
            }
        }
    }
    let grid = m
        .to_integer_grid()
        .expect("entries just checked to be 0 or +-1");
    let max_k = m.nrows().min(m.ncols());
    for k in 2..=max_k {
        for rows in combinations(m.nrows(), k) {
            for cols in combinations(m.ncols(), k) {
                let d = sub_det(&grid, &rows, &cols)
                    .expect("no overflow on unit-entry matrices of this size");
                if d.abs() > 1 {
                    return TuVerdict::Violation {
                        rows,
                        cols,
                        det: rat_int(d as i64),
                    };
                }
            }
        }
    }
    TuVerdict::TotallyUnimodular
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::matrix::anon_labels;

    fn qm(rows: Vec<Vec<i64>>) -> QMatrix {
        let n = rows.first().map_or(0, |r| r.len());
        QMatrix::from_integer_rows(rows, anon_labels(n)).unwrap()
    }

    #[test]
    fn identity_is_tu() {
        let m = qm(vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ]);
        assert!(is_totally_unimodular(&m).is_tu());
    }

    #[test]
    fn u24_matrix_fails_on_last_two_columns() {
        let m = qm(vec![vec![1, 0, 1, 1], vec![0, 1, 1, -1]]);
        match is_totally_unimodular(&m) {
            TuVerdict::Violation { rows, cols, det } => {
                assert_eq!(rows, vec![0, 1]);
                assert_eq!(cols, vec![2, 3]);
                assert_eq!(det, rat_int(-2));
            }
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn bad_entry_short_circuits() {
        let m = qm(vec![vec![2, 0], vec![0, 1]]);
        assert!(matches!(
            is_totally_unimodular(&m),
            TuVerdict::BadEntry { row: 0, col: 0, .. }
        ));
    }
}
