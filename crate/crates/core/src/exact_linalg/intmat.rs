//! Integer fast path for determinants and independence tests.
//!
//! Enumeration-heavy matroid routines spend nearly all their time in small
//! exact determinants. When a rational matrix happens to have integer entries
//! (every matrix in this crate's intended use does) we run Bareiss elimination
//! on i128 grids instead of allocating big rationals. All arithmetic is
//! checked; on overflow callers fall back to the generic path.

/// Determinant of the submatrix on `rows` x `cols`; `None` means "no integer
/// answer here" (overflow), never "zero".
pub fn sub_det(grid: &[Vec<i128>], rows: &[usize], cols: &[usize]) -> Option<i128> {
    debug_assert_eq!(rows.len(), cols.len());
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| grid[i][j]).collect())
        .collect();
    match det_for_zero_aware(&mut a) {
        DetOutcome::Value(v) => Some(v),
        DetOutcome::Overflow => None,
    }
}

enum DetOutcome {
    Value(i128),
    Overflow,
}

fn det_for_zero_aware(a: &mut [Vec<i128>]) -> DetOutcome {
    let n = a.len();
    if n == 0 {
        return DetOutcome::Value(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(pivot_row) = (k..n).find(|&i| a[i][k] != 0) else {
            return DetOutcome::Value(0);
        };
        if pivot_row != k {
            a.swap(pivot_row, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let Some(x) = a[k][k].checked_mul(a[i][j]) else {
                    return DetOutcome::Overflow;
                };
                let Some(y) = a[i][k].checked_mul(a[k][j]) else {
                    return DetOutcome::Overflow;
                };
                let Some(num) = x.checked_sub(y) else {
                    return DetOutcome::Overflow;
                };
                a[i][j] = num / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    DetOutcome::Value(sign * a[n - 1][n - 1])
}

/// Rank of an integer grid by fraction-free elimination.
pub fn rank(grid: &[Vec<i128>]) -> Option<usize> {
    let nrows = grid.len();
    if nrows == 0 {
        return Some(0);
    }
    let ncols = grid[0].len();
    let mut a: Vec<Vec<i128>> = grid.to_vec();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..nrows {
            if a[i][col] != 0 {
                let (pr, pc) = (a[r][col], a[i][col]);
                for j in col..ncols {
                    let x = pr.checked_mul(a[i][j])?;
                    let y = pc.checked_mul(a[r][j])?;
                    a[i][j] = x.checked_sub(y)?;
                }
                // keep entries small; the gcd of a row never changes its span
                let g = a[i].iter().fold(0i128, |acc, &v| gcd(acc, v));
                if g > 1 {
                    for v in a[i].iter_mut() {
                        *v /= g;
                    }
                }
            }
        }
        r += 1;
    }
    Some(r)
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
