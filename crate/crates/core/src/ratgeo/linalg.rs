//! Dense exact linear algebra over the rationals.

use num_traits::{One, Zero};

use super::rational::{Rational, RationalVector};

pub type Matrix = Vec<RationalVector>;

/// Reduced row echelon form of `rows` (each of length `ncols`) and its pivot
/// columns in increasing order.
pub fn rref(rows: &[RationalVector], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[RationalVector]) -> usize {
    match rows.first() {
        Some(first) => rref(rows, first.len()).1.len(),
        None => 0,
    }
}

/// Basis of `{x : A x = 0}` where `A` has `ncols` columns.
pub fn nullspace(rows: &[RationalVector], ncols: usize) -> Matrix {
    let (r, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Some solution of `A x = b`, with free variables set to zero.
pub fn solve(a: &[RationalVector], b: &[Rational], ncols: usize) -> Option<RationalVector> {
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Indices of a maximal linearly independent subset of `rows`, chosen
/// greedily in index order.
pub fn independent_rows(rows: &[RationalVector]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Matrix = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        basis.push(row.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    chosen
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect()
}

pub fn transpose(m: &[RationalVector], ncols: usize) -> Matrix {
    (0..ncols).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &[RationalVector], v: &[Rational]) -> RationalVector {
    m.iter().map(|row| super::rational::dot(row, v)).collect()
}

pub fn mat_mul(a: &[RationalVector], b: &[RationalVector]) -> Matrix {
    let inner = b.len();
    let ncols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..ncols)
                .map(|j| {
                    (0..inner).fold(Rational::zero(), |acc, k| {
                        if row[k].is_zero() {
                            acc
                        } else {
                            acc + &row[k] * &b[k][j]
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn inverse(m: &[RationalVector]) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .zip(identity(n))
        .map(|(row, id)| row.iter().cloned().chain(id).collect())
        .collect();
    let (r, pivots) = rref(&aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Dimension of the affine hull of a nonempty point set.
pub fn affine_dimension(points: &[RationalVector]) -> usize {
    let Some(base) = points.first() else {
        return 0;
    };
    let diffs: Matrix = points[1..].iter().map(|p| super::rational::sub(p, base)).collect();
    rank(&diffs)
}

/// Dimension of the linear span of a point set.
pub fn linear_dimension(points: &[RationalVector]) -> usize {
    rank(points)
}
