//! Small dense exact linear algebra over ℚ.

use num_traits::{One, Signed, Zero};

use crate::rational::Q;

pub type Matrix = Vec<Vec<Q>>;

/// Row-reduced echelon form. Returns the reduced rows (zero rows dropped) and
/// the pivot column of each.
pub fn rref(rows: &[Vec<Q>]) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
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
        let inv = Q::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    rref(rows).1.len()
}

/// Solves `a · x = b` for square nonsingular `a`.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.len() != n || piv.iter().any(|&p| p >= n) {
        return None;
    }
    Some(red.iter().map(|row| row[n].clone()).collect())
}

/// A particular solution of a possibly rectangular system, free variables set
/// to zero. `None` when inconsistent.
pub fn solve_any(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let ncols = a.first().map_or(0, Vec::len);
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, piv) = rref(&aug);
    if piv.contains(&ncols) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (row, &p) in red.iter().zip(&piv) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

pub fn det(a: &[Vec<Q>]) -> Q {
    let n = a.len();
    let mut m: Matrix = a.to_vec();
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            m.swap(p, c);
            d = -d;
        }
        d *= &m[c][c];
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[c][c];
                for j in c..n {
                    let sub = &f * &m[c][j];
                    m[i][j] -= sub;
                }
            }
        }
    }
    d
}

pub fn transpose(a: &[Vec<Q>]) -> Matrix {
    let ncols = a.first().map_or(0, Vec::len);
    (0..ncols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_vec(a: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    a.iter().map(|row| crate::rational::dot(row, x)).collect()
}

/// Inertia `(positive, negative, zero)` of a symmetric matrix, by exact
/// congruence diagonalization.
pub fn inertia(sym: &[Vec<Q>]) -> (usize, usize, usize) {
    let n = sym.len();
    let mut m: Matrix = sym.to_vec();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut k = 0;
    while k < n {
        if m[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(k, j);
                for row in m.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !m[k][j].is_zero()) {
                // row_k += row_j, col_k += col_j makes the pivot 2·m[k][j] + m[j][j]
                for c in 0..n {
                    let add = m[j][c].clone();
                    m[k][c] += add;
                }
                for r in 0..n {
                    let add = m[r][j].clone();
                    m[r][k] += add;
                }
            }
        }
        let p = m[k][k].clone();
        if p.is_zero() {
            zero += 1;
            k += 1;
            continue;
        }
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if !m[i][k].is_zero() {
                let f = &m[i][k] / &p;
                for j in k..n {
                    let sub = &f * &m[k][j];
                    m[i][j] -= sub;
                }
                for r in 0..n {
                    let sub = &f * &m[r][k];
                    m[r][i] -= sub;
                }
            }
        }
        k += 1;
    }
    (pos, neg, zero)
}

/// Coefficients (constant term first) of the unique polynomial of degree
/// `< xs.len()` through the given nodes.
pub fn interpolate(xs: &[Q], ys: &[Q]) -> Vec<Q> {
    let n = xs.len();
    let vander: Matrix = xs
        .iter()
        .map(|x| {
            let mut row = Vec::with_capacity(n);
            let mut p = Q::one();
            for _ in 0..n {
                row.push(p.clone());
                p *= x;
            }
            row
        })
        .collect();
    solve(&vander, ys).expect("interpolation nodes must be distinct")
}

pub fn eval_poly(coeffs: &[Q], x: &Q) -> Q {
    coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}
