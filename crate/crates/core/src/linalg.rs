//! Small dense linear algebra over [`Scalar`]: rank, null spaces and
//! pivoted Cholesky for Gram matrices.

use crate::scalar::Scalar;

/// Pivot tolerance for rank decisions in float mode.
pub const FLOAT_PIVOT_TOL: f64 = 1e-12;

pub type Matrix<S> = Vec<Vec<S>>;

fn pivot_tol<S: Scalar>(scale: f64) -> f64 {
    if S::EXACT {
        0.0
    } else {
        FLOAT_PIVOT_TOL * scale.max(1.0)
    }
}

fn max_modulus<S: Scalar>(a: &Matrix<S>) -> f64 {
    a.iter()
        .flat_map(|r| r.iter().map(Scalar::modulus))
        .fold(0.0, f64::max)
}

/// Row echelon form in place; returns the pivot columns.
fn echelon<S: Scalar>(a: &mut Matrix<S>) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let tol = pivot_tol::<S>(max_modulus(a));
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .max_by(|&i, &j| a[i][c].modulus().total_cmp(&a[j][c].modulus()))
            .expect("nonempty range");
        if a[best][c].modulus() <= tol || a[best][c].is_negligible() {
            continue;
        }
        a.swap(r, best);
        let inv = S::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_negligible() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: Scalar>(a: &Matrix<S>) -> usize {
    let mut work = a.clone();
    echelon(&mut work).len()
}

/// A basis of `{x : A x = 0}`.
pub fn null_space<S: Scalar>(a: &Matrix<S>) -> Vec<Vec<S>> {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut work = a.clone();
    let pivots = echelon(&mut work);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![S::zero(); cols];
            x[f] = S::one();
            for (row, &p) in pivots.iter().enumerate() {
                x[p] = -work[row][f].clone();
            }
            x
        })
        .collect()
}

/// Solves `A x = b` for square nonsingular `A`.
pub fn solve<S: Scalar>(a: &Matrix<S>, b: &[S]) -> Option<Vec<S>> {
    let n = a.len();
    let mut aug: Matrix<S> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

/// Outcome of a pivoted Cholesky factorization of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PsdSummary {
    pub rank: usize,
    /// Smallest accepted pivot (the diagonal of the LDL* factor), or +inf if none.
    pub min_pivot: f64,
}

/// Pivoted Cholesky of a Hermitian matrix. Fails if the matrix is not
/// positive semidefinite (a negative pivot below `-neg_tol`, or leftover
/// off-diagonal mass once all remaining diagonals vanish).
pub fn psd_rank<S: Scalar>(g: &Matrix<S>, neg_tol: f64) -> Option<PsdSummary> {
    let n = g.len();
    let mut a = g.clone();
    let tol = pivot_tol::<S>(max_modulus(g));
    let mut active: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    let mut min_pivot = f64::INFINITY;

    while !active.is_empty() {
        let (pos, &i) = active
            .iter()
            .enumerate()
            .max_by(|(_, &x), (_, &y)| a[x][x].real().total_cmp(&a[y][y].real()))
            .expect("nonempty");
        let d = a[i][i].real();
        if d <= tol || a[i][i].is_negligible() {
            for &j in &active {
                if a[j][j].real() < -neg_tol {
                    return None;
                }
                for &k in &active {
                    if j != k && a[j][k].modulus() > neg_tol.max(tol) && !a[j][k].is_negligible() {
                        return None;
                    }
                }
            }
            break;
        }
        min_pivot = min_pivot.min(d);
        rank += 1;
        active.swap_remove(pos);
        let pivot = a[i][i].clone();
        for &j in &active {
            if a[j][i].is_negligible() {
                continue;
            }
            let f = a[j][i].clone() / pivot.clone();
            for &k in &active {
                let delta = f.clone() * a[i][k].clone();
                a[j][k] = a[j][k].clone() - delta;
            }
        }
    }
    Some(PsdSummary { rank, min_pivot })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};
    use num::complex::Complex64;

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter()
            .map(|r| r.iter().map(|&x| ratio(x, 1)).collect())
            .collect()
    }

    #[test]
    fn rank_and_null_space() {
        let a = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = null_space(&a);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let dot: Rational = row
                .iter()
                .zip(&ns[0])
                .map(|(x, y)| x * y)
                .fold(ratio(0, 1), |s, t| s + t);
            assert_eq!(dot, ratio(0, 1));
        }
    }

    #[test]
    fn psd_detection() {
        let pd = q(&[&[2, 1], &[1, 2]]);
        assert_eq!(psd_rank(&pd, 0.0).unwrap().rank, 2);
        let semi = q(&[&[1, 1], &[1, 1]]);
        assert_eq!(psd_rank(&semi, 0.0).unwrap().rank, 1);
        let indefinite = q(&[&[1, 2], &[2, 1]]);
        assert!(psd_rank(&indefinite, 0.0).is_none());
        let zero_diag = q(&[&[0, 1], &[1, 0]]);
        assert!(psd_rank(&zero_diag, 0.0).is_none());
    }

    #[test]
    fn float_rank_uses_tolerance() {
        let a: Matrix<Complex64> = vec![
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(1.0, 0.0), Complex64::new(1.0 + 1e-15, 0.0)],
        ];
        assert_eq!(rank(&a), 1);
    }
}
