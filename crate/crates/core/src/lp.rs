//! Exact rational linear feasibility (phase-one simplex with Bland's rule).

use crate::matrix::Matrix;
use num::{BigInt, BigRational, One, Signed, Zero};

type Q = BigRational;

fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Finds some `z >= 0` with `a z = b`, or `None` if the system is infeasible.
pub fn feasible_point(a: &[Vec<Q>], b: &[Q], n: usize) -> Option<Vec<Q>> {
    let m = a.len();
    let width = n + m + 1;
    let rhs = n + m;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i].is_negative();
        let mut row = vec![Q::zero(); width];
        for j in 0..n {
            row[j] = if neg { -a[i][j].clone() } else { a[i][j].clone() };
        }
        row[n + i] = Q::one();
        row[rhs] = b[i].abs();
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of the phase-one objective (sum of artificials).
    let mut d = vec![Q::zero(); width];
    for row in &t {
        for j in 0..n {
            d[j] -= &row[j];
        }
        d[rhs] -= &row[rhs];
    }
    while let Some(enter) = (0..n + m).find(|&j| d[j].is_negative()) {
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][rhs] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let (p, _) = leave.expect("phase-one objective is bounded below");
        let piv = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v /= &piv;
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != p && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, pv) in row.iter_mut().zip(&prow) {
                    *v -= &f * pv;
                }
            }
        }
        if !d[enter].is_zero() {
            let f = d[enter].clone();
            for (v, pv) in d.iter_mut().zip(&prow) {
                *v -= &f * pv;
            }
        }
        basis[p] = enter;
    }
    // d[rhs] holds minus the objective value.
    if !d[rhs].is_zero() {
        return None;
    }
    let mut z = vec![Q::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            z[bv] = t[i][rhs].clone();
        }
    }
    Some(z)
}

/// True iff `{x >= 0 : a x = 0}` is `{0}`, decided by infeasibility of `{x >= 0, sum x = 1, a x = 0}`.
pub fn recession_cone_trivial(a: &Matrix) -> bool {
    let n = a.cols();
    let mut rows: Vec<Vec<Q>> = (0..a.rows()).map(|i| a.row(i).iter().map(|&v| q(v)).collect()).collect();
    let mut b = vec![Q::zero(); a.rows()];
    rows.push(vec![Q::one(); n]);
    b.push(Q::one());
    feasible_point(&rows, &b, n).is_none()
}

/// Integer row weights `y` with every entry of `yᵀa` at least 1, if they exist.
///
/// Such weights exist exactly when the recession cone of `a` is trivial, and they bound
/// every nonnegative solution of `a x = b` by `yᵀa · x = yᵀb`.
pub fn positive_row_weights(a: &Matrix) -> Option<Vec<i64>> {
    let (m, n) = (a.rows(), a.cols());
    // Unknowns: y+ (m), y- (m), slack (n). Constraint per column j: a_j·(y+ - y-) - s_j = 1.
    let vars = 2 * m + n;
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let mut row = vec![Q::zero(); vars];
        for i in 0..m {
            row[i] = q(a.get(i, j));
            row[m + i] = q(-a.get(i, j));
        }
        row[2 * m + j] = q(-1);
        rows.push(row);
    }
    let z = feasible_point(&rows, &vec![Q::one(); n], vars)?;
    let y: Vec<Q> = (0..m).map(|i| &z[i] - &z[m + i]).collect();
    let lcm = y.iter().fold(BigInt::one(), |acc, v| num::Integer::lcm(&acc, v.denom()));
    let scaled: Option<Vec<i64>> = y
        .iter()
        .map(|v| {
            let s = v * Q::from_integer(lcm.clone());
            num::ToPrimitive::to_i64(s.numer())
        })
        .collect();
    scaled
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_examples() {
        let a = Matrix::from_rows(&[vec![1, 1]], 2).unwrap();
        assert!(recession_cone_trivial(&a));
        let w = positive_row_weights(&a).unwrap();
        assert!(a.vec_mul(&w).iter().all(|&c| c >= 1));
        let b = Matrix::from_rows(&[vec![1, -1]], 2).unwrap();
        assert!(!recession_cone_trivial(&b));
        assert!(positive_row_weights(&b).is_none());
        let empty = Matrix::zeros(0, 2);
        assert!(!recession_cone_trivial(&empty));
        assert!(recession_cone_trivial(&Matrix::zeros(3, 0)));
    }

    #[test]
    fn feasibility() {
        let a = vec![vec![q(1), q(2)]];
        assert!(feasible_point(&a, &[q(3)], 2).is_some());
        assert!(feasible_point(&a, &[q(-1)], 2).is_none());
    }
}
