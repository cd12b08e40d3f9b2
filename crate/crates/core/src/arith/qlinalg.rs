//! Exact linear algebra over `Q`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Row echelon form in place; returns pivot columns.
fn rref(rows: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// Some `x` with `sum x_j cols[j] = target` (free variables zero), or `None`.
pub fn solve(cols: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = cols.len();
    let mut rows: Vec<Vec<BigRational>> = (0..target.len())
        .map(|i| cols.iter().map(|c| c[i].clone()).chain([target[i].clone()]).collect())
        .collect();
    let pivots = rref(&mut rows, n);
    if rows.iter().skip(pivots.len()).any(|r| !r[n].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = rows[i][n].clone();
    }
    Some(x)
}

pub fn rank(vectors: &[Vec<BigRational>]) -> usize {
    let Some(first) = vectors.first() else { return 0 };
    let mut rows = vectors.to_vec();
    rref(&mut rows, first.len()).len()
}

/// Integer value of an exact rational, if it is one and fits.
pub fn to_i64(x: &BigRational) -> Option<i64> {
    if !x.denom().is_one() {
        return None;
    }
    i64::try_from(x.numer().clone()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_and_detects_inconsistency() {
        let cols = vec![vec![q(1), q(0), q(1)], vec![q(0), q(2), q(2)]];
        let x = solve(&cols, &[q(3), q(4), q(7)]).unwrap();
        assert_eq!(x, vec![q(3), q(2)]);
        assert!(solve(&cols, &[q(1), q(1), q(1)]).is_none());
        assert_eq!(rank(&cols), 2);
        let half = solve(&[vec![q(2)]], &[q(1)]).unwrap();
        assert_eq!(to_i64(&half[0]), None);
    }
}
