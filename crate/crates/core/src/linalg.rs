//! Small exact linear algebra: fraction-free (Bareiss) determinants and
//! integer-matrix inversion, plus Gaussian rank over the unreduced
//! fraction field of Z[Gamma].

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::grpring::Fraction;

/// Fraction-free determinant of a square integer matrix.
pub fn det_int(mat: &[Vec<BigInt>]) -> BigInt {
    let n = mat.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = mat.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev; // exact by Sylvester's identity
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Exact inverse of an integer matrix: Bareiss forward elimination on the
/// augmented system followed by rational back-substitution.
pub fn invert_int(mat: &[Vec<BigInt>]) -> Result<Vec<Vec<BigRational>>> {
    let n = mat.len();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = mat[i].clone();
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let cols = 2 * n;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => a.swap(k, i),
                None => return Err(Error::internal("singular matrix")),
            }
        }
        for i in k + 1..n {
            for j in 0..cols {
                if j == k {
                    continue;
                }
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    // back-substitution over Q
    let mut inv: Vec<Vec<BigRational>> =
        vec![vec![BigRational::zero(); n]; n];
    for col in 0..n {
        for i in (0..n).rev() {
            let mut acc = BigRational::from_integer(a[i][n + col].clone());
            for j in i + 1..n {
                acc -= BigRational::from_integer(a[i][j].clone()) * &inv[j][col];
            }
            inv[i][col] = acc / BigRational::from_integer(a[i][i].clone());
        }
    }
    Ok(inv)
}

/// Rank of a matrix over the fraction field K, by Gaussian elimination
/// with unreduced fractions.
pub fn rank_fractions(mat: &[Vec<Fraction>]) -> usize {
    if mat.is_empty() {
        return 0;
    }
    let (rows, cols) = (mat.len(), mat[0].len());
    let mut m: Vec<Vec<Fraction>> = mat.to_vec();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..cols {
        let pivot = match (row..rows).find(|&i| !m[i][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        m.swap(row, pivot);
        for i in row + 1..rows {
            if m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].div(&m[row][col]).expect("pivot is nonzero");
            for j in col..cols {
                let delta = factor.mul(&m[row][j]);
                m[i][j] = m[i][j].sub(&delta);
            }
        }
        rank += 1;
        row += 1;
        if row == rows {
            break;
        }
    }
    rank
}

/// True if `r` equals the integer 1.
pub fn rational_is_one(r: &BigRational) -> bool {
    r.is_one()
}

/// Absolute value helper used when printing certificates.
pub fn int_abs(x: &BigInt) -> BigInt {
    x.abs()
}
