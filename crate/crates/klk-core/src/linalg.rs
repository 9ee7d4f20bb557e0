//! Exact linear algebra over the rationals: reduced echelon form, rank,
//! inversion and solving. Dense Vec-of-rows representation; every matrix in
//! this crate is small (dimensions bounded by binomial(2n, k) with n <= 4).

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

pub type Matrix = Vec<Vec<Rational>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Rational::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rational::one();
    }
    m
}

/// In-place reduction to reduced row echelon form; returns the pivot columns
/// in order. Columns are eliminated left to right, so column order encodes
/// pivot preference.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].clone().recip();
        for x in m[r].iter_mut() {
            *x *= inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = m[r][j].clone() * f.clone();
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut c = m.clone();
    rref(&mut c).len()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = if n == 0 { 0 } else { a[0].len() };
    let m = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if b[l][j].is_zero() {
                    continue;
                }
                let t = a[i][l].clone() * b[l][j].clone();
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn mat_vec(a: &Matrix, v: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| {
            let mut acc = Rational::zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc += x.clone() * y.clone();
                }
            }
            acc
        })
        .collect()
}

pub fn invert(m: &Matrix) -> Result<Matrix> {
    let n = m.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if m[0].len() != n {
        return Err(Error::InternalConsistency("inverting a non-square matrix".into()));
    }
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(identity(n)[i].clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return Err(Error::InternalConsistency("singular matrix".into()));
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn determinant(m: &Matrix) -> Rational {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if pr != c {
            a.swap(c, pr);
            det = -det;
        }
        det *= a[c][c].clone();
        let inv = a[c][c].clone().recip();
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() * inv.clone();
            for j in c..n {
                let t = a[c][j].clone() * f.clone();
                a[i][j] -= t;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_i64;

    #[test]
    fn invert_and_rank() {
        let m = vec![
            vec![rat_i64(2), rat_i64(1)],
            vec![rat_i64(1), rat_i64(1)],
        ];
        let inv = invert(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert_eq!(rank(&m), 2);
        let singular = vec![
            vec![rat_i64(1), rat_i64(2)],
            vec![rat_i64(2), rat_i64(4)],
        ];
        assert_eq!(rank(&singular), 1);
        assert!(invert(&singular).is_err());
        assert_eq!(determinant(&singular), rat_i64(0));
        assert_eq!(determinant(&m), rat_i64(1));
    }
}
