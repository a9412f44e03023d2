//! Dense matrices over K.

use crate::base_ring::{BaseField, FieldScalar};

pub type Matrix = Vec<Vec<FieldScalar>>;

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { FieldScalar::one() } else { FieldScalar::zero() }).collect()).collect()
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_mul(k: &BaseField, a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(FieldScalar::zero(), |acc, t| &acc + &k.mul(&row[t], &b[t][j]))
                })
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free elimination over K.
pub fn det(k: &BaseField, m: &Matrix) -> FieldScalar {
    let n = m.len();
    let mut a = m.clone();
    let mut d = FieldScalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return FieldScalar::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        let piv = a[c][c].clone();
        d = k.mul(&d, &piv);
        let inv = k.inv(&piv).expect("nonzero pivot");
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = k.mul(&a[r][c], &inv);
            for j in c..n {
                let t = k.mul(&f, &a[c][j]);
                a[r][j] = &a[r][j] - &t;
            }
        }
    }
    d
}

/// Inverse, or None when singular.
pub fn inverse(k: &BaseField, m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m.iter().cloned().zip(identity(n)).map(|(mut r, e)| {
        r.extend(e);
        r
    }).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let inv = k.inv(&a[c][c]).ok()?;
        for j in 0..2 * n {
            a[c][j] = k.mul(&a[c][j], &inv);
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..2 * n {
                let t = k.mul(&f, &a[c][j]);
                a[r][j] = &a[r][j] - &t;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
