//! Exact determinants for checking the closed-form Gram determinant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn ln_big(n: &BigInt) -> f64 {
    let n = n.abs();
    let shift = n.bits().saturating_sub(60);
    (&n >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Fraction-free (Bareiss) determinant of an integer matrix.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// `ln det` of a rational matrix: each row is scaled by the product of its
/// denominators, then eliminated over the integers.
pub fn ln_det_rational(rows: Vec<Vec<BigRational>>) -> f64 {
    let mut ln_scale = 0.0;
    let ints = rows
        .into_iter()
        .map(|row| {
            let scale = row.iter().fold(BigInt::one(), |acc, q| acc * q.denom());
            ln_scale += ln_big(&scale);
            row.iter()
                .map(|q| (q * BigRational::from_integer(scale.clone())).to_integer())
                .collect()
        })
        .collect();
    let det = bareiss(ints);
    assert!(det.is_positive(), "Gram determinant must be positive");
    ln_big(&det) - ln_scale
}
