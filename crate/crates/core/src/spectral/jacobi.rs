use crate::error::{Error, Result};

const OFF_DIAGONAL_TOLERANCE: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a symmetric matrix, sorted descending.
///
/// Cyclic Jacobi over the upper triangle in row-major order, until the
/// off-diagonal Frobenius mass drops below `1e-14 ‖A‖_F`. Elements smaller
/// than `1e-14 ‖A‖_F / n` are not rotated: if every element is below that
/// level the stopping test already holds.
pub fn eigenvalues_sym(rows: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = rows.len();
    if let Some(bad) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: bad.len(),
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            if rows[i][j] != rows[j][i] {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    jacobi_eigenvalues(rows.concat(), n)
}

fn frobenius_off(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for p in 0..n {
        for q in p + 1..n {
            sum += a[p * n + q] * a[p * n + q];
        }
    }
    (2.0 * sum).sqrt()
}

/// Core solver on a row-major symmetric matrix that is consumed in place.
pub(crate) fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
    let target = OFF_DIAGONAL_TOLERANCE * norm;
    let negligible = target / n.max(1) as f64;
    let mut sweeps = 0;
    while frobenius_off(&a, n) > target {
        if sweeps == MAX_SWEEPS {
            let mut diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
            diag.sort_by(|x, y| y.total_cmp(x));
            return Err(Error::NoConvergence {
                iterations: sweeps,
                estimate: frobenius_off(&a, n),
                iterate: diag,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                if a[p * n + q].abs() > negligible {
                    rotate(&mut a, n, p, q);
                }
            }
        }
    }
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    values.sort_by(|x, y| y.total_cmp(x));
    Ok(values)
}

#[inline]
fn rotate(a: &mut [f64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let app = a[p * n + p];
    let aqq = a[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    a[p * n + p] = app - t * apq;
    a[q * n + q] = aqq + t * apq;
    a[p * n + q] = 0.0;
    a[q * n + p] = 0.0;

    // Rows p and q are contiguous; update them, then mirror into the columns.
    let (head, tail) = a.split_at_mut(q * n);
    let row_p = &mut head[p * n..p * n + n];
    let row_q = &mut tail[..n];
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let g = row_p[r];
        let h = row_q[r];
        row_p[r] = c * g - s * h;
        row_q[r] = s * g + c * h;
    }
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        a[r * n + p] = a[p * n + r];
        a[r * n + q] = a[q * n + r];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn two_by_two_closed_form() {
        let v = eigenvalues_sym(&[vec![1.0, 0.5], vec![0.5, 1.0 / 3.0]]).unwrap();
        let r = 13f64.sqrt() / 3.0;
        assert_relative_eq!(v[0], (4.0 / 3.0 + r) / 2.0, max_relative = 1e-14);
        assert_relative_eq!(v[1], (4.0 / 3.0 - r) / 2.0, max_relative = 1e-12);
        assert_relative_eq!(v[1], 0.06574, max_relative = 1e-4);
    }

    #[test]
    fn diagonal_input() {
        let m = vec![
            vec![2.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, 7.0],
        ];
        assert_eq!(eigenvalues_sym(&m).unwrap(), vec![7.0, 2.0, -1.0]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(
            eigenvalues_sym(&[vec![1.0, 2.0], vec![2.5, 1.0]]),
            Err(Error::NotSymmetric { row: 0, col: 1 })
        );
        assert!(matches!(
            eigenvalues_sym(&[vec![1.0, 2.0], vec![2.0]]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert_eq!(eigenvalues_sym(&[]).unwrap(), Vec::<f64>::new());
    }

    #[test]
    fn indefinite_matrix() {
        // [[0,1],[1,0]] has eigenvalues ±1
        let v = eigenvalues_sym(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_relative_eq!(v[0], 1.0, max_relative = 1e-15);
        assert_relative_eq!(v[1], -1.0, max_relative = 1e-15);
    }

    #[test]
    fn deterministic() {
        let m: Vec<Vec<f64>> = (0..30)
            .map(|i| (0..30).map(|j| 1.0 / ((i + j) as f64 + 1.0)).collect())
            .collect();
        let a = eigenvalues_sym(&m).unwrap();
        let b = eigenvalues_sym(&m).unwrap();
        assert_eq!(
            a.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            b.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }
}
