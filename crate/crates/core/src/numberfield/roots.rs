//! Floating-point root finding used for root discovery. Every result derived from these
//! approximations is verified exactly before it is trusted.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

/// All complex roots of a monic integer polynomial (low-to-high coefficients) by the
/// Aberth–Ehrlich iteration followed by Newton polishing.
pub fn complex_roots(poly: &[BigInt]) -> Vec<Complex64> {
    let coeffs: Vec<f64> = poly.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect();
    let d = coeffs.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let lead = coeffs[d];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let bound = 1.0 + monic[..d].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64 + 0.4;
            Complex64::from_polar(0.5 * bound, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (p, dp) = eval_with_derivative(&monic, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if j != k {
                    s += 1.0 / (z[k] - zj);
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[k] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * bound {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval_with_derivative(&monic, *zk);
            if dp.norm() == 0.0 {
                break;
            }
            *zk -= p / dp;
        }
    }
    z
}

pub fn eval_with_derivative(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Solves the complex linear system `m x = b` by Gaussian elimination with partial pivoting.
pub fn solve_complex(m: &[Vec<Complex64>], b: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = b.len();
    let mut a: Vec<Vec<Complex64>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(*bi);
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[piv][col].norm() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = a[row][col] / a[col][col];
                if f.norm() != 0.0 {
                    let pivot_row = a[col].clone();
                    for (x, v) in a[row].iter_mut().zip(&pivot_row).skip(col) {
                        *x -= f * v;
                    }
                }
            }
        }
    }
    Some((0..n).map(|i| a[i][n] / a[i][i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifth_roots_of_unity() {
        let p: Vec<BigInt> = [1, 1, 1, 1, 1].iter().map(|&c| BigInt::from(c)).collect();
        let roots = complex_roots(&p);
        assert_eq!(roots.len(), 4);
        for k in 1..5 {
            let target = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 5.0);
            assert!(roots.iter().any(|r| (r - target).norm() < 1e-12));
        }
    }
}
