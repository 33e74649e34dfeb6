use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Central-difference Hessian with steps `h_i = max(|x_i|, 1) · ε^{1/3}`.
/// Each mixed partial is evaluated once and mirrored, so the result is exactly symmetric.
pub fn numerical_hessian<F>(objective: F, x: &[f64]) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> f64,
{
    let n = x.len();
    let eps3 = f64::EPSILON.cbrt();
    let steps: Vec<f64> = x.iter().map(|v| v.abs().max(1.0) * eps3).collect();
    let mut point = x.to_vec();
    let mut eval = |shifts: &[(usize, f64)]| -> Result<f64> {
        point.copy_from_slice(x);
        for &(i, s) in shifts {
            point[i] += s;
        }
        let v = objective(&point);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Differentiation(format!("objective not finite at {point:?}")))
        }
    };

    let f0 = eval(&[])?;
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        let hi = steps[i];
        let fp = eval(&[(i, hi)])?;
        let fm = eval(&[(i, -hi)])?;
        h[(i, i)] = (fp - 2.0 * f0 + fm) / (hi * hi);
        for j in 0..i {
            let hj = steps[j];
            let fpp = eval(&[(i, hi), (j, hj)])?;
            let fpm = eval(&[(i, hi), (j, -hj)])?;
            let fmp = eval(&[(i, -hi), (j, hj)])?;
            let fmm = eval(&[(i, -hi), (j, -hj)])?;
            let v = (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    Ok(h)
}

/// Square roots of the diagonal of `H⁻¹`, or `None` if `H` is not invertible
/// or the inverse has a non-positive diagonal entry.
pub fn standard_errors(hessian: &DMatrix<f64>) -> Option<Vec<f64>> {
    let inv = hessian.clone().try_inverse()?;
    inv.diagonal().iter().map(|&v| (v > 0.0 && v.is_finite()).then(|| v.sqrt())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_form() {
        let a = DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, -0.2, 0.5, -0.2, 2.0]);
        let f = |x: &[f64]| {
            let v = nalgebra::DVector::from_column_slice(x);
            0.5 * (v.transpose() * &a * &v)[(0, 0)]
        };
        let h = numerical_hessian(f, &[0.3, -1.2, 2.0]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((h[(i, j)] - a[(i, j)]).abs() <= 1e-4 * a[(i, j)].abs().max(1.0));
                assert_eq!(h[(i, j)], h[(j, i)]);
            }
        }
    }

    #[test]
    fn quartic_second_derivative() {
        let h = numerical_hessian(|x: &[f64]| x[0].powi(4), &[1.0]).unwrap();
        assert!((h[(0, 0)] - 12.0).abs() < 1e-3);
    }

    #[test]
    fn non_finite_neighbourhood() {
        let f = |x: &[f64]| if x[0] > 0.0 { f64::NAN } else { x[0] * x[0] };
        assert!(matches!(numerical_hessian(f, &[0.0]), Err(Error::Differentiation(_))));
    }

    #[test]
    fn standard_errors_of_diagonal() {
        let h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![4.0, 100.0]));
        let se = standard_errors(&h).unwrap();
        assert!((se[0] - 0.5).abs() < 1e-15 && (se[1] - 0.1).abs() < 1e-15);
        assert!(standard_errors(&DMatrix::zeros(2, 2)).is_none());
    }
}
