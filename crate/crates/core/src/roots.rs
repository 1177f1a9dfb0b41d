//! Polynomial roots from companion-matrix eigenvalues.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::boundary::TaylorPoly;
use crate::error::{OpaError, Result};

/// Relative size below which trailing coefficients are dropped.
const TRAILING_TOL: f64 = 1e-12;
/// Accepted backward residual `|q(z)| / sum |c_k| |z|^k` of a computed root.
pub const ROOT_RESIDUAL_TOL: f64 = 1e-9;

/// All complex roots of `q`, with multiplicity.
///
/// Coefficients below `1e-12` times the largest one are treated as zero at
/// the top end, so a numerically constant polynomial has no roots.
pub fn poly_roots(q: &TaylorPoly) -> Result<Vec<Complex64>> {
    let coeffs = q.coeffs();
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(OpaError::Degenerate(
            "the zero polynomial has no isolated roots".into(),
        ));
    }
    let degree = coeffs
        .iter()
        .rposition(|c| c.norm() > TRAILING_TOL * scale)
        .unwrap_or(0);
    let lead = coeffs[degree];
    let roots = match degree {
        0 => Vec::new(),
        1 => vec![-coeffs[0] / lead],
        d => {
            let mut comp = DMatrix::<Complex64>::zeros(d, d);
            for i in 1..d {
                comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
            }
            for i in 0..d {
                comp[(i, d - 1)] = -coeffs[i] / lead;
            }
            let eig = Schur::new(comp).eigenvalues().ok_or_else(|| {
                OpaError::Degenerate("companion eigenvalues did not converge".into())
            })?;
            eig.iter().map(|&z| polish(&coeffs[..=degree], z)).collect()
        }
    };
    for &z in &roots {
        let resid = backward_residual(&coeffs[..=degree], z);
        if resid > ROOT_RESIDUAL_TOL {
            return Err(OpaError::Degenerate(format!(
                "root {z} has backward residual {resid:.3e}"
            )));
        }
    }
    Ok(roots)
}

fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    coeffs
        .iter()
        .rev()
        .fold((zero, zero), |(v, dv), &c| (v * z + c, dv * z + v))
}

fn backward_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let (v, _) = eval_with_derivative(coeffs, z);
    let size: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm() * z.norm().powi(k as i32))
        .sum();
    if size == 0.0 {
        0.0
    } else {
        v.norm() / size
    }
}

/// A few Newton steps, kept only while they reduce `|q(z)|`.
fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let (v, dv) = eval_with_derivative(coeffs, z);
        if dv.norm() == 0.0 {
            break;
        }
        let next = z - v / dv;
        if eval_with_derivative(coeffs, next).0.norm() < v.norm() {
            z = next;
        } else {
            break;
        }
    }
    z
}
