//! Birkhoff-James orthogonality in `L^p` of the circle and the Pythagorean
//! inequalities that replace the Hilbert-space identity when `p != 2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryGrid;
use crate::error::{check_exponent, OpaError, Result};

/// Default relative tolerance for declaring `f _|_p g`.
pub const DEFAULT_ORTH_TOL: f64 = 1e-8;
/// Default tolerance on Pythagorean slacks.
pub const DEFAULT_SLACK_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub residual: Complex64,
    pub relative_residual: f64,
    pub is_orthogonal: bool,
}

/// `integral |f|^{p-2} conj(f) g dm`, with `|0|^{p-2} 0` read as zero.
pub fn bj_integral(f: &BoundaryGrid, g: &BoundaryGrid, p: f64) -> Result<Complex64> {
    g.dual_pairing(&f.dual_function(p - 1.0))
}

/// Relative size of the orthogonality integral, scaled by
/// `||f||_p^{p-1} ||g||_p`. Zero when `g` vanishes.
pub fn relative_bj_residual(
    f: &BoundaryGrid,
    g: &BoundaryGrid,
    p: f64,
) -> Result<(Complex64, f64)> {
    let residual = bj_integral(f, g, p)?;
    let g_norm = g.norm(p);
    if g_norm == 0.0 {
        return Ok((residual, 0.0));
    }
    let f_norm = f.norm(p);
    Ok((residual, residual.norm() / (f_norm.powf(p - 1.0) * g_norm)))
}

/// Tests `f _|_p g` through the vanishing of the orthogonality integral.
pub fn bj_test(
    f: &BoundaryGrid,
    g: &BoundaryGrid,
    p: f64,
    tol: f64,
) -> Result<OrthogonalityReport> {
    check_exponent(p)?;
    if f.sup_norm() == 0.0 {
        return Err(OpaError::Degenerate(
            "orthogonality test needs a nonzero first argument".into(),
        ));
    }
    let (residual, relative_residual) = relative_bj_residual(f, g, p)?;
    Ok(OrthogonalityReport {
        residual,
        relative_residual,
        is_orthogonal: relative_residual <= tol,
    })
}

/// `f^<p-1> / ||f||_p^{p-1}`, the unique unit functional in `L^{p'}` norming `f`.
pub fn norming_functional(f: &BoundaryGrid, p: f64) -> Result<BoundaryGrid> {
    check_exponent(p)?;
    let norm = f.norm(p);
    if norm == 0.0 {
        return Err(OpaError::Degenerate(
            "the zero function has no norming functional".into(),
        ));
    }
    Ok(f.dual_function(p - 1.0)
        .scale(Complex64::new(norm.powf(1.0 - p), 0.0)))
}

/// Removes from `g` its component along `x` so that `x _|_p y` holds exactly.
///
/// Orthogonality is linear in the second argument, so subtracting the
/// multiple `<g, x^<p-1>> / ||x||_p^p` of `x` suffices.
pub fn orthogonalize(x: &BoundaryGrid, g: &BoundaryGrid, p: f64) -> Result<BoundaryGrid> {
    check_exponent(p)?;
    let power = x.p_power_integral(p);
    if power == 0.0 {
        return Err(OpaError::Degenerate(
            "cannot orthogonalize against zero".into(),
        ));
    }
    let coef = g.dual_pairing(&x.dual_function(p - 1.0))? / power;
    g.sub(&x.scale(coef))
}

/// Exponents and constants of the two Pythagorean inequalities at `p`:
/// `||x + y||^r >= ||x||^r + K1 ||y||^r` and `||x + y||^s <= ||x||^s + K2 ||y||^s`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PythagoreanParams {
    pub p: f64,
    pub r: f64,
    pub k1: f64,
    pub s: f64,
    pub k2: f64,
}

pub fn pythag_params(p: f64) -> Result<PythagoreanParams> {
    check_exponent(p)?;
    let clarkson = 1.0 / (2f64.powf(p - 1.0) - 1.0);
    Ok(if p <= 2.0 {
        PythagoreanParams {
            p,
            r: 2.0,
            k1: p - 1.0,
            s: p,
            k2: clarkson,
        }
    } else {
        PythagoreanParams {
            p,
            r: p,
            k1: clarkson,
            s: 2.0,
            k2: p - 1.0,
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PythagoreanReport {
    /// `||x+y||^r - ||x||^r - K1 ||y||^r`.
    pub lower_slack: f64,
    /// `||x||^s + K2 ||y||^s - ||x+y||^s`.
    pub upper_slack: f64,
    pub params: PythagoreanParams,
}

impl PythagoreanReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.lower_slack >= -tol && self.upper_slack >= -tol
    }
}

/// Evaluates both Pythagorean inequalities for an orthogonal pair.
///
/// Refuses pairs that fail `x _|_p y` at [`DEFAULT_ORTH_TOL`].
pub fn check_pythagorean(x: &BoundaryGrid, y: &BoundaryGrid, p: f64) -> Result<PythagoreanReport> {
    let params = pythag_params(p)?;
    let orth = bj_test(x, y, p, DEFAULT_ORTH_TOL)?;
    if !orth.is_orthogonal {
        return Err(OpaError::Precondition(format!(
            "pair is not Birkhoff-James orthogonal: relative residual {:.3e}",
            orth.relative_residual
        )));
    }
    let sum = x.add(y)?;
    let (nx, ny, ns) = (x.norm(p), y.norm(p), sum.norm(p));
    let lower_slack = ns.powf(params.r) - nx.powf(params.r) - params.k1 * ny.powf(params.r);
    let upper_slack = nx.powf(params.s) + params.k2 * ny.powf(params.s) - ns.powf(params.s);
    Ok(PythagoreanReport {
        lower_slack,
        upper_slack,
        params,
    })
}
