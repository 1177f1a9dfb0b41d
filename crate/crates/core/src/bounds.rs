//! Explicit bounds on approximant coefficients and roots, each evaluated as a
//! [`BoundReport`] whose slack is nonnegative exactly when the bound holds.
//!
//! The degree-0 and degree-1 estimates come from combining the Pythagorean
//! inequalities with the orthogonality of the optimal residual; the root
//! estimates come from the difference-quotient operator
//! `D_w f = (f - f(w)) / (z - w)`, whose norm on `H^p` is at most `1/(1-|w|)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryGrid, HpFunction, TaylorPoly};
use crate::error::{check_exponent, OpaError, Result};
use crate::fspec;
use crate::orthogonality::pythag_params;
use crate::solver::LinearOpa;

/// Default tolerance on bound slacks.
pub const DEFAULT_BOUND_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// `lhs <= rhs`.
    Upper,
    /// `lhs >= rhs`.
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
    #[serde(skip)]
    pub tol: f64,
    #[serde(skip)]
    pub inputs_digest: String,
    /// A radicand was negative by rounding and clamped to zero.
    #[serde(skip)]
    pub clamped: bool,
}

impl BoundReport {
    pub fn new(name: &str, kind: BoundKind, lhs: f64, rhs: f64, inputs_digest: String) -> Self {
        let slack = match kind {
            BoundKind::Upper => rhs - lhs,
            BoundKind::Lower => lhs - rhs,
        };
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            slack,
            satisfied: slack >= -DEFAULT_BOUND_TOL,
            tol: DEFAULT_BOUND_TOL,
            inputs_digest,
            clamped: false,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self.satisfied = self.slack >= -tol;
        self
    }
}

fn digest(f: &HpFunction, p: f64, extra: &str) -> String {
    format!(
        "f={} p={p} grid={}{extra}",
        fspec::describe(f),
        f.grid_size()
    )
}

fn require_nonzero_at_origin(f: &HpFunction) -> Result<Complex64> {
    let f0 = f.value_at_zero();
    if f0.norm() == 0.0 {
        Err(OpaError::Precondition(
            "the bound requires f(0) != 0".into(),
        ))
    } else {
        Ok(f0)
    }
}

/// `||f - f(0)||_p` and `||f||_p`.
fn split_norms(f: &HpFunction, p: f64) -> (f64, f64) {
    let f0 = f.value_at_zero();
    let tail = f.grid().map(|v| v - f0);
    (tail.norm(p), f.grid().norm(p))
}

/// `|lambda| <= 1 / (K1^{1/r} [||f - f(0)||^r + ||f||^r]^{1/r})` for the
/// constant approximant `lambda`.
pub fn constant_upper_bound(f: &HpFunction, p: f64, lambda: Complex64) -> Result<BoundReport> {
    let params = pythag_params(p)?;
    require_nonzero_at_origin(f)?;
    let (tail, full) = split_norms(f, p);
    let r = params.r;
    let rhs = 1.0 / (params.k1.powf(1.0 / r) * (tail.powf(r) + full.powf(r)).powf(1.0 / r));
    Ok(BoundReport::new(
        "constant_upper",
        BoundKind::Upper,
        lambda.norm(),
        rhs,
        digest(f, p, " n=0"),
    ))
}

/// The sharper mean-value form
/// `|lambda|^{r-1} <= r |f(0)| / (K1 ||f - f(0)||^r + K1 ||f||^r)`.
pub fn constant_upper_bound_mvt(f: &HpFunction, p: f64, lambda: Complex64) -> Result<BoundReport> {
    let params = pythag_params(p)?;
    let f0 = require_nonzero_at_origin(f)?;
    let (tail, full) = split_norms(f, p);
    let r = params.r;
    let rhs = r * f0.norm() / (params.k1 * tail.powf(r) + params.k1 * full.powf(r));
    Ok(BoundReport::new(
        "constant_upper_mvt",
        BoundKind::Upper,
        lambda.norm().powf(r - 1.0),
        rhs,
        digest(f, p, " n=0"),
    ))
}

/// `|lambda|^s >= (1 - ||c f - 1||^s) / (K2 (||f - f(0)||^s + ||f||^s))` for any
/// constant `c`; `None` picks `c = 1/f(0)`.
pub fn constant_lower_bound(
    f: &HpFunction,
    p: f64,
    lambda: Complex64,
    c: Option<Complex64>,
) -> Result<BoundReport> {
    let params = pythag_params(p)?;
    let f0 = require_nonzero_at_origin(f)?;
    let c = c.unwrap_or_else(|| Complex64::new(1.0, 0.0) / f0);
    let (tail, full) = split_norms(f, p);
    let s = params.s;
    let competitor = f.grid().map(|v| c * v - 1.0).norm(p);
    let rhs = (1.0 - competitor.powf(s)) / (params.k2 * (tail.powf(s) + full.powf(s)));
    Ok(BoundReport::new(
        "constant_lower",
        BoundKind::Lower,
        lambda.norm().powf(s),
        rhs,
        digest(f, p, &format!(" n=0 c={}", fspec::format_complex(c))),
    ))
}

/// `||Q0 f|| / (||Q0 f|| + ||Q f - 1||)`, a lower bound for `|z0|` whenever
/// `Q = Q0 (1 - z/z0)` with `z0` in the punctured disk.
pub fn diff_quotient_root_bound(q0f_norm: f64, qf_minus_one_norm: f64) -> Result<f64> {
    if !(q0f_norm >= 0.0 && qf_minus_one_norm >= 0.0) {
        return Err(OpaError::Precondition("norms must be nonnegative".into()));
    }
    if q0f_norm == 0.0 && qf_minus_one_norm == 0.0 {
        return Err(OpaError::Degenerate("both norms vanish".into()));
    }
    Ok(q0f_norm / (q0f_norm + qf_minus_one_norm))
}

/// Checks the difference-quotient root bound for any linear `Q` whose root
/// lies in the punctured disk.
pub fn diff_quotient_root_check(f: &HpFunction, q: &TaylorPoly, p: f64) -> Result<BoundReport> {
    check_exponent(p)?;
    let (c0, c1) = (q.coeff(0), q.coeff(1));
    if q.degree() != Some(1) || c0.norm() == 0.0 {
        return Err(OpaError::NotApplicable(
            "Q must be linear with a nonzero root".into(),
        ));
    }
    // Q = Q0 (1 - z/z0) with Q0 = c0 and z0 = -c0/c1
    let z0 = -c0 / c1;
    if z0.norm() >= 1.0 {
        return Err(OpaError::NotApplicable(format!(
            "root {z0} is outside the open disk"
        )));
    }
    let q0f = f.grid().scale(c0).norm(p);
    let qf_minus_one = f.grid().mul_poly(q).map(|v| v - 1.0).norm(p);
    let rhs = diff_quotient_root_bound(q0f, qf_minus_one)?;
    Ok(BoundReport::new(
        "root_difference_quotient",
        BoundKind::Lower,
        z0.norm(),
        rhs,
        digest(f, p, " n=1"),
    ))
}

/// Two-sided bound on `|w|` for the linear approximant `a (z - w)`.
///
/// The upper side comes from the lower Pythagorean inequality (exponent
/// `r`, constant `K1`), the lower side from the upper one (`s`, `K2`).
/// Radicands negative by rounding are clamped to zero and flagged.
pub fn root_interval(
    f: &HpFunction,
    lin: &LinearOpa,
    p: f64,
) -> Result<(BoundReport, BoundReport)> {
    let params = pythag_params(p)?;
    if lin.a.norm() == 0.0 {
        return Err(OpaError::ConstantOpa);
    }
    let grid = f.grid();
    let azf_minus_one = grid.shift(1).scale(lin.a).map(|v| v - 1.0).norm(p);
    let qf_minus_one = grid.mul_poly(&lin.poly()).map(|v| v - 1.0).norm(p);
    let af = grid.scale(lin.a).norm(p);

    let side = |e: f64, k: f64| {
        let radicand = (azf_minus_one.powf(e) - qf_minus_one.powf(e)) / (k * af.powf(e));
        (radicand.max(0.0).powf(1.0 / e), radicand < 0.0)
    };
    let (upper, upper_clamped) = side(params.r, params.k1);
    let (lower, lower_clamped) = side(params.s, params.k2);
    let w_abs = lin.w.norm();
    let tag = digest(f, p, " n=1");
    let mut lo = BoundReport::new(
        "root_interval_lower",
        BoundKind::Lower,
        w_abs,
        lower,
        tag.clone(),
    );
    lo.clamped = lower_clamped;
    let mut hi = BoundReport::new("root_interval_upper", BoundKind::Upper, w_abs, upper, tag);
    hi.clamped = upper_clamped;
    Ok((lo, hi))
}

/// `|a|^{r-1} <= r |w f(0)| / (K1 ||(z-w) f + w f(0)||^r + K1 ||(z-w) f||^r)`,
/// the mean-value bound applied to `(z - w) f`, whose constant approximant is `a`.
pub fn leading_coeff_bound(f: &HpFunction, lin: &LinearOpa, p: f64) -> Result<BoundReport> {
    let params = pythag_params(p)?;
    let f0 = require_nonzero_at_origin(f)?;
    if lin.w.norm() == 0.0 {
        return Err(OpaError::NotApplicable(
            "the bound is vacuous at w = 0".into(),
        ));
    }
    let shifted = f
        .grid()
        .mul_poly(&TaylorPoly::new(vec![-lin.w, Complex64::new(1.0, 0.0)])?);
    let wf0 = lin.w * f0;
    let r = params.r;
    let tail = shifted.map(|v| v + wf0).norm(p);
    let full = shifted.norm(p);
    let rhs = r * wf0.norm() / (params.k1 * tail.powf(r) + params.k1 * full.powf(r));
    Ok(BoundReport::new(
        "leading_coeff_upper",
        BoundKind::Upper,
        lin.a.norm().powf(r - 1.0),
        rhs,
        digest(f, p, " n=1"),
    ))
}

/// `sqrt(max(0, 1 - residual^p))`, below which no root of an approximant
/// inside the disk may lie.
pub fn root_modulus_lower_bound(residual_norm: f64, p: f64) -> Result<f64> {
    check_exponent(p)?;
    if !(residual_norm >= 0.0) {
        return Err(OpaError::Precondition(
            "residual norm must be nonnegative".into(),
        ));
    }
    if residual_norm > 1.0 {
        return Err(OpaError::Precondition(format!(
            "approximant residual {residual_norm} exceeds 1, inconsistent with q = 0 being feasible"
        )));
    }
    Ok((1.0 - residual_norm.powf(p)).max(0.0).sqrt())
}

/// One report per root of the approximant inside the open disk.
pub fn root_modulus_checks(
    f: &HpFunction,
    roots: &[Complex64],
    residual_norm: f64,
    p: f64,
    n: usize,
) -> Result<Vec<BoundReport>> {
    let bound = root_modulus_lower_bound(residual_norm.min(1.0), p)?;
    Ok(roots
        .iter()
        .filter(|z| z.norm() < 1.0)
        .map(|z| {
            BoundReport::new(
                "root_modulus_lower",
                BoundKind::Lower,
                z.norm(),
                bound,
                digest(f, p, &format!(" n={n}")),
            )
        })
        .collect())
}

/// `integral |f|^k dm <= ||phi||_{p-2}^{p-k}` with `phi = |f|^{2/(p-2)}`, for
/// `||f||_p = 1`, `p > 2` and `2 <= k < p`.
pub fn holder_interpolation_check(f: &BoundaryGrid, p: f64, k: f64) -> Result<BoundReport> {
    check_exponent(p)?;
    if p <= 2.0 {
        return Err(OpaError::Precondition(
            "the interpolation bound needs p > 2".into(),
        ));
    }
    if !(2.0..p).contains(&k) {
        return Err(OpaError::Precondition(format!(
            "k = {k} must lie in [2, {p})"
        )));
    }
    let norm = f.norm(p);
    if (norm - 1.0).abs() > 1e-9 {
        return Err(OpaError::Precondition(format!(
            "f must be normalized, ||f||_p = {norm}"
        )));
    }
    let lhs = f.p_power_integral(k);
    let phi = f.map(|v| Complex64::new(v.norm().powf(2.0 / (p - 2.0)), 0.0));
    let rhs = phi.norm(p - 2.0).powf(p - k);
    Ok(BoundReport::new(
        "holder_interpolation",
        BoundKind::Upper,
        lhs,
        rhs,
        format!("p={p} k={k} grid={}", f.len()),
    ))
}

/// `||Q f||_p >= (1 - |w|) |a| ||f||_p` for `Q = a (z - w)`, `0 < |w| < 1`.
pub fn difference_quotient_norm_check(
    f: &HpFunction,
    lin: &LinearOpa,
    p: f64,
) -> Result<BoundReport> {
    check_exponent(p)?;
    let w_abs = lin.w.norm();
    if !(w_abs > 0.0 && w_abs < 1.0) {
        return Err(OpaError::NotApplicable(format!(
            "needs 0 < |w| < 1, got |w| = {w_abs}"
        )));
    }
    let lhs = f.grid().mul_poly(&lin.poly()).norm(p);
    let rhs = (1.0 - w_abs) * lin.a.norm() * f.grid().norm(p);
    Ok(BoundReport::new(
        "difference_quotient_norm",
        BoundKind::Lower,
        lhs,
        rhs,
        digest(f, p, " n=1"),
    ))
}
