//! Optimal polynomial approximants `q_{n,p}[f] = argmin_{q in P_n} ||1 - q f||_p`.
//!
//! The objective `Phi(c) = integral |1 - sum c_k z^k f|^p dm` is minimized over
//! the `2(n+1)` real coordinates of the coefficients by a damped Newton
//! iteration with backtracking. For `1 < p < 2` the weight `|r|^{p-2}` is
//! singular at zeros of the residual, so `|r|^2` is replaced by
//! `|r|^2 + eps` and `eps` is driven down a geometric schedule with warm
//! starts.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryGrid, HpFunction, TaylorPoly, ZERO_MODULUS};
use crate::error::{check_exponent, OpaError, Result};

/// Residual norms below this are exact fits `q f = 1`; the relative
/// orthogonality residual is reported as zero there.
pub const EXACT_FIT_TOL: f64 = 1e-12;

/// Relative stationarity accepted before moving to the next smoothing stage.
const STAGE_TOL: f64 = 1e-6;

/// Smallest residual modulus for which the unsmoothed polishing stage runs
/// when `p < 2`.
const POLISH_MIN_RESIDUAL: f64 = 1e-6;

/// Relative rounding floor of the objective quadrature.
pub const ROUNDING_SLACK: f64 = 64.0 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSearch {
    /// Step multiplier after a rejected trial.
    pub shrink: f64,
    /// Armijo constant.
    pub sufficient_decrease: f64,
    pub min_step: f64,
}

impl Default for LineSearch {
    fn default() -> Self {
        Self {
            shrink: 0.5,
            sufficient_decrease: 1e-4,
            min_step: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub max_iters: usize,
    /// Threshold on the maximum relative orthogonality residual.
    pub grad_tol: f64,
    /// Smoothing levels, used only when `p < 2`.
    pub epsilon_schedule: Vec<f64>,
    pub line_search: LineSearch,
    /// Start from the `p = 2` solution instead of the zero polynomial.
    pub warm_start: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iters: 500,
            grad_tol: 1e-10,
            epsilon_schedule: (2..=12).map(|k| 10f64.powi(-k)).collect(),
            line_search: LineSearch::default(),
            warm_start: true,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        if self.max_iters == 0 {
            return Err(OpaError::Precondition(
                "max_iters must be at least 1".into(),
            ));
        }
        if !(self.grad_tol > 0.0) {
            return Err(OpaError::Precondition("grad_tol must be positive".into()));
        }
        let sched = &self.epsilon_schedule;
        if sched.is_empty()
            || sched.windows(2).any(|w| !(w[1] < w[0]))
            || sched.iter().any(|&e| !(e > 0.0))
            || *sched.last().unwrap() < 1e-14
        {
            return Err(OpaError::Precondition(
                "epsilon schedule must be positive, strictly decreasing, with floor >= 1e-14"
                    .into(),
            ));
        }
        let ls = &self.line_search;
        if !(ls.shrink > 0.0 && ls.shrink < 1.0)
            || !(ls.sufficient_decrease > 0.0 && ls.sufficient_decrease < 0.5)
            || !(ls.min_step > 0.0)
        {
            return Err(OpaError::Precondition(
                "invalid line-search parameters".into(),
            ));
        }
        Ok(())
    }
}

/// Solver output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpaResult {
    pub n: usize,
    pub p: f64,
    pub coeffs: TaylorPoly,
    /// `||q f - 1||_p`.
    pub residual_norm: f64,
    /// Relative orthogonality residual of `q f - 1` against `z^k f`, `k = 0..=n`.
    pub orth_residuals: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl OpaResult {
    pub fn max_orth_residual(&self) -> f64 {
        self.orth_residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// The degree-1 approximant written as `a (z - w)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearOpa {
    pub a: Complex64,
    pub w: Complex64,
    pub source: OpaResult,
}

impl LinearOpa {
    pub fn poly(&self) -> TaylorPoly {
        TaylorPoly::new(vec![-self.a * self.w, self.a]).expect("finite factor")
    }
}

/// Objective values recorded after every accepted step.
#[derive(Clone, Debug, Default)]
pub struct SolveTrace {
    /// `(smoothing eps, objective before, objective after)` per step.
    pub steps: Vec<(f64, f64, f64)>,
}

impl SolveTrace {
    /// Largest relative increase of the stage objective over any step.
    pub fn worst_increase(&self) -> f64 {
        self.steps
            .iter()
            .map(|&(_, before, after)| (after - before) / before.abs().max(f64::MIN_POSITIVE))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// The shifted copies `z^k f`, `k = 0..=n`, on the boundary grid.
struct Basis {
    cols: Vec<BoundaryGrid>,
    norms_cache: Vec<f64>,
    m: usize,
}

impl Basis {
    fn new(f: &HpFunction, n: usize, p: f64) -> Self {
        let cols: Vec<BoundaryGrid> = (0..=n).map(|k| f.grid().shift(k)).collect();
        let norms_cache = cols.iter().map(|c| c.norm(p)).collect();
        Self {
            cols,
            norms_cache,
            m: f.grid_size(),
        }
    }

    fn dim(&self) -> usize {
        self.cols.len()
    }

    fn residual(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut r = vec![Complex64::new(1.0, 0.0); self.m];
        for (col, &c) in self.cols.iter().zip(coeffs) {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (rj, bj) in r.iter_mut().zip(col.samples()) {
                *rj -= c * bj;
            }
        }
        r
    }
}

fn to_complex(v: &DVector<f64>) -> Vec<Complex64> {
    let n = v.len() / 2;
    (0..n).map(|k| Complex64::new(v[k], v[n + k])).collect()
}

fn to_real(c: &[Complex64]) -> DVector<f64> {
    let n = c.len();
    let mut v = DVector::zeros(2 * n);
    for (k, z) in c.iter().enumerate() {
        v[k] = z.re;
        v[n + k] = z.im;
    }
    v
}

/// `(|r|^2 + eps)^{p/2}` averaged over the grid.
fn smoothed_objective(r: &[Complex64], p: f64, eps: f64) -> f64 {
    let half = p / 2.0;
    r.iter()
        .map(|z| (z.norm_sqr() + eps).powf(half))
        .sum::<f64>()
        / r.len() as f64
}

/// Weight `(|r|^2 + eps)^{(p-2)/2}`, zero where `r` (and `eps`) vanish.
fn weight(u: f64, p: f64) -> f64 {
    if u < ZERO_MODULUS {
        0.0
    } else {
        u.powf((p - 2.0) / 2.0)
    }
}

/// Wirtinger gradient components `-p integral w r conj(z^k f) dm`.
fn complex_gradient(basis: &Basis, r: &[Complex64], p: f64, eps: f64) -> Vec<Complex64> {
    let weighted: Vec<Complex64> = r
        .iter()
        .map(|z| z * weight(z.norm_sqr() + eps, p))
        .collect();
    basis
        .cols
        .iter()
        .map(|col| {
            let s: Complex64 = weighted
                .iter()
                .zip(col.samples())
                .map(|(wr, b)| wr * b.conj())
                .sum();
            -s * p / basis.m as f64
        })
        .collect()
}

fn real_hessian(basis: &Basis, r: &[Complex64], p: f64, eps: f64) -> DMatrix<f64> {
    let n = basis.dim();
    let d = 2 * n;
    let mut h = DMatrix::<f64>::zeros(d, d);
    let mut jac = vec![Complex64::new(0.0, 0.0); d];
    let mut proj = vec![0.0; d];
    for (j, rj) in r.iter().enumerate() {
        let u = rj.norm_sqr() + eps;
        if u < ZERO_MODULUS {
            continue;
        }
        let w1 = p * u.powf((p - 2.0) / 2.0);
        let w2 = p * (p - 2.0) * u.powf((p - 4.0) / 2.0);
        for k in 0..n {
            let b = basis.cols[k].samples()[j];
            jac[k] = -b;
            jac[n + k] = Complex64::new(b.im, -b.re); // -i b
        }
        for a in 0..d {
            proj[a] = (rj.conj() * jac[a]).re;
        }
        for a in 0..d {
            let ja = jac[a].conj();
            for b in a..d {
                h[(a, b)] += w1 * (ja * jac[b]).re + w2 * proj[a] * proj[b];
            }
        }
    }
    let scale = 1.0 / basis.m as f64;
    for a in 0..d {
        for b in a..d {
            let v = h[(a, b)] * scale;
            h[(a, b)] = v;
            h[(b, a)] = v;
        }
    }
    h
}

/// Relative orthogonality residuals of `r` against the basis, with the
/// supplied smoothing in the weight.
fn orth_residuals(basis: &Basis, r: &[Complex64], p: f64, eps: f64) -> Vec<f64> {
    let r_norm =
        (r.iter().map(|z| z.norm_sqr().powf(p / 2.0)).sum::<f64>() / basis.m as f64).powf(1.0 / p);
    if r_norm <= EXACT_FIT_TOL {
        return vec![0.0; basis.dim()];
    }
    let grad = complex_gradient(basis, r, p, eps);
    let denom = r_norm.powf(p - 1.0);
    grad.iter()
        .zip(&basis.norms_cache)
        .map(|(g, &bn)| {
            if bn == 0.0 {
                0.0
            } else {
                g.norm() / p / (denom * bn)
            }
        })
        .collect()
}

fn newton_direction(hess: &DMatrix<f64>, grad: &DVector<f64>) -> DVector<f64> {
    let max_diag = hess.diagonal().iter().copied().fold(0.0, f64::max);
    let mut shift = 0.0;
    for _ in 0..6 {
        let mut h = hess.clone();
        for i in 0..h.nrows() {
            h[(i, i)] += shift;
        }
        if let Some(ch) = Cholesky::new(h) {
            let d = -ch.solve(grad);
            if d.iter().all(|x| x.is_finite()) && d.dot(grad) < 0.0 {
                return d;
            }
        }
        shift = if shift == 0.0 {
            1e-12 * max_diag.max(1e-300)
        } else {
            shift * 100.0
        };
    }
    -grad.clone()
}

/// `Phi(c) = ||1 - q f||_p^p`.
pub fn objective(f: &HpFunction, coeffs: &TaylorPoly, p: f64) -> f64 {
    let r = f
        .grid()
        .mul_poly(coeffs)
        .map(|v| Complex64::new(1.0, 0.0) - v);
    r.p_power_integral(p)
}

/// Gradient of `Phi` with component `k` equal to
/// `dPhi/dRe c_k + i dPhi/dIm c_k = -p integral |r|^{p-2} r conj(z^k f) dm`.
///
/// `eps > 0` smooths the weight to `(|r|^2 + eps)^{(p-2)/2}`; with
/// `eps = 0` the convention `|0|^{p-2} 0 = 0` applies.
pub fn gradient(f: &HpFunction, coeffs: &TaylorPoly, p: f64, eps: f64) -> Result<Vec<Complex64>> {
    check_exponent(p)?;
    if eps < 0.0 {
        return Err(OpaError::Precondition(
            "smoothing must be nonnegative".into(),
        ));
    }
    let n = coeffs.coeffs().len().max(1) - 1;
    let basis = Basis::new(f, n, p);
    let r = basis.residual(coeffs.coeffs());
    Ok(complex_gradient(&basis, &r, p, eps))
}

fn finish(
    basis: &Basis,
    n: usize,
    p: f64,
    coeffs: Vec<Complex64>,
    iterations: usize,
    tol: f64,
) -> OpaResult {
    let r = basis.residual(&coeffs);
    let residual_norm =
        (r.iter().map(|z| z.norm_sqr().powf(p / 2.0)).sum::<f64>() / basis.m as f64).powf(1.0 / p);
    let orth = orth_residuals(basis, &r, p, 0.0);
    let converged = orth.iter().all(|&x| x <= tol);
    OpaResult {
        n,
        p,
        coeffs: TaylorPoly::new(coeffs).expect("finite coefficients"),
        residual_norm,
        orth_residuals: orth,
        iterations,
        converged,
    }
}

fn l2_coefficients(f: &HpFunction, n: usize) -> Result<Vec<Complex64>> {
    if f.grid().sup_norm() == 0.0 {
        return Err(OpaError::Degenerate(
            "f vanishes identically; Gram matrix is singular".into(),
        ));
    }
    let basis = Basis::new(f, n, 2.0);
    let dim = n + 1;
    let mut gram = DMatrix::<Complex64>::zeros(dim, dim);
    let mut rhs = DVector::<Complex64>::zeros(dim);
    for j in 0..dim {
        for k in 0..dim {
            gram[(j, k)] = basis.cols[k].pairing(&basis.cols[j])?;
        }
        rhs[j] = basis.cols[j].mean().conj();
    }
    let chol = Cholesky::new(gram)
        .ok_or_else(|| OpaError::Degenerate("Gram matrix is not positive definite".into()))?;
    Ok(chol.solve(&rhs).iter().copied().collect())
}

/// Exact `p = 2` approximant from the normal equations `G c = b` with
/// `G_{jk} = <z^k f, z^j f>` and `b_j = <1, z^j f>`.
pub fn solve_l2(f: &HpFunction, n: usize) -> Result<OpaResult> {
    let coeffs = l2_coefficients(f, n)?;
    let basis = Basis::new(f, n, 2.0);
    let mut res = finish(&basis, n, 2.0, coeffs, 0, f64::INFINITY);
    res.converged = true;
    Ok(res)
}

/// `q_{n,p}[f]` by damped Newton minimization.
pub fn solve(f: &HpFunction, n: usize, p: f64, opts: &SolverOptions) -> Result<OpaResult> {
    solve_traced(f, n, p, opts).map(|(res, _)| res)
}

/// [`solve`] plus the per-step objective history.
pub fn solve_traced(
    f: &HpFunction,
    n: usize,
    p: f64,
    opts: &SolverOptions,
) -> Result<(OpaResult, SolveTrace)> {
    check_exponent(p)?;
    opts.validate()?;
    let basis = Basis::new(f, n, p);
    let mut trace = SolveTrace::default();

    if f.grid().sup_norm() == 0.0 {
        let res = finish(
            &basis,
            n,
            p,
            vec![Complex64::new(0.0, 0.0); n + 1],
            0,
            opts.grad_tol,
        );
        return Ok((res, trace));
    }

    let init = if opts.warm_start {
        l2_coefficients(f, n)?
    } else {
        vec![Complex64::new(0.0, 0.0); n + 1]
    };
    let mut v = to_real(&init);

    let mut stages: Vec<f64> = if p < 2.0 {
        opts.epsilon_schedule.clone()
    } else {
        Vec::new()
    };
    stages.push(0.0);

    let ls = opts.line_search;
    let mut iterations = 0;
    'stages: for (si, &eps) in stages.iter().enumerate() {
        let last = si + 1 == stages.len();
        if last && p < 2.0 {
            let r = basis.residual(&to_complex(&v));
            let min_r = r.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
            if min_r < POLISH_MIN_RESIDUAL {
                break;
            }
        }
        let stage_tol = if last {
            opts.grad_tol
        } else {
            STAGE_TOL.max(opts.grad_tol)
        };
        loop {
            let c = to_complex(&v);
            let r = basis.residual(&c);
            let stat = orth_residuals(&basis, &r, p, eps);
            if stat.iter().all(|&x| x <= stage_tol) {
                break;
            }
            if iterations >= opts.max_iters {
                break 'stages;
            }
            let phi = smoothed_objective(&r, p, eps);
            let g = to_real(&complex_gradient(&basis, &r, p, eps));
            let h = real_hessian(&basis, &r, p, eps);
            let d = newton_direction(&h, &g);
            let slope = g.dot(&d);

            // Below this predicted decrease, Phi differences are rounding noise.
            let noise = ROUNDING_SLACK * phi.abs();
            let mut accepted = None;
            if -slope > noise {
                let mut t = 1.0;
                while t >= ls.min_step {
                    let trial = &v + &d * t;
                    let phi_t = smoothed_objective(&basis.residual(&to_complex(&trial)), p, eps);
                    if phi_t < phi && phi_t <= phi + ls.sufficient_decrease * t * slope {
                        accepted = Some((trial, phi_t));
                        break;
                    }
                    t *= ls.shrink;
                }
            }
            if accepted.is_none() {
                // Take the full Newton step while Phi stays within rounding
                // and the gradient keeps shrinking.
                let trial = &v + &d;
                let rt = basis.residual(&to_complex(&trial));
                let phi_t = smoothed_objective(&rt, p, eps);
                let gt = to_real(&complex_gradient(&basis, &rt, p, eps));
                if phi_t <= phi + noise && gt.norm() < g.norm() {
                    accepted = Some((trial, phi_t));
                }
            }
            match accepted {
                Some((trial, phi_t)) => {
                    trace.steps.push((eps, phi, phi_t));
                    v = trial;
                    iterations += 1;
                }
                None => break,
            }
        }
    }

    let res = finish(&basis, n, p, to_complex(&v), iterations, opts.grad_tol);
    Ok((res, trace))
}

/// Splits a degree-1 result into `a (z - w)`.
pub fn linear_factor(res: &OpaResult) -> Result<LinearOpa> {
    if res.n != 1 {
        return Err(OpaError::Precondition(format!(
            "linear factorization needs n = 1, got n = {}",
            res.n
        )));
    }
    let c0 = res.coeffs.coeff(0);
    let c1 = res.coeffs.coeff(1);
    if c1.norm() <= 1e-12 * c0.norm() || c1.norm() == 0.0 {
        return Err(OpaError::ConstantOpa);
    }
    Ok(LinearOpa {
        a: c1,
        w: -c0 / c1,
        source: res.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::BlaschkeProduct;
    use approx::assert_abs_diff_eq;

    const M: usize = 4096;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poly(coeffs: &[f64]) -> HpFunction {
        HpFunction::poly(TaylorPoly::from_real(coeffs), M).unwrap()
    }

    #[test]
    fn objective_examples() {
        assert_abs_diff_eq!(
            objective(&poly(&[1.0]), &TaylorPoly::from_real(&[1.0]), 3.0),
            0.0
        );
        for p in [1.5, 2.0, 5.0] {
            assert_abs_diff_eq!(
                objective(&poly(&[1.0, -1.0]), &TaylorPoly::zero(), p),
                1.0,
                epsilon = 1e-14
            );
        }
        assert_abs_diff_eq!(
            objective(
                &poly(&[1.0, -1.0]),
                &TaylorPoly::from_real(&[2.0 / 3.0, 1.0 / 3.0]),
                2.0
            ),
            1.0 / 3.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn gradient_at_zero_for_constant_function() {
        for p in [1.5, 2.0, 4.0] {
            let g = gradient(&poly(&[1.0]), &TaylorPoly::from_real(&[0.0]), p, 0.0).unwrap();
            assert_abs_diff_eq!((g[0] - c(-p, 0.0)).norm(), 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn gradient_vanishes_at_l2_solution() {
        let f = poly(&[1.0, -0.4, 0.3]);
        let res = solve_l2(&f, 2).unwrap();
        for g in gradient(&f, &res.coeffs, 2.0, 0.0).unwrap() {
            assert!(g.norm() < 1e-10);
        }
    }

    #[test]
    fn solve_l2_examples() {
        let f = poly(&[1.0, -1.0]);
        let r0 = solve_l2(&f, 0).unwrap();
        assert_abs_diff_eq!(
            (r0.coeffs.coeff(0) - c(0.5, 0.0)).norm(),
            0.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(r0.residual_norm, 0.5f64.sqrt(), epsilon = 1e-14);
        let r1 = solve_l2(&f, 1).unwrap();
        assert_abs_diff_eq!(
            (r1.coeffs.coeff(0) - c(2.0 / 3.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            (r1.coeffs.coeff(1) - c(1.0 / 3.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-14
        );
        let one = solve_l2(&poly(&[1.0]), 3).unwrap();
        assert_abs_diff_eq!(
            (one.coeffs.coeff(0) - c(1.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-14
        );
        for k in 1..=3 {
            assert!(one.coeffs.coeff(k).norm() < 1e-14);
        }
        assert!(matches!(
            solve_l2(&poly(&[0.0]), 1),
            Err(OpaError::Degenerate(_))
        ));
    }

    #[test]
    fn solve_exact_inverse() {
        let res = solve(&poly(&[1.0]), 3, 3.5, &SolverOptions::default()).unwrap();
        assert!(res.converged);
        assert_abs_diff_eq!(res.residual_norm, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            (res.coeffs.coeff(0) - c(1.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn solve_matches_hand_solution_at_p2() {
        let opts = SolverOptions {
            warm_start: false,
            ..SolverOptions::default()
        };
        let res = solve(&poly(&[1.0, -1.0]), 1, 2.0, &opts).unwrap();
        assert!(res.converged);
        assert_abs_diff_eq!(
            (res.coeffs.coeff(0) - c(2.0 / 3.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            (res.coeffs.coeff(1) - c(1.0 / 3.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-12
        );
        let lin = linear_factor(&res).unwrap();
        assert_abs_diff_eq!((lin.w - c(-2.0, 0.0)).norm(), 0.0, epsilon = 1e-11);
    }

    #[test]
    fn vanishing_at_origin_gives_zero_approximant() {
        let f = poly(&[0.0, 1.0]);
        for p in [1.5, 2.0, 3.0, 6.0] {
            for warm_start in [true, false] {
                let opts = SolverOptions {
                    warm_start,
                    ..SolverOptions::default()
                };
                let res = solve(&f, 2, p, &opts).unwrap();
                assert!(res.converged);
                assert!(
                    res.coeffs.coeffs().iter().all(|c| c.norm() < 1e-12),
                    "p = {p}"
                );
                assert_abs_diff_eq!(res.residual_norm, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn converges_for_non_hilbert_exponents() {
        let f = HpFunction::blaschke(BlaschkeProduct::new(vec![c(0.5, 0.0)]).unwrap(), M).unwrap();
        for p in [1.5, 3.0, 4.0, 6.0] {
            let (res, trace) = solve_traced(&f, 1, p, &SolverOptions::default()).unwrap();
            assert!(
                res.converged,
                "p = {p}: {:?} iters {} steps {:?}",
                res.orth_residuals,
                res.iterations,
                &trace.steps[trace.steps.len().saturating_sub(5)..]
            );
            assert!(res.residual_norm <= 1.0);
            assert!(trace.worst_increase() <= ROUNDING_SLACK);
        }
    }

    #[test]
    fn nonconvergence_is_reported() {
        let f = poly(&[1.0, 0.7, -0.2]);
        let opts = SolverOptions {
            max_iters: 1,
            warm_start: false,
            ..SolverOptions::default()
        };
        let res = solve(&f, 2, 4.0, &opts).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iterations, 1);
    }

    #[test]
    fn options_validation() {
        let mut o = SolverOptions {
            epsilon_schedule: vec![1e-2, 1e-2],
            ..Default::default()
        };
        assert!(o.validate().is_err());
        o.epsilon_schedule = vec![1e-2, 1e-16];
        assert!(o.validate().is_err());
        let o = SolverOptions {
            max_iters: 0,
            ..SolverOptions::default()
        };
        assert!(o.validate().is_err());
        assert!(solve(&poly(&[1.0]), 1, 0.5, &SolverOptions::default()).is_err());
    }

    #[test]
    fn linear_factor_examples() {
        let mk = |c0: f64, c1: f64| OpaResult {
            n: 1,
            p: 2.0,
            coeffs: TaylorPoly::from_real(&[c0, c1]),
            residual_norm: 0.0,
            orth_residuals: vec![0.0, 0.0],
            iterations: 0,
            converged: true,
        };
        let lin = linear_factor(&mk(2.0 / 3.0, 1.0 / 3.0)).unwrap();
        assert_abs_diff_eq!((lin.a - c(1.0 / 3.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((lin.w - c(-2.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
        let lin = linear_factor(&mk(0.0, 1.0)).unwrap();
        assert_eq!((lin.a, lin.w.norm()), (c(1.0, 0.0), 0.0));
        assert!(matches!(
            linear_factor(&mk(1.0, 0.0)),
            Err(OpaError::ConstantOpa)
        ));
        let poly = lin.poly();
        assert_eq!(poly.coeff(1), c(1.0, 0.0));
    }
}
