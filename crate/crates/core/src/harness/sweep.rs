//! Batch experiments over corpora: root locations of linear approximants,
//! residual decay for cyclic functions, and orthogonal-pair trials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{FunctionForm, HpFunction};
use crate::bounds::root_modulus_lower_bound;
use crate::error::{check_exponent, OpaError, Result};
use crate::harness::corpus::{generate_corpus, random_poly_grid, CorpusSpec, MAX_REJECTIONS};
use crate::harness::record::{audit, SweepRecord};
use crate::orthogonality::{check_pythagorean, orthogonalize, relative_bj_residual};
use crate::roots::poly_roots;
use crate::solver::SolverOptions;

/// Serial or rayon-parallel evaluation; outputs are identical either way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

fn run<T: Send, R: Send>(
    items: Vec<T>,
    mode: Execution,
    f: impl Fn(T) -> R + Sync + Send,
) -> Vec<R> {
    match mode {
        Execution::Serial => items.into_iter().map(f).collect(),
        Execution::Parallel => items.into_par_iter().map(f).collect(),
    }
}

/// Per-exponent summary of a root sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSummary {
    pub p: f64,
    /// Smallest `|w|` over converged instances with a genuine root.
    pub min_w_abs: Option<f64>,
    pub argmin_instance: Option<usize>,
    pub converged: usize,
    pub not_converged: usize,
    /// Converged instances whose approximant was constant (no root).
    pub degenerate: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSweep {
    /// Ordered by instance, then by exponent in the order given.
    pub records: Vec<SweepRecord>,
    pub summaries: Vec<RootSummary>,
}

/// Audits every corpus instance at every exponent with approximants of degree `n`.
pub fn sweep_roots(
    spec: &CorpusSpec,
    ps: &[f64],
    n: usize,
    opts: &SolverOptions,
    mode: Execution,
) -> Result<RootSweep> {
    for &p in ps {
        check_exponent(p)?;
    }
    opts.validate()?;
    let corpus = generate_corpus(spec)?;
    let jobs: Vec<(usize, &HpFunction, f64)> = corpus
        .iter()
        .enumerate()
        .flat_map(|(id, f)| ps.iter().map(move |&p| (id, f, p)))
        .collect();
    let records = run(jobs, mode, |(id, f, p)| {
        audit(f, p, n, opts).map(|mut rec| {
            rec.instance_id = id;
            rec
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let summaries = ps.iter().map(|&p| summarize(&records, p)).collect();
    Ok(RootSweep { records, summaries })
}

fn summarize(records: &[SweepRecord], p: f64) -> RootSummary {
    let mut out = RootSummary {
        p,
        min_w_abs: None,
        argmin_instance: None,
        converged: 0,
        not_converged: 0,
        degenerate: 0,
    };
    for rec in records.iter().filter(|r| r.p == p) {
        if !rec.converged {
            out.not_converged += 1;
            continue;
        }
        out.converged += 1;
        match rec.w_abs {
            Some(w) if out.min_w_abs.is_none_or(|m| w < m) => {
                out.min_w_abs = Some(w);
                out.argmin_instance = Some(rec.instance_id);
            }
            Some(_) => {}
            None => out.degenerate += 1,
        }
    }
    out
}

/// Monotonicity findings of a cyclic sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicSummary {
    pub residuals: Vec<f64>,
    /// `sqrt(1 - residual^p)` per degree.
    pub root_lower_bounds: Vec<f64>,
    pub residuals_nonincreasing: bool,
    pub residuals_strictly_decreasing: bool,
    pub lower_bounds_nondecreasing: bool,
    /// Every root inside the disk lies at or beyond the lower bound.
    pub roots_respect_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicSweep {
    pub records: Vec<SweepRecord>,
    pub summary: CyclicSummary,
}

/// Audits `q_{n,p}[f]` for `n = 0..=n_max`; `f` must be a polynomial
/// without zeros in the open disk, hence cyclic.
pub fn sweep_cyclic(
    f: &HpFunction,
    p: f64,
    n_max: usize,
    opts: &SolverOptions,
    mode: Execution,
) -> Result<CyclicSweep> {
    check_exponent(p)?;
    let FunctionForm::Poly(poly) = f.form() else {
        return Err(OpaError::Precondition(
            "cyclic sweeps need a polynomial".into(),
        ));
    };
    if let Some(z) = poly_roots(poly)?
        .into_iter()
        .find(|z| z.norm() < 1.0 - 1e-12)
    {
        return Err(OpaError::Precondition(format!(
            "f vanishes at {z} inside the disk, so it is not cyclic"
        )));
    }
    let records = run((0..=n_max).collect(), mode, |n| {
        audit(f, p, n, opts).map(|mut rec| {
            rec.instance_id = n;
            rec
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let residuals: Vec<f64> = records.iter().map(|r| r.residual_pnorm).collect();
    let root_lower_bounds = residuals
        .iter()
        .map(|&r| root_modulus_lower_bound(r.min(1.0), p))
        .collect::<Result<Vec<_>>>()?;
    let roots_respect_bound = records.iter().zip(&root_lower_bounds).all(|(rec, &lb)| {
        rec.roots
            .iter()
            .filter(|z| z.norm() < 1.0)
            .all(|z| z.norm() >= lb - 1e-7)
    });
    let summary = CyclicSummary {
        residuals_nonincreasing: residuals.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12)),
        residuals_strictly_decreasing: residuals.windows(2).all(|w| w[1] < w[0]),
        lower_bounds_nondecreasing: root_lower_bounds.windows(2).all(|w| w[1] >= w[0] - 1e-12),
        roots_respect_bound,
        residuals,
        root_lower_bounds,
    };
    Ok(CyclicSweep { records, summary })
}

/// One orthogonal pair `x _|_p y` with `y` built by [`orthogonalize`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PythagTrial {
    pub trial: usize,
    pub p: f64,
    pub orth_residual: f64,
    pub lower_slack: f64,
    pub upper_slack: f64,
}

/// Maximum polynomial degree of the random pair members.
pub const PYTHAG_MAX_DEGREE: usize = 6;

/// Relative size below which the orthogonalized member counts as zero.
pub const PARALLEL_TOL: f64 = 1e-6;

/// Seeded Pythagorean trials; trial `t` at every exponent uses the same
/// random `x` and `g`, derived from `seed` and `t` alone.
pub fn pythag_trials(
    trials: usize,
    seed: u64,
    ps: &[f64],
    grid: usize,
    mode: Execution,
) -> Result<Vec<PythagTrial>> {
    for &p in ps {
        check_exponent(p)?;
    }
    let jobs: Vec<(usize, f64)> = (0..trials)
        .flat_map(|t| ps.iter().map(move |&p| (t, p)))
        .collect();
    run(jobs, mode, |(t, p)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let x = random_poly_grid(&mut rng, PYTHAG_MAX_DEGREE, grid)?;
        // a g parallel to x leaves only rounding noise in y
        let mut tries = 0;
        let y = loop {
            let g = random_poly_grid(&mut rng, PYTHAG_MAX_DEGREE, grid)?;
            let y = orthogonalize(&x, &g, p)?;
            if y.norm(p) > PARALLEL_TOL * g.norm(p) {
                break y;
            }
            tries += 1;
            if tries >= MAX_REJECTIONS {
                return Err(OpaError::Unsatisfiable(
                    "no pair with a non-parallel second member".into(),
                ));
            }
        };
        let (_, orth_residual) = relative_bj_residual(&x, &y, p)?;
        let rep = check_pythagorean(&x, &y, p)?;
        Ok(PythagTrial {
            trial: t,
            p,
            orth_residual,
            lower_slack: rep.lower_slack,
            upper_slack: rep.upper_slack,
        })
    })
    .into_iter()
    .collect()
}
