//! One audited solve: the approximant, every applicable bound and the
//! closed-form cross-check, plus its JSON and CSV renderings.

use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::HpFunction;
use crate::bounds::{self, BoundReport};
use crate::error::{check_exponent, OpaError, Result};
use crate::formulas::{self, FormulaCrossCheck};
use crate::fspec;
use crate::roots::poly_roots;
use crate::solver::{linear_factor, solve, OpaResult, SolverOptions};

pub const SCHEMA_VERSION: u32 = 1;

/// Field order is part of the output format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub schema_version: u32,
    pub p: f64,
    pub n: usize,
    pub grid: usize,
    pub coeffs: Vec<Complex64>,
    pub residual_pnorm: f64,
    pub orth_residuals: Vec<f64>,
    pub a: Option<Complex64>,
    pub w: Option<Complex64>,
    pub bounds: Vec<BoundReport>,
    pub formulas: Option<FormulaCrossCheck>,
    pub converged: bool,
    pub iterations: usize,
    pub instance_id: usize,
    pub f: String,
    pub w_abs: Option<f64>,
    /// Roots of the approximant, when it is not constant.
    pub roots: Vec<Complex64>,
    /// Skipped checks and degenerate cases, one line each.
    pub notes: Vec<String>,
}

impl SweepRecord {
    /// A record of the solve alone, without bound or formula checks.
    pub fn from_solve(f: &HpFunction, res: &OpaResult) -> Self {
        let mut notes = Vec::new();
        let roots = if res.coeffs.coeffs().iter().all(|c| c.norm() == 0.0) {
            notes.push("approximant is identically zero".into());
            Vec::new()
        } else {
            poly_roots(&res.coeffs).unwrap_or_else(|e| {
                notes.push(format!("roots: {e}"));
                Vec::new()
            })
        };
        let lin = if res.n == 1 {
            match linear_factor(res) {
                Ok(lin) => Some(lin),
                Err(OpaError::ConstantOpa) => {
                    notes.push("constant approximant: no root, root checks skipped".into());
                    None
                }
                Err(e) => {
                    notes.push(format!("linear factor: {e}"));
                    None
                }
            }
        } else {
            None
        };
        Self {
            schema_version: SCHEMA_VERSION,
            p: res.p,
            n: res.n,
            grid: f.grid_size(),
            coeffs: res.coeffs.coeffs().to_vec(),
            residual_pnorm: res.residual_norm,
            orth_residuals: res.orth_residuals.clone(),
            a: lin.as_ref().map(|l| l.a),
            w: lin.as_ref().map(|l| l.w),
            bounds: Vec::new(),
            formulas: None,
            converged: res.converged,
            iterations: res.iterations,
            instance_id: 0,
            f: fspec::describe(f),
            w_abs: lin.as_ref().map(|l| l.w.norm()),
            roots,
            notes,
        }
    }

    pub fn min_bound_slack(&self) -> Option<f64> {
        self.bounds.iter().map(|b| b.slack).reduce(f64::min)
    }

    /// Bound reports that failed their tolerance.
    pub fn violations(&self) -> impl Iterator<Item = &BoundReport> {
        self.bounds.iter().filter(|b| !b.satisfied)
    }

    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            instance_id: self.instance_id,
            f_descriptor: self.f.clone(),
            p: self.p,
            n: self.n,
            residual: self.residual_pnorm,
            a_re: self.a.map(|z| z.re),
            a_im: self.a.map(|z| z.im),
            w_re: self.w.map(|z| z.re),
            w_im: self.w.map(|z| z.im),
            w_abs: self.w_abs,
            min_bound_slack: self.min_bound_slack(),
            converged: self.converged,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CsvRow {
    pub instance_id: usize,
    pub f_descriptor: String,
    pub p: f64,
    pub n: usize,
    pub residual: f64,
    pub a_re: Option<f64>,
    pub a_im: Option<f64>,
    pub w_re: Option<f64>,
    pub w_im: Option<f64>,
    pub w_abs: Option<f64>,
    pub min_bound_slack: Option<f64>,
    pub converged: bool,
}

/// Collects the reports of a bound check, noting the inapplicable ones.
fn push_bound(
    bounds: &mut Vec<BoundReport>,
    notes: &mut Vec<String>,
    label: &str,
    out: Result<BoundReport>,
) {
    match out {
        Ok(rep) => bounds.push(rep),
        Err(e) => notes.push(format!("{label}: {e}")),
    }
}

/// Solves for `q_{n,p}[f]` and runs every applicable check.
///
/// Solver non-convergence is recorded in the result; only invalid input
/// (bad exponent, `f(0) = 0`) is an error.
pub fn audit(f: &HpFunction, p: f64, n: usize, opts: &SolverOptions) -> Result<SweepRecord> {
    check_exponent(p)?;
    if f.value_at_zero().norm() == 0.0 {
        return Err(OpaError::Precondition("audits need f(0) != 0".into()));
    }
    let res = solve(f, n, p, opts)?;
    let mut rec = SweepRecord::from_solve(f, &res);
    let mut bounds = Vec::new();
    let mut notes = std::mem::take(&mut rec.notes);

    if n == 0 {
        let lambda = res.coeffs.coeff(0);
        push_bound(
            &mut bounds,
            &mut notes,
            "constant_upper",
            bounds::constant_upper_bound(f, p, lambda),
        );
        push_bound(
            &mut bounds,
            &mut notes,
            "constant_upper_mvt",
            bounds::constant_upper_bound_mvt(f, p, lambda),
        );
        push_bound(
            &mut bounds,
            &mut notes,
            "constant_lower",
            bounds::constant_lower_bound(f, p, lambda, None),
        );
    }

    let mut formulas = None;
    // a constant approximant was already noted when the record was built
    if n == 1 {
        if let Ok(lin) = linear_factor(&res) {
            push_bound(
                &mut bounds,
                &mut notes,
                "root_difference_quotient",
                bounds::diff_quotient_root_check(f, &lin.poly(), p),
            );
            match bounds::root_interval(f, &lin, p) {
                Ok((lo, hi)) => {
                    for rep in [&lo, &hi] {
                        if rep.clamped {
                            notes.push(format!("{}: radicand clamped at zero", rep.name));
                        }
                    }
                    bounds.push(lo);
                    bounds.push(hi);
                }
                Err(e) => notes.push(format!("root_interval: {e}")),
            }
            push_bound(
                &mut bounds,
                &mut notes,
                "leading_coeff_upper",
                bounds::leading_coeff_bound(f, &lin, p),
            );
            push_bound(
                &mut bounds,
                &mut notes,
                "difference_quotient_norm",
                bounds::difference_quotient_norm_check(f, &lin, p),
            );
            match formulas::cross_check(f, &lin, p) {
                Ok(check) => formulas = Some(check),
                Err(e) => notes.push(format!("formulas: {e}")),
            }
        }
    }

    if !rec.roots.is_empty() {
        match bounds::root_modulus_checks(f, &rec.roots, res.residual_norm, p, n) {
            Ok(reps) => bounds.extend(reps),
            Err(e) => notes.push(format!("root_modulus_lower: {e}")),
        }
    }

    if p > 2.0 {
        let (g, _) = f.normalized(p)?;
        for k in [2.0, 0.5 * (2.0 + p)] {
            push_bound(
                &mut bounds,
                &mut notes,
                "holder_interpolation",
                bounds::holder_interpolation_check(g.grid(), p, k),
            );
        }
    }

    rec.bounds = bounds;
    rec.formulas = formulas;
    rec.notes = notes;
    Ok(rec)
}

/// Outcome of a batch of records, mapped onto process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    /// Everything converged and every bound held.
    Clean,
    /// A converged record violates a bound beyond tolerance.
    BoundViolated,
    /// Some solve did not converge (and no converged record violates a bound).
    NotConverged,
    /// Invalid input.
    InputError,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Clean => 0,
            ExitStatus::BoundViolated => 2,
            ExitStatus::NotConverged => 3,
            ExitStatus::InputError => 4,
        }
    }

    /// Violations take precedence over non-convergence, since a failed solve
    /// carries no evidence about the bounds.
    pub fn of<'a>(records: impl IntoIterator<Item = &'a SweepRecord>) -> Self {
        let mut unconverged = false;
        for rec in records {
            if !rec.converged {
                unconverged = true;
            } else if rec.violations().next().is_some() {
                return ExitStatus::BoundViolated;
            }
        }
        if unconverged {
            ExitStatus::NotConverged
        } else {
            ExitStatus::Clean
        }
    }
}

/// JSON document: a header holding the only run-dependent field, then the records.
#[derive(Serialize)]
struct Document<'a, S: Serialize> {
    header: Header<'a>,
    records: &'a [SweepRecord],
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<&'a S>,
}

#[derive(Serialize)]
struct Header<'a> {
    schema_version: u32,
    generator: &'a str,
    command: &'a str,
    generated_unix_seconds: u64,
}

/// Writes records as a JSON document with a timestamped header.
pub fn write_json<S: Serialize>(
    out: impl Write,
    command: &str,
    records: &[SweepRecord],
    summary: Option<&S>,
) -> Result<()> {
    let generated_unix_seconds = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let doc = Document {
        header: Header {
            schema_version: SCHEMA_VERSION,
            generator: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")),
            command,
            generated_unix_seconds,
        },
        records,
        summary,
    };
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

/// Writes one CSV row per record, in the given order.
pub fn write_csv(out: impl Write, records: &[SweepRecord]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for rec in records {
        writer.serialize(rec.csv_row())?;
    }
    writer.flush()?;
    Ok(())
}
