//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_complex::Complex64;

use hardy_opa::bounds::{
    diff_quotient_root_check, difference_quotient_norm_check, root_modulus_lower_bound,
};
use hardy_opa::formulas::{abcd, cross_check};
use hardy_opa::harness::{
    audit, generate_corpus, pythag_trials, sweep_cyclic, sweep_roots, CorpusSpec, Execution,
    SweepRecord,
};
use hardy_opa::solver::{gradient, linear_factor, objective, solve, solve_l2, LinearOpa};
use hardy_opa::{HpFunction, SolverOptions, TaylorPoly, DEFAULT_GRID};

/// Smallest `|w|` over the seed-42 Blaschke corpus, frozen after the first accepted run.
const LOCKED_MIN_W: [(f64, f64); 2] = [(3.0, 8.634649620535996), (4.0, 5.210872440508795)];
/// Residual `||q_8 f - 1||_p` for `f = 1 - z`; at `p = 2` it is exactly
/// `1/sqrt(n + 2)`, the `p = 3` value was frozen after the first accepted run.
const LOCKED_CYCLIC_FINAL: [(f64, f64); 2] =
    [(2.0, 0.31622776601683794), (3.0, 0.42019661646893675)];
const LOCK_REL_TOL: f64 = 1e-8;

fn poly_corpus() -> CorpusSpec {
    CorpusSpec::random_poly(100, 20_240_611, [1, 6], 0.1)
}

fn blaschke_corpus() -> CorpusSpec {
    CorpusSpec::blaschke(50, 42, [1, 3], [0.2, 0.8])
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn one_minus_z() -> HpFunction {
    HpFunction::poly(TaylorPoly::from_real(&[1.0, -1.0]), DEFAULT_GRID).unwrap()
}

fn locked(table: &[(f64, f64)], p: f64, observed: f64) -> (bool, String) {
    let want = table
        .iter()
        .find(|(q, _)| *q == p)
        .map(|&(_, v)| v)
        .unwrap();
    if want.is_nan() {
        return (false, format!("p={p}: unlocked, observed {observed:.17e}"));
    }
    let ok = (observed - want).abs() <= LOCK_REL_TOL * want.abs();
    (ok, format!("p={p}: {observed:.12e} (locked {want:.12e})"))
}

type Outcome = (bool, String);

fn oracle_equivalence() -> Outcome {
    let corpus = generate_corpus(&poly_corpus()).unwrap();
    let cold = SolverOptions {
        warm_start: false,
        ..SolverOptions::default()
    };
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for f in &corpus {
        for n in 0..=4 {
            let it = solve(f, n, 2.0, &cold).unwrap();
            let ex = solve_l2(f, n).unwrap();
            let dev = it
                .coeffs
                .coeffs()
                .iter()
                .zip(ex.coeffs.coeffs())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            worst = worst.max(dev);
            if !it.converged || dev > 1e-8 {
                failures += 1;
            }
        }
    }
    let res = solve(&one_minus_z(), 1, 2.0, &cold).unwrap();
    let lin = linear_factor(&res).unwrap();
    let exact = (res.coeffs.coeff(0) - c(2.0 / 3.0, 0.0)).norm() <= 1e-8
        && (res.coeffs.coeff(1) - c(1.0 / 3.0, 0.0)).norm() <= 1e-8
        && (lin.w - c(-2.0, 0.0)).norm() <= 1e-8;
    (
        failures == 0 && exact,
        format!("500 cold-start solves, worst coefficient deviation {worst:.2e}, failures {failures}; f=1-z gives w={:.12}", lin.w.re),
    )
}

fn optimality_certificates() -> Outcome {
    let corpus = generate_corpus(&poly_corpus()).unwrap();
    let opts = SolverOptions::default();
    let mut parts = Vec::new();
    let mut ok = true;
    for p in [1.5, 3.0, 4.0, 6.0] {
        let (mut worst, mut converged, mut total) = (0.0f64, 0, 0);
        for f in &corpus {
            for n in 0..=4 {
                let res = solve(f, n, p, &opts).unwrap();
                total += 1;
                if res.converged {
                    converged += 1;
                    worst = worst.max(res.max_orth_residual());
                }
            }
        }
        ok &= worst <= 1e-7 && converged == total;
        parts.push(format!(
            "p={p}: {converged}/{total} converged, worst {worst:.1e}"
        ));
    }
    (ok, parts.join("; "))
}

fn gradient_correctness() -> Outcome {
    let corpus = generate_corpus(&CorpusSpec::random_poly(25, 7, [1, 4], 0.1)).unwrap();
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    for (i, f) in corpus.iter().enumerate() {
        let n = i % 3;
        // deterministic probe point away from the optimum
        let coeffs: Vec<Complex64> = (0..=n)
            .map(|k| {
                c(
                    0.3 * (k as f64 + 1.0) - 0.1 * i as f64 / 25.0,
                    0.2 - 0.15 * k as f64,
                )
            })
            .collect();
        let q = TaylorPoly::new(coeffs.clone()).unwrap();
        for p in [2.0, 3.0, 4.0] {
            let g = gradient(f, &q, p, 0.0).unwrap();
            let mut diff2 = 0.0;
            let mut norm2 = 0.0;
            for k in 0..=n {
                let fd = |dir: Complex64| {
                    let mut plus = coeffs.clone();
                    let mut minus = coeffs.clone();
                    plus[k] += dir * h;
                    minus[k] -= dir * h;
                    (objective(f, &TaylorPoly::new(plus).unwrap(), p)
                        - objective(f, &TaylorPoly::new(minus).unwrap(), p))
                        / (2.0 * h)
                };
                let numeric = c(fd(c(1.0, 0.0)), fd(c(0.0, 1.0)));
                diff2 += (g[k] - numeric).norm_sqr();
                norm2 += g[k].norm_sqr();
            }
            worst = worst.max((diff2 / norm2).sqrt());
        }
    }
    (
        worst <= 1e-5,
        format!("75 gradients, worst relative deviation {worst:.2e}"),
    )
}

fn pythagorean_audit() -> Outcome {
    let ps = [1.2, 1.5, 2.0, 3.0, 4.0, 7.3];
    let trials = pythag_trials(1000, 2_024, &ps, DEFAULT_GRID, Execution::Parallel).unwrap();
    let min_slack = trials
        .iter()
        .map(|t| t.lower_slack.min(t.upper_slack))
        .fold(f64::INFINITY, f64::min);
    let p2_abs = trials
        .iter()
        .filter(|t| t.p == 2.0)
        .map(|t| t.lower_slack.abs().max(t.upper_slack.abs()))
        .fold(0.0, f64::max);
    (
        trials.len() == 6000 && min_slack >= -1e-9 && p2_abs <= 1e-10,
        format!(
            "{} pairs, min slack {min_slack:.2e}, max |slack| at p=2 {p2_abs:.2e}",
            trials.len()
        ),
    )
}

fn bounds_audit() -> Outcome {
    let mut corpus = generate_corpus(&poly_corpus()).unwrap();
    corpus.extend(generate_corpus(&blaschke_corpus()).unwrap());
    let opts = SolverOptions::default();
    let (mut reports, mut min_slack, mut unconverged) = (0usize, f64::INFINITY, 0usize);
    let mut names = std::collections::BTreeSet::new();
    let mut worst_collapse: f64 = 0.0;
    let mut interior_roots = 0usize;
    let mut violations = Vec::new();
    for (id, f) in corpus.iter().enumerate() {
        for p in [1.5, 2.0, 3.0, 4.0] {
            for n in 0..=2 {
                let rec = audit(f, p, n, &opts).unwrap();
                if !rec.converged {
                    unconverged += 1;
                    continue;
                }
                interior_roots += rec.roots.iter().filter(|z| z.norm() < 1.0).count();
                for b in &rec.bounds {
                    reports += 1;
                    names.insert(b.name.clone());
                    min_slack = min_slack.min(b.slack);
                    if b.slack < -1e-7 {
                        violations.push(format!("#{id} p={p} n={n} {}", b.name));
                    }
                }
                if n == 1 {
                    // linear polynomials with a root inside the disk, where the
                    // difference-quotient estimates apply to any Q
                    let res = solve(f, 1, p, &opts).unwrap();
                    let probe = LinearOpa {
                        a: c(1.0, 0.5),
                        w: Complex64::from_polar(0.5, id as f64),
                        source: res,
                    };
                    for b in [
                        diff_quotient_root_check(f, &probe.poly(), p).unwrap(),
                        difference_quotient_norm_check(f, &probe, p).unwrap(),
                    ] {
                        reports += 1;
                        names.insert(format!("{} (probe)", b.name));
                        min_slack = min_slack.min(b.slack);
                        if b.slack < -1e-7 {
                            violations.push(format!("#{id} p={p} probe {}", b.name));
                        }
                    }
                }
                if p == 2.0 {
                    if let Some(w) = rec.w_abs {
                        for b in rec
                            .bounds
                            .iter()
                            .filter(|b| b.name.starts_with("root_interval"))
                        {
                            worst_collapse = worst_collapse.max((b.rhs - w).abs());
                        }
                    }
                }
            }
        }
    }
    let ok = violations.is_empty() && unconverged == 0 && worst_collapse <= 1e-8;
    (
        ok,
        format!(
            "{reports} reports over {} kinds [{}], min slack {min_slack:.2e}, unconverged {unconverged}, p=2 interval collapse {worst_collapse:.1e}, approximant roots inside the disk {interior_roots}{}",
            names.len(),
            names.iter().cloned().collect::<Vec<_>>().join(", "),
            if violations.is_empty() { String::new() } else { format!(", violations: {}", violations.join(", ")) }
        ),
    )
}

fn formula_cross_check() -> Outcome {
    let mut corpus = generate_corpus(&poly_corpus()).unwrap();
    corpus.extend(generate_corpus(&blaschke_corpus()).unwrap());
    let opts = SolverOptions::default();
    let (mut checked, mut skipped, mut worst) = (0, 0, 0.0f64);
    for f in &corpus {
        for p in [2.0, 4.0, 6.0] {
            let res = solve(f, 1, p, &opts).unwrap();
            let Ok(lin) = linear_factor(&res) else {
                skipped += 1;
                continue;
            };
            if !res.converged {
                skipped += 1;
                continue;
            }
            let Ok(check) = cross_check(f, &lin, p) else {
                skipped += 1;
                continue;
            };
            checked += 1;
            worst = worst
                .max(check.max_pairwise_w_deviation)
                .max(check.max_solver_w_deviation);
        }
    }

    let f = one_minus_z();
    let q = TaylorPoly::from_real(&[2.0 / 3.0, 1.0 / 3.0]);
    let ints = abcd(&f, &q, 2.0).unwrap();
    let [a_m, b_m, c_m, d_m] = ints.denormalized();
    let exact_moments = (a_m - c(1.0, 0.0)).norm() < 1e-12
        && b_m.norm() < 1e-12
        && (c_m - c(2.0, 0.0)).norm() < 1e-12
        && (d_m - c(-1.0, 0.0)).norm() < 1e-12;
    let lin = linear_factor(&solve_l2(&f, 1).unwrap()).unwrap();
    let check = cross_check(&f, &lin, 2.0).unwrap();
    let exact_aw = (lin.a - c(1.0 / 3.0, 0.0)).norm() < 1e-12
        && check
            .w
            .all()
            .iter()
            .all(|v| (v.usable().unwrap() - c(-2.0, 0.0)).norm() < 1e-12)
        && (check.a.a_closed.usable().unwrap() - c(1.0 / 3.0, 0.0)).norm() < 1e-12;
    let flagged = check.a.a_linear_system.degenerate && check.a.a_linear_system.usable().is_none();
    (
        worst <= 1e-6 && checked > 0 && exact_moments && exact_aw && flagged,
        format!(
            "{checked} instances checked ({skipped} without a root), worst relative w deviation {worst:.2e}; f=1-z moments exact={exact_moments}, (a,w) exact={exact_aw}, displayed a-formula flagged degenerate={flagged}"
        ),
    )
}

fn root_separation() -> Outcome {
    let opts = SolverOptions::default();
    let sweep = sweep_roots(
        &blaschke_corpus(),
        &[2.0, 3.0, 4.0],
        1,
        &opts,
        Execution::Parallel,
    )
    .unwrap();
    let s2 = &sweep.summaries[0];
    // inner functions have constant linear approximants in H^2, so the
    // p = 2 claim is checked on the polynomial corpus as well
    let polys = sweep_roots(&poly_corpus(), &[2.0], 1, &opts, Execution::Parallel).unwrap();
    let poly_min = polys.summaries[0].min_w_abs.unwrap_or(f64::INFINITY);
    let blaschke_min = s2.min_w_abs.unwrap_or(f64::INFINITY);
    let mut ok = blaschke_min >= 1.0 - 1e-6 && poly_min >= 1.0 - 1e-6;
    let mut parts = vec![format!(
        "p=2: Blaschke min|w| {} ({} constant), polynomial min|w| {poly_min:.6}",
        s2.min_w_abs.map_or("none".into(), |v| format!("{v:.6}")),
        s2.degenerate
    )];
    for s in &sweep.summaries[1..] {
        let min = s.min_w_abs.unwrap_or(0.0);
        let (lock_ok, text) = locked(&LOCKED_MIN_W, s.p, min);
        ok &= min > 0.0 && lock_ok && s.not_converged == 0;
        parts.push(text);
    }
    let inside_violations = sweep
        .records
        .iter()
        .chain(&polys.records)
        .filter(|r| r.converged)
        .filter(|r| match r.w_abs {
            Some(w) if w < 1.0 => {
                w < root_modulus_lower_bound(r.residual_pnorm.min(1.0), r.p).unwrap() - 1e-7
            }
            _ => false,
        })
        .count();
    ok &= inside_violations == 0;
    parts.push(format!(
        "roots below the residual bound: {inside_violations}"
    ));
    (ok, parts.join("; "))
}

fn cyclicity() -> Outcome {
    let opts = SolverOptions::default();
    let mut ok = true;
    let mut parts = Vec::new();
    for p in [2.0, 3.0] {
        let out = sweep_cyclic(&one_minus_z(), p, 8, &opts, Execution::Parallel).unwrap();
        let s = &out.summary;
        let all_converged = out.records.iter().all(|r: &SweepRecord| r.converged);
        let (lock_ok, text) = locked(&LOCKED_CYCLIC_FINAL, p, s.residuals[8]);
        ok &= s.residuals_strictly_decreasing
            && s.lower_bounds_nondecreasing
            && s.roots_respect_bound
            && all_converged
            && lock_ok;
        parts.push(format!(
            "{text}, strictly decreasing={}, bound nondecreasing={} ({:.4} -> {:.4})",
            s.residuals_strictly_decreasing,
            s.lower_bounds_nondecreasing,
            s.root_lower_bounds[0],
            s.root_lower_bounds[8]
        ));
    }
    (ok, parts.join("; "))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("corpus.json");
    std::fs::write(&spec, serde_json::to_string(&blaschke_corpus()).unwrap()).unwrap();
    let run = |name: &str, serial: bool| {
        let csv = dir.path().join(name);
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_hardy-opa"));
        cmd.args(["sweep-roots", "--corpus"])
            .arg(&spec)
            .args(["--p", "1.5,2,3,4", "--csv"])
            .arg(&csv);
        if serial {
            cmd.arg("--serial");
        }
        let status = cmd.output().unwrap().status;
        (status.code(), std::fs::read(&csv).unwrap())
    };
    let (code_a, first) = run("a.csv", false);
    let (code_b, second) = run("b.csv", false);
    let (code_c, serial) = run("c.csv", true);
    let sort = |bytes: &[u8]| {
        let text = String::from_utf8(bytes.to_vec()).unwrap();
        let mut lines: Vec<String> = text.lines().skip(1).map(str::to_string).collect();
        lines.sort_by_key(|l| l.split(',').next().unwrap().parse::<usize>().unwrap());
        lines
    };
    let identical = first == second;
    let same_sorted = sort(&first) == sort(&serial);
    let rows = first
        .iter()
        .filter(|&&b| b == b'\n')
        .count()
        .saturating_sub(1);
    (
        identical && same_sorted && code_a == code_b && code_a == code_c,
        format!("{rows} rows; repeated runs byte-identical={identical}; serial equals parallel={same_sorted}; exit codes {code_a:?}/{code_b:?}/{code_c:?}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("oracle equivalence at p = 2", oracle_equivalence),
        ("optimality certificates", optimality_certificates),
        ("gradient correctness", gradient_correctness),
        ("Pythagorean audit", pythagorean_audit),
        ("bounds audit", bounds_audit),
        ("closed-form cross-check", formula_cross_check),
        ("root separation", root_separation),
        ("cyclicity convergence", cyclicity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = check();
        failed += usize::from(!ok);
        println!(
            "criterion {} [{}] {name} ({:.1}s): {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
