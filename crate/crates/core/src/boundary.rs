//! Functions on the unit circle represented by uniform boundary samples.
//!
//! Every integral against normalized arc length `dm` is realized as the
//! trapezoid rule `(1/M) sum_j g(e^{i theta_j})` on `M` equispaced points,
//! which is spectrally accurate for the smooth integrands used here.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{OpaError, Result};

pub type ComplexScalar = Complex64;

/// Default number of boundary samples.
pub const DEFAULT_GRID: usize = 4096;

/// Moduli below this are treated as exact zeros inside `|0|^{s} 0-bar` style
/// integrands.
pub const ZERO_MODULUS: f64 = 1e-300;

fn all_finite(values: &[Complex64]) -> bool {
    values.iter().all(|c| c.re.is_finite() && c.im.is_finite())
}

/// A polynomial stored by its Taylor coefficients; `coeffs[k]` multiplies `z^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct TaylorPoly {
    coeffs: Vec<Complex64>,
}

impl TaylorPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if !all_finite(&coeffs) {
            return Err(OpaError::Domain("non-finite polynomial coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    /// Real-coefficient shorthand, mostly for tests and examples.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self {
            coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Index of the last nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| *c != Complex64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self {
            coeffs: (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Samples at the `m` roots of unity.
    pub fn sample(&self, m: usize) -> Result<BoundaryGrid> {
        let points = unit_roots(m)?;
        BoundaryGrid::from_samples(points.iter().map(|&z| self.eval(z)).collect())
    }
}

/// Finite Blaschke product `u * prod (z - a)/(1 - conj(a) z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    unimodular_factor: Complex64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        Self::with_factor(zeros, Complex64::new(1.0, 0.0))
    }

    pub fn with_factor(zeros: Vec<Complex64>, unimodular_factor: Complex64) -> Result<Self> {
        if !all_finite(&zeros) || !all_finite(&[unimodular_factor]) {
            return Err(OpaError::Domain("non-finite Blaschke parameter".into()));
        }
        if let Some(z) = zeros.iter().find(|z| z.norm() >= 1.0) {
            return Err(OpaError::Domain(format!(
                "Blaschke zero {z} is not inside the unit disk"
            )));
        }
        if (unimodular_factor.norm() - 1.0).abs() > 1e-12 {
            return Err(OpaError::Domain(format!(
                "Blaschke factor {unimodular_factor} is not unimodular"
            )));
        }
        Ok(Self {
            zeros,
            unimodular_factor,
        })
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn unimodular_factor(&self) -> Complex64 {
        self.unimodular_factor
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros.iter().fold(self.unimodular_factor, |acc, &a| {
            acc * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
        })
    }

    pub fn sample(&self, m: usize) -> Result<BoundaryGrid> {
        let points = unit_roots(m)?;
        BoundaryGrid::from_samples(points.iter().map(|&z| self.eval(z)).collect())
    }
}

/// The exact description behind a sampled function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionForm {
    Poly(TaylorPoly),
    Blaschke(BlaschkeProduct),
}

impl FunctionForm {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            FunctionForm::Poly(p) => p.eval(z),
            FunctionForm::Blaschke(b) => b.eval(z),
        }
    }

    pub fn sample(&self, m: usize) -> Result<BoundaryGrid> {
        match self {
            FunctionForm::Poly(p) => p.sample(m),
            FunctionForm::Blaschke(b) => b.sample(m),
        }
    }
}

fn check_grid_size(m: usize) -> Result<()> {
    if m >= 4 && m.is_power_of_two() {
        Ok(())
    } else {
        Err(OpaError::Domain(format!(
            "grid size {m} must be a power of two and at least 4"
        )))
    }
}

/// The `m` roots of unity `e^{2 pi i j / m}`.
///
/// The first quadrant is computed with `sin_cos` and the rest by exact
/// rotation, so `1, i, -1, -i` come out exactly.
pub fn unit_roots(m: usize) -> Result<Vec<Complex64>> {
    check_grid_size(m)?;
    let quarter = m / 4;
    let mut pts = Vec::with_capacity(m);
    for j in 0..quarter {
        let (s, c) = (std::f64::consts::TAU * j as f64 / m as f64).sin_cos();
        pts.push(Complex64::new(c, s));
    }
    for q in 1..4 {
        for j in 0..quarter {
            let z = pts[(q - 1) * quarter + j];
            // multiply by i
            pts.push(Complex64::new(-z.im, z.re));
        }
    }
    Ok(pts)
}

/// `M` uniform samples of a function on the unit circle.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryGrid {
    samples: Vec<Complex64>,
}

impl BoundaryGrid {
    pub fn from_samples(samples: Vec<Complex64>) -> Result<Self> {
        check_grid_size(samples.len())?;
        if !all_finite(&samples) {
            return Err(OpaError::Domain("non-finite boundary sample".into()));
        }
        Ok(Self { samples })
    }

    pub fn constant(value: Complex64, m: usize) -> Result<Self> {
        Self::from_samples(vec![value; m])
    }

    /// Samples of `z^k`.
    pub fn monomial(k: usize, m: usize) -> Result<Self> {
        let roots = unit_roots(m)?;
        Ok(Self {
            samples: (0..m).map(|j| roots[(j * k) % m]).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(OpaError::SizeMismatch {
                left: self.len(),
                right: other.len(),
            })
        }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            samples: self.samples.iter().map(|&s| f(s)).collect(),
        }
    }

    pub fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|v| v * s)
    }

    /// Pointwise product with a polynomial evaluated on the same grid.
    pub fn mul_poly(&self, q: &TaylorPoly) -> Self {
        let roots = unit_roots(self.len()).expect("grid size already validated");
        Self {
            samples: self
                .samples
                .iter()
                .zip(&roots)
                .map(|(&g, &z)| g * q.eval(z))
                .collect(),
        }
    }

    /// Samples of `z^k g`.
    pub fn shift(&self, k: usize) -> Self {
        let m = self.len();
        let roots = unit_roots(m).expect("grid size already validated");
        Self {
            samples: self
                .samples
                .iter()
                .enumerate()
                .map(|(j, &g)| g * roots[(j * k) % m])
                .collect(),
        }
    }

    /// Quadrature of the samples: `integral g dm`.
    pub fn mean(&self) -> Complex64 {
        self.samples.iter().sum::<Complex64>() / self.len() as f64
    }

    /// `integral |g|^p dm`.
    pub fn p_power_integral(&self, p: f64) -> f64 {
        let half = p / 2.0;
        let sum: f64 = if p == 2.0 {
            self.samples.iter().map(|s| s.norm_sqr()).sum()
        } else {
            self.samples.iter().map(|s| s.norm_sqr().powf(half)).sum()
        };
        sum / self.len() as f64
    }

    /// `||g||_p = (integral |g|^p dm)^{1/p}`.
    ///
    /// Accepts any `p > 0` so that auxiliary norms such as `||phi||_{p-2}`
    /// can be evaluated; Hardy-space callers go through [`p_norm`].
    pub fn norm(&self, p: f64) -> f64 {
        self.p_power_integral(p).powf(1.0 / p)
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    /// Sesquilinear pairing `(1/M) sum g_j conj(h_j)`.
    pub fn pairing(&self, other: &Self) -> Result<Complex64> {
        self.check_same(other)?;
        let sum: Complex64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&g, &h)| g * h.conj())
            .sum();
        Ok(sum / self.len() as f64)
    }

    /// Bilinear duality pairing `(1/M) sum g_j h_j`, the action of an
    /// `L^{p'}` functional `h` on `g`.
    pub fn dual_pairing(&self, other: &Self) -> Result<Complex64> {
        self.check_same(other)?;
        let sum: Complex64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(&g, &h)| g * h)
            .sum();
        Ok(sum / self.len() as f64)
    }

    /// Pointwise dual power.
    pub fn dual_function(&self, s: f64) -> Self {
        self.map(|v| dual_power(v, s))
    }

    /// Discrete Fourier coefficient `(1/M) sum g_j e^{-i k theta_j}`.
    pub fn taylor_coeff(&self, k: usize) -> Result<Complex64> {
        let m = self.len();
        if k >= m {
            return Err(OpaError::Precondition(format!(
                "coefficient index {k} must be below grid size {m}"
            )));
        }
        let roots = unit_roots(m)?;
        let sum: Complex64 = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, &g)| g * roots[(j * k) % m].conj())
            .sum();
        Ok(sum / m as f64)
    }
}

/// Samples `form` at the `m` roots of unity.
pub fn sample(form: &FunctionForm, m: usize) -> Result<BoundaryGrid> {
    form.sample(m)
}

/// `||g||_p` for a Hardy-space exponent `p` in `(1, inf)`.
pub fn p_norm(g: &BoundaryGrid, p: f64) -> Result<f64> {
    crate::error::check_exponent(p)?;
    Ok(g.norm(p))
}

/// `alpha^<s> = r^s e^{-i theta}` for `alpha = r e^{i theta}`; zero maps to zero.
pub fn dual_power(alpha: Complex64, s: f64) -> Complex64 {
    let r = alpha.norm();
    if r < ZERO_MODULUS {
        return Complex64::new(0.0, 0.0);
    }
    // r^s e^{-i theta} = r^{s-1} conj(alpha)
    alpha.conj() * r.powf(s - 1.0)
}

/// A function in `H^p` with its exact form and materialized boundary samples.
///
/// `scale` multiplies the exact form, which lets Blaschke products be
/// rescaled without violating their unimodular normalization.
#[derive(Clone, Debug)]
pub struct HpFunction {
    form: FunctionForm,
    scale: Complex64,
    grid: BoundaryGrid,
}

impl HpFunction {
    pub fn new(form: FunctionForm, m: usize) -> Result<Self> {
        let grid = form.sample(m)?;
        Ok(Self {
            form,
            scale: Complex64::new(1.0, 0.0),
            grid,
        })
    }

    pub fn poly(poly: TaylorPoly, m: usize) -> Result<Self> {
        Self::new(FunctionForm::Poly(poly), m)
    }

    pub fn blaschke(b: BlaschkeProduct, m: usize) -> Result<Self> {
        Self::new(FunctionForm::Blaschke(b), m)
    }

    /// `lambda * self`.
    pub fn scaled(&self, lambda: Complex64) -> Self {
        Self {
            form: self.form.clone(),
            scale: self.scale * lambda,
            grid: self.grid.scale(lambda),
        }
    }

    /// `self / ||self||_p` together with the norm that was divided out.
    pub fn normalized(&self, p: f64) -> Result<(Self, f64)> {
        let norm = p_norm(&self.grid, p)?;
        if norm == 0.0 {
            return Err(OpaError::Degenerate(
                "cannot normalize the zero function".into(),
            ));
        }
        Ok((self.scaled(Complex64::new(1.0 / norm, 0.0)), norm))
    }

    pub fn form(&self) -> &FunctionForm {
        &self.form
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn grid_size(&self) -> usize {
        self.grid.len()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.scale * self.form.eval(z)
    }

    /// `f(0)`, read from the exact form.
    pub fn value_at_zero(&self) -> Complex64 {
        self.eval(Complex64::new(0.0, 0.0))
    }

    /// The same function resampled on a grid of size `m`.
    pub fn resampled(&self, m: usize) -> Result<Self> {
        Ok(Self {
            form: self.form.clone(),
            scale: self.scale,
            grid: self.form.sample(m)?.scale(self.scale),
        })
    }
}
