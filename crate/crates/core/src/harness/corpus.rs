//! Seeded test corpora of polynomials and finite Blaschke products.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::boundary::{BlaschkeProduct, HpFunction, TaylorPoly, DEFAULT_GRID};
use crate::error::{OpaError, Result};

/// Redraws allowed before a constraint is declared unsatisfiable.
pub const MAX_REJECTIONS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusKind {
    /// Polynomials with coefficients uniform in the square `[-1, 1] x [-1, 1]`.
    RandomPoly,
    /// Blaschke products with zeros uniform (by area) in an annulus.
    Blaschke,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub kind: CorpusKind,
    pub count: usize,
    pub seed: u64,
    /// Inclusive degree range (number of zeros for Blaschke products).
    pub degree_range: [usize; 2],
    /// Inclusive modulus range for Blaschke zeros, inside `(0, 1)`.
    #[serde(default)]
    pub zero_modulus_range: Option<[f64; 2]>,
    /// Lower bound on `|f(0)|`.
    #[serde(default)]
    pub min_f0: f64,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

fn default_grid() -> usize {
    DEFAULT_GRID
}

impl CorpusSpec {
    pub fn random_poly(count: usize, seed: u64, degree_range: [usize; 2], min_f0: f64) -> Self {
        Self {
            kind: CorpusKind::RandomPoly,
            count,
            seed,
            degree_range,
            zero_modulus_range: None,
            min_f0,
            grid: DEFAULT_GRID,
        }
    }

    pub fn blaschke(count: usize, seed: u64, degree_range: [usize; 2], moduli: [f64; 2]) -> Self {
        Self {
            kind: CorpusKind::Blaschke,
            count,
            seed,
            degree_range,
            zero_modulus_range: Some(moduli),
            min_f0: 0.0,
            grid: DEFAULT_GRID,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.degree_range;
        if lo > hi {
            return Err(OpaError::Domain(format!("empty degree range [{lo}, {hi}]")));
        }
        if !(self.min_f0.is_finite() && self.min_f0 >= 0.0) {
            return Err(OpaError::Domain(format!(
                "min_f0 = {} must be finite and >= 0",
                self.min_f0
            )));
        }
        match self.kind {
            CorpusKind::RandomPoly => {
                if self.zero_modulus_range.is_some() {
                    return Err(OpaError::Domain(
                        "zero_modulus_range applies to Blaschke corpora only".into(),
                    ));
                }
            }
            CorpusKind::Blaschke => {
                if lo == 0 {
                    return Err(OpaError::Domain(
                        "Blaschke products need at least one zero".into(),
                    ));
                }
                let [rlo, rhi] = self.zero_modulus_range.ok_or_else(|| {
                    OpaError::Domain("Blaschke corpora need zero_modulus_range".into())
                })?;
                if !(rlo > 0.0 && rlo <= rhi && rhi < 1.0) {
                    return Err(OpaError::Domain(format!(
                        "zero moduli [{rlo}, {rhi}] must satisfy 0 < lo <= hi < 1"
                    )));
                }
            }
        }
        Ok(())
    }
}

fn unit_square(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

fn annulus(rng: &mut ChaCha8Rng, [lo, hi]: [f64; 2]) -> Complex64 {
    let u: f64 = rng.random();
    let r = (lo * lo + u * (hi * hi - lo * lo)).sqrt();
    Complex64::from_polar(r, rng.random_range(0.0..TAU))
}

/// Generates the corpus; the same spec always yields the same functions.
pub fn generate_corpus(spec: &CorpusSpec) -> Result<Vec<HpFunction>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let [lo, hi] = spec.degree_range;
    (0..spec.count)
        .map(|_| {
            let degree = rng.random_range(lo..=hi);
            match spec.kind {
                CorpusKind::RandomPoly => {
                    let mut coeffs: Vec<Complex64> =
                        (0..=degree).map(|_| unit_square(&mut rng)).collect();
                    let mut tries = 0;
                    while coeffs[0].norm() < spec.min_f0 || coeffs[0].norm() == 0.0 {
                        tries += 1;
                        if tries > MAX_REJECTIONS {
                            return Err(OpaError::Unsatisfiable(format!(
                                "no constant term with |f(0)| >= {} after {MAX_REJECTIONS} draws",
                                spec.min_f0
                            )));
                        }
                        coeffs[0] = unit_square(&mut rng);
                    }
                    HpFunction::poly(TaylorPoly::new(coeffs)?, spec.grid)
                }
                CorpusKind::Blaschke => {
                    let moduli = spec.zero_modulus_range.expect("validated");
                    let mut tries = 0;
                    loop {
                        let zeros: Vec<Complex64> =
                            (0..degree).map(|_| annulus(&mut rng, moduli)).collect();
                        let f0: f64 = zeros.iter().map(|z| z.norm()).product();
                        if f0 >= spec.min_f0 {
                            break HpFunction::blaschke(BlaschkeProduct::new(zeros)?, spec.grid);
                        }
                        tries += 1;
                        if tries >= MAX_REJECTIONS {
                            return Err(OpaError::Unsatisfiable(format!(
                                "no zero set with |f(0)| >= {} after {MAX_REJECTIONS} draws",
                                spec.min_f0
                            )));
                        }
                    }
                }
            }
        })
        .collect()
}

/// A seeded random polynomial sampled on `grid` points, used for
/// orthogonal-pair trials.
pub fn random_poly_grid(
    rng: &mut ChaCha8Rng,
    max_degree: usize,
    grid: usize,
) -> Result<crate::BoundaryGrid> {
    let degree = rng.random_range(0..=max_degree);
    let coeffs = (0..=degree).map(|_| unit_square(rng)).collect();
    TaylorPoly::new(coeffs)?.sample(grid)
}
