//! Text form of functions: `poly:c0,c1,...` or `blaschke:z1,z2,...`, with
//! complex literals such as `1`, `-0.5i`, `0.3-2e-1i`.
//!
//! Formatting uses the shortest round-trip representation of each `f64`,
//! so `parse(describe(f)) == f` exactly.

use num_complex::Complex64;

use crate::boundary::{BlaschkeProduct, FunctionForm, HpFunction, TaylorPoly};
use crate::error::{OpaError, Result};

/// Parses a complex literal `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s = text.trim();
    if s.is_empty() {
        return Err(OpaError::Parse("empty complex literal".into()));
    }
    let bad = || OpaError::Parse(format!("invalid complex literal `{s}`"));
    let real = |t: &str| t.parse::<f64>().map_err(|_| bad());
    let Some(body) = s.strip_suffix('i') else {
        let re = real(s)?;
        return if re.is_finite() {
            Ok(Complex64::new(re, 0.0))
        } else {
            Err(bad())
        };
    };
    // Split at the last sign that is not the leading one and not an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => real(t),
        }
    };
    let value = match split {
        Some(j) => Complex64::new(real(&body[..j])?, imag(&body[j..])?),
        None => Complex64::new(0.0, imag(body)?),
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn parse_list(body: &str) -> Result<Vec<Complex64>> {
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    body.split(',').map(parse_complex).collect()
}

pub fn parse_form(text: &str) -> Result<FunctionForm> {
    let (kind, body) = text
        .split_once(':')
        .ok_or_else(|| OpaError::Parse(format!("function spec `{text}` lacks a `kind:` prefix")))?;
    match kind.trim() {
        "poly" => {
            let coeffs = parse_list(body)?;
            if coeffs.is_empty() {
                return Err(OpaError::Parse(
                    "poly spec needs at least one coefficient".into(),
                ));
            }
            Ok(FunctionForm::Poly(TaylorPoly::new(coeffs)?))
        }
        "blaschke" => {
            let (zeros, factor) = match body.split_once(";u=") {
                Some((z, u)) => (z, parse_complex(u)?),
                None => (body, Complex64::new(1.0, 0.0)),
            };
            Ok(FunctionForm::Blaschke(BlaschkeProduct::with_factor(
                parse_list(zeros)?,
                factor,
            )?))
        }
        other => Err(OpaError::Parse(format!("unknown function kind `{other}`"))),
    }
}

pub fn parse_function(text: &str, grid: usize) -> Result<HpFunction> {
    HpFunction::new(parse_form(text)?, grid)
}

pub fn describe_form(form: &FunctionForm) -> String {
    let join = |v: &[Complex64]| {
        v.iter()
            .map(|&z| format_complex(z))
            .collect::<Vec<_>>()
            .join(",")
    };
    match form {
        FunctionForm::Poly(p) => format!("poly:{}", join(p.coeffs())),
        FunctionForm::Blaschke(b) => {
            let base = format!("blaschke:{}", join(b.zeros()));
            if b.unimodular_factor() == Complex64::new(1.0, 0.0) {
                base
            } else {
                format!("{base};u={}", format_complex(b.unimodular_factor()))
            }
        }
    }
}

/// Descriptor of `f`, including a `*scale` suffix when it has been rescaled.
pub fn describe(f: &HpFunction) -> String {
    let base = describe_form(f.form());
    if f.scale() == Complex64::new(1.0, 0.0) {
        base
    } else {
        format!("{base}*({})", format_complex(f.scale()))
    }
}
