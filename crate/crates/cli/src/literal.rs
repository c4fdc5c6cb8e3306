//! Scalar literals: `7`, `"-7"`, `"3/4"`, `"p^2*5"` (or `"3^2*5"`), and arrays
//! `[a0, a1, ...]` for elements `a0 + a1·x + ...` of an unramified extension.

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use padyn_core::{PadicScalar, RingConfig};
use serde_json::Value;

fn parse_int(s: &str) -> Result<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix('-').unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        bail!("`{s}` is not an integer");
    }
    t.parse::<BigInt>().map_err(|e| anyhow!("`{s}`: {e}"))
}

/// `n`, `-n` or `a/b`.
fn parse_rational(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        Some((a, b)) => {
            let b = parse_int(b)?;
            if b.is_zero() {
                bail!("`{s}` has a zero denominator");
            }
            Ok(BigRational::new(parse_int(a)?, b))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// A rational literal with an optional `p^v*` prefix.
fn parse_rational_literal(s: &str, p: u64) -> Result<BigRational> {
    let s = s.trim();
    if let Some((head, unit)) = s.split_once('*') {
        let (base, exp) = head
            .split_once('^')
            .ok_or_else(|| anyhow!("`{s}`: expected p^v*u"))?;
        let base = base.trim();
        if base != "p" && parse_int(base).ok() != Some(BigInt::from(p)) {
            bail!("`{s}`: base must be p = {p}");
        }
        let v: i64 = exp
            .trim()
            .parse()
            .map_err(|_| anyhow!("`{s}`: bad exponent"))?;
        let pv = num_traits::pow(BigInt::from(p), v.unsigned_abs() as usize);
        let scale = if v >= 0 {
            BigRational::from_integer(pv)
        } else {
            BigRational::new(BigInt::one(), pv)
        };
        return Ok(parse_rational(unit)? * scale);
    }
    parse_rational(s)
}

fn component(v: &Value, p: u64) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            parse_rational(&s).with_context(|| format!("number {s} must be an integer"))
        }
        Value::String(s) => parse_rational_literal(s, p),
        other => bail!("expected a scalar literal, found {other}"),
    }
}

pub fn parse_scalar(v: &Value, ring: &RingConfig) -> Result<PadicScalar> {
    let p = ring.p();
    match v {
        Value::Array(items) => {
            if items.len() > ring.residue_degree() {
                bail!(
                    "extension element has {} coordinates but the residue degree is {}",
                    items.len(),
                    ring.residue_degree()
                );
            }
            let coeffs = items
                .iter()
                .map(|c| component(c, p))
                .collect::<Result<Vec<_>>>()?;
            Ok(PadicScalar::from_rational_poly(ring, &coeffs))
        }
        other => Ok(PadicScalar::from_rational(ring, &component(other, p)?)),
    }
}

/// An exponent `a ∈ Z_p` for p-adic iteration, always over `Z_p` itself.
pub fn parse_exponent(v: &Value, ring: &RingConfig) -> Result<PadicScalar> {
    let base = RingConfig::padic(ring.p(), ring.rel_precision())?;
    match v {
        Value::Array(_) => bail!("an iteration exponent must lie in Z_p"),
        other => parse_scalar(other, &base),
    }
}
