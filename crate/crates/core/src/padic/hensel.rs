//! Teichmuller lifts and Hensel lifting of unit m-th roots.

use num_integer::Integer;

use super::config::RingConfig;
use super::residue::ResidueElem;
use super::scalar::PadicScalar;
use crate::error::{Error, Result};

/// The root of unity of order dividing `p^s - 1` that reduces to `c`.
pub fn teichmuller(c: &ResidueElem, ring: &RingConfig) -> Result<PadicScalar> {
    if c.is_zero() {
        return Err(Error::InvalidInput(
            "Teichmuller lift of 0 is not a unit; use PadicScalar::zero".into(),
        ));
    }
    let q = ring
        .residue_field()
        .order()
        .and_then(|q| u64::try_from(q).ok())
        .ok_or_else(|| Error::Unsupported("residue field too large".into()))?;
    let mut x = PadicScalar::lift_residue(ring, c);
    // Each application of x -> x^q fixes at least one more digit.
    for _ in 0..=ring.rel_precision() + 1 {
        let next = x.pow(q);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(Error::InvariantViolation(
        "Teichmuller iteration did not stabilize".into(),
    ))
}

/// The unique unit `x` with `x^m = a` and `residue(x) = target`.
pub fn mth_root_unit(a: &PadicScalar, m: u64, target: &ResidueElem) -> Result<PadicScalar> {
    let ring = a.ring();
    let p = ring.p();
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    if m.gcd(&p) != 1 {
        return Err(Error::UnsupportedRamifiedRoot { m, p });
    }
    if !a.is_unit() {
        return Err(Error::NotUnit(format!("{a} is not a unit")));
    }
    let field = ring.residue_field();
    if field.pow(target, m as u128) != a.residue()? {
        return Err(Error::NotMthPower(format!(
            "residue {target:?}^{m} differs from the residue of {a}"
        )));
    }
    if m == 1 {
        return Ok(a.clone());
    }
    let mut x = PadicScalar::lift_residue(ring, target).truncate_precision(a.precision());
    let m_scalar = PadicScalar::from_int(ring, m as i64);
    for _ in 0..=2 * ring.rel_precision() + 2 {
        let xm1 = x.pow(m - 1);
        let residual = &(&xm1 * &x) - a;
        if residual.is_zero() {
            return Ok(x.truncate_precision(a.precision()));
        }
        let step = residual.try_div(&(&m_scalar * &xm1))?;
        x = &x - &step;
    }
    Err(Error::InvariantViolation("Hensel iteration diverged".into()))
}
