use crate::error::{Error, Result};
use crate::padic::PadicScalar;
use crate::series::TruncSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommuteReport {
    pub commutes: bool,
    /// Least degree where `f∘g − g∘f` is certified nonzero.
    pub first_failure: Option<usize>,
    /// Absolute precision of the vanishing differences (`None` if exact).
    pub certified_precision: Option<i64>,
}

/// Tests `f∘g = g∘f` modulo `X^(cap+1)`.
pub fn check_commute(f: &TruncSeries, g: &TruncSeries) -> Result<CommuteReport> {
    if !f.coeff(0).is_zero() || !g.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let a = f.compose(g)?.compare(&g.compose(f)?)?;
    if a.first_mismatch.is_some() {
        return Ok(CommuteReport {
            commutes: false,
            first_failure: a.first_mismatch,
            certified_precision: a.precision,
        });
    }
    a.certified(1)?;
    Ok(CommuteReport {
        commutes: true,
        first_failure: None,
        certified_precision: a.precision,
    })
}

/// `f'(0)` of a noninvertible stable series, checked to have positive
/// valuation.
pub(crate) fn multiplier(f: &TruncSeries) -> Result<PadicScalar> {
    if !f.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if f.cap() < 1 {
        return Err(Error::CapTooSmall { needed: 1, cap: 0 });
    }
    let lambda = f.coeff(1).clone();
    match lambda.valuation() {
        Some(v) if v >= 1 => Ok(lambda),
        Some(_) => Err(Error::InvalidInput(format!(
            "f'(0) = {lambda} is not in the maximal ideal"
        ))),
        None if lambda.is_exact_zero() => Err(Error::InvalidInput("f'(0) = 0".into())),
        None => Err(Error::PrecisionExhausted(format!(
            "f'(0) = {lambda} is not certified nonzero"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutingSolution {
    pub series: TruncSeries,
    /// Minimum certified coefficient valuation and its degree.
    pub min_valuation: Option<(i64, usize)>,
    pub integral: bool,
}

/// The unique `g` with `g'(0) = a` and `g∘f = f∘g`, solved degree by degree
/// with pivot `f'(0)^k − f'(0)`.
pub fn solve_commuting(f: &TruncSeries, a: &PadicScalar) -> Result<CommutingSolution> {
    let lambda = multiplier(f)?;
    f.ring().ensure_same(a.ring())?;
    if a.is_zero() {
        return Err(Error::InvalidInput("g'(0) must be nonzero".into()));
    }
    let ring = f.ring();
    let cap = f.cap();
    let mut g = TruncSeries::monomial(ring, a.clone(), 1, cap).forget_polynomial();
    let mut lambda_k = lambda.clone();
    for k in 2..=cap {
        lambda_k = &lambda_k * &lambda;
        let fk = f.truncate(k);
        let gk = g.truncate(k);
        let b = fk.compose(&gk)?;
        let c = gk.compose(&fk)?;
        let pivot = &lambda_k - &lambda;
        let coeff = (b.coeff(k) - c.coeff(k)).try_div(&pivot)?;
        g.set_coeff(k, coeff);
    }
    let min_valuation = g.min_valuation(1);
    let integral = g
        .coeffs()
        .iter()
        .all(|c| c.is_integral() == Some(true));
    Ok(CommutingSolution {
        series: g,
        min_valuation,
        integral,
    })
}
