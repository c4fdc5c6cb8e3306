use crate::error::{Error, Result};
use crate::padic::PadicScalar;
use crate::series::{Agreement, TruncSeries};

use super::commute::multiplier;

/// The Lubin logarithm with its independent cross-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LubinLog {
    /// Result of the coefficient recursion.
    pub series: TruncSeries,
    /// Limit of `f^{∘n}(X) / f'(0)^n`.
    pub limit: TruncSeries,
    /// Iterations the limit needed before two consecutive terms agreed.
    pub iterations: usize,
    pub agreement: Agreement,
}

/// `L` with `L∘f = f'(0)·L`, `L'(0) = 1`, by
/// `ℓ_k = Σ_{j<k} ℓ_j [X^k] f^j / (λ − λ^k)`.
pub fn lubin_log_recursion(f: &TruncSeries) -> Result<TruncSeries> {
    let lambda = multiplier(f)?;
    let ring = f.ring();
    let cap = f.cap();
    let mut powers = Vec::with_capacity(cap + 1);
    powers.push(TruncSeries::one(ring, cap));
    for j in 1..=cap {
        let next = powers[j - 1].mul(f)?;
        powers.push(next);
    }
    let mut l = vec![PadicScalar::zero(ring); cap + 1];
    if cap >= 1 {
        l[1] = PadicScalar::one(ring);
    }
    let mut lambda_k = lambda.clone();
    for k in 2..=cap {
        lambda_k = &lambda_k * &lambda;
        let mut acc = PadicScalar::zero(ring);
        for j in 1..k {
            let c = powers[j].coeff(k);
            if !c.is_exact_zero() && !l[j].is_exact_zero() {
                acc = &acc + &(&l[j] * c);
            }
        }
        l[k] = acc.try_div(&(&lambda - &lambda_k))?;
    }
    Ok(TruncSeries::new(ring, l, cap))
}

/// `lim f^{∘n}(X)/λ^n` through `N_{n+1} = φ_n(N_n)` with
/// `φ_n(Y) = Y + Σ_{k≥2} f_k λ^{n(k−1)−1} Y^k`, which avoids dividing by
/// `λ^n`. Stops once two consecutive terms agree and one more step confirms.
pub fn lubin_log_limit(f: &TruncSeries) -> Result<(TruncSeries, usize)> {
    let lambda = multiplier(f)?;
    let ring = f.ring();
    let cap = f.cap();
    let lambda_inv = lambda.invert()?;
    let max_iter = 8 * (ring.rel_precision() as usize + cap) + 16;
    let mut n_cur = TruncSeries::x(ring, cap).forget_polynomial();
    let mut agreed_once = false;
    for n in 0..max_iter {
        // λ^{n(k−1)−1} for k = 2..=cap, built incrementally from λ^n.
        let lambda_n = lambda.pow(n as u64);
        let mut phi = vec![PadicScalar::zero(ring); cap + 1];
        phi[1] = PadicScalar::one(ring);
        let mut scale = lambda_inv.clone();
        for (k, slot) in phi.iter_mut().enumerate().skip(2) {
            scale = &scale * &lambda_n;
            let fk = f.coeff(k);
            if !fk.is_exact_zero() {
                *slot = fk * &scale;
            }
        }
        let phi = TruncSeries::new(ring, phi, cap);
        let next = phi.compose(&n_cur)?;
        let same = next.compare(&n_cur)?.holds();
        n_cur = next;
        if same {
            if agreed_once {
                return Ok((n_cur, n + 1));
            }
            agreed_once = true;
        } else if agreed_once {
            return Err(Error::InvariantViolation(
                "limit iterates separated after agreeing".into(),
            ));
        }
    }
    Err(Error::InvariantViolation(
        "limit algorithm did not stabilise".into(),
    ))
}

/// Both algorithms; any certified disagreement is an internal error.
pub fn lubin_log(f: &TruncSeries) -> Result<LubinLog> {
    let series = lubin_log_recursion(f)?;
    let (limit, iterations) = lubin_log_limit(f)?;
    let agreement = series.compare(&limit)?;
    if let Some(k) = agreement.first_mismatch {
        return Err(Error::InvariantViolation(format!(
            "recursion and limit disagree at degree {k}"
        )));
    }
    Ok(LubinLog {
        series,
        limit,
        iterations,
        agreement,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityCheck {
    pub holds: bool,
    /// First index with a certified negative valuation.
    pub first_failure: Option<usize>,
    pub min_valuation: Option<(i64, usize)>,
    /// Whether the verdict covers all coefficients (exact polynomial data).
    pub exact: bool,
}

/// Whether `L'(X)` has integral coefficients up to its cap.
pub fn log_derivative_integral_check(l: &TruncSeries) -> Result<IntegralityCheck> {
    let d = l.derivative();
    let mut first_failure = None;
    for (i, c) in d.coeffs().iter().enumerate() {
        match c.is_integral() {
            Some(true) => {}
            Some(false) => {
                first_failure = Some(i);
                break;
            }
            None => {
                return Err(Error::PrecisionExhausted(format!(
                    "coefficient {i} of L' is {c}"
                )))
            }
        }
    }
    Ok(IntegralityCheck {
        holds: first_failure.is_none(),
        first_failure,
        min_valuation: d.min_valuation(0),
        exact: d.is_polynomial(),
    })
}
