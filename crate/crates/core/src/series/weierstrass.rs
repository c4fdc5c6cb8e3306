use crate::error::{Error, Result};
use crate::padic::PadicScalar;

use super::poly::Polynomial;
use super::trunc::TruncSeries;

/// Weierstrass degree: index of the first unit coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Wideg {
    Finite(usize),
    /// Exact polynomial with every coefficient in the maximal ideal.
    Infinite,
    /// No unit coefficient up to the cap; the true value is `> cap`.
    BeyondCap,
}

impl Wideg {
    pub fn finite(self) -> Option<usize> {
        match self {
            Wideg::Finite(q) => Some(q),
            _ => None,
        }
    }
}

pub(crate) fn wideg_of(coeffs: &[PadicScalar], exact: bool) -> Result<Wideg> {
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_unit() {
            return Ok(Wideg::Finite(i));
        }
        match c.valuation_lower_bound() {
            None => {}
            Some(v) if c.is_nonzero() && v < 0 => {
                return Err(Error::NotIntegral(format!("coefficient {i} is {c}")));
            }
            Some(v) if v <= 0 => {
                return Err(Error::PrecisionExhausted(format!(
                    "coefficient {i} is {c}; cannot decide whether it is a unit"
                )));
            }
            Some(_) => {}
        }
    }
    Ok(if exact { Wideg::Infinite } else { Wideg::BeyondCap })
}

pub fn weierstrass_degree(f: &TruncSeries) -> Result<Wideg> {
    wideg_of(f.coeffs(), f.is_polynomial())
}

/// `p^t · X^e · g(X) · v(X)` with `g` distinguished and `v` a unit series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassSplit {
    pub distinguished: Polynomial,
    pub unit: TruncSeries,
    pub content_valuation: i64,
    /// Power of `X` split off before the distinguished part (0 or 1).
    pub x_power: usize,
    /// Whether the input was an exact polynomial.
    pub exact: bool,
    /// Absolute p-adic precision to which the factorisation is certified;
    /// `None` when exact.
    pub certified_precision: Option<i64>,
}

impl WeierstrassSplit {
    /// Multiplies the factors back together at the cap of the input.
    pub fn recombine(&self) -> Result<TruncSeries> {
        let ring = self.unit.ring();
        let cap = self.unit.cap();
        let mut g = self.distinguished.to_series(cap.max(self.distinguished.degree().unwrap_or(0)))?;
        g = g.truncate(cap);
        let mut f = g.mul(&self.unit)?;
        for _ in 0..self.x_power {
            f = f.shift_up();
        }
        f.scalar_mul(&PadicScalar::p_power(ring, self.content_valuation))
    }

    pub fn degree(&self) -> usize {
        self.distinguished.degree().unwrap_or(0)
    }
}

/// Content valuation `min val(c_i)`, certified against zero-at-precision
/// coefficients.
pub fn content_valuation(f: &TruncSeries) -> Result<i64> {
    let t = f
        .coeffs()
        .iter()
        .filter_map(|c| c.valuation())
        .min()
        .ok_or_else(|| Error::PrecisionExhausted("no coefficient is certified nonzero".into()))?;
    if let Some((i, c)) = f
        .coeffs()
        .iter()
        .enumerate()
        .find(|(_, c)| c.is_zero_at_precision() && c.absolute_precision().unwrap() < t)
    {
        return Err(Error::PrecisionExhausted(format!(
            "coefficient {i} is {c}, below the candidate content p^{t}"
        )));
    }
    Ok(t)
}

/// Splits `F = p^t · g · v` (no factor `X` removed). With `allow_content`
/// false a positive content is reported as an infinite Weierstrass degree.
pub fn distinguished_split(f: &TruncSeries, allow_content: bool) -> Result<WeierstrassSplit> {
    let (t, f) = if allow_content {
        let t = content_valuation(f)?;
        (t, f.scalar_mul(&PadicScalar::p_power(f.ring(), -t))?)
    } else {
        (0, f.clone())
    };
    let n = match weierstrass_degree(&f)? {
        Wideg::Finite(n) => n,
        Wideg::Infinite => return Err(Error::InfiniteWideg),
        Wideg::BeyondCap => {
            return Err(Error::CapTooSmall {
                needed: f.cap() + 1,
                cap: f.cap(),
            })
        }
    };
    let ring = f.ring().clone();
    let cap = f.cap();
    let p_full = Polynomial::from_series(&f);
    let x_n = Polynomial::monomial(&ring, PadicScalar::one(&ring), n);

    let (g, v, residual_precision) = if n == 0 {
        (Polynomial::one(&ring), p_full.clone(), None)
    } else {
        hensel_split(&p_full, n)?
    };

    // Truncation of a non-polynomial input perturbs F by X^(cap+1)·R with R
    // integral; modulo g that is divisible by p^floor((cap+1)/n).
    let truncation_precision = if f.is_polynomial() || n == 0 {
        None
    } else {
        Some(((cap + 1) / n) as i64)
    };
    let certified = match (residual_precision, truncation_precision) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    let (g, v) = match truncation_precision {
        Some(k) => (g.with_absolute_precision(k), v.with_absolute_precision(k)),
        None => (g, v),
    };
    debug_assert!(g.degree() == x_n.degree());
    let unit = TruncSeries::new(&ring, v.coeffs().to_vec(), cap);
    let unit = if f.is_polynomial() {
        unit.assume_polynomial()
    } else {
        unit
    };
    Ok(WeierstrassSplit {
        distinguished: g,
        unit,
        content_valuation: t,
        x_power: 0,
        exact: f.is_polynomial(),
        certified_precision: certified,
    })
}

/// Linear Hensel lifting of `P ≡ X^n · H mod 𝔪` to `P = g · V` with `g`
/// distinguished of degree `n`.
fn hensel_split(p: &Polynomial, n: usize) -> Result<(Polynomial, Polynomial, Option<i64>)> {
    let ring = p.ring().clone();
    let low = Polynomial::new(&ring, p.coeffs()[..n].to_vec());
    let high = Polynomial::new(&ring, p.coeffs()[n..].to_vec());
    let mut g = Polynomial::monomial(&ring, PadicScalar::one(&ring), n).add(&low)?;
    let mut v = high;
    let max_iter = 4 * ring.rel_precision() as usize + 16;
    let mut last_val: Option<i64> = None;
    let mut stalls = 0;
    for _ in 0..max_iter {
        let e = p.sub(&g.mul(&v)?)?;
        let min_val = e.coeffs().iter().filter_map(|c| c.valuation()).min();
        let Some(val) = min_val else {
            let prec = e.coeffs().iter().filter_map(|c| c.absolute_precision()).min();
            return Ok((g, v, prec));
        };
        if last_val.is_some_and(|lv| val <= lv) {
            stalls += 1;
            if stalls > 2 {
                return Err(Error::InvariantViolation(
                    "Weierstrass iteration stopped converging".into(),
                ));
            }
        } else {
            stalls = 0;
        }
        last_val = Some(val);
        // δg = [E · V^{-1}]_{<n}
        let v_inv = TruncSeries::new(&ring, v.coeffs().to_vec(), n - 1).inverse()?;
        let e_trunc = TruncSeries::new(&ring, e.coeffs().to_vec(), n - 1);
        let dg = Polynomial::from_series(&e_trunc.mul(&v_inv)?);
        let r1 = e.sub(&dg.mul(&v)?)?;
        let (dv, _) = r1.div_rem(&g)?;
        g = g.add(&dg)?;
        v = v.add(&dv)?;
    }
    Err(Error::InvariantViolation(
        "Weierstrass iteration did not converge".into(),
    ))
}

/// `f = X · g · v` for `f(0) = 0` with finite Weierstrass degree `q`;
/// `g` is distinguished of degree `q - 1`.
pub fn weierstrass_prep(f: &TruncSeries) -> Result<WeierstrassSplit> {
    if !f.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    match weierstrass_degree(f)? {
        Wideg::Finite(_) => {}
        Wideg::Infinite => return Err(Error::InfiniteWideg),
        Wideg::BeyondCap => {
            return Err(Error::CapTooSmall {
                needed: f.cap() + 1,
                cap: f.cap(),
            })
        }
    }
    let mut split = distinguished_split(&f.shift_down()?, false)?;
    split.x_power = 1;
    Ok(split)
}
