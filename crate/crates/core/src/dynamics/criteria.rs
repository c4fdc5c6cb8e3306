use num_integer::Integer;

use crate::error::{Error, Result};
use crate::series::{
    distinguished_split, poly_mth_root, weierstrass_degree, weierstrass_prep, Polynomial,
    TruncSeries, Wideg,
};

use super::commute::multiplier;
use super::stability::root_of_unity_exponent;

fn finite_wideg(f: &TruncSeries) -> Result<usize> {
    match weierstrass_degree(f)? {
        Wideg::Finite(q) => Ok(q),
        Wideg::Infinite => Err(Error::InfiniteWideg),
        Wideg::BeyondCap => Err(Error::CapTooSmall {
            needed: f.cap() + 1,
            cap: f.cap(),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionA {
    pub holds: bool,
    /// Degree of the first coefficient of `f'` with valuation below
    /// `val f'(0)`.
    pub witness: Option<usize>,
    /// Whether every coefficient was checked (exact polynomial input).
    pub exact: bool,
}

/// `f'(X)/f'(0) ∈ 1 + X·O_K[[X]]`, i.e. `val((k+1) f_{k+1}) ≥ val f'(0)`.
pub fn criterion_a(f: &TruncSeries) -> Result<CriterionA> {
    let lambda = multiplier(f)?;
    finite_wideg(f)?;
    let v = lambda.valuation().expect("multiplier is certified nonzero");
    let d = f.derivative();
    for (k, c) in d.coeffs().iter().enumerate().skip(1) {
        match c.valuation_lower_bound() {
            None => {}
            Some(w) if c.is_nonzero() && w < v => {
                return Ok(CriterionA {
                    holds: false,
                    witness: Some(k),
                    exact: f.is_polynomial(),
                })
            }
            Some(w) if !c.is_nonzero() && w < v => {
                return Err(Error::PrecisionExhausted(format!(
                    "coefficient {k} of f' is {c}"
                )))
            }
            Some(_) => {}
        }
    }
    Ok(CriterionA {
        holds: true,
        witness: None,
        exact: f.is_polynomial(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriterionBDiagnosis {
    Holds,
    /// `m` does not divide `deg g`.
    DegreeNotDivisible { degree: usize },
    /// `g` is not the m-th power of a polynomial.
    NotMthPower,
    /// `g₀` has a repeated root.
    NotSeparable,
    /// Some open-disk root of `f'` is not a root of `X·g₀`.
    DerivativeRootsNotContained,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionB {
    pub holds: bool,
    pub diagnosis: CriterionBDiagnosis,
    pub g: Polynomial,
    pub g0: Option<Polynomial>,
    /// Distinguished part of `f'` after removing its content.
    pub derivative_part: Option<Polynomial>,
    /// Absolute precision of the divisibility certificate.
    pub certified_precision: Option<i64>,
}

/// Roots of `f'` in the open disk are roots of `f`, and the nonzero roots of
/// `f` all have multiplicity exactly `m`.
pub fn criterion_b(f: &TruncSeries, m: u64) -> Result<CriterionB> {
    let p = f.ring().p();
    if m < 2 {
        return Err(Error::InvalidInput("m must be at least 2".into()));
    }
    multiplier(f)?;
    let q = finite_wideg(f)?;
    let split = weierstrass_prep(f)?;
    let g = split.distinguished.clone();
    let deg = g.degree().unwrap_or(0);
    let fail = |diagnosis, g0| {
        Ok(CriterionB {
            holds: false,
            diagnosis,
            g: g.clone(),
            g0,
            derivative_part: None,
            certified_precision: split.certified_precision,
        })
    };
    if deg as u64 % m != 0 {
        return fail(CriterionBDiagnosis::DegreeNotDivisible { degree: deg }, None);
    }
    // m | q − 1 = p^d − 1 already forces this; it guards the root extraction.
    if m.gcd(&p) != 1 {
        return Err(Error::UnsupportedRamifiedRoot { m, p });
    }
    let g0 = match poly_mth_root(&g, m) {
        Ok(g0) => g0,
        Err(Error::NotMthPower(_)) => return fail(CriterionBDiagnosis::NotMthPower, None),
        Err(e) => return Err(e),
    };
    let deg0 = g0.degree().unwrap_or(0);
    if m as usize * deg0 != q - 1 {
        return Err(Error::TheoremViolation(format!(
            "m·deg(g₀) = {} but q − 1 = {}",
            m as usize * deg0,
            q - 1
        )));
    }
    if !g0.is_separable()? {
        return fail(CriterionBDiagnosis::NotSeparable, Some(g0));
    }
    let dsplit = distinguished_split(&f.derivative(), true)?;
    let h = dsplit.distinguished;
    let e = h.degree().unwrap_or(0);
    let xg0 = g0.shift_up(1);
    let rem = xg0.pow_mod(e as u64, &h)?;
    let check = rem.compare(&Polynomial::zero(f.ring()))?;
    let precision = [check.precision, split.certified_precision, dsplit.certified_precision]
        .into_iter()
        .flatten()
        .min();
    if check.first_mismatch.is_some() {
        return Ok(CriterionB {
            holds: false,
            diagnosis: CriterionBDiagnosis::DerivativeRootsNotContained,
            g,
            g0: Some(g0),
            derivative_part: Some(h),
            certified_precision: precision,
        });
    }
    if let Some(n) = precision {
        if n < 1 {
            return Err(Error::PrecisionExhausted(format!(
                "divisibility of (X·g₀)^{e} by the derivative part holds only modulo p^{n}"
            )));
        }
    }
    Ok(CriterionB {
        holds: true,
        diagnosis: CriterionBDiagnosis::Holds,
        g,
        g0: Some(g0),
        derivative_part: Some(h),
        certified_precision: precision,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WidegShape {
    pub d: u32,
    pub q: usize,
    pub shape_holds: bool,
    /// First index `i ≢ 0 mod q` whose coefficient is a unit.
    pub first_violation: Option<usize>,
    pub exact: bool,
}

/// Checks `wideg(f) = p^d` and `f(X) ≡ g(X^{p^d}) mod 𝔪`.
pub fn wideg_shape_check(f: &TruncSeries) -> Result<WidegShape> {
    let q = finite_wideg(f)?;
    let p = f.ring().p() as usize;
    let mut d = 0u32;
    let mut pd = 1usize;
    while pd < q {
        pd *= p;
        d += 1;
    }
    if pd != q {
        return Err(Error::TheoremViolation(format!(
            "Weierstrass degree {q} is not a power of {p}"
        )));
    }
    let mut first_violation = None;
    for (i, c) in f.coeffs().iter().enumerate() {
        if i % q == 0 {
            continue;
        }
        match c.valuation_lower_bound() {
            None => {}
            Some(v) if v >= 1 => {}
            Some(_) if c.is_nonzero() => {
                first_violation = Some(i);
                break;
            }
            Some(_) => {
                return Err(Error::PrecisionExhausted(format!(
                    "coefficient {i} is {c}"
                )))
            }
        }
    }
    Ok(WidegShape {
        d,
        q,
        shape_holds: first_violation.is_none(),
        first_violation,
        exact: f.is_polynomial(),
    })
}

/// Default exponent `e` with `u'(0)^e ∈ 1 + p·O` (and `1 + 4Z_2` for `p = 2`).
pub fn normalization_exponent(p: u64, s: usize) -> u64 {
    root_of_unity_exponent(p, s)
}

/// `u^{∘e}`, whose multiplier lies in the principal units. The default
/// exponent is `p^s − 1`, doubled for `p = 2`.
pub fn corollary_a_normalize(u: &TruncSeries, exponent: Option<u64>) -> Result<TruncSeries> {
    if !u.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if !u.coeff(1).is_unit() {
        return Err(Error::NotUnit(format!("u'(0) = {} is not a unit", u.coeff(1))));
    }
    let ring = u.ring();
    let e = exponent.unwrap_or_else(|| normalization_exponent(ring.p(), ring.residue_degree()));
    u.iterate(e as usize)
}
