use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::padic::{Embedding, PadicScalar, RingConfig};

/// A power series known modulo `X^(cap+1)`.
///
/// When `is_polynomial` is set, every coefficient beyond the cap is exactly
/// zero, so statements about "all coefficients" are exact rather than
/// certified only up to the cap.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    ring: RingConfig,
    coeffs: Vec<PadicScalar>,
    polynomial: bool,
}

/// Outcome of a coefficientwise comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agreement {
    /// Least degree at which the difference is certified nonzero.
    pub first_mismatch: Option<usize>,
    /// Smallest absolute precision among the vanishing differences, `None`
    /// when every difference is exactly zero.
    pub precision: Option<i64>,
}

impl Agreement {
    pub fn holds(&self) -> bool {
        self.first_mismatch.is_none()
    }

    pub(crate) fn from_differences<'a>(diffs: impl Iterator<Item = (usize, &'a PadicScalar)>) -> Self {
        let mut first_mismatch = None;
        let mut precision: Option<i64> = None;
        for (i, d) in diffs {
            if d.is_nonzero() {
                first_mismatch.get_or_insert(i);
            } else if let Some(n) = d.absolute_precision() {
                precision = Some(precision.map_or(n, |m| m.min(n)));
            }
        }
        Self {
            first_mismatch,
            precision,
        }
    }

    /// Equality certified modulo at least `p^min_digits`.
    pub fn certified(&self, min_digits: i64) -> Result<bool> {
        if self.first_mismatch.is_some() {
            return Ok(false);
        }
        match self.precision {
            Some(n) if n < min_digits => Err(Error::PrecisionExhausted(format!(
                "difference only known to vanish modulo p^{n}"
            ))),
            _ => Ok(true),
        }
    }
}

impl TruncSeries {
    /// A series known modulo `X^(cap+1)`; extra coefficients are dropped.
    pub fn new(ring: &RingConfig, mut coeffs: Vec<PadicScalar>, cap: usize) -> Self {
        coeffs.truncate(cap + 1);
        coeffs.resize(cap + 1, PadicScalar::zero(ring));
        Self {
            ring: ring.clone(),
            coeffs,
            polynomial: false,
        }
    }

    /// An exact polynomial, viewed at truncation `cap`.
    pub fn polynomial(ring: &RingConfig, coeffs: Vec<PadicScalar>, cap: usize) -> Result<Self> {
        let degree = coeffs.iter().rposition(|c| !c.is_exact_zero());
        if let Some(d) = degree {
            if d > cap {
                return Err(Error::CapTooSmall { needed: d, cap });
            }
        }
        let mut s = Self::new(ring, coeffs, cap);
        s.polynomial = true;
        Ok(s)
    }

    /// Polynomial with integer coefficients, constant term first.
    pub fn from_ints(ring: &RingConfig, coeffs: &[i64], cap: usize) -> Result<Self> {
        let c = coeffs.iter().map(|&n| PadicScalar::from_int(ring, n)).collect();
        Self::polynomial(ring, c, cap)
    }

    pub fn from_rationals(ring: &RingConfig, coeffs: &[BigRational], cap: usize) -> Result<Self> {
        let c = coeffs
            .iter()
            .map(|q| PadicScalar::from_rational(ring, q))
            .collect();
        Self::polynomial(ring, c, cap)
    }

    pub fn zero(ring: &RingConfig, cap: usize) -> Self {
        let mut s = Self::new(ring, Vec::new(), cap);
        s.polynomial = true;
        s
    }

    pub fn one(ring: &RingConfig, cap: usize) -> Self {
        Self::monomial(ring, PadicScalar::one(ring), 0, cap)
    }

    /// The identity series `X`.
    pub fn x(ring: &RingConfig, cap: usize) -> Self {
        Self::monomial(ring, PadicScalar::one(ring), 1, cap)
    }

    pub fn monomial(ring: &RingConfig, c: PadicScalar, degree: usize, cap: usize) -> Self {
        let mut s = Self::zero(ring, cap);
        if degree <= cap {
            s.coeffs[degree] = c;
        } else {
            s.polynomial = false;
        }
        s
    }

    pub fn ring(&self) -> &RingConfig {
        &self.ring
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    pub fn coeff(&self, i: usize) -> &PadicScalar {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<PadicScalar> {
        self.coeffs
    }

    /// Index of the last coefficient that is not exactly zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_exact_zero())
    }

    /// X-adic order: index of the first certified-nonzero coefficient.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| c.is_nonzero())
    }

    pub fn set_coeff(&mut self, i: usize, c: PadicScalar) {
        self.coeffs[i] = c;
    }

    /// Marks the series as an exact polynomial (caller asserts that all
    /// coefficients beyond the cap vanish).
    pub fn assume_polynomial(mut self) -> Self {
        self.polynomial = true;
        self
    }

    pub fn forget_polynomial(mut self) -> Self {
        self.polynomial = false;
        self
    }

    /// Reduces the cap; a polynomial of larger degree stops being exact.
    pub fn truncate(&self, cap: usize) -> Self {
        if cap >= self.cap() {
            return self.clone();
        }
        let polynomial = self.polynomial && self.degree().map_or(true, |d| d <= cap);
        Self {
            ring: self.ring.clone(),
            coeffs: self.coeffs[..=cap].to_vec(),
            polynomial,
        }
    }

    /// Changes the cap; growing it is only possible for exact polynomials.
    pub fn with_cap(&self, cap: usize) -> Result<Self> {
        if cap <= self.cap() {
            return Ok(self.truncate(cap));
        }
        if !self.polynomial {
            return Err(Error::CapTooSmall {
                needed: cap,
                cap: self.cap(),
            });
        }
        Ok(Self {
            ring: self.ring.clone(),
            coeffs: Self::new(&self.ring, self.coeffs.clone(), cap).coeffs,
            polynomial: true,
        })
    }

    /// Re-homes the series into a ring differing only in relative precision.
    pub fn with_ring_precision(&self, ring: &RingConfig) -> Result<Self> {
        Ok(Self {
            ring: ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.with_ring_precision(ring))
                .collect::<Result<_>>()?,
            polynomial: self.polynomial,
        })
    }

    /// Applies a ring embedding coefficientwise.
    pub fn embed(&self, e: &Embedding) -> Result<Self> {
        Ok(Self {
            ring: e.target().clone(),
            coeffs: self.coeffs.iter().map(|c| e.apply(c)).collect::<Result<_>>()?,
            polynomial: self.polynomial,
        })
    }

    fn common(&self, other: &Self) -> Result<usize> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self.cap().min(other.cap()))
    }

    fn degree_fits(&self, cap: usize) -> bool {
        self.polynomial && self.degree().map_or(true, |d| d <= cap)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let cap = self.common(other)?;
        let coeffs = (0..=cap).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Ok(Self {
            ring: self.ring.clone(),
            coeffs,
            polynomial: self.degree_fits(cap) && other.degree_fits(cap),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let cap = self.common(other)?;
        let coeffs = (0..=cap).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect();
        Ok(Self {
            ring: self.ring.clone(),
            coeffs,
            polynomial: self.degree_fits(cap) && other.degree_fits(cap),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            polynomial: self.polynomial,
        }
    }

    pub fn scalar_mul(&self, a: &PadicScalar) -> Result<Self> {
        self.ring.ensure_same(a.ring())?;
        Ok(Self {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
            polynomial: self.polynomial,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let cap = self.common(other)?;
        let coeffs = mul_coeffs(&self.coeffs, &other.coeffs, cap, &self.ring);
        let polynomial = self.polynomial
            && other.polynomial
            && match (self.degree(), other.degree()) {
                (Some(a), Some(b)) => a + b <= cap,
                _ => true,
            };
        Ok(Self {
            ring: self.ring.clone(),
            coeffs,
            polynomial,
        })
    }

    pub fn pow(&self, mut k: u64) -> Result<Self> {
        let mut acc = Self::one(&self.ring, self.cap());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Formal derivative. A truncated series loses its top coefficient
    /// (it would need the unknown `c_(cap+1)`), so the cap drops by one.
    pub fn derivative(&self) -> Self {
        let cap = self.cap();
        let mut coeffs: Vec<PadicScalar> = (1..=cap)
            .map(|i| self.coeffs[i].scale_int(i as i64))
            .collect();
        if self.polynomial || cap == 0 {
            coeffs.push(PadicScalar::zero(&self.ring));
            Self {
                ring: self.ring.clone(),
                coeffs,
                polynomial: self.polynomial,
            }
        } else {
            Self {
                ring: self.ring.clone(),
                coeffs,
                polynomial: false,
            }
        }
    }

    /// Multiplication by `X`; the cap grows by one.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(PadicScalar::zero(&self.ring));
        coeffs.extend(self.coeffs.iter().cloned());
        Self {
            ring: self.ring.clone(),
            coeffs,
            polynomial: self.polynomial,
        }
    }

    /// Division by `X`; requires a vanishing constant term and drops the cap
    /// by one.
    pub fn shift_down(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if self.cap() == 0 {
            return Err(Error::CapTooSmall { needed: 1, cap: 0 });
        }
        Ok(Self {
            ring: self.ring.clone(),
            coeffs: self.coeffs[1..].to_vec(),
            polynomial: self.polynomial,
        })
    }

    /// `f(X^m)`, known modulo `X^(m(cap+1))`, returned at the given cap.
    pub fn subst_power(&self, m: usize, cap: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("m must be positive".into()));
        }
        let known = m * (self.cap() + 1) - 1;
        if cap > known && !self.polynomial {
            return Err(Error::CapTooSmall {
                needed: cap.div_ceil(m),
                cap: self.cap(),
            });
        }
        let mut coeffs = vec![PadicScalar::zero(&self.ring); cap + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * m <= cap {
                coeffs[i * m] = c.clone();
            }
        }
        let polynomial = self.polynomial && self.degree().map_or(true, |d| d * m <= cap);
        Ok(Self {
            ring: self.ring.clone(),
            coeffs,
            polynomial,
        })
    }

    /// `outer(inner(X))` modulo `X^(cap+1)` by Horner's rule.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        let cap = self.common(inner)?;
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let coeffs = compose_coeffs(&self.coeffs[..=cap], &inner.coeffs[..=cap], &self.ring);
        let polynomial = self.polynomial
            && inner.polynomial
            && match (self.degree(), inner.degree()) {
                (Some(a), Some(b)) => a * b <= cap,
                _ => true,
            };
        Ok(Self {
            ring: self.ring.clone(),
            coeffs,
            polynomial,
        })
    }

    /// Compositional inverse: `g` with `f∘g = g∘f = X` modulo `X^(cap+1)`.
    pub fn comp_inverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let cap = self.cap();
        if cap == 0 {
            return Ok(self.clone());
        }
        let lead = &self.coeffs[1];
        if !lead.is_unit() {
            return Err(Error::NotUnit(format!(
                "linear coefficient {lead} is not a certified unit"
            )));
        }
        let lead_inv = lead.invert()?;
        let mut g = vec![PadicScalar::zero(&self.ring); cap + 1];
        g[1] = lead_inv.clone();
        for k in 2..=cap {
            let h = compose_coeffs(&self.coeffs[..=k], &g[..=k], &self.ring);
            g[k] = -&(&h[k] * &lead_inv);
        }
        Ok(Self {
            ring: self.ring.clone(),
            coeffs: g,
            polynomial: false,
        })
    }

    /// n-fold self-composition; `n = 0` gives `X`.
    pub fn iterate(&self, n: usize) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let mut acc = Self::x(&self.ring, self.cap());
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Series inverse `1/f` for `f(0)` invertible.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0].invert()?;
        let cap = self.cap();
        let mut out = vec![PadicScalar::zero(&self.ring); cap + 1];
        out[0] = c0.clone();
        for n in 1..=cap {
            let mut acc = PadicScalar::zero(&self.ring);
            for i in 1..=n {
                if !self.coeffs[i].is_exact_zero() && !out[n - i].is_exact_zero() {
                    acc = &acc + &(&self.coeffs[i] * &out[n - i]);
                }
            }
            out[n] = -&(&acc * &c0);
        }
        Ok(Self {
            ring: self.ring.clone(),
            coeffs: out,
            polynomial: false,
        })
    }

    pub fn compare(&self, other: &Self) -> Result<Agreement> {
        let cap = self.common(other)?;
        let diffs: Vec<PadicScalar> = (0..=cap)
            .map(|i| &self.coeffs[i] - &other.coeffs[i])
            .collect();
        Ok(Agreement::from_differences(diffs.iter().enumerate()))
    }

    /// Minimum certified valuation over coefficients `from..=cap`, with the
    /// index attaining it.
    pub fn min_valuation(&self, from: usize) -> Option<(i64, usize)> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(from)
            .filter_map(|(i, c)| c.valuation().map(|v| (v, i)))
            .min()
    }

    /// Coefficients as balanced integers (for `Z_p` series with integral
    /// coefficients), mostly for display and tests.
    pub fn balanced_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.balanced_integer()).collect()
    }
}

pub(crate) fn mul_coeffs(
    a: &[PadicScalar],
    b: &[PadicScalar],
    cap: usize,
    ring: &RingConfig,
) -> Vec<PadicScalar> {
    let mut out = vec![PadicScalar::zero(ring); cap + 1];
    for (i, x) in a.iter().enumerate().take(cap + 1) {
        if x.is_exact_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(cap + 1 - i) {
            if y.is_exact_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

pub(crate) fn compose_coeffs(
    outer: &[PadicScalar],
    inner: &[PadicScalar],
    ring: &RingConfig,
) -> Vec<PadicScalar> {
    let cap = outer.len().min(inner.len()) - 1;
    // The accumulator at step k is later multiplied by inner^k, which has
    // order >= k, so only its degrees <= cap - k matter.
    let mut acc = vec![outer[cap].clone()];
    for k in (0..cap).rev() {
        let mut next = mul_coeffs(&acc, inner, cap - k, ring);
        next[0] = &next[0] + &outer[k];
        acc = next;
    }
    acc
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*X")?,
                _ => write!(f, "({c})*X^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.polynomial {
            write!(f, " + O(X^{})", self.cap() + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ints(ring: &RingConfig, c: &[i64], cap: usize) -> TruncSeries {
        TruncSeries::from_ints(ring, c, cap).unwrap()
    }

    fn same(a: &TruncSeries, b: &TruncSeries) -> bool {
        a.compare(b).unwrap().holds()
    }

    #[test]
    fn derivative_examples() {
        let r = RingConfig::padic(3, 20).unwrap();
        let f = ints(&r, &[0, 9, 6, 1], 6);
        assert!(same(&f.derivative(), &ints(&r, &[9, 12, 3], 6)));
        assert!(same(&TruncSeries::x(&r, 4).derivative(), &TruncSeries::one(&r, 4)));
        let g = f.clone().forget_polynomial();
        assert_eq!(g.derivative().cap(), 5);
        assert!(same(&f.mul(&TruncSeries::zero(&r, 6)).unwrap(), &TruncSeries::zero(&r, 6)));
    }

    #[test]
    fn compose_examples() {
        let r = RingConfig::padic(3, 20).unwrap();
        let f = ints(&r, &[0, 2, 1], 6);
        assert!(same(&f.compose(&TruncSeries::x(&r, 6)).unwrap(), &f));
        assert!(same(&f.compose(&f).unwrap(), &ints(&r, &[0, 4, 6, 4, 1], 6)));
        let cheb = ints(&r, &[0, 9, 6, 1], 8);
        let x2 = ints(&r, &[0, 0, 1], 8);
        let lhs = cheb.compose(&x2).unwrap();
        assert!(same(&lhs, &ints(&r, &[0, 0, 9, 0, 6, 0, 1], 8)));
        let sq = ints(&r, &[0, 3, 0, 1], 8).pow(2).unwrap();
        assert!(same(&lhs, &sq));
        assert!(lhs.is_polynomial());
        assert_eq!(
            f.compose(&TruncSeries::one(&r, 6)),
            Err(Error::NonzeroConstantTerm)
        );
    }

    #[test]
    fn inverse_of_x_plus_x2_is_signed_catalan() {
        let r = RingConfig::padic(5, 30).unwrap();
        let cap = 12;
        let g = ints(&r, &[0, 1, 1], cap).comp_inverse().unwrap();
        // Lagrange inversion: [X^n] g = (1/n) [T^(n-1)] (1+T)^(-n)
        //                           = (-1)^(n-1) C(2n-2, n-1) / n.
        for n in 1..=cap {
            let mut binom = BigRational::one();
            for i in 0..n - 1 {
                binom = binom * BigRational::from_integer(BigInt::from(2 * n - 2 - i))
                    / BigRational::from_integer(BigInt::from(i + 1));
            }
            let sign = if n % 2 == 1 { 1 } else { -1 };
            let want = binom * BigRational::new(BigInt::from(sign), BigInt::from(n));
            assert!(g.coeff(n).agrees_with_rational(&want), "n = {n}");
        }
        assert!(g.coeff(5).agrees_with_int(14));
        let f = ints(&r, &[0, 1, 1], cap);
        assert!(same(&g.comp_inverse().unwrap(), &f));
        assert!(same(&f.compose(&g).unwrap(), &TruncSeries::x(&r, cap)));
        assert!(same(&g.compose(&f).unwrap(), &TruncSeries::x(&r, cap)));
        assert!(same(&TruncSeries::x(&r, 5).comp_inverse().unwrap(), &TruncSeries::x(&r, 5)));
        assert!(matches!(ints(&r, &[0, 5, 1], 4).comp_inverse(), Err(Error::NotUnit(_))));
    }

    #[test]
    fn iterate_examples() {
        let r = RingConfig::padic(2, 20).unwrap();
        let f = ints(&r, &[0, 4, 1], 8);
        assert!(same(&f.iterate(1).unwrap(), &f));
        assert!(same(&f.iterate(0).unwrap(), &TruncSeries::x(&r, 8)));
        let f2 = f.iterate(2).unwrap();
        assert!(same(&f2, &ints(&r, &[0, 16, 20, 8, 1], 8)));
        assert!(f2.is_polynomial());
        let f5 = f.iterate(5).unwrap();
        assert!(same(&f5, &f.iterate(2).unwrap().compose(&f.iterate(3).unwrap()).unwrap()));
    }

    #[test]
    fn mixed_caps_truncate() {
        let r = RingConfig::padic(7, 10).unwrap();
        let a = ints(&r, &[1, 2, 3, 4], 5);
        let b = ints(&r, &[0, 1], 2);
        let s = a.add(&b).unwrap();
        assert_eq!(s.cap(), 2);
        assert!(!s.is_polynomial());
        let other = RingConfig::padic(5, 10).unwrap();
        assert_eq!(a.add(&ints(&other, &[1], 5)), Err(Error::ConfigMismatch));
    }

    #[test]
    fn subst_power_and_shifts() {
        let r = RingConfig::padic(3, 10).unwrap();
        let f = ints(&r, &[0, 3, 1], 4).forget_polynomial();
        let g = f.subst_power(2, 9).unwrap();
        assert!(g.coeff(2).agrees_with_int(3));
        assert!(g.coeff(4).agrees_with_int(1));
        assert!(f.subst_power(2, 10).is_err());
        let d = f.shift_down().unwrap();
        assert_eq!(d.cap(), 3);
        assert!(same(&d.shift_up(), &f));
    }
}
