use std::fmt;

use crate::error::{Error, Result};
use crate::padic::{PadicScalar, RingConfig};

use super::trunc::{mul_coeffs, Agreement, TruncSeries};

/// Dense polynomial over `O_L` (or `L`), lowest degree first, with trailing
/// exact zeros trimmed.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    ring: RingConfig,
    coeffs: Vec<PadicScalar>,
}

impl Polynomial {
    pub fn new(ring: &RingConfig, mut coeffs: Vec<PadicScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        Self {
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn from_ints(ring: &RingConfig, coeffs: &[i64]) -> Self {
        Self::new(
            ring,
            coeffs.iter().map(|&n| PadicScalar::from_int(ring, n)).collect(),
        )
    }

    pub fn zero(ring: &RingConfig) -> Self {
        Self::new(ring, Vec::new())
    }

    pub fn one(ring: &RingConfig) -> Self {
        Self::new(ring, vec![PadicScalar::one(ring)])
    }

    pub fn x(ring: &RingConfig) -> Self {
        Self::monomial(ring, PadicScalar::one(ring), 1)
    }

    pub fn monomial(ring: &RingConfig, c: PadicScalar, degree: usize) -> Self {
        let mut coeffs = vec![PadicScalar::zero(ring); degree + 1];
        coeffs[degree] = c;
        Self::new(ring, coeffs)
    }

    /// The coefficients `c_0 ..= c_cap` of a truncated series.
    pub fn from_series(f: &TruncSeries) -> Self {
        Self::new(f.ring(), f.coeffs().to_vec())
    }

    /// The polynomial as an exact series at truncation `cap`.
    pub fn to_series(&self, cap: usize) -> Result<TruncSeries> {
        TruncSeries::polynomial(&self.ring, self.coeffs.clone(), cap)
    }

    pub fn ring(&self) -> &RingConfig {
        &self.ring
    }

    pub fn coeffs(&self) -> &[PadicScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> PadicScalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| PadicScalar::zero(&self.ring))
    }

    /// `None` for the exact zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&PadicScalar> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.agrees_with(&PadicScalar::one(&self.ring)))
    }

    /// Monic with every lower coefficient certified to lie in the maximal
    /// ideal.
    pub fn is_distinguished(&self) -> bool {
        self.is_monic()
            && self.coeffs[..self.coeffs.len() - 1]
                .iter()
                .all(|c| c.valuation_lower_bound().map_or(true, |v| v >= 1))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ring.ensure_same(&other.ring)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            &self.ring,
            (0..n).map(|i| &self.coeff(i) + &other.coeff(i)).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ring.ensure_same(&other.ring)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::new(
            &self.ring,
            (0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect(),
        ))
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ring, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scalar_mul(&self, a: &PadicScalar) -> Result<Self> {
        self.ring.ensure_same(a.ring())?;
        Ok(Self::new(&self.ring, self.coeffs.iter().map(|c| c * a).collect()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ring.ensure_same(&other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let cap = self.coeffs.len() + other.coeffs.len() - 2;
        Ok(Self::new(
            &self.ring,
            mul_coeffs(&self.coeffs, &other.coeffs, cap, &self.ring),
        ))
    }

    pub fn pow(&self, mut k: u64) -> Result<Self> {
        let mut acc = Self::one(&self.ring);
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

    pub fn derivative(&self) -> Self {
        Self::new(
            &self.ring,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale_int(i as i64))
                .collect(),
        )
    }

    /// Multiplication by `X^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![PadicScalar::zero(&self.ring); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(&self.ring, coeffs)
    }

    /// Euclidean division by a polynomial with a unit leading coefficient.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.ring.ensure_same(&divisor.ring)?;
        let d = divisor
            .degree()
            .ok_or(Error::DivisionByZero)?;
        let lead = divisor.coeffs[d].clone();
        if !lead.is_unit() {
            return Err(Error::NotUnit(format!(
                "leading coefficient {lead} of the divisor is not a unit"
            )));
        }
        let lead_inv = lead.invert()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Self::zero(&self.ring), self.clone()));
        }
        let mut quot = vec![PadicScalar::zero(&self.ring); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] * &lead_inv;
            if c.is_exact_zero() {
                continue;
            }
            for (i, b) in divisor.coeffs.iter().enumerate() {
                if !b.is_exact_zero() {
                    rem[k + i] = &rem[k + i] - &(&c * b);
                }
            }
            // The top coefficient is eliminated by construction.
            rem[k + d] = PadicScalar::zero(&self.ring);
            quot[k] = c;
        }
        rem.truncate(d);
        Ok((Self::new(&self.ring, quot), Self::new(&self.ring, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// `self^e mod modulus`.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Result<Self> {
        let mut acc = Self::one(&self.ring).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?.rem(modulus)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?.rem(modulus)?;
            }
        }
        Ok(acc)
    }

    /// Exact composition `self(inner(X))`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.ring.ensure_same(&inner.ring)?;
        let mut acc = Self::zero(&self.ring);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner)?.add(&Self::new(&self.ring, vec![c.clone()]))?;
        }
        Ok(acc)
    }

    pub fn compare(&self, other: &Self) -> Result<Agreement> {
        let diff = self.sub(other)?;
        Ok(Agreement::from_differences(diff.coeffs.iter().enumerate()))
    }

    /// Resultant `Res(self, other)` as the determinant of the Sylvester
    /// matrix, eliminated with minimal-valuation pivots.
    pub fn resultant(&self, other: &Self) -> Result<PadicScalar> {
        self.ring.ensure_same(&other.ring)?;
        let (Some(m), Some(n)) = (self.degree(), other.degree()) else {
            return Ok(PadicScalar::zero(&self.ring));
        };
        let size = m + n;
        if size == 0 {
            return Ok(PadicScalar::one(&self.ring));
        }
        let zero = PadicScalar::zero(&self.ring);
        let mut rows: Vec<Vec<PadicScalar>> = Vec::with_capacity(size);
        for k in 0..n {
            let mut row = vec![zero.clone(); size];
            for (i, c) in self.coeffs.iter().rev().enumerate() {
                row[k + i] = c.clone();
            }
            rows.push(row);
        }
        for k in 0..m {
            let mut row = vec![zero.clone(); size];
            for (i, c) in other.coeffs.iter().rev().enumerate() {
                row[k + i] = c.clone();
            }
            rows.push(row);
        }
        determinant(rows, &self.ring)
    }

    /// Squarefree over the fraction field, certified by a nonzero
    /// discriminant-type resultant `Res(g, g')`.
    pub fn is_separable(&self) -> Result<bool> {
        match self.degree() {
            None => Ok(false),
            Some(0) => Ok(true),
            Some(_) => {
                let r = self.resultant(&self.derivative())?;
                if r.is_nonzero() {
                    Ok(true)
                } else if r.is_exact_zero() {
                    Ok(false)
                } else {
                    Err(Error::PrecisionExhausted(format!(
                        "resultant of g and g' is {r}"
                    )))
                }
            }
        }
    }

    /// Forgets every digit at or beyond `p^n` in each coefficient.
    pub fn with_absolute_precision(&self, n: i64) -> Self {
        Self::new(
            &self.ring,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if i + 1 == self.coeffs.len() && c.is_unit() {
                        c.clone()
                    } else {
                        c.with_absolute_precision(n)
                    }
                })
                .collect(),
        )
    }
}

fn determinant(mut rows: Vec<Vec<PadicScalar>>, ring: &RingConfig) -> Result<PadicScalar> {
    let size = rows.len();
    let mut det = PadicScalar::one(ring);
    for col in 0..size {
        let pivot = (col..size)
            .filter_map(|r| rows[r][col].valuation().map(|v| (v, r)))
            .min();
        let Some((_, pr)) = pivot else {
            // The remaining column is zero; at best we know how small.
            let bound = (col..size)
                .filter_map(|r| rows[r][col].absolute_precision())
                .min();
            return Ok(match bound {
                None => PadicScalar::zero(ring),
                Some(n) => {
                    let v = det.valuation().unwrap_or(0);
                    PadicScalar::zero_at(ring, n + v)
                }
            });
        };
        if pr != col {
            rows.swap(pr, col);
            det = -&det;
        }
        let piv = rows[col][col].clone();
        let piv_inv = piv.invert()?;
        det = &det * &piv;
        for r in col + 1..size {
            if rows[r][col].is_exact_zero() {
                continue;
            }
            let factor = &rows[r][col] * &piv_inv;
            for c in col..size {
                if rows[col][c].is_exact_zero() {
                    continue;
                }
                let t = &factor * &rows[col][c];
                rows[r][c] = &rows[r][c] - &t;
            }
        }
    }
    Ok(det)
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
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
        Ok(())
    }
}
