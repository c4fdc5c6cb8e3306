use crate::error::{Error, Result};
use crate::padic::{PadicScalar, RingConfig};

use super::trunc::TruncSeries;

fn tri_index(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

/// Bivariate series `Σ c_{i,j} X^i Y^j` known for `i + j <= total_cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivarTrunc {
    ring: RingConfig,
    total_cap: usize,
    coeffs: Vec<PadicScalar>,
}

impl BivarTrunc {
    pub fn zero(ring: &RingConfig, total_cap: usize) -> Self {
        Self {
            ring: ring.clone(),
            total_cap,
            coeffs: vec![PadicScalar::zero(ring); tri_index(0, total_cap) + 1],
        }
    }

    pub fn one(ring: &RingConfig, total_cap: usize) -> Self {
        let mut b = Self::zero(ring, total_cap);
        b.coeffs[0] = PadicScalar::one(ring);
        b
    }

    /// `f(X)` viewed in two variables.
    pub fn from_x(f: &TruncSeries, total_cap: usize) -> Result<Self> {
        Self::from_univariate(f, total_cap, false)
    }

    /// `f(Y)` viewed in two variables.
    pub fn from_y(f: &TruncSeries, total_cap: usize) -> Result<Self> {
        Self::from_univariate(f, total_cap, true)
    }

    fn from_univariate(f: &TruncSeries, total_cap: usize, in_y: bool) -> Result<Self> {
        if f.cap() < total_cap {
            return Err(Error::CapTooSmall {
                needed: total_cap,
                cap: f.cap(),
            });
        }
        let mut b = Self::zero(f.ring(), total_cap);
        for k in 0..=total_cap {
            let idx = if in_y { tri_index(0, k) } else { tri_index(k, 0) };
            b.coeffs[idx] = f.coeff(k).clone();
        }
        Ok(b)
    }

    pub fn ring(&self) -> &RingConfig {
        &self.ring
    }

    pub fn total_cap(&self) -> usize {
        self.total_cap
    }

    pub fn coeff(&self, i: usize, j: usize) -> &PadicScalar {
        &self.coeffs[tri_index(i, j)]
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: PadicScalar) {
        self.coeffs[tri_index(i, j)] = c;
    }

    /// `(i, j, c_{i,j})` in order of total degree, then `j`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &PadicScalar)> {
        (0..=self.total_cap)
            .flat_map(|d| (0..=d).map(move |j| (d - j, j)))
            .map(|(i, j)| (i, j, self.coeff(i, j)))
    }

    /// `s_j(X) = Σ_i c_{i,j} X^i`, exact up to `X^(total_cap - j)`.
    pub fn s_j(&self, j: usize) -> TruncSeries {
        let cap = self.total_cap - j;
        let c = (0..=cap).map(|i| self.coeff(i, j).clone()).collect();
        TruncSeries::new(&self.ring, c, cap)
    }

    /// Exchanges `X` and `Y`.
    pub fn swap(&self) -> Self {
        let mut b = Self::zero(&self.ring, self.total_cap);
        for (i, j, c) in self.terms() {
            b.set_coeff(j, i, c.clone());
        }
        b
    }

    fn ensure_compatible(&self, other: &Self) -> Result<()> {
        self.ring.ensure_same(&other.ring)?;
        if self.total_cap != other.total_cap {
            return Err(Error::InvalidInput("bivariate caps differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        Ok(Self {
            ring: self.ring.clone(),
            total_cap: self.total_cap,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        Ok(Self {
            ring: self.ring.clone(),
            total_cap: self.total_cap,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scalar_mul(&self, a: &PadicScalar) -> Result<Self> {
        self.ring.ensure_same(a.ring())?;
        Ok(Self {
            ring: self.ring.clone(),
            total_cap: self.total_cap,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.ensure_compatible(other)?;
        let mut out = Self::zero(&self.ring, self.total_cap);
        let t = self.total_cap;
        for (i1, j1, a) in self.terms() {
            if a.is_exact_zero() {
                continue;
            }
            for d2 in 0..=t - (i1 + j1) {
                for j2 in 0..=d2 {
                    let i2 = d2 - j2;
                    let b = other.coeff(i2, j2);
                    if b.is_exact_zero() {
                        continue;
                    }
                    let idx = tri_index(i1 + i2, j1 + j2);
                    out.coeffs[idx] = &out.coeffs[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    /// `outer(self)` for `self(0, 0) = 0`, by Horner's rule.
    pub fn compose_into(&self, outer: &TruncSeries) -> Result<Self> {
        self.ring.ensure_same(outer.ring())?;
        if !self.coeff(0, 0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if outer.cap() < self.total_cap {
            return Err(Error::CapTooSmall {
                needed: self.total_cap,
                cap: outer.cap(),
            });
        }
        let mut acc = Self::zero(&self.ring, self.total_cap);
        for k in (0..=self.total_cap).rev() {
            acc = acc.mul(self)?;
            acc.coeffs[0] = &acc.coeffs[0] + outer.coeff(k);
        }
        Ok(acc)
    }

    /// Diagonal-type substitution `S(a(X), b(X))` for univariate `a`, `b`
    /// without constant terms, at cap `total_cap`.
    pub fn substitute(&self, a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries> {
        let cap = self.total_cap;
        if !a.coeff(0).is_zero() || !b.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let a = a.with_cap(cap)?;
        let b = b.with_cap(cap)?;
        // Σ_j s_j(a) b^j with s_j evaluated by Horner.
        let mut out = TruncSeries::zero(&self.ring, cap);
        let mut b_pow = TruncSeries::one(&self.ring, cap);
        for j in 0..=cap {
            let sj = self.s_j(j);
            let sj = TruncSeries::new(&self.ring, sj.into_coeffs(), cap);
            let term = sj.compose(&a)?.mul(&b_pow)?;
            out = out.add(&term)?.forget_polynomial();
            b_pow = b_pow.mul(&b)?;
        }
        Ok(out)
    }

    /// Least `(i, j)` in term order with a certified-nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.terms().find(|(_, _, c)| c.is_nonzero()).map(|(i, j, _)| (i, j))
    }
}

/// Triangular trivariate accumulator, `i + j + k <= total_cap`, used to
/// compare `S(S(X,Y),Z)` with `S(X,S(Y,Z))`.
#[derive(Clone, Debug)]
pub struct TrivarTrunc {
    ring: RingConfig,
    total_cap: usize,
    coeffs: Vec<PadicScalar>,
}

fn tet_index(i: usize, j: usize, k: usize) -> usize {
    let d = i + j + k;
    d * (d + 1) * (d + 2) / 6 + tri_index(j, k)
}

impl TrivarTrunc {
    pub fn zero(ring: &RingConfig, total_cap: usize) -> Self {
        Self {
            ring: ring.clone(),
            total_cap,
            coeffs: vec![PadicScalar::zero(ring); tet_index(0, 0, total_cap) + 1],
        }
    }

    pub fn ring(&self) -> &RingConfig {
        &self.ring
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> &PadicScalar {
        &self.coeffs[tet_index(i, j, k)]
    }

    pub fn accumulate(&mut self, i: usize, j: usize, k: usize, c: &PadicScalar) {
        if i + j + k <= self.total_cap && !c.is_exact_zero() {
            let idx = tet_index(i, j, k);
            self.coeffs[idx] = &self.coeffs[idx] + c;
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, usize, &PadicScalar)> {
        (0..=self.total_cap).flat_map(move |d| {
            (0..=d).flat_map(move |jk| {
                (0..=jk).map(move |k| {
                    let (i, j) = (d - jk, jk - k);
                    (i, j, k, self.coeff(i, j, k))
                })
            })
        })
    }

    /// `S(S(X,Y), Z)`.
    pub fn outer_left(s: &BivarTrunc) -> Result<Self> {
        let t = s.total_cap();
        let mut acc = Self::zero(s.ring(), t);
        // Powers of S(X,Y) as bivariate series in X, Y.
        let mut power = BivarTrunc::one(s.ring(), t);
        for i in 0..=t {
            for j in 0..=t - i {
                let c = s.coeff(i, j);
                if c.is_exact_zero() {
                    continue;
                }
                for (a, b, w) in power.terms() {
                    if a + b + j <= t && !w.is_exact_zero() {
                        acc.accumulate(a, b, j, &(c * w));
                    }
                }
            }
            power = power.mul(s)?;
        }
        Ok(acc)
    }

    /// `S(X, S(Y,Z))`.
    pub fn outer_right(s: &BivarTrunc) -> Result<Self> {
        let t = s.total_cap();
        let mut acc = Self::zero(s.ring(), t);
        let mut power = BivarTrunc::one(s.ring(), t);
        for j in 0..=t {
            for i in 0..=t - j {
                let c = s.coeff(i, j);
                if c.is_exact_zero() {
                    continue;
                }
                for (b, k, w) in power.terms() {
                    if i + b + k <= t && !w.is_exact_zero() {
                        acc.accumulate(i, b, k, &(c * w));
                    }
                }
            }
            power = power.mul(s)?;
        }
        Ok(acc)
    }
}
