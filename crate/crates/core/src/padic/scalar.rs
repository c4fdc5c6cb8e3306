//! Floating-point style p-adic scalars: `p^v * unit + O(p^(v + k))`.
//!
//! A nonzero scalar stores its valuation `v`, the unit part modulo `p^k` and
//! its relative precision `k`. Sums whose digits cancel across the whole known
//! window become "zero at precision" `O(p^N)`, which is distinct from the
//! exact zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::config::RingConfig;
use super::residue::ResidueElem;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Repr {
    Zero,
    /// Known to vanish modulo `p^N`, nothing more.
    ZeroAt(i64),
    Nonzero {
        valuation: i64,
        unit: Vec<BigInt>,
        precision: u32,
    },
}

#[derive(Clone)]
pub struct PadicScalar {
    ring: RingConfig,
    repr: Repr,
}

impl PartialEq for PadicScalar {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.ring == other.ring
    }
}

impl Eq for PadicScalar {}

impl PadicScalar {
    pub fn zero(ring: &RingConfig) -> Self {
        Self {
            ring: ring.clone(),
            repr: Repr::Zero,
        }
    }

    pub fn zero_at(ring: &RingConfig, abs_precision: i64) -> Self {
        Self {
            ring: ring.clone(),
            repr: Repr::ZeroAt(abs_precision),
        }
    }

    pub fn one(ring: &RingConfig) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn from_int(ring: &RingConfig, n: i64) -> Self {
        Self::from_bigint(ring, &BigInt::from(n))
    }

    pub fn from_bigint(ring: &RingConfig, n: &BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); ring.residue_degree()];
        coeffs[0] = n.clone();
        Self::from_integer_poly(ring, coeffs)
    }

    /// `p^v * p^0` = `p^v` at full precision.
    pub fn p_power(ring: &RingConfig, v: i64) -> Self {
        Self::one(ring).shift(v)
    }

    /// An element given by integer coordinates in the power basis
    /// `1, x, ..., x^(s-1)`; longer inputs are reduced by the modulus.
    pub fn from_integer_poly(ring: &RingConfig, mut coeffs: Vec<BigInt>) -> Self {
        let s = ring.residue_degree();
        // Exact reduction by the monic modulus before looking at valuations.
        while coeffs.len() > s {
            let top = coeffs.pop().unwrap();
            let shift = coeffs.len() - s;
            for (i, m) in ring.modulus()[..s].iter().enumerate() {
                coeffs[shift + i] -= &top * m;
            }
        }
        coeffs.resize(s, BigInt::zero());
        match coeffs.iter().filter_map(|c| ring.int_valuation(c)).min() {
            None => Self::zero(ring),
            Some(v) => {
                let r = ring.rel_precision();
                let unit = ring.elem_div_p_pow(&coeffs, v, r);
                Self {
                    ring: ring.clone(),
                    repr: Repr::Nonzero {
                        valuation: v as i64,
                        unit,
                        precision: r,
                    },
                }
            }
        }
    }

    pub fn from_rational(ring: &RingConfig, q: &BigRational) -> Self {
        Self::from_rational_poly(ring, std::slice::from_ref(q))
    }

    /// An element with rational coordinates in the power basis.
    pub fn from_rational_poly(ring: &RingConfig, coeffs: &[BigRational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let num = Self::from_integer_poly(ring, nums);
        let den = Self::from_bigint(ring, &den);
        num.try_div(&den).expect("nonzero denominator")
    }

    /// Builds a nonzero scalar from raw parts; the unit is reduced and must be
    /// invertible modulo p.
    pub fn from_parts(
        ring: &RingConfig,
        valuation: i64,
        unit: Vec<BigInt>,
        precision: u32,
    ) -> Result<Self> {
        let precision = precision.min(ring.rel_precision());
        if precision == 0 {
            return Ok(Self::zero_at(ring, valuation));
        }
        let unit = ring.reduce(unit, precision);
        if ring.elem_valuation(&unit) != Some(0) {
            return Err(Error::NotUnit("unit part divisible by p".into()));
        }
        Ok(Self {
            ring: ring.clone(),
            repr: Repr::Nonzero {
                valuation,
                unit,
                precision,
            },
        })
    }

    /// The naive lift of a residue element, digits in `[0, p)`.
    pub fn lift_residue(ring: &RingConfig, c: &ResidueElem) -> Self {
        Self::from_integer_poly(ring, ring.elem_from_residue(c))
    }

    pub fn ring(&self) -> &RingConfig {
        &self.ring
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    pub fn is_zero_at_precision(&self) -> bool {
        matches!(self.repr, Repr::ZeroAt(_))
    }

    /// Exact zero or zero at precision.
    pub fn is_zero(&self) -> bool {
        !self.is_nonzero()
    }

    /// Certified nonzero.
    pub fn is_nonzero(&self) -> bool {
        matches!(self.repr, Repr::Nonzero { .. })
    }

    /// The certified valuation of a nonzero scalar.
    pub fn valuation(&self) -> Option<i64> {
        match self.repr {
            Repr::Nonzero { valuation, .. } => Some(valuation),
            _ => None,
        }
    }

    /// A lower bound for the valuation; `None` means `+inf` (exact zero).
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero => None,
            Repr::ZeroAt(n) => Some(n),
            Repr::Nonzero { valuation, .. } => Some(valuation),
        }
    }

    /// Absolute precision `N` (value known modulo `p^N`); `None` when exact.
    pub fn absolute_precision(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero => None,
            Repr::ZeroAt(n) => Some(n),
            Repr::Nonzero {
                valuation,
                precision,
                ..
            } => Some(valuation + precision as i64),
        }
    }

    /// Number of significant digits of the unit part (0 for zeros).
    pub fn precision(&self) -> u32 {
        match self.repr {
            Repr::Nonzero { precision, .. } => precision,
            _ => 0,
        }
    }

    pub fn unit(&self) -> Option<&[BigInt]> {
        match &self.repr {
            Repr::Nonzero { unit, .. } => Some(unit),
            _ => None,
        }
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Whether the scalar is known to lie in `O_L` (valuation `>= 0`).
    pub fn is_integral(&self) -> Option<bool> {
        match self.repr {
            Repr::Zero => Some(true),
            Repr::ZeroAt(n) if n >= 0 => Some(true),
            Repr::ZeroAt(_) => None,
            Repr::Nonzero { valuation, .. } => Some(valuation >= 0),
        }
    }

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        let repr = match &self.repr {
            Repr::Zero => Repr::Zero,
            Repr::ZeroAt(n) => Repr::ZeroAt(n + k),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => Repr::Nonzero {
                valuation: valuation + k,
                unit: unit.clone(),
                precision: *precision,
            },
        };
        Self {
            ring: self.ring.clone(),
            repr,
        }
    }

    /// Drops relative precision to at most `k` digits.
    pub fn truncate_precision(&self, k: u32) -> Self {
        match &self.repr {
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } if *precision > k => {
                if k == 0 {
                    return Self::zero_at(&self.ring, *valuation);
                }
                Self {
                    ring: self.ring.clone(),
                    repr: Repr::Nonzero {
                        valuation: *valuation,
                        unit: self.ring.reduce(unit.clone(), k),
                        precision: k,
                    },
                }
            }
            _ => self.clone(),
        }
    }

    /// Forgets every digit at or beyond `p^n`.
    pub fn with_absolute_precision(&self, n: i64) -> Self {
        match &self.repr {
            Repr::Zero => Self::zero_at(&self.ring, n),
            Repr::ZeroAt(m) => Self::zero_at(&self.ring, n.min(*m)),
            Repr::Nonzero { valuation, .. } => {
                if *valuation >= n {
                    Self::zero_at(&self.ring, n)
                } else {
                    self.truncate_precision((n - valuation) as u32)
                }
            }
        }
    }

    /// Re-homes the scalar into a ring that differs only in relative precision.
    pub fn with_ring_precision(&self, target: &RingConfig) -> Result<Self> {
        if target.p() != self.ring.p() || target.modulus() != self.ring.modulus() {
            return Err(Error::ConfigMismatch);
        }
        let t = self.truncate_precision(target.rel_precision());
        Ok(Self {
            ring: target.clone(),
            repr: t.repr,
        })
    }

    /// Reduction modulo the maximal ideal.
    pub fn residue(&self) -> Result<ResidueElem> {
        let field = self.ring.residue_field();
        match &self.repr {
            Repr::Zero => Ok(field.zero()),
            Repr::ZeroAt(n) if *n >= 1 => Ok(field.zero()),
            Repr::ZeroAt(n) => Err(Error::PrecisionExhausted(format!(
                "residue of O(p^{n}) is undetermined"
            ))),
            Repr::Nonzero { valuation, unit, .. } => match valuation.cmp(&0) {
                std::cmp::Ordering::Greater => Ok(field.zero()),
                std::cmp::Ordering::Equal => Ok(self.ring.elem_residue(unit)),
                std::cmp::Ordering::Less => Err(Error::NotIntegral(format!(
                    "valuation {valuation} is negative"
                ))),
            },
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self.add_unchecked(&other.neg_impl()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.ring.ensure_same(&other.ring)?;
        Ok(self.mul_unchecked(&other.invert()?))
    }

    pub fn invert(&self) -> Result<Self> {
        match &self.repr {
            Repr::Zero => Err(Error::DivisionByZero),
            Repr::ZeroAt(n) => Err(Error::PrecisionExhausted(format!(
                "cannot invert O(p^{n})"
            ))),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => Ok(Self {
                ring: self.ring.clone(),
                repr: Repr::Nonzero {
                    valuation: -valuation,
                    unit: self.ring.elem_inv(unit, *precision)?,
                    precision: *precision,
                },
            }),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    pub fn powi(&self, exp: i64) -> Result<Self> {
        if exp >= 0 {
            Ok(self.pow(exp as u64))
        } else {
            Ok(self.invert()?.pow(exp.unsigned_abs()))
        }
    }

    /// Multiplication by an integer.
    pub fn scale_int(&self, n: i64) -> Self {
        self.mul_unchecked(&Self::from_int(&self.ring, n))
    }

    /// Agreement on every digit both operands claim to know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.ring.same_as(&other.ring) && self.add_unchecked(&other.neg_impl()).is_zero()
    }

    fn neg_impl(&self) -> Self {
        let repr = match &self.repr {
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => Repr::Nonzero {
                valuation: *valuation,
                unit: self.ring.elem_neg(unit, *precision),
                precision: *precision,
            },
            other => other.clone(),
        };
        Self {
            ring: self.ring.clone(),
            repr,
        }
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let ring = &self.ring;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Zero, _) => other.repr.clone(),
            (_, Repr::Zero) => self.repr.clone(),
            (Repr::ZeroAt(a), Repr::ZeroAt(b)) => Repr::ZeroAt(*a.min(b)),
            (Repr::ZeroAt(n), nz @ Repr::Nonzero { .. }) | (nz @ Repr::Nonzero { .. }, Repr::ZeroAt(n)) => {
                let Repr::Nonzero {
                    valuation,
                    unit,
                    precision,
                } = nz
                else {
                    unreachable!()
                };
                if *valuation < *n {
                    let k = (*precision as i64).min(n - valuation) as u32;
                    Repr::Nonzero {
                        valuation: *valuation,
                        unit: ring.reduce(unit.clone(), k),
                        precision: k,
                    }
                } else {
                    Repr::ZeroAt(*n)
                }
            }
            (
                Repr::Nonzero {
                    valuation: va,
                    unit: ua,
                    precision: ka,
                },
                Repr::Nonzero {
                    valuation: vb,
                    unit: ub,
                    precision: kb,
                },
            ) => {
                let v = (*va).min(*vb);
                let abs = (va + *ka as i64).min(vb + *kb as i64);
                let k = (abs - v) as u32;
                let sa = (va - v) as u32;
                let sb = (vb - v) as u32;
                let sum: Vec<BigInt> = if sa == 0 && sb == 0 {
                    ua.iter().zip(ub).map(|(x, y)| x + y).collect()
                } else {
                    let pa = ring.p_pow(sa);
                    let pb = ring.p_pow(sb);
                    ua.iter().zip(ub).map(|(x, y)| x * &pa + y * &pb).collect()
                };
                let sum = ring.reduce(sum, k);
                match ring.elem_valuation(&sum) {
                    None => Repr::ZeroAt(abs),
                    Some(w) => Repr::Nonzero {
                        valuation: v + w as i64,
                        unit: ring.elem_div_p_pow(&sum, w, k - w),
                        precision: k - w,
                    },
                }
            }
        };
        Self {
            ring: ring.clone(),
            repr,
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let repr = match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Repr::Zero,
            (Repr::ZeroAt(a), Repr::ZeroAt(b)) => Repr::ZeroAt(a + b),
            (Repr::ZeroAt(n), Repr::Nonzero { valuation, .. })
            | (Repr::Nonzero { valuation, .. }, Repr::ZeroAt(n)) => Repr::ZeroAt(n + valuation),
            (
                Repr::Nonzero {
                    valuation: va,
                    unit: ua,
                    precision: ka,
                },
                Repr::Nonzero {
                    valuation: vb,
                    unit: ub,
                    precision: kb,
                },
            ) => {
                let k = (*ka).min(*kb);
                Repr::Nonzero {
                    valuation: va + vb,
                    unit: self.ring.elem_mul(ua, ub, k),
                    precision: k,
                }
            }
        };
        Self {
            ring: self.ring.clone(),
            repr,
        }
    }

    /// For `Z_p` scalars of nonnegative valuation: the integer in `[0, p^N)`
    /// congruent to the value, with `N` the absolute precision (capped at
    /// `cap_digits` for exact zero).
    pub fn to_bigint_mod(&self, cap_digits: u32) -> Option<(BigInt, u32)> {
        if self.ring.residue_degree() != 1 {
            return None;
        }
        match &self.repr {
            Repr::Zero => Some((BigInt::zero(), cap_digits)),
            Repr::ZeroAt(n) if *n >= 0 => Some((BigInt::zero(), *n as u32)),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } if *valuation >= 0 => {
                let n = *valuation as u32 + precision;
                Some((&unit[0] * self.ring.p_pow(*valuation as u32), n))
            }
            _ => None,
        }
    }

    /// Whether the scalar agrees with the rational `q` on all known digits.
    pub fn agrees_with_rational(&self, q: &BigRational) -> bool {
        self.agrees_with(&Self::from_rational(&self.ring, q))
    }

    pub fn agrees_with_int(&self, n: i64) -> bool {
        self.agrees_with(&Self::from_int(&self.ring, n))
    }
}

impl Add for &PadicScalar {
    type Output = PadicScalar;
    fn add(self, rhs: Self) -> PadicScalar {
        debug_assert!(self.ring.same_as(&rhs.ring), "ring mismatch");
        self.add_unchecked(rhs)
    }
}

impl Sub for &PadicScalar {
    type Output = PadicScalar;
    fn sub(self, rhs: Self) -> PadicScalar {
        debug_assert!(self.ring.same_as(&rhs.ring), "ring mismatch");
        self.add_unchecked(&rhs.neg_impl())
    }
}

impl Mul for &PadicScalar {
    type Output = PadicScalar;
    fn mul(self, rhs: Self) -> PadicScalar {
        debug_assert!(self.ring.same_as(&rhs.ring), "ring mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Neg for &PadicScalar {
    type Output = PadicScalar;
    fn neg(self) -> PadicScalar {
        self.neg_impl()
    }
}

impl fmt::Debug for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical rendering: `0`, `O(p^N)`, or `p^v * u + O(p^N)` with the unit in
/// `[0, p^k)` (a coordinate list `[u_0, ..., u_{s-1}]` in extensions).
impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.ring.p();
        match &self.repr {
            Repr::Zero => write!(f, "0"),
            Repr::ZeroAt(n) => write!(f, "O({p}^{n})"),
            Repr::Nonzero {
                valuation,
                unit,
                precision,
            } => {
                if *valuation != 0 {
                    write!(f, "{p}^{valuation} * ")?;
                }
                if unit.len() == 1 {
                    write!(f, "{}", unit[0])?;
                } else {
                    let parts: Vec<String> = unit.iter().map(|c| c.to_string()).collect();
                    write!(f, "[{}]", parts.join(", "))?;
                }
                write!(f, " + O({p}^{})", valuation + *precision as i64)
            }
        }
    }
}

/// Signed remainder helper used when rendering balanced representatives.
pub(crate) fn balanced(n: &BigInt, modulus: &BigInt) -> BigInt {
    let r = n.mod_floor(modulus);
    if &r * 2 > *modulus {
        r - modulus
    } else {
        r
    }
}

impl PadicScalar {
    /// For `Z_p` scalars: the balanced integer representative of the value
    /// modulo `p^N` when the absolute precision `N` is nonnegative, e.g. `-2`
    /// rather than `p^N - 2`.
    pub fn balanced_integer(&self) -> Option<BigInt> {
        let (v, n) = self.to_bigint_mod(self.ring.rel_precision())?;
        let m = self.ring.p_pow(n);
        Some(balanced(&v, &m))
    }
}
