use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::residue::{smallest_irreducible, ResidueElem, ResidueField};
use crate::error::{Error, Result};

/// Default relative precision in p-adic digits.
pub const DEFAULT_PRECISION: u32 = 32;

/// An unramified extension `O_L = Z_p[x]/(modulus)` of degree `s`, carried at
/// relative precision `r`. Cheap to clone.
#[derive(Clone)]
pub struct RingConfig {
    inner: Arc<Inner>,
}

struct Inner {
    p: u64,
    p_big: BigInt,
    modulus: Vec<BigInt>,
    rel_precision: u32,
    /// `p^0 ..= p^(rel_precision)`.
    powers: Vec<BigInt>,
    residue: ResidueField,
}

impl PartialEq for RingConfig {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.rel_precision == other.inner.rel_precision
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for RingConfig {}

impl fmt::Debug for RingConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingConfig")
            .field("p", &self.inner.p)
            .field("residue_degree", &self.residue_degree())
            .field("modulus", &self.inner.modulus)
            .field("rel_precision", &self.inner.rel_precision)
            .finish()
    }
}

impl RingConfig {
    /// `Z_p` at relative precision `rel_precision`.
    pub fn padic(p: u64, rel_precision: u32) -> Result<Self> {
        Self::new(p, vec![BigInt::zero(), BigInt::one()], rel_precision)
    }

    /// The degree-`s` unramified extension with the canonical (smallest
    /// lexicographic) modulus.
    pub fn unramified(p: u64, s: usize, rel_precision: u32) -> Result<Self> {
        if s == 0 {
            return Err(Error::InvalidConfig("residue degree must be positive".into()));
        }
        if !super::residue::is_prime(p) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        let m = smallest_irreducible(p, s)?;
        Self::new(p, m.into_iter().map(BigInt::from).collect(), rel_precision)
    }

    /// `modulus` is monic over the integers, lowest degree first.
    pub fn new(p: u64, modulus: Vec<BigInt>, rel_precision: u32) -> Result<Self> {
        if rel_precision == 0 {
            return Err(Error::InvalidConfig("relative precision must be positive".into()));
        }
        if modulus.len() < 2 || !modulus.last().unwrap().is_one() {
            return Err(Error::InvalidConfig("modulus must be monic of degree >= 1".into()));
        }
        let p_big = BigInt::from(p);
        let residue_coeffs: Vec<u64> = modulus
            .iter()
            .map(|c| {
                let r = c.mod_floor(&p_big);
                u64::try_from(r).expect("reduced below p")
            })
            .collect();
        let residue = ResidueField::new(p, residue_coeffs)?;
        let mut powers = Vec::with_capacity(rel_precision as usize + 1);
        let mut acc = BigInt::one();
        for _ in 0..=rel_precision {
            powers.push(acc.clone());
            acc *= &p_big;
        }
        Ok(Self {
            inner: Arc::new(Inner {
                p,
                p_big,
                modulus,
                rel_precision,
                powers,
                residue,
            }),
        })
    }

    /// Same ring at a different relative precision.
    pub fn with_rel_precision(&self, rel_precision: u32) -> Result<Self> {
        Self::new(self.inner.p, self.inner.modulus.clone(), rel_precision)
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn p_big(&self) -> &BigInt {
        &self.inner.p_big
    }

    pub fn residue_degree(&self) -> usize {
        self.inner.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.inner.modulus
    }

    pub fn rel_precision(&self) -> u32 {
        self.inner.rel_precision
    }

    pub fn residue_field(&self) -> &ResidueField {
        &self.inner.residue
    }

    pub(crate) fn same_as(&self, other: &Self) -> bool {
        self == other
    }

    pub(crate) fn ensure_same(&self, other: &Self) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::ConfigMismatch)
        }
    }

    /// `p^k` for `k <= rel_precision`, computed on demand beyond that.
    pub(crate) fn p_pow(&self, k: u32) -> BigInt {
        match self.inner.powers.get(k as usize) {
            Some(v) => v.clone(),
            None => num_traits::pow(self.inner.p_big.clone(), k as usize),
        }
    }

    fn p_pow_ref(&self, k: u32) -> std::borrow::Cow<'_, BigInt> {
        match self.inner.powers.get(k as usize) {
            Some(v) => std::borrow::Cow::Borrowed(v),
            None => std::borrow::Cow::Owned(num_traits::pow(self.inner.p_big.clone(), k as usize)),
        }
    }

    // ---- element arithmetic on unit parts (polynomials of degree < s) ----

    /// Reduces an integer polynomial modulo the modulus and `p^k`.
    pub(crate) fn reduce(&self, mut coeffs: Vec<BigInt>, k: u32) -> Vec<BigInt> {
        let s = self.residue_degree();
        let modulus = &self.inner.modulus;
        while coeffs.len() > s {
            let top = coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = coeffs.len() - s;
            for (i, m) in modulus[..s].iter().enumerate() {
                if !m.is_zero() {
                    coeffs[shift + i] -= &top * m;
                }
            }
        }
        coeffs.resize(s, BigInt::zero());
        let pk = self.p_pow_ref(k);
        for c in coeffs.iter_mut() {
            if c.is_negative() || *c >= *pk {
                *c = c.mod_floor(&pk);
            }
        }
        coeffs
    }

    pub(crate) fn elem_add(&self, a: &[BigInt], b: &[BigInt], k: u32) -> Vec<BigInt> {
        let sum = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(sum, k)
    }

    pub(crate) fn elem_mul(&self, a: &[BigInt], b: &[BigInt], k: u32) -> Vec<BigInt> {
        if self.residue_degree() == 1 {
            let pk = self.p_pow_ref(k);
            return vec![(&a[0] * &b[0]).mod_floor(&pk)];
        }
        let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        self.reduce(prod, k)
    }

    pub(crate) fn elem_neg(&self, a: &[BigInt], k: u32) -> Vec<BigInt> {
        self.reduce(a.iter().map(|x| -x).collect(), k)
    }

    /// `min val_p` over the coefficients, `None` for the zero element.
    pub(crate) fn elem_valuation(&self, a: &[BigInt]) -> Option<u32> {
        a.iter().filter_map(|c| self.int_valuation(c)).min()
    }

    pub(crate) fn int_valuation(&self, n: &BigInt) -> Option<u32> {
        if n.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut m = n.clone();
        loop {
            let (q, r) = m.div_rem(&self.inner.p_big);
            if !r.is_zero() {
                return Some(v);
            }
            m = q;
            v += 1;
        }
    }

    pub(crate) fn elem_div_p_pow(&self, a: &[BigInt], w: u32, k: u32) -> Vec<BigInt> {
        if w == 0 {
            return self.reduce(a.to_vec(), k);
        }
        let pw = self.p_pow(w);
        self.reduce(a.iter().map(|c| c / &pw).collect(), k)
    }

    pub(crate) fn elem_residue(&self, a: &[BigInt]) -> ResidueElem {
        let coeffs: Vec<u64> = a
            .iter()
            .map(|c| u64::try_from(c.mod_floor(&self.inner.p_big)).expect("below p"))
            .collect();
        self.inner.residue.element(&coeffs)
    }

    pub(crate) fn elem_from_residue(&self, c: &ResidueElem) -> Vec<BigInt> {
        c.coeffs().iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Inverse of a unit modulo `p^k`, by Newton iteration from the residue
    /// field inverse.
    pub(crate) fn elem_inv(&self, a: &[BigInt], k: u32) -> Result<Vec<BigInt>> {
        if self.residue_degree() == 1 {
            let pk = self.p_pow(k);
            let x = a[0].mod_floor(&pk);
            return x
                .modinv(&pk)
                .map(|v| vec![v])
                .ok_or_else(|| Error::NotUnit("element is not invertible".into()));
        }
        let res = self.elem_residue(a);
        let inv = self.inner.residue.inv(&res)?;
        let mut x = self.elem_from_residue(&inv);
        let mut known = 1u32;
        let two = vec![BigInt::from(2)];
        let two = self.reduce(two, k);
        while known < k {
            known = (known * 2).min(k);
            let ax = self.elem_mul(a, &x, known);
            let corr = self.elem_add(&two, &self.elem_neg(&ax, known), known);
            x = self.elem_mul(&x, &corr, known);
        }
        Ok(self.reduce(x, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composite_and_reducible() {
        assert!(RingConfig::padic(9, 8).is_err());
        assert!(RingConfig::padic(3, 0).is_err());
        // x^2 + 1 splits mod 5.
        let m = vec![BigInt::from(1), BigInt::zero(), BigInt::from(1)];
        assert!(RingConfig::new(5, m.clone(), 8).is_err());
        assert!(RingConfig::new(3, m, 8).is_ok());
    }

    #[test]
    fn unramified_uses_smallest_modulus() {
        let r = RingConfig::unramified(5, 2, 10).unwrap();
        assert_eq!(r.residue_degree(), 2);
        let want: Vec<BigInt> = [1, 1, 1].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(r.modulus(), &want[..]);
    }

    #[test]
    fn inverse_in_extension() {
        let r = RingConfig::unramified(3, 2, 12).unwrap();
        let a = vec![BigInt::from(5), BigInt::from(7)];
        let inv = r.elem_inv(&a, 12).unwrap();
        let prod = r.elem_mul(&a, &inv, 12);
        assert_eq!(prod, vec![BigInt::one(), BigInt::zero()]);
    }

    #[test]
    fn equality_is_structural() {
        let a = RingConfig::padic(3, 10).unwrap();
        let b = RingConfig::padic(3, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, a.with_rel_precision(11).unwrap());
    }
}
