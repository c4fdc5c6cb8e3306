//! Exactly known elements of `Q[x]/(modulus)`, used where a certificate must
//! not depend on p-adic precision (root-of-unity tests on literal input).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::config::RingConfig;
use super::scalar::PadicScalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactElement {
    coeffs: Vec<BigRational>,
}

impl ExactElement {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        Self { coeffs }
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(vec![BigRational::from_integer(BigInt::from(n))])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_scalar(&self, ring: &RingConfig) -> PadicScalar {
        if self.coeffs.is_empty() {
            return PadicScalar::zero(ring);
        }
        PadicScalar::from_rational_poly(ring, &self.coeffs)
    }

    fn reduce(ring: &RingConfig, mut c: Vec<BigRational>) -> Vec<BigRational> {
        let s = ring.residue_degree();
        while c.len() > s {
            let top = c.pop().unwrap();
            let shift = c.len() - s;
            for (i, m) in ring.modulus()[..s].iter().enumerate() {
                c[shift + i] -= &top * BigRational::from_integer(m.clone());
            }
        }
        c.resize(s, BigRational::zero());
        c
    }

    fn mul(ring: &RingConfig, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        Self::reduce(ring, out)
    }

    /// Exact test: the roots of unity of an unramified extension of `Q_p`
    /// have order dividing `p^s - 1` (times 2 when `p = 2`).
    pub fn is_root_of_unity(&self, ring: &RingConfig) -> Result<bool> {
        if self.is_zero() {
            return Ok(false);
        }
        let q = ring
            .residue_field()
            .order()
            .filter(|&q| q <= 1 << 20)
            .ok_or_else(|| Error::Unsupported("exact root-of-unity test needs p^s <= 2^20".into()))?;
        let mut exp = (q - 1) * if ring.p() == 2 { 2 } else { 1 };
        let mut base = Self::reduce(ring, self.coeffs.clone());
        let mut acc = Self::reduce(ring, vec![BigRational::one()]);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = Self::mul(ring, &acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = Self::mul(ring, &base, &base);
            }
        }
        Ok(acc == Self::reduce(ring, vec![BigRational::one()]))
    }
}
