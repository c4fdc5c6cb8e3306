//! Finite fields `F_{p^s} = F_p[x]/(modulus)` and the polynomial arithmetic
//! over `F_p` needed to test and search for irreducible moduli.

use crate::error::{Error, Result};

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub(crate) fn powmod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, p);
        }
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn invmod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        None
    } else {
        Some(powmod(a, p - 2, p))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % small == 0 {
            return n == small;
        }
    }
    // Deterministic Miller-Rabin for 64-bit integers.
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over `F_p`, lowest degree first, without trailing zeros.
pub(crate) mod fp_poly {
    use super::*;

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| submod(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0), p))
            .collect();
        trim(out)
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = addmod(out[i + j], mulmod(x, y, p), p);
            }
        }
        trim(out)
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let dm = m.len() - 1;
        let lead_inv = invmod(m[dm], p).expect("nonzero leading coefficient");
        while r.len() > dm && !r.is_empty() {
            let shift = r.len() - 1 - dm;
            let factor = mulmod(*r.last().unwrap(), lead_inv, p);
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = submod(r[shift + i], mulmod(factor, c, p), p);
            }
            r = trim(r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn powmod_poly(base: &[u64], mut exp: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            exp >>= 1;
        }
        acc
    }

    /// `x^(p^k) mod m` by repeated p-th powering.
    pub fn frobenius_power_of_x(k: usize, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = rem(&[0, 1], m, p);
        for _ in 0..k {
            acc = powmod_poly(&acc, p as u128, m, p);
        }
        acc
    }

    /// Rabin's irreducibility test for a monic polynomial.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let m = trim(m.to_vec());
        if m.len() < 2 {
            return false;
        }
        let n = m.len() - 1;
        if n == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        let full = frobenius_power_of_x(n, &m, p);
        if !sub(&full, &rem(&x, &m, p), p).is_empty() {
            return false;
        }
        for q in prime_factors(n as u64) {
            let h = frobenius_power_of_x(n / q as usize, &m, p);
            let g = gcd(&m, &sub(&h, &x, p), p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

/// An element of `F_{p^s}`: `s` coefficients in `[0, p)`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueElem(pub Vec<u64>);

impl ResidueElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Position in the canonical enumeration order, where the constant
    /// coefficient is the most significant digit.
    pub fn lex_index(&self, p: u64) -> u128 {
        self.0.iter().fold(0u128, |acc, &c| acc * p as u128 + c as u128)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueField {
    p: u64,
    /// Monic modulus mod p, lowest degree first, length `s + 1`.
    modulus: Vec<u64>,
}

impl ResidueField {
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidConfig(format!("{p} is not prime")));
        }
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidConfig(
                "modulus must be monic of degree >= 1".into(),
            ));
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidConfig(format!(
                "modulus {modulus:?} is reducible mod {p}"
            )));
        }
        Ok(Self { p, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Field size `p^s`, if it fits in a `u128`.
    pub fn order(&self) -> Option<u128> {
        (self.p as u128).checked_pow(self.degree() as u32)
    }

    pub fn zero(&self) -> ResidueElem {
        ResidueElem(vec![0; self.degree()])
    }

    pub fn one(&self) -> ResidueElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> ResidueElem {
        let mut v = vec![0; self.degree()];
        v[0] = n.rem_euclid(self.p as i64) as u64;
        ResidueElem(v)
    }

    /// Reduces an arbitrary coefficient vector into the field.
    pub fn element(&self, coeffs: &[u64]) -> ResidueElem {
        let reduced: Vec<u64> = coeffs.iter().map(|c| c % self.p).collect();
        let r = fp_poly::rem(&reduced, &self.modulus, self.p);
        let mut v = vec![0; self.degree()];
        v[..r.len()].copy_from_slice(&r);
        ResidueElem(v)
    }

    pub fn add(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        ResidueElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| addmod(x, y, self.p))
                .collect(),
        )
    }

    pub fn sub(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        ResidueElem(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| submod(x, y, self.p))
                .collect(),
        )
    }

    pub fn mul(&self, a: &ResidueElem, b: &ResidueElem) -> ResidueElem {
        self.element(&fp_poly::mul(&a.0, &b.0, self.p))
    }

    pub fn pow(&self, a: &ResidueElem, mut exp: u128) -> ResidueElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &ResidueElem) -> Result<ResidueElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let q = self
            .order()
            .ok_or_else(|| Error::Unsupported("residue field too large".into()))?;
        Ok(self.pow(a, q - 2))
    }

    /// All elements in canonical lexicographic order (constant coefficient
    /// most significant). Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = ResidueElem> + '_ {
        let s = self.degree();
        let p = self.p;
        let total = self.order().unwrap_or(u128::MAX);
        (0..total).map(move |mut idx| {
            let mut v = vec![0u64; s];
            for slot in v.iter_mut().rev() {
                *slot = (idx % p as u128) as u64;
                idx /= p as u128;
            }
            ResidueElem(v)
        })
    }

    /// Whether `c` is an m-th power, by `c^((q-1)/gcd(m, q-1)) = 1`.
    pub fn is_mth_power(&self, c: &ResidueElem, m: u64) -> Result<bool> {
        if c.is_zero() {
            return Ok(true);
        }
        let q = self
            .order()
            .ok_or_else(|| Error::Unsupported("residue field too large".into()))?;
        let g = num_integer::gcd(m as u128, q - 1);
        Ok(self.pow(c, (q - 1) / g) == self.one())
    }
}

/// Largest residue field searched exhaustively for roots.
pub const EXHAUSTIVE_LIMIT: u128 = 1 << 16;

/// The smallest monic irreducible polynomial of degree `n` over `F_p`, in the
/// lexicographic order of `(c_0, ..., c_{n-1})` with `c_0` most significant.
pub fn smallest_irreducible(p: u64, n: usize) -> Result<Vec<u64>> {
    if n == 1 {
        return Ok(vec![0, 1]);
    }
    let total = (p as u128)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::Unsupported("search space too large".into()))?;
    for mut idx in 0..total {
        let mut m = vec![0u64; n + 1];
        m[n] = 1;
        for slot in m[..n].iter_mut().rev() {
            *slot = (idx % p as u128) as u64;
            idx /= p as u128;
        }
        if m[0] != 0 && fp_poly::is_irreducible(&m, p) {
            return Ok(m);
        }
    }
    Err(Error::InvariantViolation(format!(
        "no irreducible polynomial of degree {n} over F_{p}"
    )))
}
