//! Residue-field m-th roots and the unramified extensions they may require.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::config::RingConfig;
use super::residue::{smallest_irreducible, ResidueElem, ResidueField, EXHAUSTIVE_LIMIT};
use super::scalar::PadicScalar;
use crate::error::{Error, Result};

/// A `Z_p`-algebra embedding `O_K -> O_L` of unramified rings, determined by
/// the image of the generator of `O_K` (a root of its modulus in `O_L`).
#[derive(Clone, Debug)]
pub struct Embedding {
    source: RingConfig,
    target: RingConfig,
    generator_image: PadicScalar,
}

impl Embedding {
    pub fn source(&self) -> &RingConfig {
        &self.source
    }

    pub fn target(&self) -> &RingConfig {
        &self.target
    }

    pub fn generator_image(&self) -> &PadicScalar {
        &self.generator_image
    }

    pub fn identity(ring: &RingConfig) -> Self {
        let s = ring.residue_degree();
        let generator_image = if s == 1 {
            // The generator of Z_p[x]/(x - a) is a itself.
            PadicScalar::from_bigint(ring, &-&ring.modulus()[0])
        } else {
            let mut c = vec![BigInt::zero(); s];
            c[1] = BigInt::one();
            PadicScalar::from_integer_poly(ring, c)
        };
        Self {
            source: ring.clone(),
            target: ring.clone(),
            generator_image,
        }
    }

    /// Builds the embedding sending the generator to the lexicographically
    /// smallest residue root of the source modulus, Hensel-lifted.
    pub fn new(source: &RingConfig, target: &RingConfig) -> Result<Self> {
        if source.p() != target.p() || target.residue_degree() % source.residue_degree() != 0 {
            return Err(Error::InvalidInput(
                "target is not an extension of the source".into(),
            ));
        }
        if source.rel_precision() != target.rel_precision() {
            return Err(Error::InvalidInput("precision differs".into()));
        }
        let modulus: Vec<PadicScalar> = source
            .modulus()
            .iter()
            .map(|c| PadicScalar::from_bigint(target, c))
            .collect();
        let field = target.residue_field();
        let modulus_res: Vec<ResidueElem> = modulus
            .iter()
            .map(|c| c.residue())
            .collect::<Result<_>>()?;
        let eval_res = |x: &ResidueElem| {
            modulus_res
                .iter()
                .rev()
                .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
        };
        if field.order().map_or(true, |q| q > EXHAUSTIVE_LIMIT) {
            return Err(Error::Unsupported(
                "embedding search requires a residue field of size <= 2^16".into(),
            ));
        }
        let root = field
            .elements()
            .find(|x| eval_res(x).is_zero())
            .ok_or_else(|| Error::InvariantViolation("modulus has no root in target".into()))?;
        let deriv: Vec<PadicScalar> = modulus
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale_int(i as i64))
            .collect();
        let eval = |coeffs: &[PadicScalar], x: &PadicScalar| {
            coeffs
                .iter()
                .rev()
                .fold(PadicScalar::zero(target), |acc, c| &(&acc * x) + c)
        };
        let mut theta = PadicScalar::lift_residue(target, &root);
        for _ in 0..=2 * target.rel_precision() + 2 {
            let value = eval(&modulus, &theta);
            if value.is_zero() {
                return Ok(Self {
                    source: source.clone(),
                    target: target.clone(),
                    generator_image: theta,
                });
            }
            theta = &theta - &value.try_div(&eval(&deriv, &theta))?;
        }
        Err(Error::InvariantViolation("Hensel lift of generator diverged".into()))
    }

    pub fn apply(&self, x: &PadicScalar) -> Result<PadicScalar> {
        self.source.ensure_same(x.ring())?;
        if self.source == self.target {
            return Ok(x.clone());
        }
        match x.unit() {
            None => {
                if x.is_exact_zero() {
                    Ok(PadicScalar::zero(&self.target))
                } else {
                    Ok(PadicScalar::zero_at(
                        &self.target,
                        x.absolute_precision().unwrap(),
                    ))
                }
            }
            Some(unit) => {
                let mut acc = PadicScalar::zero(&self.target);
                let mut power = PadicScalar::one(&self.target);
                for c in unit {
                    if !c.is_zero() {
                        acc = &acc + &(&PadicScalar::from_bigint(&self.target, c) * &power);
                    }
                    power = &power * &self.generator_image;
                }
                Ok(acc
                    .truncate_precision(x.precision())
                    .shift(x.valuation().unwrap()))
            }
        }
    }

    pub fn apply_residue(&self, c: &ResidueElem) -> Result<ResidueElem> {
        self.apply(&PadicScalar::lift_residue(&self.source, c))?
            .residue()
    }
}

/// An m-th root of a residue element, possibly in an extension.
#[derive(Clone, Debug)]
pub struct ResidueRoot {
    pub root: ResidueElem,
    /// Relative degree `t` of the residue field containing the root.
    pub extension_degree: usize,
    /// The ring the root lives in (the input ring when `t = 1`).
    pub ring: RingConfig,
    pub embedding: Embedding,
}

fn ensure_small(field: &ResidueField) -> Result<u128> {
    match field.order() {
        Some(q) if q <= EXHAUSTIVE_LIMIT => Ok(q),
        _ => Err(Error::Unsupported(
            "residue m-th roots with gcd(m, q - 1) > 1 need a field of size <= 2^16".into(),
        )),
    }
}

/// Lexicographically smallest m-th root of `c` in `field`, assuming one exists.
fn smallest_root(field: &ResidueField, c: &ResidueElem, m: u64) -> Result<ResidueElem> {
    let q = field
        .order()
        .ok_or_else(|| Error::Unsupported("residue field too large".into()))?;
    let g = (m as u128).gcd(&(q - 1));
    if g == 1 {
        // x -> x^m is a bijection; invert the exponent modulo q - 1.
        let inv = BigInt::from(m)
            .modinv(&BigInt::from(q - 1))
            .and_then(|e| e.to_u128())
            .expect("m invertible mod q - 1");
        return Ok(field.pow(c, inv));
    }
    ensure_small(field)?;
    field
        .elements()
        .find(|x| field.pow(x, m as u128) == *c)
        .ok_or_else(|| Error::NotMthPower(format!("{c:?} has no {m}-th root")))
}

/// Smallest `t` such that `c in F_q^*` is an m-th power in `F_{q^t}`.
fn root_field_degree(q: u128, c_order_divides: &ResidueField, c: &ResidueElem, m: u64) -> usize {
    let qb = BigInt::from(q);
    let qm1 = &qb - 1u32;
    for t in 1usize.. {
        let qt = num_traits::pow(qb.clone(), t) - 1u32;
        let g = qt.gcd(&BigInt::from(m));
        // c^((q^t - 1)/g) with the exponent reduced modulo q - 1.
        let e = (&qt / &g).mod_floor(&qm1);
        let e = e.to_u128().expect("reduced exponent fits");
        if c_order_divides.pow(c, e) == c_order_divides.one() {
            return t;
        }
    }
    unreachable!()
}

/// An m-th root of the nonzero residue `c` of `ring`, in the smallest residue
/// field extension containing one. New moduli are the smallest lexicographic
/// irreducibles and roots are lexicographically smallest.
pub fn residue_mth_root(c: &ResidueElem, m: u64, ring: &RingConfig) -> Result<ResidueRoot> {
    let p = ring.p();
    if c.is_zero() {
        return Err(Error::InvalidInput("m-th root of zero residue".into()));
    }
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    if m.gcd(&p) != 1 {
        return Err(Error::UnsupportedRamifiedRoot { m, p });
    }
    let field = ring.residue_field();
    if field.is_mth_power(c, m)? {
        return Ok(ResidueRoot {
            root: smallest_root(field, c, m)?,
            extension_degree: 1,
            ring: ring.clone(),
            embedding: Embedding::identity(ring),
        });
    }
    let q = field
        .order()
        .ok_or_else(|| Error::Unsupported("residue field too large".into()))?;
    let t = root_field_degree(q, field, c, m);
    let s = ring.residue_degree();
    let modulus = smallest_irreducible(p, s * t)?;
    let target = RingConfig::new(
        p,
        modulus.into_iter().map(BigInt::from).collect(),
        ring.rel_precision(),
    )?;
    let embedding = Embedding::new(ring, &target)?;
    let c_big = embedding.apply_residue(c)?;
    let root = smallest_root(target.residue_field(), &c_big, m)?;
    Ok(ResidueRoot {
        root,
        extension_degree: t,
        ring: target,
        embedding,
    })
}
