use crate::error::{Error, Result};
use crate::padic::{ExactElement, PadicScalar};
use crate::series::TruncSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnstableReason {
    Zero,
    RootOfUnity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    Stable,
    Unstable(UnstableReason),
    /// `g'(0)^e = 1` to the given absolute precision, with no exact data to
    /// settle it.
    UnstableAtPrecision { precision: i64 },
}

impl Stability {
    pub fn is_stable(self) -> bool {
        self == Stability::Stable
    }
}

/// Exponent `e` such that every root of unity in `O_L` satisfies `ζ^e = 1`.
pub(crate) fn root_of_unity_exponent(p: u64, s: usize) -> u64 {
    let e = p.pow(s as u32) - 1;
    if p == 2 {
        2 * e
    } else {
        e
    }
}

/// Whether `g'(0)` is neither 0 nor a root of unity. `exact` carries the
/// exact value of `g'(0)` when the input was rational data.
pub fn is_stable(g: &TruncSeries, exact: Option<&ExactElement>) -> Result<Stability> {
    if !g.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if g.cap() < 1 {
        return Err(Error::CapTooSmall { needed: 1, cap: 0 });
    }
    let a = g.coeff(1);
    multiplier_stability(a, exact)
}

pub fn multiplier_stability(a: &PadicScalar, exact: Option<&ExactElement>) -> Result<Stability> {
    let ring = a.ring();
    if a.is_exact_zero() || exact.is_some_and(|e| e.is_zero()) {
        return Ok(Stability::Unstable(UnstableReason::Zero));
    }
    let Some(v) = a.valuation() else {
        return Err(Error::PrecisionExhausted(format!(
            "g'(0) = {a} is not certified nonzero"
        )));
    };
    if v != 0 {
        return Ok(Stability::Stable);
    }
    let e = root_of_unity_exponent(ring.p(), ring.residue_degree());
    let diff = &a.pow(e) - &PadicScalar::one(ring);
    if diff.is_nonzero() {
        return Ok(Stability::Stable);
    }
    match exact {
        Some(x) => Ok(if x.is_root_of_unity(ring)? {
            Stability::Unstable(UnstableReason::RootOfUnity)
        } else {
            Stability::Stable
        }),
        None => Ok(Stability::UnstableAtPrecision {
            precision: diff.absolute_precision().unwrap_or(i64::MAX),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::RingConfig;

    fn lin(r: &RingConfig, a: i64) -> TruncSeries {
        TruncSeries::from_ints(r, &[0, a, 1], 4).unwrap()
    }

    #[test]
    fn examples() {
        let r = RingConfig::padic(3, 20).unwrap();
        assert_eq!(is_stable(&lin(&r, 4), None).unwrap(), Stability::Stable);
        let minus_one = ExactElement::from_int(-1);
        assert_eq!(
            is_stable(&lin(&r, -1), Some(&minus_one)).unwrap(),
            Stability::Unstable(UnstableReason::RootOfUnity)
        );
        assert!(matches!(
            is_stable(&lin(&r, -1), None).unwrap(),
            Stability::UnstableAtPrecision { .. }
        ));
        assert_eq!(
            is_stable(&lin(&r, 0), None).unwrap(),
            Stability::Unstable(UnstableReason::Zero)
        );
        assert_eq!(is_stable(&lin(&r, 3), None).unwrap(), Stability::Stable);
    }

    #[test]
    fn two_adic_minus_one() {
        let r = RingConfig::padic(2, 20).unwrap();
        let e = ExactElement::from_int(-1);
        assert_eq!(
            is_stable(&lin(&r, -1), Some(&e)).unwrap(),
            Stability::Unstable(UnstableReason::RootOfUnity)
        );
        let e = ExactElement::from_int(3);
        assert_eq!(is_stable(&lin(&r, 3), Some(&e)).unwrap(), Stability::Stable);
    }
}
