use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::series::{root_valuations, weierstrass_degree, TruncSeries, Wideg};

use super::commute::multiplier;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBoundCheck {
    pub n: usize,
    /// `wideg(f^{∘n})`, which should be `q^n`.
    pub wideg: usize,
    /// `1/(q^n − 1)`.
    pub bound: Ratio<i64>,
    pub min_root_valuation: Option<Ratio<i64>>,
    pub holds: bool,
}

/// Every nonzero root `z` of `f^{∘n}` in the open disk has
/// `val(z) ≥ 1/(q^n − 1)` with `q = wideg(f)`.
pub fn newton_root_bound_check(f: &TruncSeries, n: usize) -> Result<RootBoundCheck> {
    multiplier(f)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let q = match weierstrass_degree(f)? {
        Wideg::Finite(q) => q,
        Wideg::Infinite => return Err(Error::InfiniteWideg),
        Wideg::BeyondCap => {
            return Err(Error::CapTooSmall {
                needed: f.cap() + 1,
                cap: f.cap(),
            })
        }
    };
    let qn = q
        .checked_pow(n as u32)
        .filter(|&v| v <= 4096)
        .ok_or_else(|| Error::Unsupported(format!("wideg {q}^{n} is too large")))?;
    let fn_ = match (f.is_polynomial(), f.degree()) {
        (true, Some(d)) => f.with_cap(d.pow(n as u32).max(f.cap()))?.iterate(n)?,
        _ => f.iterate(n)?,
    };
    let wideg = match weierstrass_degree(&fn_)? {
        Wideg::Finite(w) => w,
        _ => {
            return Err(Error::CapTooSmall {
                needed: qn,
                cap: fn_.cap(),
            })
        }
    };
    if wideg != qn {
        return Err(Error::TheoremViolation(format!(
            "wideg of the {n}-th iterate is {wideg}, expected {qn}"
        )));
    }
    let bound = Ratio::new(1, qn as i64 - 1);
    let min_root_valuation = root_valuations(&fn_)?.iter().map(|r| r.valuation).min();
    let holds = min_root_valuation.map_or(true, |v| v >= bound);
    Ok(RootBoundCheck {
        n,
        wideg,
        bound,
        min_root_valuation,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::RingConfig;

    #[test]
    fn cubic_iterates() {
        let r = RingConfig::padic(3, 24).unwrap();
        let f = TruncSeries::from_ints(&r, &[0, 3, 0, 1], 8).unwrap();
        let c = newton_root_bound_check(&f, 1).unwrap();
        assert_eq!(c.min_root_valuation, Some(Ratio::new(1, 2)));
        assert!(c.holds);
        let c = newton_root_bound_check(&f, 2).unwrap();
        assert_eq!(c.wideg, 9);
        assert_eq!(c.min_root_valuation, Some(Ratio::new(1, 6)));
        assert!(c.holds);
        let c = newton_root_bound_check(&f, 3).unwrap();
        assert_eq!(c.bound, Ratio::new(1, 26));
        assert_eq!(c.min_root_valuation, Some(Ratio::new(1, 18)));
    }
}
