use crate::error::{Error, Result};
use crate::padic::PadicScalar;
use crate::series::{BivarTrunc, TruncSeries};

use super::ops::{check_group_axioms, AxiomReport};

/// Three-valued verdict used by every certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certification {
    Certified,
    CertifiedNegative,
    Indeterminate,
}

impl Certification {
    pub fn as_str(self) -> &'static str {
        match self {
            Certification::Certified => "certified",
            Certification::CertifiedNegative => "certified-negative",
            Certification::Indeterminate => "indeterminate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralityReport {
    pub status: Certification,
    /// Least certified coefficient valuation over all `(i, j)`.
    pub min_valuation: Option<i64>,
    pub worst: Option<(usize, usize)>,
    /// Least certified valuation in each `s_j`.
    pub per_sj_min: Vec<Option<i64>>,
    /// Coefficients only known as `O(p^N)` with `N < 0`.
    pub indeterminate: Vec<(usize, usize)>,
}

impl IntegralityReport {
    pub fn integral(&self) -> bool {
        self.status == Certification::Certified
    }
}

/// `S(X,Y) = L^{∘−1}(L(X) + L(Y))` together with the data it came from.
#[derive(Clone, Debug)]
pub struct GroupLaw {
    pub s: BivarTrunc,
    /// `L`, absent for laws given only by their coefficients.
    pub log: Option<TruncSeries>,
    /// `L^{∘−1}` at the cap of `L`.
    pub inverse: Option<TruncSeries>,
    pub integrality: IntegralityReport,
    pub axioms: AxiomReport,
}

impl GroupLaw {
    pub fn total_cap(&self) -> usize {
        self.s.total_cap()
    }
}

/// Builds the law at total degree `total_cap` (default: half the cap of `L`).
pub fn build_group_law(l: &TruncSeries, total_cap: Option<usize>) -> Result<GroupLaw> {
    let ring = l.ring();
    if !l.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if l.cap() < 1 || !l.coeff(1).agrees_with(&PadicScalar::one(ring)) {
        return Err(Error::InvalidInput("L'(0) must be 1".into()));
    }
    let t = total_cap.unwrap_or(l.cap() / 2).max(1);
    if t > l.cap() {
        return Err(Error::CapTooSmall {
            needed: t,
            cap: l.cap(),
        });
    }
    let inverse = l.comp_inverse()?;
    let sum = BivarTrunc::from_x(l, t)?.add(&BivarTrunc::from_y(l, t)?)?;
    let s = sum.compose_into(&inverse.truncate(t))?;
    let integrality = integrality_report(&s);
    let axioms = check_group_axioms(&s)?;
    Ok(GroupLaw {
        s,
        log: Some(l.clone()),
        inverse: Some(inverse),
        integrality,
        axioms,
    })
}

/// A law given by its coefficients alone, e.g. one supplied externally.
pub fn group_law_from_bivariate(s: BivarTrunc) -> Result<GroupLaw> {
    let integrality = integrality_report(&s);
    let axioms = check_group_axioms(&s)?;
    Ok(GroupLaw {
        s,
        log: None,
        inverse: None,
        integrality,
        axioms,
    })
}

pub fn integrality_report(s: &BivarTrunc) -> IntegralityReport {
    let t = s.total_cap();
    let mut per_sj_min = vec![None; t + 1];
    let mut min_valuation: Option<i64> = None;
    let mut worst = None;
    let mut indeterminate = Vec::new();
    let mut negative = false;
    for (i, j, c) in s.terms() {
        if let Some(v) = c.valuation() {
            if min_valuation.map_or(true, |m| v < m) {
                min_valuation = Some(v);
                worst = Some((i, j));
            }
            per_sj_min[j] = Some(per_sj_min[j].map_or(v, |m: i64| m.min(v)));
            negative |= v < 0;
        } else if c.is_integral().is_none() {
            indeterminate.push((i, j));
        }
    }
    let status = if negative {
        Certification::CertifiedNegative
    } else if !indeterminate.is_empty() {
        Certification::Indeterminate
    } else {
        Certification::Certified
    };
    IntegralityReport {
        status,
        min_valuation,
        worst,
        per_sj_min,
        indeterminate,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorialBound {
    pub status: Certification,
    /// First `(i, j)` whose coefficient violates `val ≥ −val_p(j!)`.
    pub first_failure: Option<(usize, usize)>,
    pub indeterminate: Vec<(usize, usize)>,
}

/// `val_p(j!) = (j − s_p(j)) / (p − 1)`.
pub fn factorial_valuation(j: u64, p: u64) -> i64 {
    let mut digits = 0;
    let mut n = j;
    while n > 0 {
        digits += n % p;
        n /= p;
    }
    ((j - digits) / (p - 1)) as i64
}

/// Checks `s_j(X) ∈ j!^{−1}·O[[X]]` on every known coefficient.
pub fn factorial_bound_check(g: &GroupLaw) -> FactorialBound {
    let p = g.s.ring().p();
    let mut first_failure = None;
    let mut indeterminate = Vec::new();
    for (i, j, c) in g.s.terms() {
        let bound = -factorial_valuation(j as u64, p);
        match c.valuation_lower_bound() {
            None => {}
            Some(v) if v >= bound => {}
            Some(_) if c.is_nonzero() => {
                if first_failure.is_none() {
                    first_failure = Some((i, j));
                }
            }
            Some(_) => indeterminate.push((i, j)),
        }
    }
    let status = if first_failure.is_some() {
        Certification::CertifiedNegative
    } else if !indeterminate.is_empty() {
        Certification::Indeterminate
    } else {
        Certification::Certified
    };
    FactorialBound {
        status,
        first_failure,
        indeterminate,
    }
}
