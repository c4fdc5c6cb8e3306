use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::padic::{ExactElement, PadicScalar};
use crate::series::{weierstrass_degree, TruncSeries, Wideg};

use super::commute::{check_commute, multiplier};
use super::lubin::{lubin_log, LubinLog};
use super::stability::{is_stable, Stability};

/// A noninvertible stable `f` with registered invertible commuters.
#[derive(Debug)]
pub struct DynamicalSystem {
    f: TruncSeries,
    multiplier: PadicScalar,
    commuters: Vec<TruncSeries>,
    wideg: OnceLock<Result<Wideg>>,
    log: OnceLock<Result<LubinLog>>,
}

impl DynamicalSystem {
    /// `exact_multiplier` is the exact value of `f'(0)` when known.
    pub fn new(f: TruncSeries, exact_multiplier: Option<&ExactElement>) -> Result<Self> {
        let multiplier = multiplier(&f)?;
        match is_stable(&f, exact_multiplier)? {
            Stability::Stable => {}
            other => {
                return Err(Error::InvalidInput(format!(
                    "f is not stable: {other:?}"
                )))
            }
        }
        Ok(Self {
            f,
            multiplier,
            commuters: Vec::new(),
            wideg: OnceLock::new(),
            log: OnceLock::new(),
        })
    }

    pub fn f(&self) -> &TruncSeries {
        &self.f
    }

    pub fn multiplier(&self) -> &PadicScalar {
        &self.multiplier
    }

    pub fn commuters(&self) -> &[TruncSeries] {
        &self.commuters
    }

    /// Adds `u` after certifying `u'(0)` a unit and `u∘f = f∘u`.
    pub fn register_commuter(&mut self, u: TruncSeries) -> Result<()> {
        if !u.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        if !u.coeff(1).is_unit() {
            return Err(Error::NotUnit(format!("u'(0) = {} is not a unit", u.coeff(1))));
        }
        let report = check_commute(&self.f, &u)?;
        if !report.commutes {
            return Err(Error::InvalidInput(format!(
                "u does not commute with f (degree {})",
                report.first_failure.unwrap_or(0)
            )));
        }
        self.commuters.push(u);
        Ok(())
    }

    pub fn wideg(&self) -> Result<Wideg> {
        self.wideg.get_or_init(|| weierstrass_degree(&self.f)).clone()
    }

    pub fn lubin_log(&self) -> Result<&LubinLog> {
        self.log
            .get_or_init(|| lubin_log(&self.f))
            .as_ref()
            .map_err(Clone::clone)
    }
}
