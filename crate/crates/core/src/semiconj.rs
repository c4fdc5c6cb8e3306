//! Semi-conjugacies `f ∘ h = h ∘ f₀` with `h(X) = X^m`.

use crate::dynamics::{check_commute, criterion_b, CriterionBDiagnosis};
use crate::error::{Error, Result};
use crate::padic::{mth_root_unit, residue_mth_root, teichmuller, Embedding, PadicScalar, ResidueElem, RingConfig};
use crate::series::{
    root_valuations, series_mth_root_unit, weierstrass_prep, Agreement, Polynomial, RootValuation,
    TruncSeries,
};

/// Intermediate factors of `f = X · g · [c] · (1 + w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiConjPieces {
    pub g: Polynomial,
    pub g0: Polynomial,
    pub v: TruncSeries,
    pub w: TruncSeries,
    pub w0: TruncSeries,
}

#[derive(Clone, Debug)]
pub struct SemiConjugacy {
    pub f: TruncSeries,
    pub m: u64,
    /// `X^m` over the base ring.
    pub h: TruncSeries,
    /// Over `extension`.
    pub f0: TruncSeries,
    pub extension: RingConfig,
    pub embedding: Embedding,
    pub extension_degree: usize,
    /// Residue of `v(0)` and its chosen m-th root.
    pub c: ResidueElem,
    pub c_root: ResidueElem,
    pub pieces: SemiConjPieces,
    /// Agreement of `f(X^m)` with `f₀^m`.
    pub agreement: Agreement,
}

pub fn build_f0(f: &TruncSeries, m: u64) -> Result<SemiConjugacy> {
    build_f0_with_cap(f, m, f.cap())
}

/// `f₀ = [c^{1/m}] · X · g₀(X^m) · (1 + w₀(X^m))` at the given cap.
pub fn build_f0_with_cap(f: &TruncSeries, m: u64, cap: usize) -> Result<SemiConjugacy> {
    let ring = f.ring();
    let crit = criterion_b(f, m)?;
    if !crit.holds {
        return Err(Error::InvalidInput(format!(
            "the m-th root construction does not apply: {}",
            describe(&crit.diagnosis)
        )));
    }
    let g0 = crit.g0.expect("criterion B supplies g₀");
    let split = weierstrass_prep(f)?;
    // When deg f = 1 + deg g the unit part is exactly the leading coefficient.
    let constant = f.is_polynomial() && f.degree() == Some(1 + split.degree());
    let v = if constant {
        let lead = f.coeff(1 + split.degree()).clone();
        TruncSeries::polynomial(ring, vec![lead], split.unit.cap())?
    } else {
        split.unit.clone()
    };
    let mu = m as usize;
    if cap > mu * (v.cap() + 1) {
        return Err(Error::CapTooSmall {
            needed: cap.div_ceil(mu),
            cap: v.cap() + 1,
        });
    }
    let c = v.coeff(0).residue()?;
    let c_lift = teichmuller(&c, ring)?;
    let one_plus_w = v.scalar_mul(&c_lift.invert()?)?;
    let w = one_plus_w.sub(&TruncSeries::one(ring, v.cap()))?;
    let one_plus_w0 = if constant {
        let c0 = mth_root_unit(one_plus_w.coeff(0), m, &ring.residue_field().one())?;
        TruncSeries::polynomial(ring, vec![c0], v.cap())?
    } else {
        series_mth_root_unit(&one_plus_w, m, &ring.residue_field().one())?
    };
    let w0 = one_plus_w0.sub(&TruncSeries::one(ring, v.cap()))?;

    let root = residue_mth_root(&c, m, ring)?;
    let e = root.embedding.clone();
    let lring = root.ring.clone();
    let c_root_lift = teichmuller(&root.root, &lring)?;

    let g0_sub = g0.to_series(g0.degree().unwrap_or(0))?.subst_power(mu, cap)?;
    let unit_sub = one_plus_w0.subst_power(mu, cap.saturating_sub(1))?;
    let mut body = g0_sub.truncate(cap.saturating_sub(1)).mul(&unit_sub)?.shift_up();
    if constant {
        body = body.assume_polynomial();
    }
    let f0 = body.embed(&e)?.scalar_mul(&c_root_lift)?;

    let fe = f.embed(&e)?;
    let lhs = fe.subst_power(mu, cap.min(mu * (fe.cap() + 1) - 1))?;
    let agreement = lhs.compare(&f0.pow(m)?)?;
    if let Some(k) = agreement.first_mismatch {
        return Err(Error::InvariantViolation(format!(
            "f(X^m) and f₀^m differ at degree {k}"
        )));
    }
    agreement.certified(1)?;
    let lambda = fe.coeff(1);
    if !f0.coeff(1).pow(m).agrees_with(lambda) {
        return Err(Error::InvariantViolation("f₀'(0)^m ≠ f'(0)".into()));
    }
    Ok(SemiConjugacy {
        f: f.clone(),
        m,
        h: TruncSeries::monomial(ring, PadicScalar::one(ring), mu, f.cap().max(mu)),
        f0,
        extension: lring,
        embedding: e,
        extension_degree: root.extension_degree,
        c,
        c_root: root.root,
        pieces: SemiConjPieces {
            g: crit.g,
            g0,
            v,
            w,
            w0,
        },
        agreement,
    })
}

fn describe(d: &CriterionBDiagnosis) -> String {
    match d {
        CriterionBDiagnosis::Holds => "holds".into(),
        CriterionBDiagnosis::DegreeNotDivisible { degree } => {
            format!("distinguished degree {degree} is not divisible by m")
        }
        CriterionBDiagnosis::NotMthPower => "distinguished part is not an m-th power".into(),
        CriterionBDiagnosis::NotSeparable => "g₀ is not separable".into(),
        CriterionBDiagnosis::DerivativeRootsNotContained => {
            "a root of f' is not a root of f".into()
        }
    }
}

/// `u₀` with `u₀^m = u(X^m)` and `u₀'(0) ≡ 1 mod 𝔪`, over the ring of `f₀`.
pub fn build_u0(u: &TruncSeries, sc: &SemiConjugacy) -> Result<TruncSeries> {
    let ring = u.ring();
    ring.ensure_same(sc.f.ring())?;
    let m = sc.m;
    let mu = m as usize;
    let d = u.coeff(1);
    let one = PadicScalar::one(ring);
    match (d - &one).valuation_lower_bound() {
        None => {}
        Some(v) if v >= 1 => {}
        Some(_) => {
            return Err(Error::NormalizationRequired(format!(
                "u'(0) = {d} is not ≡ 1 modulo the maximal ideal"
            )))
        }
    }
    let commute = check_commute(&sc.f, u)?;
    if !commute.commutes {
        return Err(Error::InvalidInput("u does not commute with f".into()));
    }
    let cap = sc.f0.cap();
    let big_u = u.shift_down()?;
    let sub = big_u.subst_power(mu, cap.min(mu * (big_u.cap() + 1) - 1))?;
    let root = series_mth_root_unit(&sub, m, &ring.residue_field().one())?;
    let u0 = root.shift_up().embed(&sc.embedding)?;
    let u0 = u0.truncate(cap.min(u0.cap()));

    let target = u.embed(&sc.embedding)?.subst_power(mu, u0.cap())?;
    let check = u0.pow(m)?.compare(&target)?;
    if let Some(k) = check.first_mismatch {
        return Err(Error::InvariantViolation(format!(
            "u₀^m and u(X^m) differ at degree {k}"
        )));
    }
    check.certified(1)?;
    let comm = check_commute(&sc.f0.truncate(u0.cap().min(sc.f0.cap())), &u0)?;
    if !comm.commutes {
        return Err(Error::InvariantViolation("u₀ does not commute with f₀".into()));
    }
    Ok(u0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiConjReport {
    pub holds: bool,
    pub first_failure: Option<usize>,
    pub precision: Option<i64>,
}

/// Whether `f ∘ h = h ∘ f_S` modulo `X^(cap+1)`.
pub fn verify_semiconjugacy(
    f: &TruncSeries,
    h: &TruncSeries,
    f_s: &TruncSeries,
) -> Result<SemiConjReport> {
    f.ring().ensure_same(h.ring())?;
    f.ring().ensure_same(f_s.ring())?;
    if !h.coeff(0).is_zero() || !f_s.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if h.coeffs().iter().all(PadicScalar::is_exact_zero) {
        return Err(Error::InvalidInput("h must be nonzero".into()));
    }
    let a = f.compose(h)?.compare(&h.compose(f_s)?)?;
    if a.first_mismatch.is_none() {
        a.certified(1)?;
    }
    Ok(SemiConjReport {
        holds: a.holds(),
        first_failure: a.first_mismatch,
        precision: a.precision,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportCheck {
    pub n: usize,
    /// Open-disk root valuations of `f₀^{∘n}`.
    pub root_valuations: Vec<RootValuation>,
    /// Distinguished part of `f₀^{∘n}/X` separable with nonzero constant term.
    pub simple_roots: bool,
    /// `f^{∘n}(X^m) = f₀^{∘n}(X)^m` at the cap.
    pub identity_holds: bool,
}

impl TransportCheck {
    pub fn holds(&self) -> bool {
        self.simple_roots && self.identity_holds
    }
}

pub fn multiplicity_transport_check(f: &TruncSeries, m: u64, n: usize) -> Result<TransportCheck> {
    if n > 3 {
        return Err(Error::InvalidInput("n must be at most 3".into()));
    }
    let sc = build_f0(f, m)?;
    if n == 0 {
        return Ok(TransportCheck {
            n,
            root_valuations: Vec::new(),
            simple_roots: true,
            identity_holds: true,
        });
    }
    let f0 = &sc.f0;
    let f0n = match (f0.is_polynomial(), f0.degree()) {
        (true, Some(d)) => f0.with_cap(d.pow(n as u32).max(f0.cap()))?.iterate(n)?,
        _ => f0.iterate(n)?,
    };
    let vals = root_valuations(&f0n)?;
    let split = weierstrass_prep(&f0n)?;
    let g = &split.distinguished;
    let g0 = g.coeff(0);
    if g0.is_zero_at_precision() {
        return Err(Error::PrecisionExhausted(format!(
            "constant term of the distinguished part is {g0}"
        )));
    }
    let simple_roots = !g0.is_exact_zero() && g.is_separable()?;

    let mu = m as usize;
    let cap = f0.cap();
    let fe = sc.f.embed(&sc.embedding)?;
    let fn_ = fe.iterate(n)?;
    let lhs = fn_.subst_power(mu, cap.min(mu * (fn_.cap() + 1) - 1))?;
    let rhs = f0n.truncate(cap).pow(m)?;
    let a = lhs.compare(&rhs)?;
    if a.first_mismatch.is_none() {
        a.certified(1)?;
    }
    Ok(TransportCheck {
        n,
        root_valuations: vals,
        simple_roots,
        identity_holds: a.holds(),
    })
}
