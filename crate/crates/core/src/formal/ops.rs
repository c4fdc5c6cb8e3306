use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::dynamics::{check_commute, CommuteReport};
use crate::error::{Error, Result};
use crate::padic::PadicScalar;
use crate::series::{BivarTrunc, TrivarTrunc, TruncSeries};

use super::law::{Certification, GroupLaw};

/// Outcome of one identity checked coefficientwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub status: Certification,
    /// Exponents of the first monomial whose difference is certified nonzero.
    pub first_failure: Option<Vec<usize>>,
    /// Least absolute precision among vanishing differences.
    pub precision: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub identity: AxiomCheck,
    pub commutativity: AxiomCheck,
    pub associativity: AxiomCheck,
}

impl AxiomReport {
    pub fn status(&self) -> Certification {
        let all = [
            self.identity.status,
            self.commutativity.status,
            self.associativity.status,
        ];
        if all.contains(&Certification::CertifiedNegative) {
            Certification::CertifiedNegative
        } else if all.contains(&Certification::Indeterminate) {
            Certification::Indeterminate
        } else {
            Certification::Certified
        }
    }
}

/// Differences known only to absolute precision below `floor` make the check
/// indeterminate. The floor is one digit past the worst denominator of `S`.
fn digit_floor(s: &BivarTrunc) -> i64 {
    let worst = s.terms().filter_map(|(_, _, c)| c.valuation()).min().unwrap_or(0);
    1 + worst.min(0)
}

fn certify<I>(diffs: I, floor: i64) -> AxiomCheck
where
    I: IntoIterator<Item = (Vec<usize>, PadicScalar)>,
{
    let mut precision: Option<i64> = None;
    for (mono, d) in diffs {
        if d.is_nonzero() {
            return AxiomCheck {
                status: Certification::CertifiedNegative,
                first_failure: Some(mono),
                precision,
            };
        }
        if let Some(n) = d.absolute_precision() {
            precision = Some(precision.map_or(n, |m| m.min(n)));
        }
    }
    let status = match precision {
        Some(n) if n < floor => Certification::Indeterminate,
        _ => Certification::Certified,
    };
    AxiomCheck {
        status,
        first_failure: None,
        precision,
    }
}

pub fn check_group_axioms(s: &BivarTrunc) -> Result<AxiomReport> {
    let ring = s.ring();
    let floor = digit_floor(s);
    let one = PadicScalar::one(ring);
    let identity = certify(
        s.terms()
            .filter(|(i, j, _)| *i == 0 || *j == 0)
            .map(|(i, j, c)| {
                let d = if i + j == 1 { c - &one } else { c.clone() };
                (vec![i, j], d)
            }),
        floor,
    );
    let commutativity = certify(
        s.terms()
            .filter(|(i, j, _)| i < j)
            .map(|(i, j, c)| (vec![i, j], c - s.coeff(j, i))),
        floor,
    );
    let left = TrivarTrunc::outer_left(s)?;
    let right = TrivarTrunc::outer_right(s)?;
    let associativity = certify(
        left.terms()
            .map(|(i, j, k, c)| (vec![i, j, k], c - right.coeff(i, j, k))),
        floor,
    );
    Ok(AxiomReport {
        identity,
        commutativity,
        associativity,
    })
}

fn log_pair(g: &GroupLaw) -> Result<(&TruncSeries, &TruncSeries)> {
    match (&g.log, &g.inverse) {
        (Some(l), Some(e)) => Ok((l, e)),
        _ => Err(Error::Unsupported(
            "law has no logarithm attached".into(),
        )),
    }
}

/// `[a](X) = L^{∘−1}(a·L(X))` at the cap of `L`.
pub fn endomorphism(g: &GroupLaw, a: &PadicScalar) -> Result<TruncSeries> {
    let (l, e) = log_pair(g)?;
    l.ring().ensure_same(a.ring())?;
    if a.is_exact_zero() {
        return Ok(TruncSeries::zero(l.ring(), l.cap()));
    }
    e.compose(&l.scalar_mul(a)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndomorphismCheck {
    pub holds: bool,
    pub first_failure: Option<(usize, usize)>,
    pub precision: Option<i64>,
}

/// Whether `S(g(X), g(Y)) = g(S(X,Y))` at the total cap of `S`.
pub fn is_endomorphism(g: &GroupLaw, u: &TruncSeries) -> Result<EndomorphismCheck> {
    let s = &g.s;
    let t = s.total_cap();
    s.ring().ensure_same(u.ring())?;
    if !u.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let u = u.with_cap(t)?.truncate(t);
    // Σ_j s_j(u(X)) · u(Y)^j
    let uy = BivarTrunc::from_y(&u, t)?;
    let mut uy_pow = BivarTrunc::one(s.ring(), t);
    let mut lhs = BivarTrunc::zero(s.ring(), t);
    for j in 0..=t {
        let sj = TruncSeries::new(s.ring(), s.s_j(j).into_coeffs(), t);
        let col = BivarTrunc::from_x(&sj.compose(&u)?, t)?;
        lhs = lhs.add(&col.mul(&uy_pow)?)?;
        uy_pow = uy_pow.mul(&uy)?;
    }
    let rhs = s.compose_into(&u)?;
    let check = certify(
        lhs.terms()
            .map(|(i, j, c)| (vec![i, j], c - rhs.coeff(i, j))),
        digit_floor(s),
    );
    match check.status {
        Certification::Indeterminate => Err(Error::PrecisionExhausted(format!(
            "endomorphism identity only known to p^{}",
            check.precision.unwrap_or(0)
        ))),
        status => Ok(EndomorphismCheck {
            holds: status == Certification::Certified,
            first_failure: check.first_failure.map(|m| (m[0], m[1])),
            precision: check.precision,
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnCommuter {
    /// `u_n(X) = S(X, f^{∘n}(X))`.
    pub series: TruncSeries,
    /// `u_n'(0) = 1 + f'(0)^n`.
    pub derivative_matches: bool,
    pub commute: CommuteReport,
}

pub fn un_commuter_check(g: &GroupLaw, f: &TruncSeries, n: usize) -> Result<UnCommuter> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    let t = g.total_cap();
    let ring = g.s.ring();
    let f = f.truncate(t.min(f.cap()));
    let fn_ = f.iterate(n)?;
    let series = g.s.substitute(&TruncSeries::x(ring, t), &fn_)?;
    let want = &PadicScalar::one(ring) + &f.coeff(1).pow(n as u64);
    let derivative_matches = series.coeff(1).agrees_with(&want);
    let commute = check_commute(&f, &series)?;
    Ok(UnCommuter {
        series,
        derivative_matches,
        commute,
    })
}

/// `b^a` for a 1-unit `b` and `a ∈ Z_p`, one base-`p` digit of `a` at a time.
pub fn one_unit_power(b: &PadicScalar, a: &PadicScalar) -> Result<PadicScalar> {
    let ring = b.ring();
    let p = ring.p();
    if a.ring().p() != p {
        return Err(Error::ConfigMismatch);
    }
    let one = PadicScalar::one(ring);
    let need = if p == 2 { 2 } else { 1 };
    let dist = (b - &one).valuation_lower_bound();
    let dist = match dist {
        None => return Ok(one),
        Some(d) if d >= need => d,
        Some(_) => {
            return Err(Error::NormalizationRequired(format!(
                "{b} is not ≡ 1 mod {}",
                if p == 2 { 4 } else { p }
            )))
        }
    };
    let (digits_of_a, known) = a
        .to_bigint_mod(ring.rel_precision())
        .ok_or_else(|| Error::InvalidInput(format!("exponent {a} is not in Z_p")))?;
    let pb = BigInt::from(p);
    let mut rest = digits_of_a;
    let mut base = b.clone();
    let mut acc = one.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(&pb);
        let r = r.to_u64().unwrap_or(0);
        if r > 0 {
            acc = &acc * &base.pow(r);
        }
        rest = q;
        if !rest.is_zero() {
            base = base.pow(p);
        }
    }
    // a is known mod p^known, so b^a is known mod p^(dist + known).
    Ok(acc.with_absolute_precision(dist + known as i64))
}

/// The `a`-th iterate of a commuter `u` with `u'(0)` a 1-unit, `a ∈ Z_p`.
pub fn padic_iterate(g: &GroupLaw, u: &TruncSeries, a: &PadicScalar) -> Result<TruncSeries> {
    let b = u.coeff(1);
    let power = one_unit_power(b, a)?;
    endomorphism(g, &power)
}

#[cfg(test)]
mod tests {
    use super::super::law::{build_group_law, group_law_from_bivariate};
    use super::*;
    use crate::dynamics::lubin_log;
    use crate::padic::RingConfig;
    use num_rational::BigRational;

    fn ints(r: &RingConfig, c: &[i64], cap: usize) -> TruncSeries {
        TruncSeries::from_ints(r, c, cap).unwrap()
    }

    fn gm(r: &RingConfig, cap: usize) -> GroupLaw {
        let f = ints(r, &[0, 5, 10, 10, 5, 1], cap);
        build_group_law(&lubin_log(&f).unwrap().series, None).unwrap()
    }

    fn cubic_law(cap: usize) -> (TruncSeries, GroupLaw) {
        let r = RingConfig::padic(3, 40).unwrap();
        let f = ints(&r, &[0, 3, 0, 1], cap);
        let g = build_group_law(&lubin_log(&f).unwrap().series, None).unwrap();
        (f, g)
    }

    #[test]
    fn axioms_of_known_laws() {
        let r = RingConfig::padic(5, 24).unwrap();
        let g = gm(&r, 12);
        assert_eq!(g.axioms.status(), Certification::Certified);
        let add = build_group_law(&TruncSeries::x(&r, 10), None).unwrap();
        assert_eq!(add.axioms.status(), Certification::Certified);
    }

    #[test]
    fn corrupted_law_fails_associativity() {
        let r = RingConfig::padic(3, 24).unwrap();
        let mut s = BivarTrunc::zero(&r, 6);
        s.set_coeff(1, 0, PadicScalar::one(&r));
        s.set_coeff(0, 1, PadicScalar::one(&r));
        s.set_coeff(1, 1, PadicScalar::one(&r));
        s.set_coeff(2, 2, PadicScalar::p_power(&r, -1));
        let g = group_law_from_bivariate(s).unwrap();
        assert_eq!(g.axioms.identity.status, Certification::Certified);
        assert_eq!(g.axioms.commutativity.status, Certification::Certified);
        let assoc = &g.axioms.associativity;
        assert_eq!(assoc.status, Certification::CertifiedNegative);
        // The defect X²Y²/p first disturbs associativity in total degree 4.
        let m = assoc.first_failure.clone().unwrap();
        assert_eq!(m.iter().sum::<usize>(), 4);
        assert!(!g.integrality.integral());
    }

    #[test]
    fn endomorphisms() {
        let r = RingConfig::padic(5, 24).unwrap();
        let g = gm(&r, 12);
        let one = endomorphism(&g, &PadicScalar::one(&r)).unwrap();
        assert!(one.compare(&TruncSeries::x(&r, 12)).unwrap().holds());
        let two = endomorphism(&g, &PadicScalar::from_int(&r, 2)).unwrap();
        assert!(two.compare(&ints(&r, &[0, 2, 1], 12)).unwrap().holds());
        assert!(is_endomorphism(&g, &ints(&r, &[0, 2, 1], 12)).unwrap().holds);
        assert!(is_endomorphism(&g, &TruncSeries::x(&r, 12)).unwrap().holds);
        let bad = is_endomorphism(&g, &ints(&r, &[0, 2], 12)).unwrap();
        assert!(!bad.holds);
        assert_eq!(bad.first_failure, Some((1, 1)));
        let zero = endomorphism(&g, &PadicScalar::zero(&r)).unwrap();
        assert!(zero.coeffs().iter().all(|c| c.is_zero()));
    }

    #[test]
    fn cubic_law_is_integral_and_reproduces_f() {
        let (f, g) = cubic_law(32);
        assert_eq!(g.total_cap(), 16);
        assert!(g.integrality.integral(), "{:?}", g.integrality);
        assert_eq!(g.axioms.status(), Certification::Certified);
        let three = endomorphism(&g, f.coeff(1)).unwrap();
        assert!(three.compare(&f).unwrap().holds());
        assert!(is_endomorphism(&g, &f).unwrap().holds);
        let fb = super::super::law::factorial_bound_check(&g);
        assert_eq!(fb.status, Certification::Certified);
    }

    #[test]
    fn chebyshev_law_not_integral() {
        let r = RingConfig::padic(3, 40).unwrap();
        let f = ints(&r, &[0, 9, 6, 1], 16);
        let g = build_group_law(&lubin_log(&f).unwrap().series, None).unwrap();
        assert_eq!(g.integrality.status, Certification::CertifiedNegative);
        assert!(g.integrality.min_valuation.unwrap() < 0);
    }

    #[test]
    fn un_commuters() {
        let r = RingConfig::padic(5, 24).unwrap();
        let g = gm(&r, 12);
        let f = ints(&r, &[0, 5, 10, 10, 5, 1], 12);
        let u = un_commuter_check(&g, &f, 1).unwrap();
        // (1+X)^6 − 1
        let want = ints(&r, &[0, 6, 15, 20, 15, 6, 1], 6);
        assert!(u.series.compare(&want).unwrap().holds());
        assert!(u.derivative_matches);
        assert!(u.commute.commutes);

        let (f, g) = cubic_law(20);
        let u = un_commuter_check(&g, &f, 1).unwrap();
        assert!(u.series.coeff(1).agrees_with_int(4));
        assert!(u.derivative_matches && u.commute.commutes);
    }

    #[test]
    fn padic_iterates() {
        let (f, g) = cubic_law(20);
        let r = f.ring().clone();
        let u = endomorphism(&g, &PadicScalar::from_int(&r, 4)).unwrap();
        let it1 = padic_iterate(&g, &u, &PadicScalar::one(&r)).unwrap();
        assert!(it1.compare(&u).unwrap().holds());
        let it2 = padic_iterate(&g, &u, &PadicScalar::from_int(&r, 2)).unwrap();
        assert!(it2.compare(&u.iterate(2).unwrap()).unwrap().holds());
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let a = PadicScalar::from_rational(&r, &half);
        let root = one_unit_power(&PadicScalar::from_int(&r, 4), &a).unwrap();
        assert!(root.agrees_with_int(-2));
        assert!(root.absolute_precision().unwrap() >= 30);
        let sq = padic_iterate(&g, &u, &a).unwrap();
        assert!(sq.coeff(1).agrees_with_int(-2));
        assert!(sq.iterate(2).unwrap().compare(&u).unwrap().holds());
        let two = PadicScalar::from_int(&r, 2);
        let v = endomorphism(&g, &two).unwrap();
        assert!(matches!(
            padic_iterate(&g, &v, &a),
            Err(Error::NormalizationRequired(_))
        ));
    }
}
