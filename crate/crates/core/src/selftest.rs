//! Regression suite over the worked examples, shared with the CLI.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::dynamics::{check_commute, criterion_a, criterion_b, lubin_log, solve_commuting};
use crate::error::{Error, Result};
use crate::formal::{
    build_group_law, check_group_axioms, endomorphism, is_endomorphism, un_commuter_check,
    Certification,
};
use crate::padic::{PadicScalar, RingConfig};
use crate::semiconj::{build_f0, verify_semiconjugacy};
use crate::series::TruncSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfCheck {
    pub name: &'static str,
    pub status: Certification,
    pub detail: String,
}

fn ints(r: &RingConfig, c: &[i64], cap: usize) -> Result<TruncSeries> {
    TruncSeries::from_ints(r, c, cap)
}

fn expect(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvariantViolation(what.to_string()))
    }
}

fn chebyshev_three(r: u32, cap: usize) -> Result<String> {
    let ring = RingConfig::padic(3, r)?;
    let f = ints(&ring, &[0, 9, 6, 1], cap)?;
    let u = ints(&ring, &[0, 4, 1], cap)?;
    expect(check_commute(&f, &u)?.commutes, "f and u commute")?;
    expect(criterion_b(&f, 2)?.holds, "criterion B holds for m = 2")?;
    let sc = build_f0(&f, 2)?;
    expect(sc.extension_degree == 1, "no extension needed")?;
    let want = ints(&ring, &[0, 3, 0, 1], cap)?;
    expect(sc.f0.compare(&want)?.holds(), "f0 = 3X + X^3")?;
    expect(
        verify_semiconjugacy(&f, &sc.h, &sc.f0)?.holds,
        "f(X^2) = f0(X)^2",
    )?;
    expect(sc.f0.coeff(1).pow(2).agrees_with_int(9), "f0'(0)^2 = 9")?;
    Ok("f0 = 3X + X^3, trivial extension".into())
}

fn criterion_a_fixtures(r: u32, cap: usize) -> Result<String> {
    let r3 = RingConfig::padic(3, r)?;
    let r2 = RingConfig::padic(2, r)?;
    expect(criterion_a(&ints(&r3, &[0, 3, 0, 1], cap)?)?.holds, "3X + X^3")?;
    let cheb = criterion_a(&ints(&r3, &[0, 9, 6, 1], cap)?)?;
    expect(!cheb.holds && cheb.witness == Some(1), "9X + 6X^2 + X^3 fails at degree 1")?;
    expect(!criterion_a(&ints(&r2, &[0, 4, 1], cap)?)?.holds, "4X + X^2 fails")?;
    Ok("true, false (witness 1), false".into())
}

fn chebyshev_two(r: u32, cap: usize) -> Result<String> {
    let ring = RingConfig::padic(2, r)?;
    let f = ints(&ring, &[0, 4, 1], cap)?;
    let f2 = f.iterate(2)?;
    expect(
        f2.compare(&ints(&ring, &[0, 16, 20, 8, 1], cap)?)?.holds(),
        "f∘f = X^4 + 8X^3 + 20X^2 + 16X",
    )?;
    let h: Vec<i64> = (0..=cap as i64)
        .map(|k| match k {
            0 | 1 => 0,
            k if k % 2 == 0 => 1,
            _ => -1,
        })
        .collect();
    let h = ints(&ring, &h, cap)?.forget_polynomial();
    let fs = ints(&ring, &[0, 2, 1], cap)?;
    expect(verify_semiconjugacy(&f, &h, &fs)?.holds, "f∘h = h∘(2X + X^2)")?;
    Ok("h = X^2/(1+X) semi-conjugates 2X + X^2 to 4X + X^2".into())
}

fn multiplicative_group(r: u32, cap: usize) -> Result<String> {
    let ring = RingConfig::padic(5, r)?;
    let f = ints(&ring, &[0, 5, 10, 10, 5, 1], cap)?;
    let log = lubin_log(&f)?;
    for k in 1..=cap as i64 {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let q = BigRational::new(BigInt::from(sign), BigInt::from(k));
        expect(log.series.coeff(k as usize).agrees_with_rational(&q), "log(1+X)")?;
    }
    let g = build_group_law(&log.series, Some(cap / 2))?;
    for (i, j, c) in g.s.terms() {
        let want = i64::from(matches!((i, j), (1, 0) | (0, 1) | (1, 1)));
        expect(c.agrees_with_int(want), "S = X + Y + XY")?;
    }
    let two = endomorphism(&g, &PadicScalar::from_int(&ring, 2))?;
    expect(two.compare(&ints(&ring, &[0, 2, 1], cap)?)?.holds(), "[2] = 2X + X^2")?;
    expect(
        is_endomorphism(&g, &ints(&ring, &[0, 2, 1], cap)?)?.holds,
        "(1+X)^2 - 1 is an endomorphism",
    )?;
    Ok(format!("S = X + Y + XY to total degree {}", cap / 2))
}

fn cubic_law(r: u32, cap: usize) -> Result<String> {
    let ring = RingConfig::padic(3, r)?;
    let f = ints(&ring, &[0, 3, 0, 1], cap)?;
    let u = solve_commuting(&f, &PadicScalar::from_int(&ring, 2))?;
    expect(check_commute(&f, &u.series)?.commutes, "commuter")?;
    let g = build_group_law(&lubin_log(&f)?.series, Some(cap / 2))?;
    expect(g.integrality.integral(), "law is integral")?;
    expect(
        check_group_axioms(&g.s)?.status() == Certification::Certified,
        "axioms",
    )?;
    expect(endomorphism(&g, f.coeff(1))?.compare(&f)?.holds(), "[3] = f")?;
    for n in 1..=2 {
        let un = un_commuter_check(&g, &f, n)?;
        expect(un.derivative_matches && un.commute.commutes, "u_n")?;
    }
    Ok(format!(
        "integral to total degree {}, min valuation {:?}",
        cap / 2,
        g.integrality.min_valuation
    ))
}

fn negative_control(r: u32, cap: usize) -> Result<String> {
    let ring = RingConfig::padic(3, r)?;
    let f = ints(&ring, &[0, 9, 6, 1], cap)?;
    let g = build_group_law(&lubin_log(&f)?.series, Some(cap / 2))?;
    expect(
        g.integrality.status == Certification::CertifiedNegative,
        "integrality fails",
    )?;
    Ok(format!(
        "min valuation {:?} at {:?}",
        g.integrality.min_valuation, g.integrality.worst
    ))
}

/// Runs every check at relative precision `r` and cap `cap`.
pub fn run_selftest(r: u32, cap: usize) -> Vec<SelfCheck> {
    type Check = fn(u32, usize) -> Result<String>;
    let checks: [(&'static str, Check); 6] = [
        ("chebyshev-p3-semiconjugacy", chebyshev_three),
        ("criterion-a-fixtures", criterion_a_fixtures),
        ("chebyshev-p2-identities", chebyshev_two),
        ("multiplicative-group-p5", multiplicative_group),
        ("cubic-law-integral", cubic_law),
        ("negative-control-integrality", negative_control),
    ];
    checks
        .iter()
        .map(|(name, check)| {
            let (status, detail) = match check(r, cap) {
                Ok(d) => (Certification::Certified, d),
                Err(Error::PrecisionExhausted(m)) => (Certification::Indeterminate, m),
                Err(e) => (Certification::CertifiedNegative, e.to_string()),
            };
            SelfCheck {
                name,
                status,
                detail,
            }
        })
        .collect()
}
