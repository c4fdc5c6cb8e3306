//! Seeded randomized suites, shared by the `properties` and `acceptance`
//! targets.

use std::fmt::Debug;

use num_rational::Ratio;
use padyn_core::dynamics::{
    check_commute, criterion_a, log_derivative_integral_check, lubin_log, lubin_log_limit,
    lubin_log_recursion, newton_root_bound_check, solve_commuting,
};
use padyn_core::formal::{
    build_group_law, check_group_axioms, endomorphism, factorial_bound_check, Certification,
    GroupLaw,
};
use padyn_core::padic::mth_root_unit;
use padyn_core::semiconj::{build_f0_with_cap, build_u0};
use padyn_core::series::{poly_root_valuations, series_mth_root_unit, weierstrass_prep, TruncSeries};
use padyn_core::{PadicScalar, RingConfig};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const CASES: u32 = 200;

fn seed(name: &str) -> [u8; 32] {
    // FNV-1a spread over the seed bytes.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut out = [0u8; 32];
    for (i, b) in name.bytes().chain(0..32).enumerate() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
        out[i % 32] ^= (h >> 24) as u8;
    }
    out
}

fn run<S>(name: &str, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S: Strategy,
    S::Value: Debug,
{
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        max_global_rejects: 20 * CASES,
        ..Config::default()
    };
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &seed(name));
    TestRunner::new_with_rng(config, rng)
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

/// Turns a core error into a test failure.
macro_rules! ok {
    ($e:expr) => {
        $e.map_err(|e| TestCaseError::fail(format!("{}: {e}", stringify!($e))))?
    };
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn scalar(ring: &RingConfig, v: i64, u: i64) -> PadicScalar {
    PadicScalar::from_int(ring, u).shift(v)
}

fn series(ring: &RingConfig, c: &[i64], cap: usize) -> TruncSeries {
    let mut coeffs = vec![0];
    coeffs.extend_from_slice(c);
    TruncSeries::from_ints(ring, &coeffs, cap).expect("fits the cap")
}

/// `(p, a, b, c)` as `(valuation, unit part)` pairs.
type ScalarTriple = (u64, [(i64, i64); 3]);

fn scalar_triples() -> impl Strategy<Value = ScalarTriple> {
    let s = (-3i64..6, -10_000i64..10_000);
    (prime(), [s.clone(), s.clone(), s])
}

pub fn scalar_ring_laws() -> Result<(), String> {
    run("scalar ring laws", scalar_triples(), |(p, t)| {
        let ring = RingConfig::padic(p, 12).unwrap();
        let [a, b, c] = t.map(|(v, u)| scalar(&ring, v, u));
        prop_assert!((&(&a + &b) + &c).agrees_with(&(&a + &(&b + &c))));
        prop_assert!((&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c))));
        prop_assert!((&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c))));
        prop_assert!((&a * &b).agrees_with(&(&b * &a)));
        prop_assert!((&a + &b).agrees_with(&(&b + &a)));
        if a.is_nonzero() && b.is_nonzero() {
            let ab = &a * &b;
            prop_assert_eq!(ab.valuation(), Some(a.valuation().unwrap() + b.valuation().unwrap()));
            let q = ok!(ab.try_div(&b));
            prop_assert!(q.agrees_with(&a));
        }
        Ok(())
    })
}

pub fn precision_soundness() -> Result<(), String> {
    run("precision soundness", scalar_triples(), |(p, t)| {
        let lo = RingConfig::padic(p, 10).unwrap();
        let hi = RingConfig::padic(p, 24).unwrap();
        let eval = |r: &RingConfig| -> Result<PadicScalar, TestCaseError> {
            let [a, b, c] = t.map(|(v, u)| scalar(r, v, u));
            let s = &(&a * &b) - &c;
            Ok(if s.is_nonzero() { ok!(a.try_div(&s)) } else { s })
        };
        let (x, y) = (eval(&lo)?, eval(&hi)?);
        prop_assert!(ok!(y.with_ring_precision(&lo)).agrees_with(&x), "{x:?} vs {y:?}");
        Ok(())
    })
}

pub fn mth_roots_of_units() -> Result<(), String> {
    let cases = (prime(), 2u64..6, [-5000i64..5000, -5000i64..5000], 1usize..3);
    run("m-th roots of units", cases, |(p, m, [t0, t1], s)| {
        prop_assume!(m % p != 0);
        let ring = RingConfig::unramified(p, s, 12).unwrap();
        let digits = if s == 1 { vec![t0.into()] } else { vec![t0.into(), t1.into()] };
        let t = PadicScalar::from_integer_poly(&ring, digits);
        prop_assume!(t.is_unit());
        let a = t.pow(m);
        let x = ok!(mth_root_unit(&a, m, &ok!(t.residue())));
        prop_assert!(x.pow(m).agrees_with(&a));
        prop_assert!(x.agrees_with(&t));
        Ok(())
    })
}

/// Random integral series with zero constant term and unit linear term.
fn invertible_series() -> impl Strategy<Value = (u64, Vec<i64>, Vec<i64>, Vec<i64>)> {
    let coeffs = || prop::collection::vec(-40i64..40, 1..8);
    (prime(), coeffs(), coeffs(), coeffs())
}

pub fn composition_laws() -> Result<(), String> {
    run("composition laws", invertible_series(), |(p, a, b, c)| {
        let ring = RingConfig::padic(p, 14).unwrap();
        let cap = 10;
        let unit = |mut v: Vec<i64>| {
            if v[0] % p as i64 == 0 {
                v[0] += 1;
            }
            series(&ring, &v, cap)
        };
        let (f, g) = (unit(a), unit(b));
        let h = series(&ring, &c, cap);
        let x = TruncSeries::x(&ring, cap);
        let left = ok!(ok!(f.compose(&g)).compose(&h));
        let right = ok!(f.compose(&ok!(g.compose(&h))));
        prop_assert!(ok!(left.compare(&right)).holds());
        prop_assert!(ok!(ok!(f.compose(&x)).compare(&f)).holds());
        prop_assert!(ok!(ok!(x.compose(&f)).compare(&f)).holds());
        let inv = ok!(f.comp_inverse());
        prop_assert!(ok!(ok!(f.compose(&inv)).compare(&x)).holds());
        prop_assert!(ok!(ok!(inv.compose(&f)).compare(&x)).holds());
        Ok(())
    })
}

/// Series over `Z_p` with zero constant term and a unit coefficient at
/// degree `q`; lower coefficients are divisible by `p`.
fn finite_wideg() -> impl Strategy<Value = (u64, usize, Vec<i64>, bool)> {
    (prime(), 1usize..6)
        .prop_flat_map(|(p, q)| (Just(p), Just(q), prop::collection::vec(-30i64..30, 9), any::<bool>()))
}

fn build_wideg(p: u64, q: usize, raw: &[i64], cap: usize, ring: &RingConfig, exact: bool) -> TruncSeries {
    let pi = p as i64;
    let mut c: Vec<i64> = raw.to_vec();
    for (i, x) in c.iter_mut().enumerate() {
        let deg = i + 1;
        if deg < q {
            *x *= pi;
        } else if deg == q && *x % pi == 0 {
            *x += 1;
        }
    }
    let f = series(ring, &c, cap);
    if exact {
        f
    } else {
        f.forget_polynomial()
    }
}

pub fn weierstrass_multiply_back() -> Result<(), String> {
    run("weierstrass multiply-back", finite_wideg(), |(p, q, raw, exact)| {
        let ring = RingConfig::padic(p, 14).unwrap();
        let f = build_wideg(p, q, &raw, 12, &ring, exact);
        let w = ok!(weierstrass_prep(&f));
        prop_assert!(ok!(w.recombine()).compare(&f).map(|a| a.holds()).unwrap_or(false));
        prop_assert_eq!(w.distinguished.degree(), Some(q - 1));
        prop_assert!(w.distinguished.is_distinguished());
        if q > 1 && w.distinguished.coeff(0).is_nonzero() {
            let roots = ok!(poly_root_valuations(&w.distinguished));
            prop_assert_eq!(roots.iter().map(|r| r.count).sum::<usize>(), q - 1);
        }
        Ok(())
    })
}

pub fn series_roots() -> Result<(), String> {
    let cases = (prime(), 2u64..5, prop::collection::vec(-30i64..30, 10));
    run("series m-th roots", cases, |(p, m, c)| {
        prop_assume!(m % p != 0);
        let ring = RingConfig::padic(p, 12).unwrap();
        let mut coeffs = c;
        coeffs[0] = 1 + p as i64 * coeffs[0];
        let v = TruncSeries::from_ints(&ring, &coeffs, 9).unwrap().forget_polynomial();
        let w = ok!(series_mth_root_unit(&v, m, &ring.residue_field().one()));
        prop_assert!(ok!(ok!(w.pow(m)).compare(&v)).holds());
        Ok(())
    })
}

pub fn newton_root_bound() -> Result<(), String> {
    let cases = (prime(), 2usize..5, prop::collection::vec(-20i64..20, 4), 1usize..4);
    run("newton root bound", cases, |(p, q, raw, n)| {
        prop_assume!(q.pow(n as u32) <= 64);
        let ring = RingConfig::padic(p, 12).unwrap();
        let pi = p as i64;
        let mut c: Vec<i64> = raw[..q].iter().map(|x| pi * x).collect();
        if c[0] == 0 {
            c[0] = pi;
        }
        c[q - 1] = if raw[q - 1] % pi == 0 { raw[q - 1] + 1 } else { raw[q - 1] };
        let f = series(&ring, &c, q);
        let check = ok!(newton_root_bound_check(&f, n));
        prop_assert_eq!(check.wideg, q.pow(n as u32));
        prop_assert_eq!(check.bound, Ratio::new(1, q.pow(n as u32) as i64 - 1));
        prop_assert!(check.holds, "{check:?}");
        Ok(())
    })
}

/// `f = p·u·X + p·(a₂X² + a₃X³ + a₄X⁴) + X⁵`.
fn stable_system() -> impl Strategy<Value = (u64, i64, Vec<i64>)> {
    (prime(), 1i64..30, prop::collection::vec(-20i64..20, 3))
}

fn build_stable(p: u64, u: i64, mid: &[i64], ring: &RingConfig, cap: usize) -> TruncSeries {
    let pi = p as i64;
    let unit = if u % pi == 0 { u + 1 } else { u };
    let mut c = vec![pi * unit];
    c.extend(mid.iter().map(|a| pi * a));
    c.push(1);
    series(ring, &c, cap)
}

pub fn solve_commuting_multiplicative() -> Result<(), String> {
    let cases = (stable_system(), -50i64..50, -50i64..50);
    run("solve_commuting multiplicativity", cases, |((p, u, mid), a, b)| {
        let ring = RingConfig::padic(p, 16).unwrap();
        let f = build_stable(p, u, &mid, &ring, 8);
        prop_assume!(a != 0 && b != 0);
        let (a, b) = (PadicScalar::from_int(&ring, a), PadicScalar::from_int(&ring, b));
        let ga = ok!(solve_commuting(&f, &a)).series;
        let gb = ok!(solve_commuting(&f, &b)).series;
        let gab = ok!(solve_commuting(&f, &(&a * &b))).series;
        let agreement = ok!(ok!(ga.compose(&gb)).compare(&gab));
        prop_assert!(agreement.holds(), "{agreement:?}");
        prop_assert!(ok!(check_commute(&f, &ga)).commutes);
        Ok(())
    })
}

pub fn lubin_log_agreement() -> Result<(), String> {
    run("lubin_log agreement", stable_system(), |(p, u, mid)| {
        let ring = RingConfig::padic(p, 12).unwrap();
        let f = build_stable(p, u, &mid, &ring, 8);
        let rec = ok!(lubin_log_recursion(&f));
        let (lim, _) = ok!(lubin_log_limit(&f));
        prop_assert!(ok!(rec.compare(&lim)).holds());
        let lhs = ok!(rec.compose(&f));
        let rhs = ok!(rec.scalar_mul(f.coeff(1)));
        prop_assert!(ok!(lhs.compare(&rhs)).holds());
        Ok(())
    })
}

/// Lubin-Tate series `p·u·X + p·(…) + X^p`.
fn lubin_tate(p: u64, u: i64, mid: &[i64], ring: &RingConfig, cap: usize) -> TruncSeries {
    let pi = p as i64;
    let unit = if u % pi == 0 { u + 1 } else { u };
    let mut c = vec![0; p as usize];
    c[0] = pi * unit;
    for (k, a) in mid.iter().enumerate().take(p as usize - 2) {
        c[k + 1] = pi * a;
    }
    c[p as usize - 1] = 1;
    series(ring, &c, cap)
}

pub fn lubin_tate_laws() -> Result<(), String> {
    let cases = (prop::sample::select(vec![2u64, 3, 5]), 1i64..30, prop::collection::vec(-9i64..9, 3));
    run("lubin-tate laws", cases, |(p, u, mid)| {
        let ring = RingConfig::padic(p, 10).unwrap();
        let cap = 10;
        let f = lubin_tate(p, u, &mid, &ring, cap);
        prop_assert!(ok!(criterion_a(&f)).holds);
        let log = ok!(lubin_log(&f));
        prop_assert!(log.agreement.holds());
        prop_assert!(ok!(log_derivative_integral_check(&log.series)).holds);
        let commuter = ok!(solve_commuting(&f, &PadicScalar::from_int(&ring, 1 + p as i64)));
        prop_assert!(commuter.integral);
        let g = ok!(build_group_law(&log.series, Some(5)));
        prop_assert!(factorial_bound_check(&g).status != Certification::CertifiedNegative);
        prop_assert!(g.integrality.status != Certification::CertifiedNegative);
        prop_assert!(ok!(check_group_axioms(&g.s)).status() != Certification::CertifiedNegative);
        let endo = ok!(endomorphism(&g, f.coeff(1)));
        prop_assert!(ok!(endo.compare(&f.truncate(5))).holds());
        Ok(())
    })
}

pub fn simple_roots_of_iterates() -> Result<(), String> {
    let cases = (prop::sample::select(vec![2u64, 3]), 1i64..30, prop::collection::vec(-9i64..9, 3), 1usize..4);
    run("simple roots of iterates", cases, |(p, u, mid, n)| {
        let ring = RingConfig::padic(p, 16).unwrap();
        let cap = (p as usize).pow(n as u32);
        let f = lubin_tate(p, u, &mid, &ring, cap);
        let w = ok!(weierstrass_prep(&ok!(f.iterate(n))));
        prop_assert_eq!(w.distinguished.degree(), Some(cap - 1));
        prop_assert!(ok!(w.distinguished.is_separable()));
        Ok(())
    })
}

fn endo_laws() -> Vec<GroupLaw> {
    let r5 = RingConfig::padic(5, 12).unwrap();
    let r3 = RingConfig::padic(3, 12).unwrap();
    let gm = series(&r5, &[5, 10, 10, 5, 1], 12);
    let cubic = series(&r3, &[3, 0, 1], 12);
    [gm, cubic]
        .iter()
        .map(|f| build_group_law(&lubin_log(f).unwrap().series, Some(6)).unwrap())
        .collect()
}

pub fn endomorphism_ring_action() -> Result<(), String> {
    let laws = endo_laws();
    let cases = (0usize..2, -500i64..500, -500i64..500);
    run("endomorphism ring action", cases, |(which, a, b)| {
        let g = &laws[which];
        let ring = g.s.ring();
        let (a, b) = (PadicScalar::from_int(ring, a), PadicScalar::from_int(ring, b));
        let ea = ok!(endomorphism(g, &a));
        let eb = ok!(endomorphism(g, &b));
        let prod = ok!(endomorphism(g, &(&a * &b)));
        let sum = ok!(endomorphism(g, &(&a + &b)));
        prop_assert!(ok!(ok!(ea.compose(&eb)).compare(&prod)).holds());
        prop_assert!(ok!(ok!(g.s.substitute(&ea, &eb)).compare(&sum)).holds());
        Ok(())
    })
}

/// `f₀ = X·φ(X^m)` with Criterion A, `p ∤ m`.
fn f0_family() -> impl Strategy<Value = (u64, u64, i64, Vec<i64>, i64)> {
    (prop::sample::select(vec![2u64, 3, 5, 7]), prop::sample::select(vec![2u64, 3]))
        .prop_filter("m prime to p", |(p, m)| m % p != 0)
        .prop_flat_map(|(p, m)| {
            (Just(p), Just(m), 1i64..30, prop::collection::vec(-9i64..9, 4), -9i64..9)
        })
}

/// Exponent `j ≥ 1` where `p | 1 + m·j`: the unit coefficient of `φ`.
fn unit_index(p: u64, m: u64) -> usize {
    (1..).find(|j| (1 + m * j) % p == 0).unwrap() as usize
}

pub fn build_f0_roundtrip() -> Result<(), String> {
    run("build_f0 roundtrip", f0_family(), |(p, m, u, mid, k)| {
        let ring = RingConfig::padic(p, 12).unwrap();
        let pi = p as i64;
        let j = unit_index(p, m);
        let mut phi = vec![0i64; j + 1];
        phi[0] = pi * if u % pi == 0 { u + 1 } else { u };
        for (i, a) in mid.iter().enumerate().take(j.saturating_sub(1)) {
            phi[i + 1] = pi * a;
        }
        phi[j] = if mid[3] % pi == 0 { mid[3] + 1 } else { mid[3] };
        let m_us = m as usize;
        let deg0 = 1 + m_us * j;
        let cap = deg0 * m_us;
        let mut c0 = vec![0i64; deg0 + 1];
        for (i, a) in phi.iter().enumerate() {
            c0[1 + m_us * i] = *a;
        }
        let f0 = TruncSeries::from_ints(&ring, &c0, cap).unwrap();
        prop_assert!(ok!(criterion_a(&f0)).holds);
        // f(X^m) = f₀(X)^m, read off from the exponents divisible by m.
        let pow = ok!(f0.pow(m));
        let fc: Vec<PadicScalar> = (0..=deg0).map(|i| pow.coeff(i * m_us).clone()).collect();
        let f = ok!(TruncSeries::polynomial(&ring, fc, deg0));
        let sc = ok!(build_f0_with_cap(&f, m, deg0));
        let built = &sc.f0;
        let want = ok!(f0.truncate(deg0).embed(&sc.embedding));
        // The two roots differ by an m-th root of unity.
        let zeta = ok!(built.coeff(1).try_div(want.coeff(1)));
        prop_assert!(zeta.pow(m).agrees_with_int(1));
        prop_assert!(ok!(built.compare(&ok!(want.scalar_mul(&zeta)))).holds());
        let lhs = ok!(sc.embedding.apply(f.coeff(1)));
        prop_assert!(built.coeff(1).pow(m).agrees_with(&lhs));
        // Commuters with u'(0) ≡ 1 descend.
        let a = PadicScalar::from_int(&ring, 1 + pi * k);
        let uf = ok!(solve_commuting(&f, &a));
        if uf.integral {
            if let Ok(u0) = build_u0(&uf.series, &sc) {
                prop_assert!(ok!(check_commute(built, &u0)).commutes);
                let au = ok!(sc.embedding.apply(&a));
                prop_assert!(u0.coeff(1).pow(m).agrees_with(&au));
            }
        }
        Ok(())
    })
}

/// Every suite with its label.
#[allow(dead_code)]
pub fn suites() -> Vec<(&'static str, fn() -> Result<(), String>)> {
    vec![
        ("scalar ring laws", scalar_ring_laws),
        ("precision soundness", precision_soundness),
        ("m-th roots of units", mth_roots_of_units),
        ("composition associativity/identity/inverse", composition_laws),
        ("weierstrass_prep multiply-back", weierstrass_multiply_back),
        ("series m-th roots", series_roots),
        ("newton root bound", newton_root_bound),
        ("solve_commuting multiplicativity", solve_commuting_multiplicative),
        ("lubin_log agreement", lubin_log_agreement),
        ("lubin-tate laws", lubin_tate_laws),
        ("simple roots of iterates", simple_roots_of_iterates),
        ("endomorphism ring action", endomorphism_ring_action),
        ("build_f0 roundtrip", build_f0_roundtrip),
    ]
}
