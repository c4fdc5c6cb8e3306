//! Canonical JSON renderings of core values.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use padyn_core::formal::Certification;
use padyn_core::series::{NewtonPolygon, Polynomial, RootValuation, TruncSeries};
use padyn_core::{PadicScalar, RingConfig};
use serde_json::{json, Value};

fn balanced(n: &BigInt, modulus: &BigInt) -> BigInt {
    let r = n.mod_floor(modulus);
    if &r * 2 > *modulus {
        r - modulus
    } else {
        r
    }
}

/// `"0"`, `"O(p^N)"`, `"n + O(p^N)"` for integral `Z_p` values, otherwise
/// `"p^v*u + O(p^N)"` with `u` an integer or coordinate array.
pub fn scalar(c: &PadicScalar) -> String {
    let p = c.ring().p();
    if c.is_exact_zero() {
        return "0".into();
    }
    let n = c.absolute_precision().expect("inexact scalar has a precision");
    let (Some(v), Some(unit)) = (c.valuation(), c.unit()) else {
        return format!("O({p}^{n})");
    };
    let rel = num_traits::pow(BigInt::from(p), c.precision() as usize);
    let parts: Vec<BigInt> = unit.iter().map(|u| balanced(u, &rel)).collect();
    if parts.len() == 1 && v >= 0 {
        let pv = num_traits::pow(BigInt::from(p), v as usize);
        return format!("{} + O({p}^{n})", &parts[0] * pv);
    }
    let u = if parts.len() == 1 {
        parts[0].to_string()
    } else {
        let s: Vec<String> = parts.iter().map(|x| x.to_string()).collect();
        format!("[{}]", s.join(","))
    };
    format!("{p}^{v}*{u} + O({p}^{n})")
}

pub fn series(s: &TruncSeries) -> Value {
    json!({
        "cap": s.cap(),
        "polynomial": s.is_polynomial(),
        "coeffs": s.coeffs().iter().map(scalar).collect::<Vec<_>>(),
    })
}

pub fn polynomial(g: &Polynomial) -> Value {
    json!(g.coeffs().iter().map(scalar).collect::<Vec<_>>())
}

pub fn ratio(r: &Ratio<i64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn newton(np: &NewtonPolygon) -> Value {
    json!({
        "vertices": np.vertices.iter().map(|(i, v)| json!([i, v])).collect::<Vec<_>>(),
        "segments": np.segments.iter().map(|s| json!({
            "slope": ratio(&s.slope),
            "length": s.length,
        })).collect::<Vec<_>>(),
    })
}

pub fn root_valuations(rv: &[RootValuation]) -> Value {
    json!(rv
        .iter()
        .map(|r| json!({ "valuation": ratio(&r.valuation), "count": r.count }))
        .collect::<Vec<_>>())
}

pub fn ring(r: &RingConfig) -> Value {
    json!({
        "p": r.p(),
        "residue_degree": r.residue_degree(),
        "modulus": r.modulus().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "rel_precision": r.rel_precision(),
    })
}

pub fn verdict(holds: bool) -> Certification {
    if holds {
        Certification::Certified
    } else {
        Certification::CertifiedNegative
    }
}
