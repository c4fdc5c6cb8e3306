use num_integer::Integer;

use crate::error::{Error, Result};
use crate::padic::{mth_root_unit, PadicScalar, ResidueElem};

use super::poly::Polynomial;
use super::trunc::TruncSeries;

/// Coefficients `H_0 ..= H_cap` of the m-th root of `v` with `H_0 = c0`,
/// via `H_n = (v_n - [X^n] H_{<n}^m) / (m c0^{m-1})`.
fn root_coeffs(v: &[PadicScalar], m: u64, c0: PadicScalar, cap: usize) -> Result<Vec<PadicScalar>> {
    let ring = c0.ring().clone();
    let denom = c0.pow(m - 1).scale_int(m as i64).invert()?;
    let mut h = vec![PadicScalar::zero(&ring); cap + 1];
    h[0] = c0;
    for n in 1..=cap {
        let partial = TruncSeries::new(&ring, h[..n].to_vec(), n);
        let power = partial.pow(m)?;
        let vn = v.get(n).cloned().unwrap_or_else(|| PadicScalar::zero(&ring));
        h[n] = &(&vn - power.coeff(n)) * &denom;
    }
    Ok(h)
}

/// The unique m-th root of `v` whose constant term has residue `target`.
pub fn series_mth_root_unit(v: &TruncSeries, m: u64, target: &ResidueElem) -> Result<TruncSeries> {
    let p = v.ring().p();
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    if m.gcd(&p) != 1 {
        return Err(Error::UnsupportedRamifiedRoot { m, p });
    }
    let c0 = mth_root_unit(v.coeff(0), m, target)?;
    let h = root_coeffs(v.coeffs(), m, c0, v.cap())?;
    Ok(TruncSeries::new(v.ring(), h, v.cap()))
}

/// Monic `g0` with `g0^m = g`, extracted from the top coefficients down and
/// then verified against every coefficient of `g`.
pub fn poly_mth_root(g: &Polynomial, m: u64) -> Result<Polynomial> {
    let ring = g.ring().clone();
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let deg = g
        .degree()
        .ok_or_else(|| Error::NotMthPower("zero polynomial".into()))?;
    if deg as u64 % m != 0 {
        return Err(Error::NotMthPower(format!(
            "degree {deg} is not divisible by {m}"
        )));
    }
    if !g.is_monic() {
        return Err(Error::InvalidInput("polynomial is not monic".into()));
    }
    let k = deg / m as usize;
    let reversed: Vec<PadicScalar> = g.coeffs().iter().rev().cloned().collect();
    let h = root_coeffs(&reversed, m, PadicScalar::one(&ring), k)?;
    let g0 = Polynomial::new(&ring, h.into_iter().rev().collect());
    let check = g0.pow(m)?.compare(g)?;
    if let Some(i) = check.first_mismatch {
        return Err(Error::NotMthPower(format!(
            "coefficient of X^{i} differs from that of the m-th power"
        )));
    }
    Ok(g0)
}
