use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::padic::PadicScalar;

use super::poly::Polynomial;
use super::trunc::TruncSeries;
use super::weierstrass::{weierstrass_degree, Wideg};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Ratio<i64>,
    pub length: usize,
}

/// Lower convex hull of `{(i, val c_i)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
}

/// Valuation of a root in the open unit disk, with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootValuation {
    pub valuation: Ratio<i64>,
    pub count: usize,
}

impl NewtonPolygon {
    pub fn from_coeffs(coeffs: &[PadicScalar]) -> Result<Self> {
        let points: Vec<(usize, i64)> = coeffs
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.valuation().map(|v| (i, v)))
            .collect();
        if points.is_empty() {
            return Err(Error::PrecisionExhausted(
                "no coefficient is certified nonzero".into(),
            ));
        }
        let mut hull: Vec<(usize, i64)> = Vec::new();
        for &pt in &points {
            while hull.len() >= 2 {
                let (x1, y1) = hull[hull.len() - 2];
                let (x2, y2) = hull[hull.len() - 1];
                // Drop the middle point unless it lies strictly below the chord.
                let cross = (x2 as i128 - x1 as i128) * (pt.1 as i128 - y1 as i128)
                    - (y2 as i128 - y1 as i128) * (pt.0 as i128 - x1 as i128);
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let first = hull[0].0;
        let last = hull[hull.len() - 1].0;
        for (i, c) in coeffs.iter().enumerate() {
            let Some(n) = c.absolute_precision().filter(|_| c.is_zero_at_precision()) else {
                continue;
            };
            if i < first || i > last {
                return Err(Error::PrecisionExhausted(format!(
                    "coefficient {i} is {c}, outside the certified hull"
                )));
            }
            let k = hull.windows(2).position(|w| w[0].0 <= i && i <= w[1].0).unwrap_or(0);
            let (x1, y1) = hull[k];
            let (x2, y2) = *hull.get(k + 1).unwrap_or(&hull[k]);
            // Need n >= height of the hull at i, i.e. the unknown point sits on or above it.
            let below = if x2 == x1 {
                n < y1
            } else {
                let lhs = (n as i128 - y1 as i128) * ((x2 - x1) as i128);
                lhs < (y2 as i128 - y1 as i128) * ((i - x1) as i128)
            };
            if below {
                return Err(Error::PrecisionExhausted(format!(
                    "coefficient {i} is {c}; it may lie below the hull"
                )));
            }
        }
        let segments = hull
            .windows(2)
            .map(|w| Segment {
                slope: Ratio::new(w[1].1 - w[0].1, (w[1].0 - w[0].0) as i64),
                length: w[1].0 - w[0].0,
            })
            .collect();
        Ok(Self {
            vertices: hull,
            segments,
        })
    }

    /// Nonzero roots of positive valuation: negated negative slopes.
    pub fn open_disk_roots(&self) -> Vec<RootValuation> {
        self.segments
            .iter()
            .filter(|s| s.slope < Ratio::from_integer(0))
            .map(|s| RootValuation {
                valuation: -s.slope,
                count: s.length,
            })
            .collect()
    }
}

pub fn newton_polygon(f: &TruncSeries) -> Result<NewtonPolygon> {
    NewtonPolygon::from_coeffs(f.coeffs())
}

/// Valuations of the nonzero roots in the open unit disk. For a series the
/// hull is taken up to the Weierstrass degree, which bounds those roots.
pub fn root_valuations(f: &TruncSeries) -> Result<Vec<RootValuation>> {
    let upto = match weierstrass_degree(f)? {
        Wideg::Finite(q) => q,
        Wideg::Infinite => f.degree().unwrap_or(0),
        Wideg::BeyondCap => return Err(Error::InfiniteWideg),
    };
    Ok(NewtonPolygon::from_coeffs(&f.coeffs()[..=upto])?.open_disk_roots())
}

pub fn poly_root_valuations(g: &Polynomial) -> Result<Vec<RootValuation>> {
    Ok(NewtonPolygon::from_coeffs(g.coeffs())?.open_disk_roots())
}
