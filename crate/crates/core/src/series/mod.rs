//! Truncated power series, polynomials and the Weierstrass/Newton toolkit.

mod bivar;
mod newton;
mod poly;
mod roots;
mod trunc;
mod weierstrass;

pub use bivar::{BivarTrunc, TrivarTrunc};
pub use newton::{newton_polygon, poly_root_valuations, root_valuations, NewtonPolygon, RootValuation, Segment};
pub use poly::Polynomial;
pub use roots::{poly_mth_root, series_mth_root_unit};
pub use trunc::{Agreement, TruncSeries};
pub use weierstrass::{
    content_valuation, distinguished_split, weierstrass_degree, weierstrass_prep, WeierstrassSplit, Wideg,
};
