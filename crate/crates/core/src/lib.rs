pub mod error;
pub mod padic;
pub mod series;
pub mod dynamics;
pub mod formal;
pub mod selftest;
pub mod semiconj;

pub use error::{Error, Result};
pub use padic::{PadicScalar, RingConfig};
