//! Arithmetic in `Z_p` and its unramified extensions at finite precision.

mod config;
mod exact;
mod extension;
mod hensel;
mod residue;
mod scalar;

pub use config::{RingConfig, DEFAULT_PRECISION};
pub use exact::ExactElement;
pub use extension::{residue_mth_root, Embedding, ResidueRoot};
pub use hensel::{mth_root_unit, teichmuller};
pub use residue::{is_prime, smallest_irreducible, ResidueElem, ResidueField};
pub use scalar::PadicScalar;

