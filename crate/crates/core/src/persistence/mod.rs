//! Persistent homology: fast H₀ on graphs for the loss path, full Z/2
//! reduction for evaluation.

mod barcode;
mod h0;
mod reduction;

pub use barcode::{betti_curve, Bar, Barcode, BettiCurve};
pub use h0::{h0_subgradient, h0_suplevel, H0Attribution, H0Bar};
pub use reduction::reduce_barcode;
