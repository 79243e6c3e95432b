//! Effective Hamiltonians, Floquet spectra and multifractal analysis for
//! delta-kicked quantum systems: the double kicked top, a generic SU(2)
//! family and the kicked Harper chain.

pub mod cli;
pub mod effective;
pub mod error;
pub mod floquet;
pub mod harper;
pub mod linalg;
pub mod multifractal;
pub mod operator;
pub mod su2;

pub use error::{Error, Result};
pub use operator::HermitianOperator;
pub use su2::SpinLabel;

/// `(sqrt(5) - 1) / 2`.
pub const GOLDEN_RATIO: f64 = 0.618_033_988_749_894_9;
