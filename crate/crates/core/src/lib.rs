pub mod cli;
pub mod densities;
pub mod efficiency;
pub mod error;
pub mod functionals;
pub mod quadrature;
pub mod scores;
pub mod serial_stats;
pub mod simulate;
pub mod special;
pub mod tables;

pub use densities::{Density, Family, Flags, Potential, TailPoint};
pub use error::{Error, Result};
pub use quadrature::QuadResult;
pub use scores::{KappaBounds, Score, ScoreKind, Shape};
