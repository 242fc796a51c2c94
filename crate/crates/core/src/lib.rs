pub mod bargmann;
pub mod classical;
pub mod coeffs;
pub mod error;
pub mod group;
pub mod specfun;
pub mod wavefn;

pub use error::{Error, Result};
