pub mod besov;
pub mod error;
pub mod flags;
pub mod harness;
pub mod hermite;
pub mod io;
pub mod paraproduct;
pub mod semigroup;
pub mod spectral;

pub use error::{Error, Result};
pub use flags::{Flags, Ratio};
