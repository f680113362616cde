//! Cut-and-project model sets: exact arithmetic, scheme and window
//! construction, point-set enumeration, geometric and dynamical
//! diagnostics, and diffraction.

pub mod analyze;
pub mod construct;
pub mod diffract;
pub mod error;
pub mod exact;
pub mod linalg;
pub mod render;
pub mod scheme;
pub mod window;

pub use error::{Error, Result};
