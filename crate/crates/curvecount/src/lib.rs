//! Exact counting of morphisms from the projective line over a prime field
//! to surfaces whose Cox ring has a single relation linear in a distinguished
//! set of variables, together with the generating-series identities, local
//! densities and cone volumes that organize those counts.

pub mod cones;
pub mod count;
pub mod curve;
pub mod error;
pub mod genfun;
pub mod linalg;
pub mod moebius;
pub mod surface;

pub use error::{Error, Result};
