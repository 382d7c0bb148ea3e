//! Multivariate generating functions of the local Möbius weights, their
//! closed rational forms, and growth certificates.

pub mod appendix;
pub mod dense;
pub mod grid;
pub mod local;
pub mod numerators;
pub mod poly;
pub mod series;

pub use appendix::{AppendixReport, Part, Piece, Shape};
pub use local::{LocalJ0Series, LocalSeries, LocalSystem};
pub use numerators::{FInstance, GInstance};
pub use poly::{Laurent, MultiPoly, RatFn};
pub use series::{certify_m_controlled, CertificationReport, ControlledForm, Denominator, TruncatedSeries};
