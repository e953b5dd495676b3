//! Hilbert-Kunz multiplicities of plane curves over finite fields, computed
//! from syzygy bundles, their Harder-Narasimhan filtrations, and the
//! Frobenius action on Čech cohomology.

pub mod catalog;
pub mod cech;
pub mod curve;
pub mod descent;
pub mod gf;
pub mod hk;
pub mod hn;
pub mod job;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod suite;
