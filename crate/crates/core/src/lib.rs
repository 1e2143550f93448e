//! Crystalline cohomology of smooth algebras at finite `p`-adic precision,
//! computed through simplicial lifts over `Z/p^N`.

pub mod cli;
pub mod crystalline;
pub mod error;
pub mod padic_linalg;
pub mod pd_derham;
pub mod power_series;
pub mod simplicial_site;
pub mod smooth_lift;

pub use error::{Error, Result};
