//! Eigenenergies of polynomial anharmonic oscillators by a shifted-l
//! (`1/lbar`) expansion built from the Riccati form of the radial
//! Schrödinger equation, with Padé resummation and a grid-based check.

pub mod cli;
pub mod error;
pub mod leading;
pub mod oracle;
pub mod pade;
pub mod poly;
pub mod potential;
pub mod riccati;
pub mod scalar;
pub mod tables;

pub use error::{PsletError, Result};
pub use leading::{solve_q0, LeadingOrderSolution};
pub use oracle::{solve_radial, OracleConfig};
pub use pade::PadeApproximant;
pub use poly::Polynomial;
pub use potential::PotentialSpec;
pub use riccati::{CorrectionHierarchy, EnergyExpansion, PerturbationTerms};
pub use scalar::{DoubleDouble, Real};
