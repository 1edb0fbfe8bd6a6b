//! Scalar special functions and polynomial solvers: Lambert W, the
//! Weierstrass ℘ function with its period lattice, cubic and general
//! polynomial roots.

mod cubic;
mod lambert;
mod lattice;
mod poly;
mod weierstrass;

pub use cubic::{cubic_roots, CubicRootSet};
pub use lambert::{lambert_w, WBranch};
pub use lattice::{agm, carlson_rf, half_periods, PeriodLattice};
pub use poly::{poly_eval, poly_roots};
pub use weierstrass::{weierstrass_p, WeierstrassConfig, WeierstrassInvariants, WeierstrassP};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecialError {
    #[error("argument {z} outside the domain of the {branch:?} branch of Lambert W")]
    LambertDomain { branch: WBranch, z: f64 },
    #[error("point lies within {radius:e} of a lattice pole")]
    Pole { radius: f64 },
    #[error("invariants are degenerate (discriminant {discriminant:e}); no period lattice")]
    Degenerate { discriminant: f64 },
    #[error("iteration did not converge: {0}")]
    NoConvergence(&'static str),
}

pub type Result<T> = std::result::Result<T, SpecialError>;
