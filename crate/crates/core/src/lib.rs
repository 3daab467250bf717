//! Weil restriction of noncommutative motives, computed: orbit
//! decompositions over Galois contexts, Eilenberg–MacLane polynomial maps,
//! binomial rings and the category of central simple algebras.

pub mod binomial;
pub mod csa;
pub mod group;
mod lattice;
pub mod motive;
pub mod orbit;
pub mod polymap;
pub mod schema;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Group(#[from] group::GroupError),
    #[error(transparent)]
    Orbit(#[from] orbit::OrbitError),
    #[error(transparent)]
    Ring(#[from] binomial::RingError),
    #[error(transparent)]
    Poly(#[from] polymap::PolyError),
    #[error(transparent)]
    Motive(#[from] motive::MotiveError),
    #[error(transparent)]
    Csa(#[from] csa::CsaError),
    #[error("invalid input: {0}")]
    Schema(String),
}

impl Error {
    /// Stable machine-readable code, e.g. `orbit.enumeration_cap_exceeded`.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Group(e) => e.code(),
            Error::Orbit(e) => e.code(),
            Error::Ring(e) => e.code(),
            Error::Poly(e) => e.code(),
            Error::Motive(e) => e.code(),
            Error::Csa(e) => e.code(),
            Error::Schema(_) => "schema.invalid",
        }
    }

    /// Whether the error comes from a size cap or budget rather than bad input.
    pub fn is_cap(&self) -> bool {
        match self {
            Error::Group(e) => e.is_cap(),
            Error::Orbit(e) => e.is_cap(),
            Error::Poly(e) => e.is_cap(),
            Error::Motive(e) => e.is_cap(),
            _ => false,
        }
    }
}
