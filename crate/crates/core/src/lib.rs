//! Exact verification engine for the Koszul L∞[1]-algebra of a
//! pre-symplectic chart and its characteristic foliation.

pub mod cartan;
pub mod coeffring;
pub mod fiberlin;
pub mod foliation;
pub mod koszul;
pub mod presym;
pub mod sampling;

use thiserror::Error;

pub use cartan::{Form, MultiVector, RingMatrix};
pub use coeffring::{Chart, ChartKind, Coefficient, Scalar, Value, Q};

use cartan::CartanError;
use coeffring::RingError;
use fiberlin::FiberError;
use foliation::FoliationError;
use koszul::KoszulError;
use presym::PresymError;

/// Any error raised by the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Cartan(#[from] CartanError),
    #[error(transparent)]
    Fiber(#[from] FiberError),
    #[error(transparent)]
    Koszul(#[from] KoszulError),
    #[error(transparent)]
    Presym(#[from] PresymError),
    #[error(transparent)]
    Foliation(#[from] FoliationError),
}

impl Error {
    /// An expression failed to parse.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Ring(RingError::Parse(_)))
    }

    /// Arithmetic in the coefficient ring failed: poles, non-units, inexact
    /// evaluation.
    pub fn is_ring(&self) -> bool {
        match self {
            Error::Ring(e) => !matches!(e, RingError::Parse(_)),
            Error::Koszul(KoszulError::NotUnit { .. }) => true,
            Error::Presym(PresymError::Ring(_) | PresymError::NonUnit { .. }) => true,
            Error::Presym(PresymError::Koszul(KoszulError::NotUnit { .. })) => true,
            Error::Foliation(FoliationError::Integral(_)) => true,
            Error::Foliation(FoliationError::Presym(e)) => Error::Presym(e.clone()).is_ring(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
