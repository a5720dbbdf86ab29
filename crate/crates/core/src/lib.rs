//! Exact and numerical spectra of the quasi-exactly solvable PT-symmetric
//! quartic family `H = p^2 - x^4 + 2iax^3 + (a^2 - 2b)x^2 + 2i(ab - J)x`.
//!
//! The QES block of the spectrum is produced exactly as the roots of a
//! degree-J polynomial with rational coefficients ([`qescore`]); the rest of
//! the spectrum comes from complex-contour shooting ([`shooting`]).

pub mod error;
pub mod linalg;
pub mod ratpoly;

pub use error::{QesError, Result};
pub mod qescore;
pub mod sextic;
pub mod sl2;
pub mod criticality;
pub mod shooting;
pub mod verify;
