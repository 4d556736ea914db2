//! Exact jet calculus and differential-invariant verification.

pub mod error;
pub mod cartan;
pub mod exactalg;
pub mod groupoid;
pub mod jets;
pub mod painleve;
pub mod par;
pub mod symbols;

pub use error::{Error, Result};

/// A named exact check with a printable residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub residual: String,
    pub ok: bool,
}

impl Check {
    pub fn new(id: impl Into<String>, residual: impl ToString, ok: bool) -> Self {
        Check {
            id: id.into(),
            residual: residual.to_string(),
            ok,
        }
    }
}
