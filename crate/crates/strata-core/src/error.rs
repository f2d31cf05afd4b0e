//! Shared error type for operations that can fail structurally.
//!
//! Semantic problems found by the `validate_*` family are *reports* (plain
//! data), not errors; this type covers ill-formed references, exceeded size
//! caps, and data that is too incoherent for a construction to proceed.

use thiserror::Error;

/// Errors produced while building or running operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A by-name or by-index reference did not resolve.
    #[error("unknown {kind} `{id}`")]
    UnknownId { kind: &'static str, id: String },
    /// Two entities of the same kind share an identifier.
    #[error("duplicate {kind} `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    /// A hard size cap was exceeded; the computation refuses rather than truncates.
    #[error("size cap exceeded: {what} is {got}, cap is {cap}")]
    SizeCap {
        what: &'static str,
        got: u64,
        cap: u64,
    },
    /// Two pieces of data that must live over the same shape do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// Input data failed a precondition of the operation.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A cone handed to a mediator is not coherent; gluing cannot proceed.
    #[error("cone incoherent: {0}")]
    ConeIncoherent(String),
    /// Bundle data whose cells do not paste; pushforward cannot proceed.
    #[error("bundle incoherent: {0}")]
    BundleIncoherent(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Configurable hard caps for enumeration-heavy operations.
///
/// Exceeding a cap is an [`Error::SizeCap`], never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of objects in any single finite category.
    pub max_objects: usize,
    /// Maximum number of morphisms in any single finite category.
    pub max_morphisms: usize,
    /// Maximum number of candidate families/functors visited by one enumeration.
    pub max_candidates: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_objects: 64,
            max_morphisms: 512,
            max_candidates: 1_000_000,
        }
    }
}

impl Caps {
    /// Fails if a generated category would exceed the object/morphism caps.
    pub fn admit_category(&self, objects: usize, morphisms: usize) -> Result<()> {
        if objects > self.max_objects {
            return Err(Error::SizeCap {
                what: "objects in a category",
                got: objects as u64,
                cap: self.max_objects as u64,
            });
        }
        if morphisms > self.max_morphisms {
            return Err(Error::SizeCap {
                what: "morphisms in a category",
                got: morphisms as u64,
                cap: self.max_morphisms as u64,
            });
        }
        Ok(())
    }

    /// A fresh candidate budget for one enumeration run.
    pub fn budget(&self) -> Budget {
        Budget {
            remaining: self.max_candidates,
            cap: self.max_candidates,
        }
    }
}

/// Decrementing candidate counter; trips a [`Error::SizeCap`] when spent.
#[derive(Debug, Clone)]
pub struct Budget {
    remaining: u64,
    cap: u64,
}

impl Budget {
    /// Consumes one candidate; errors when the budget is exhausted.
    pub fn tick(&mut self) -> Result<()> {
        if self.remaining == 0 {
            return Err(Error::SizeCap {
                what: "candidate families",
                got: self.cap + 1,
                cap: self.cap,
            });
        }
        self.remaining -= 1;
        Ok(())
    }
}
