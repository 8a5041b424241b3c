//! Exact construction of the basic classical Lie superalgebras as matrix superalgebras,
//! enumeration of their generalized quantum statistics (GQS) through Dynkin-diagram node
//! deletion, and generation of the defining quadratic and triple relations.

pub mod algebras;
pub mod cli;
pub mod error;
pub mod exactfield;
pub mod gqs;
pub mod grading;
pub mod rootsys;
pub mod supermatrix;

pub use error::{GqsError, Result};
pub use exactfield::ExactScalar;
