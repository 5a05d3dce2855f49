//! Combinatorics of rational fans and fanifolds, from quotient fans and FLTZ
//! skeleta up to toric orbit-closure gluing diagrams matched against the
//! nerves of sectorial covers.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod fan;
pub mod fanifold;
pub mod fltz;
pub mod io;
pub mod lattice;
pub mod mirror;
pub mod poset;
pub mod report;

pub use error::{Error, Result};
