//! Finite groups-with-operations and the constructions built on them:
//! derived actions, semidirect products, crossed modules, derivations and
//! their groupoid, truncated simplicial objects with Moore complexes, and the
//! passage between one-truncated simplicial objects and crossed modules.
//!
//! Everything is finite and explicit.  Carriers are either full operation
//! tables or coordinate spaces over a prime field; every claimed law can be
//! re-checked instance by instance, and validators produce reports that say
//! what was checked, what was skipped, and why.

pub mod action;
pub mod caps;
pub mod error;
pub mod fixtures;
pub mod homotopy;
pub mod instances;
pub mod io;
pub mod iso;
pub mod omega;
pub mod report;
pub mod signature;
pub mod simplicial;
pub mod transfer;
pub mod xmod;

pub use caps::Caps;
pub use error::{Error, Result};
pub use report::{ValidationReport, Violation};
