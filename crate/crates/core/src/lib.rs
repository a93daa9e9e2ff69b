//! Exact construction, classification and certification of geproci
//! half-grid configurations in P³.

pub mod concurrency;
pub mod construct;
pub mod error;
pub mod exactalg;
pub mod geproci;
pub mod halfgrid;
pub mod perms;
pub mod projgeom;
pub mod tables;

pub use error::{Error, Result};
