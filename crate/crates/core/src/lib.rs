//! Planar trees, leveled and zoned tree pairs, biassociahedra and
//! multiplihedra as finite face posets.

pub mod cli;
pub mod error;
pub mod leveled;
pub mod multiplihedron;
pub mod poset;
pub mod prop;
pub mod tree;
pub mod zone;

pub use error::{Error, Result};
