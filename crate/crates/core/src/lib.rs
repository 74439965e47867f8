//! Exact toric minimal model program.
//!
//! Fans are simplicial and live in a lattice `N`; rays are integer
//! coordinates in a fixed basis of `N`. All arithmetic is exact.

pub mod error;
pub mod fan;
pub mod gen;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod mckay;
pub mod mmp;
pub mod num;
pub mod pair;
pub mod par;
pub mod wall;

pub use error::{Error, Result};
pub use fan::Fan;
pub use pair::ToricPair;
