//! Output-sensitive planar maxima and convex hull algorithms, run over an
//! instrumented external-memory simulator so that comparisons and block
//! transfers can be measured exactly.

pub mod ackermann;
pub mod adversary;
pub mod cost;
pub mod datagen;
pub mod error;
pub mod geom;
pub mod harness;
pub mod hull;
pub mod iosim;
pub mod maxima;
pub mod oracle;
pub mod potential;

pub use error::{Error, Result};
