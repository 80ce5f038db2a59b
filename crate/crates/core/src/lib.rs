pub mod error;
pub mod geometry;

pub use error::{Error, Result};
pub mod hull;
pub mod convex;
pub mod star;
pub mod operations;
pub mod harness;
pub mod io;
