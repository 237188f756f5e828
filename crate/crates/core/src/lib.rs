pub mod ef;
pub mod error;
pub mod families;
pub mod geometry;
pub mod hfree;
pub mod io;
pub mod linalg;
pub mod rational;
pub mod reductions;
pub mod xc;
pub mod zoo;

pub use error::{Error, Result};
pub use rational::Rational;
