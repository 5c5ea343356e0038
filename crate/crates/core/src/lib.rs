pub mod boxworld;
pub mod error;
pub mod gpt_core;
pub mod postulates;
pub mod ratgeo;
pub mod symmetry;

pub use error::{Error, Result};
