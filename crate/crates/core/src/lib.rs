pub mod commands;
pub mod error;
pub mod experiments;
pub mod inference;
pub mod io;
pub mod model;
pub mod rng;
pub mod survey;

pub use error::{Error, Result};
