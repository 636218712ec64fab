pub mod charpoly;
pub mod counterexample;
pub mod error;
pub mod field;
pub mod linalg;
pub mod perron;
pub mod report;

pub use error::{Error, Result};
