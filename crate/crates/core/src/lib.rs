pub mod certify;
pub mod error;
pub mod generators;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod pointconfig;
pub mod poly;

pub use error::{Error, ParseError, Result};
