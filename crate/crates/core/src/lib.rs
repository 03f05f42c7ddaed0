pub mod error;
pub mod fockstate;
pub mod huckel;
pub mod io;
pub mod linalg;
pub mod pointgroup;
pub mod representation;
pub mod slater;
pub mod tncompress;

pub use error::{Error, Result};
