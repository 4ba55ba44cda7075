pub mod error;
pub mod finab;
pub mod json;
pub mod linalg;

pub use error::{Error, Result};
pub mod forms;
pub mod lattice;
pub mod obstruction;
pub mod twisted;
pub mod verify;
