pub mod error;
pub mod exactla;
pub mod fatpoints;
pub mod horace;
pub mod segre;

pub use error::{Error, Result};
