pub mod algebra;
pub mod bundle;
pub mod dsl;
pub mod error;
pub mod external;
pub mod internal;
pub mod report;
pub mod space;
pub mod table;

pub use error::{Error, Result};
