pub mod error;
pub mod instances;
pub mod itinerant;
pub mod metric;
pub mod offline;
pub mod transport;
pub mod walks;

pub use error::{Error, Result};
