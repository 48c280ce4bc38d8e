pub mod error;
pub mod exact;
pub mod hjcf;
pub mod singtypes;
pub mod algebraic;
pub mod floer;
pub mod lattice;
pub mod families;
pub mod pipeline;

pub use error::{Error, Result};
pub use exact::Rational;
