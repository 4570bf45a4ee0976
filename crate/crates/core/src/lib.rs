pub mod abelian;
pub mod arith;
pub mod chars;
pub mod cli;
pub mod cyclotomic;
pub mod dm;
pub mod error;
pub mod filtration;
pub mod fm;
pub mod linalg;
pub mod partition;
pub mod poly;
pub mod series;
pub mod verify;
pub mod window;

pub use error::{Error, Result};
