pub mod bigbracket;
pub mod cli;
pub mod error;
pub mod io;
pub mod ledger;
pub mod lie;
pub mod linalg;
pub mod manin;
pub mod mc;
pub mod qlb;
pub mod rmatrix;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
