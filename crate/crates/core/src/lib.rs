//! Workbench for convolutional codes over finite fields.

pub mod error;
pub mod galois;
pub mod matrix;
pub mod poly;
pub mod polymat;
pub mod code;
pub mod metrics;
pub mod constructions;
pub mod sysrep;
pub mod channel;
pub mod decoders;
pub mod io;

pub use error::{Error, Result};
