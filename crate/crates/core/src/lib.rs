//! Combinatorial L-packet data for tame regular parameters of ramified
//! p-adic unitary groups.

pub mod algebra;
pub mod building;
pub mod cli;
pub mod error;
pub mod hermitian;
pub mod lparam;
pub mod packets;
pub mod tori;
pub mod weyl_signed;

pub use error::{Error, Result};
