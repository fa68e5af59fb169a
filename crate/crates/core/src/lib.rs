pub mod blowup_harness;
pub mod bohr;
pub mod error;
pub mod operator_engine;
pub mod profile;
pub mod quadrature;
pub mod rational_core;
pub mod subspace_lab;
pub mod symbol_forge;
pub mod witness_functions;

pub use error::{Error, Result};
