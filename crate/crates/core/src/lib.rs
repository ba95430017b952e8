pub mod basis;
pub mod cli;
pub mod eigensolve;
pub mod error;
pub mod hamiltonian;
pub mod indexing;
pub mod linalg;
pub mod numerics;
pub mod perturbation;
pub mod verify;

pub use error::{Error, Result};
