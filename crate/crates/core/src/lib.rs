pub mod cli;
pub mod error;
pub mod functionals;
pub mod holo;
pub mod inequality_lab;
pub mod kernel_transform;
pub mod measures;
pub mod optim;
pub mod quadrature;
pub mod report;
pub mod special_fn;

pub use error::{Error, Result};
