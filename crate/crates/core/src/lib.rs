pub mod applications;
pub mod cli;
pub mod error;
pub mod model;
pub mod nu;
pub mod oracle;
pub mod output;
pub mod polynomial;
pub mod quadrature;
pub mod spectrum;
pub mod wavefunction;

pub use error::{Error, Result};
pub use num_complex::Complex64;
