pub mod complex;
pub mod error;
pub mod matrix;
pub(crate) mod sheets;
pub(crate) mod util;
pub mod homology;
pub mod cover;
pub mod report;
pub mod symmetry;
pub mod cone;
pub mod einstein;
pub mod cli;
