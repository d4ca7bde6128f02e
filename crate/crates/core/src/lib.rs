//! Eigenvector and Katz-Bonacich centrality on random networks: mean-field
//! predictions, realized samples, comparative statics and Lorenz comparisons.

pub mod error;
pub mod experiments;
pub mod inequality;
pub mod io;
pub mod netmodel;
pub mod seeding;
pub mod spectral;
pub mod statics;

pub use error::{Error, Result};
