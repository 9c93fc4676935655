//! Data generators, experiment drivers, the asymptotic studies and their
//! CSV output.

pub mod experiment;
pub mod generators;
pub mod methods;
pub mod results;
pub mod studies;

pub use experiment::*;
pub use generators::*;
pub use methods::*;
pub use results::*;
pub use studies::*;
