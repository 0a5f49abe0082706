pub mod bits;
pub mod category;
pub mod census;
pub mod canon;
pub mod cohomology;
pub mod complex;
pub mod curvature;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod homotopy;
pub mod io;
pub mod linalg;
pub mod morse;
pub mod report;

pub use error::{Error, Result};
pub use graph::SimpleGraph;
