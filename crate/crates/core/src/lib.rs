//! Subspace clustering toolkit: algorithms that find clusters in
//! axis-parallel subspace projections, a synthetic data generator with
//! ground truth, external evaluation measures, exchange formats and static
//! report rendering.

pub mod algorithms;
pub mod evaluation;
pub mod generator;
pub mod hungarian;
pub mod io;
pub mod model;
pub mod rng;
pub mod visualization;

pub use algorithms::{AlgoError, Algorithm};
pub use evaluation::{EvalError, EvaluationReport, Measure};
pub use generator::{Generated, GeneratorSpec, InvalidSpec};
pub use model::{Clustering, Dataset, MicroObjectSet, ModelError, SubspaceCluster};
pub use rng::SeededRng;
pub use visualization::{ColorAssignment, Rgb, TableOptions, VisError};
