pub mod checks;
pub mod classh;
pub mod corpus;
pub mod error;
pub mod operators;
pub mod optimal;
pub mod phifun;
pub mod profile;
pub mod quad;
pub mod report;
pub mod search;
pub mod spaces;
pub mod stepfn;

pub use error::{Direction, Error, Result};
pub use operators::{Factor, OperatorSpec};
pub use phifun::{Band, EquivalenceReport, EvaluationGrid, PhiExpr};
pub use profile::Profile;
pub use spaces::{DecreasingFamily, SpaceSpec};
pub use stepfn::{DecreasingStep, PiecewiseLinear, StepFunction};
