//! Exact computations for 3-cosymplectic structures on flat model spaces.
//!
//! Everything is over `ℚ`: polynomial-coefficient differential forms, the
//! structure checker, harmonic and basic cohomology of compact quotients,
//! and the `so(4,1)` certificate for the operators on basic harmonic forms.

pub mod check;
pub mod cohomology;
pub mod error;
pub mod exterior;
pub mod lie;
pub mod linalg;
pub mod model;
pub mod poly;
pub mod structures;

pub use check::{CheckItem, CheckReport};
pub use cohomology::{decompose, HarmonicTable};
pub use error::{Error, Result};
pub use exterior::{ConstantMetric, EndField, KForm, Metric, VectorField};
pub use lie::{lie_report, LieAlgebraReport};
pub use linalg::{QMatrix, Subspace};
pub use model::{ModelSpace, Monodromy, Topology};
pub use poly::{Poly, Rational};
pub use structures::{check_three_cosymplectic, deform_da, CheckOptions, ThreeStructure};
