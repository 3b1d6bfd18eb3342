//! Entanglement polygon inequalities for generalized W-class (GW) qudit states
//! under Tsallis-q entanglement.
//!
//! The crate builds GW states and their reductions ([`states`]), evaluates
//! concurrence, Tsallis-q entropy and the closed-form entanglement of GW
//! reductions ([`measures`]), certifies the closed forms against a numerical
//! convex-roof search ([`oracle`]), checks the polygon-type inequalities
//! ([`inequalities`]) and drives seeded sweeps over random ensembles ([`sweep`]).

pub mod config;
pub mod error;
pub mod grids;
pub mod inequalities;
pub mod linalg;
pub mod measures;
pub mod oracle;
pub mod states;
pub mod sweep;

pub use config::{SubsetScope, SweepCheck, SweepConfig};
pub use error::{Error, Result};
pub use grids::GridCheck;
pub use inequalities::{Check, InequalityReport, Partition, Relation, WeightedTerm};
pub use measures::{Bipartition, MeasureKind, MeasureSpec};
pub use oracle::{Ensemble, RoofMode, RoofOptions, RoofResult};
pub use states::{DensityMatrix, GwState, SparseState};
