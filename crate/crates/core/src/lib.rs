//! Exact computation of non-Kählerness degrees and the ddbar-lemma property.
//!
//! * [`diamond`]: cohomological models, the degrees `Δ^k` and the ddbar decision.
//! * [`bicomplex`]: an exact double-complex engine (de Rham, Dolbeault, Bott-Chern,
//!   Aeppli) with a Chevalley-Eilenberg builder for complex nilmanifolds.
//! * [`constructions`]: projective bundles, blow-ups, exceptional divisors and
//!   blow-up sequences acting on models and on degree vectors.
//! * [`registry`]: built-in fixtures and the `.ddm` / `.ceq` documents.
//! * [`cli`]: the `ddbar` command line.

pub mod bicomplex;
pub mod cli;
pub mod constructions;
pub mod diamond;
pub mod expr;
pub mod gauss;
pub mod linalg;
pub mod registry;
pub mod verify;

pub use bicomplex::{Bicomplex, CohomologySummary, StructureEquations};
pub use diamond::{BettiVector, BigradedTable, DeltaVector, ManifoldModel, Mode, ValidationReport};
pub use gauss::GaussRational;
pub use linalg::{exact_rank, Matrix};
