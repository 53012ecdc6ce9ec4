//! The classification search space and the exhaustive solver.

pub mod canonical;
pub mod egyptian;
pub mod pipeline;
pub mod solver;
pub mod types;

pub use canonical::{canonical_form, isomorphic};
pub use egyptian::{egyptian_fractions, fpdim_candidates, is_co_mnsd, is_mnsd, EgyptianOptions, EgyptianSolution};
pub use pipeline::{classify, ClassifiedRing, ClassifyOptions, ClassifyReport, StageCounts};
pub use solver::{fusion_data_search, SearchOptions, SearchOutcome, DEFAULT_BUDGET};
pub use types::{canonical_duality, duality_candidates, duality_candidates_with, types_for_fpdim, TypeOptions};
