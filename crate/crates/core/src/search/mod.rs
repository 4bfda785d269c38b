//! Searching for codewords that extend a lifted MRD code.

mod extend;
mod orbits;

use thiserror::Error;

use crate::cdc::CdcError;
use crate::gf::GfError;
use crate::linalg::LinalgError;
use crate::rankmetric::RankError;

pub use extend::{embed_subcode, extend_lmrd, SearchConfig, SearchOutcome};
pub use orbits::{
    check_representatives, compatible, compatible_full, filter_conflicting_orbits, greedy_clique,
    is_dirty, lmrd_with_orbits, meet_universe, orbit_of, orbit_partition, orbit_stats, record_code,
    record_generator, record_representatives, reference_computation, verify_lmrd_extension, Orbit,
    OrbitStats, RecordVerification, ReferenceComputation, RepresentativeCheck, RECORD_GENERATOR,
    RECORD_REPRESENTATIVES,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid subcode: {0}")]
    InvalidSubcode(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("the universe is not closed under the generator")]
    NotInvariant,
    #[error("no clique of size {0} found")]
    NotFound(usize),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Rank(#[from] RankError),
    #[error(transparent)]
    Cdc(#[from] CdcError),
}
