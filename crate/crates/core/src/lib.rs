//! Constant dimension subspace codes that contain lifted MRD codes.

pub mod bounds;
pub mod cdc;
pub mod cli;
pub mod gf;
pub mod linalg;
pub mod qcomb;
pub mod rankmetric;
pub mod search;
