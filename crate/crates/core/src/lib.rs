//! Discord measures for two-mode Gaussian states built from Gaussian
//! measurements.
//!
//! The crate computes three quantities for a two-mode covariance matrix:
//!
//! * operational Gaussian discord (OGD): the gap between the smallest
//!   conditional outcome entropy reachable with local Gaussian measurements
//!   and with joint Gaussian measurements,
//! * Gaussian quantum discord (GQD), with Gaussian measurements on B only,
//! * Gaussian Rényi-2 discord.
//!
//! It also evaluates a signal-encoding protocol whose local/joint mutual
//! information gap converges to OGD for large signal variance.
//!
//! Modules:
//!
//! * [`symplectic`]: covariance types, symplectic transforms, spectra,
//!   standard form, PPT test.
//! * [`measurement`]: POVM covariances, conditional covariances, entropies.
//! * [`optimize`]: seeded multi-start Nelder–Mead and a grid oracle.
//! * [`discord`]: the three measures and closed forms for reference families.
//! * [`protocol`]: signal encoding and mutual informations.
//! * [`sampling`]: random physical states and measurements.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod discord;
pub mod error;
pub mod linalg;
pub(crate) mod math;
pub mod measurement;
pub mod optimize;
pub mod protocol;
pub mod sampling;
pub mod symplectic;

pub use discord::{
    closed_form_ogd, entropy_f, gqd, ogd, renyi2_discord, Branch, ClosedForm, DiscordReport,
    FamilyParams,
};
pub use error::{Error, Result};
pub use linalg::{Mat2, Mat4};
pub use measurement::{
    conditional_cov_joint, conditional_cov_local, conditional_entropy, gaussian_entropy,
    joint_povm_cov, local_povm_cov, outcome_cov, ConditionalCov, JointMeasurement,
    LocalMeasurement, Measurement, L_MIN,
};
pub use optimize::{grid_oracle, minimize, OptResult, SearchSpace};
pub use protocol::{
    encode, mutual_info_report, mutual_info_single_mode, ogd_convergence, EncodedState,
    MutualInfoReport,
};
pub use symplectic::{
    beamsplitter, is_entangled, phase_rotation, physicality_check, standard_form_reduce,
    symplectic_eigenvalues, CovMat2, StandardFormParams, SymplecticForm, TwoModeCov,
};
