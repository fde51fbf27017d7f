//! Operational information content of qubit systems.
//!
//! The information carried by one measurement with outcome probabilities `p`
//! is the normalized squared distance of `p` from the uniform distribution.
//! Summed over a complete set of mutually unbiased measurements, it depends on
//! the state only through its purity, so it is unchanged by any choice of the
//! set and by unitary evolution.
//!
//! - [`linalg`]: small dense complex matrices and vectors.
//! - [`states`]: pure states, density matrices, named and random states.
//! - [`qstate`]: the QSTATE text format.
//! - [`measure`]: single-measurement uncertainty and information.
//! - [`pauli`], [`mub`]: complete sets of mutually unbiased bases.
//! - [`invariant`]: total information, its closed form and verification sweeps.
//! - [`interferometer`]: Mach-Zehnder model of the one-qubit complementary triple.

pub mod error;
pub mod interferometer;
pub mod invariant;
pub mod linalg;
pub mod measure;
pub mod mub;
pub mod pauli;
pub mod qstate;
pub mod report;
pub mod states;

pub use error::{Error, Result};
pub use invariant::{
    closed_form_total, information_distribution, invariance_sweep, total_information,
    InformationDistribution, InformationReport,
};
pub use linalg::{Complex, ComplexMatrix, ComplexVector, ALG_TOL, TOL};
pub use measure::{information, InformationMeasureConfig, ProbabilityVector};
pub use mub::{pauli_partition_mubs, spin_triple, two_qubit_set, validate_mub, MeasurementBasis, MubSet};
pub use states::{named_state, random_unitary, DensityMatrix, PureState};
