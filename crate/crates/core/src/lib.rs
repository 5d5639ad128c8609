//! Two-qubit quantum correlations under local Markovian noise.
//!
//! The crate computes mutual information, one-sided classical correlation,
//! quantum discord and complementary correlations of arbitrary two-qubit
//! density matrices, evolves states under local Kraus channels, and locates
//! the sudden change between classical and quantum decoherence.
//!
//! ```
//! use qcorr_core::{discord, bell_diagonal, BellDiagonalCoeffs};
//!
//! let rho = bell_diagonal(&BellDiagonalCoeffs::new(1.0, -0.6, 0.6).unwrap()).unwrap();
//! let report = discord(&rho);
//! assert!((report.classical_correlation - 1.0).abs() < 1e-8);
//! ```

pub mod channels;
pub mod correlations;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod random;
pub mod states;

pub use channels::{
    amplitude_damping, apply_local, channel_at_time, depolarizing, phase_damping,
    phase_damping_at_time, BlochAffine, ChannelFamily, KrausChannel,
};
pub use correlations::{
    classical_correlation, classify_by_complementary_correlations, complementary_correlation,
    conditional_entropy_after_measurement, discord, measurement_mutual_information,
    mutual_information, p_function, Classification, ClassicalCorrelation, CorrelationReport,
    MeasurementDirection,
};
pub use dynamics::{
    analytic_transition_time, detect_transition, evolve_trajectory, werner_reference_closed_forms,
    CorrelationSample, Family, Scenario, Sign, Trajectory, TransitionResult,
};
pub use error::{CoreError, Result};
pub use linalg::{ComplexMatrix, Subsystem};
pub use states::{
    bell_diagonal, diagonalize_correlation_tensor, extract_fano, from_fano, schmidt_pure, werner,
    BellDiagonalCoeffs, DensityMatrix, FanoForm,
};
