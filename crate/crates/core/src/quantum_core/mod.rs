//! State mathematics for small registers: exact rotation indices, pure
//! states, measurements, density operators and the SWAP test.
//!
//! Protocol paths only ever rotate by integer multiples of `theta_n`, so
//! they carry an [`AngleIndex`] and convert to amplitudes at the last
//! moment. Float paths (density matrices, entropies) are for analysis.

mod angle;
mod density;
mod measurement;
mod state;
mod swap;

pub use angle::{index_add, AngleIndex, MAX_PRECISION};
pub use density::{
    density_from_ensemble, partial_trace, trace_distance, von_neumann_entropy, DensityMatrix,
    EnsembleAccumulator, DENSITY_TOL,
};
pub use measurement::{measure_in_rotated_basis, measure_z, prob_zero, MeasurementOutcome};
pub use state::{apply_rotation, overlap, prepare_state, rotation_matrix, Matrix2, PureState};
pub use swap::{swap_pass_probability, swap_test, swap_test_pair, SwapOutcome, SwapTestResult};

pub(crate) use angle::check_precision;
pub(crate) use measurement::measure_kraus;
