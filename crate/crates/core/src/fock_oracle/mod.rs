//! Truncated Fock-space engine used as an independent cross-check of the
//! Gaussian formulas.

mod channel;
mod density;
mod small_channel;
mod unitary;

pub use channel::{
    channel_output_and_env, coherent_information_fock, concavity_witness,
    thermal_coherent_information, ChannelOutput, CoherentInfo, ConcavityReport, FockFamily,
    CONCAVITY_TOL,
};
pub use density::{
    fidelity, random_density_matrix, random_pure_state, random_two_mode_state, relative_entropy,
    thermal_cutoff, thermal_density_matrix, trace_distance, von_neumann_entropy, DensityMatrix,
    C64, EIGEN_TOL, ENTROPY_CUTOFF, HERMITIAN_TOL, MAX_CUTOFF, SUPPORT_TOL, THERMAL_TAIL,
    TRACE_TOL,
};
pub use small_channel::{
    min_fidelity_entanglement_check, KrausChannel, MinFidelityReport, GRID_SLACK, MAX_SMALL_DIM,
};
pub use unitary::{Block, TwoModeKind, TwoModeUnitary, TRUNCATION_WARN};
