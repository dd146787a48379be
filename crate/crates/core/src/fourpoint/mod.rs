//! Four-point functions `<b_n† b_m b_l† b_j>` and the noise correlations
//! built from them.

mod chi;
mod engine;
mod matrices;
mod noise;
mod ordering;

pub use chi::{chi_ordered, chi_with, four_point, Propagators};
pub use engine::{DeterminantTables, FourPointEngine};
pub use matrices::{
    m_indices, matrix_m, matrix_s, matrix_x, matrix_y, s_indices, x_indices, y_indices,
    DirectDeterminants, StringDeterminants,
};
pub use noise::{
    delta_cut, mott_delta, mott_regularity, noise_map, peak_contrast, peak_stats, BackgroundWindow,
    CacheMode, DeltaCut, NoiseMap, NoiseStats, PeakStats, Regularity, CONJUGATION_TOL,
    MATERIALIZE_MAX_SITES,
};
pub use ordering::{site_order, Ladder, OperatorTuple, OrderedCase, Pattern, DENSITY_PATTERN};
