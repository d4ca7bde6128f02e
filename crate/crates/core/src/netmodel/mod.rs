//! Random network families and their samplers.

mod block;
mod config;
mod counterexamples;
mod expected;
mod kronecker;
mod realized;
mod samplers;
mod spatial;

pub use block::{BlockModel, BlockStructure};
pub use config::{Model, ModelSpec, NetworkConfig};
pub use counterexamples::{build_counterexample_split, build_counterexample_star};
pub use expected::{build_expected_sbm, ExpectedMatrix};
pub use kronecker::{build_kronecker, kron_vec, MulticharacteristicModel};
pub use realized::{Edge, RealizedNetwork};
pub use samplers::{
    sample_bernoulli, sample_clustered, sample_weighted_uniform, ClusteredModel,
    WeightedIntervalModel,
};
pub use spatial::{build_spatial_grid, SpatialGridModel};

/// A symmetric nonnegative matrix that solvers can multiply by vectors.
pub trait Network: Sync {
    fn size(&self) -> usize;

    /// `out = A x`. Row results do not depend on thread scheduling.
    fn mat_vec(&self, x: &[f64], out: &mut [f64]);

    fn max_row_sum(&self) -> f64;

    fn min_entry(&self) -> f64;

    fn entry_sum(&self) -> f64;

    /// Group structure when the matrix is block-constant.
    fn blocks(&self) -> Option<&BlockStructure> {
        None
    }
}
