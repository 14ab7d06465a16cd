//! Shared fixtures for the benchmarks.

use psiflow::{RadialGrid, VorticityModel};

/// Classical model with unit initial data on a graded grid over `[1, 1.25]`.
pub fn classical_fixture(n_nodes: usize) -> (VorticityModel, RadialGrid) {
    let grid = RadialGrid::graded(1.0, 1.25, n_nodes).expect("valid grid");
    (VorticityModel::classical(), grid)
}
