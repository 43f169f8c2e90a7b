//! Shared fixtures for the benchmarks.

use latcount_core::LeveledLattice;

/// The 8-element Boolean lattice summed with itself `k` times, a cheap
/// moderately symmetric input for the labeling benchmarks.
pub fn stacked_cubes(k: usize) -> LeveledLattice {
    let cube = LeveledLattice::boolean(3);
    let mut l = cube.clone();
    for _ in 1..k {
        l = l.vertical_sum(&cube);
    }
    l
}
