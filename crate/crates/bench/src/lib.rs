//! Shared fixtures for the benchmarks.

use lattice_riesz::{DiscreteCube, LatticeSignal};

/// Deterministic signed signal on `Q(0, radius)`: a cheap hash of the point,
/// so the benchmarks need no random number generator.
pub fn fixture_signal(n: usize, radius: u64) -> LatticeSignal {
    let cube = DiscreteCube::centered(n, radius).expect("valid cube");
    let values = cube.points().into_iter().map(|p| {
        let h = p.coords().iter().fold(0x9e37_79b9_u64, |acc, &c| {
            acc.rotate_left(7) ^ (c as u64).wrapping_mul(0x2545_f491)
        });
        let v = (h % 2001) as f64 / 1000.0 - 1.0;
        (p, v)
    });
    LatticeSignal::from_values(n, values).expect("dimension matches")
}
