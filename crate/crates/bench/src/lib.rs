//! Shared fixtures for the benchmarks.

use psym_core::fockstate::FockState;
use psym_core::huckel::HuckelRing;
use psym_core::pointgroup::{builtin_group, PointGroup};
use psym_core::representation::RepSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ring of `n` sites with its orbital representation over `group`.
pub fn ring(n: usize, group: &str) -> (PointGroup, RepSet) {
    let g = builtin_group(group).expect("built-in group");
    let rep = HuckelRing::new(n, 0.0, -1.0)
        .expect("valid ring size")
        .rep_set(&g)
        .expect("ring representation");
    (g, rep)
}

/// Random half-filled state on `n` spatial orbitals.
pub fn half_filled(n: usize, seed: u64) -> FockState {
    FockState::random_in_sector(n, n / 2, n / 2, &mut rng(seed))
}
