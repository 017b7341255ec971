//! Seeded random streams.
//!
//! Every randomized routine draws from ChaCha8 seeded through
//! `SeedableRng::seed_from_u64`. ChaCha output is specified independently
//! of platform and word size, so a `(parameters, seed)` pair reproduces the
//! same result everywhere. Independent sub-streams are derived by selecting
//! a ChaCha stream number rather than by reseeding.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type GraphRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> GraphRng {
    GraphRng::seed_from_u64(seed)
}

/// Stream `stream` of the generator seeded with `seed`.
pub fn split(seed: u64, stream: u64) -> GraphRng {
    let mut rng = seeded(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4)
            .map(|_| 0)
            .scan(seeded(7), |r, _| Some(r.random()))
            .collect();
        let b: Vec<u64> = (0..4)
            .map(|_| 0)
            .scan(seeded(7), |r, _| Some(r.random()))
            .collect();
        assert_eq!(a, b);
        let mut s1 = split(7, 1);
        let mut s2 = split(7, 2);
        assert_ne!(s1.random::<u64>(), s2.random::<u64>());
    }

    const PINNED: u64 = 12_578_764_544_318_200_737;

    #[test]
    fn first_draw_is_pinned() {
        // guards against silent stream changes from dependency upgrades
        let mut r = seeded(42);
        let first: u64 = r.random();
        assert_eq!(first, PINNED);
    }
}
