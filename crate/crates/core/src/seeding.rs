//! Derived random streams.
//!
//! Every unit of parallel work (a GA offspring, a patent, an ensemble member)
//! gets its own generator seeded from the run seed and the unit's coordinates,
//! so results never depend on how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a base seed with a path of integer coordinates into a new seed.
pub fn derive(seed: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix(seed), |acc, &k| splitmix(acc ^ splitmix(k.wrapping_add(GOLDEN))))
}

pub fn rng(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, path))
}

// Domain tags keep streams of different subsystems apart.
pub(crate) const TAG_GA: u64 = 0x4741;
pub(crate) const TAG_SIM: u64 = 0x5349;
pub(crate) const TAG_ENSEMBLE: u64 = 0x454E;
pub(crate) const TAG_SYNTH: u64 = 0x5359;
