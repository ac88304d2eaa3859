//! Named random streams derived from one master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeedStream {
    seed: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Seed of the stream `name`; independent of which other streams are drawn.
    pub fn derive(&self, name: &str) -> u64 {
        splitmix64(self.seed ^ splitmix64(fnv1a(name.as_bytes())))
    }

    /// Seed of item `index` within stream `name`.
    pub fn derive_indexed(&self, name: &str, index: u64) -> u64 {
        splitmix64(self.derive(name).wrapping_add(splitmix64(index)))
    }

    pub fn rng(&self, name: &str) -> StreamRng {
        StreamRng::seed_from_u64(self.derive(name))
    }

    pub fn rng_indexed(&self, name: &str, index: u64) -> StreamRng {
        StreamRng::seed_from_u64(self.derive_indexed(name, index))
    }

    pub fn child(&self, name: &str) -> SeedStream {
        SeedStream::new(self.derive(name))
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}
