use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::par;

/// Draws per independent RNG stream.
pub const CHUNK: usize = 8192;

/// Generator for chunk `chunk` of a seeded sequence. Chunks use distinct
/// ChaCha streams of the same key, so the output does not depend on how
/// chunks are scheduled.
pub fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Fill `n` values by calling `draw` on per-chunk generators.
pub(crate) fn chunked<F>(n: usize, seed: u64, draw: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    let parts = par::map_range(chunks, |c| {
        let len = CHUNK.min(n - c * CHUNK);
        let mut rng = chunk_rng(seed, c);
        (0..len).map(|_| draw(&mut rng)).collect::<Vec<f64>>()
    });
    parts.concat()
}
