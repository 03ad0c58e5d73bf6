#![allow(dead_code)]

use esl_core::arena::{generate_random, is_simple, Arena};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sizes of the small random family: `n <= 8`, `m <= 3n`, `W <= 4`.
pub const MAX_N: usize = 8;
pub const MAX_W: i64 = 4;

/// A random small arena, not necessarily simple.
pub fn small_arena(rng: &mut ChaCha8Rng, max_n: usize) -> Arena {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(n..=3 * n);
    let w = rng.gen_range(1..=MAX_W);
    generate_random(n, m, w, rng.gen()).expect("feasible parameters")
}

/// A random small simple arena, by rejection sampling.
pub fn small_simple_arena(rng: &mut ChaCha8Rng, max_n: usize) -> Arena {
    loop {
        let a = small_arena(rng, max_n);
        if is_simple(&a) {
            return a;
        }
    }
}

/// `count` simple arenas from the small family, reproducible from `seed`.
pub fn simple_sweep(count: usize, seed: u64) -> Vec<Arena> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| small_simple_arena(&mut rng, MAX_N)).collect()
}
