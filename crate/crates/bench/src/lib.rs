//! Input generators shared by the benchmark targets.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tradeoff_core::scalar::ExactScalar;
use tradeoff_core::table::{Candidate, ObjectiveTable};
use tradeoff_core::Scalar;

/// Random exact table with small rational entries.
pub fn random_table(n: usize, m: usize, seed: u64) -> ObjectiveTable<ExactScalar> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates = (0..n)
        .map(|i| {
            let f = ExactScalar::from_ratio(rng.gen_range(-1000..=1000), rng.gen_range(1..=64));
            let g = (0..m)
                .map(|_| {
                    ExactScalar::from_ratio(rng.gen_range(-1000..=1000), rng.gen_range(1..=64))
                })
                .collect();
            Candidate::new(format!("c{i}"), f, g)
        })
        .collect();
    ObjectiveTable::new(m, candidates).expect("generated table is well-formed")
}

/// A rational probe grid of `count` points over `[0, 4]`.
pub fn probe_grid(count: usize) -> Vec<ExactScalar> {
    (0..count)
        .map(|k| ExactScalar::from_ratio(4 * k as i64, count.max(2) as i64 - 1))
        .collect()
}
