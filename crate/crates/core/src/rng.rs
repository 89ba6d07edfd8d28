//! Seeded random streams.
//!
//! Every Monte Carlo routine splits its work into a fixed number of
//! partitions, independent of the thread pool size. Partition `w` draws from
//! the ChaCha stream `(master_seed, w)`, so results depend only on the seed.
//! Histograms of i.i.d. outcomes are drawn directly from their multinomial
//! law on a single stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

/// Number of partitions used for parallel sampling.
pub const PARTITIONS: usize = 8;

pub type StreamRng = ChaCha8Rng;

/// Independent stream `worker` derived from `master_seed`.
pub fn stream(master_seed: u64, worker: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(worker);
    rng
}

/// Decorrelated child seed for sub-task `index` (splitmix64 finalizer).
pub fn derive(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Splits `n` items into [`PARTITIONS`] near-equal chunk sizes.
pub fn partition(n: u64) -> Vec<u64> {
    let parts = PARTITIONS as u64;
    (0..parts)
        .map(|w| n / parts + u64::from(w < n % parts))
        .collect()
}

/// Counts of `n` i.i.d. draws from `probabilities`, via conditional
/// binomials. Entries must be non-negative and sum to one.
pub fn multinomial<R: Rng + ?Sized>(rng: &mut R, n: u64, probabilities: &[f64]) -> Vec<u64> {
    let mut counts = vec![0u64; probabilities.len()];
    let Some(last) = probabilities.iter().rposition(|&p| p > 0.0) else {
        return counts;
    };
    let mut remaining = n;
    let mut mass_left = 1.0;
    for (i, &p) in probabilities[..last].iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let q = if mass_left > 0.0 {
            (p / mass_left).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let k = Binomial::new(remaining, q)
            .expect("q lies in [0, 1]")
            .sample(rng);
        counts[i] = k;
        remaining -= k;
        mass_left -= p;
    }
    counts[last] += remaining;
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_reproducible_and_distinct() {
        let a: u64 = stream(7, 0).random();
        let b: u64 = stream(7, 0).random();
        let c: u64 = stream(7, 1).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn partition_sums() {
        for n in [0, 1, 7, 8, 9, 100_003] {
            let p = partition(n);
            assert_eq!(p.len(), PARTITIONS);
            assert_eq!(p.iter().sum::<u64>(), n);
        }
    }

    #[test]
    fn multinomial_totals_and_support() {
        let mut rng = stream(1, 0);
        let counts = multinomial(&mut rng, 1000, &[0.25, 0.0, 0.75, 0.0]);
        assert_eq!(counts.iter().sum::<u64>(), 1000);
        assert_eq!(counts[1] + counts[3], 0);
        assert_eq!(multinomial(&mut rng, 5, &[0.0, 1.0]), vec![0, 5]);
        assert_eq!(multinomial(&mut rng, 5, &[1.0, 0.0]), vec![5, 0]);
    }
}
