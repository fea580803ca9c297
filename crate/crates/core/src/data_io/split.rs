use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Seeded shuffle, then the first `round(fraction · n)` items (at least one,
/// at most `n − 1`) go to the training half.
pub fn split_train_test<T>(mut items: Vec<T>, fraction: f64, seed: u64) -> Result<(Vec<T>, Vec<T>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidInput(format!("split fraction must lie in (0,1), got {fraction}")));
    }
    let n = items.len();
    if n < 2 {
        return Err(Error::InvalidInput(format!("cannot split {n} samples")));
    }
    items.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n_train = ((fraction * n as f64).round() as usize).clamp(1, n - 1);
    let test = items.split_off(n_train);
    Ok((items, test))
}

/// Seeded subset of `min(k, n)` items without replacement, original order kept.
pub fn subsample<T: Clone>(items: &[T], k: usize, seed: u64) -> Vec<T> {
    if k >= items.len() {
        return items.to_vec();
    }
    let mut idx: Vec<usize> = (0..items.len()).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    idx.truncate(k);
    idx.sort_unstable();
    idx.into_iter().map(|i| items[i].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn half_split() {
        let (a, b) = split_train_test((0..10).collect(), 0.5, 3).unwrap();
        assert_eq!((a.len(), b.len()), (5, 5));
    }

    #[test]
    fn deterministic() {
        let one = split_train_test((0..50).collect::<Vec<_>>(), 0.3, 9).unwrap();
        let two = split_train_test((0..50).collect::<Vec<_>>(), 0.3, 9).unwrap();
        assert_eq!(one, two);
        let other = split_train_test((0..50).collect::<Vec<_>>(), 0.3, 10).unwrap();
        assert_ne!(one, other);
    }

    #[test]
    fn partition_of_inputs() {
        for seed in 0..20u64 {
            let n = 2 + (seed as usize * 7) % 90;
            let (a, b) = split_train_test((0..n).collect(), 0.01 + seed as f64 * 0.049, seed).unwrap();
            let sa: HashSet<_> = a.iter().copied().collect();
            let sb: HashSet<_> = b.iter().copied().collect();
            assert!(sa.is_disjoint(&sb));
            assert_eq!(sa.len() + sb.len(), n);
            assert!(!a.is_empty() && !b.is_empty());
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(split_train_test(vec![1], 0.5, 0).is_err());
        assert!(split_train_test(vec![1, 2], 0.0, 0).is_err());
        assert!(split_train_test(vec![1, 2], 1.0, 0).is_err());
    }

    #[test]
    fn subsample_keeps_order() {
        let s = subsample(&(0..100).collect::<Vec<_>>(), 10, 1);
        assert_eq!(s.len(), 10);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(subsample(&[1, 2], 5, 0), vec![1, 2]);
    }
}
