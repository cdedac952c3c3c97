//! Replica-level parallelism with results independent of the thread count.
//!
//! Work is cut into fixed-size blocks; block b always draws from the same RNG
//! stream and results are concatenated in block order.

use rayon::prelude::*;

/// Replicas per RNG stream.
pub const REPLICA_BLOCK: usize = 1000;

/// Calls `work(block, len)` for each block of `total` replicas and
/// concatenates the outputs in block order.
pub fn map_blocks<T, F>(total: usize, block: usize, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, usize) -> Vec<T> + Sync,
{
    assert!(block > 0, "block size must be positive");
    let blocks = total.div_ceil(block);
    let parts: Vec<Vec<T>> = (0..blocks)
        .into_par_iter()
        .map(|b| work(b, block.min(total - b * block)))
        .collect();
    parts.into_iter().flatten().collect()
}

/// Like [`map_blocks`] for fallible work; the first error by block order wins.
pub fn try_map_blocks<T, E, F>(total: usize, block: usize, work: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize, usize) -> Result<Vec<T>, E> + Sync,
{
    assert!(block > 0, "block size must be positive");
    let blocks = total.div_ceil(block);
    let parts: Vec<Result<Vec<T>, E>> = (0..blocks)
        .into_par_iter()
        .map(|b| work(b, block.min(total - b * block)))
        .collect();
    let mut out = Vec::with_capacity(total);
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_cover_total_in_order() {
        let v = map_blocks(10, 3, |b, len| (0..len).map(|i| b * 3 + i).collect());
        assert_eq!(v, (0..10).collect::<Vec<_>>());
        assert!(map_blocks(0, 3, |_, len| vec![len]).is_empty());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let run = || map_blocks(25, 4, |b, len| vec![(b, len)]);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(run);
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(run);
        assert_eq!(one, four);
    }
}
