//! Thread-count-independent parallel loops. Reductions split the index
//! range into fixed chunks and combine chunk results in order.

use rayon::prelude::*;

const CHUNK: usize = 4096;

pub fn fill<F>(out: &mut [f64], f: F)
where
    F: Fn(usize) -> f64 + Sync,
{
    out.par_iter_mut().with_min_len(512).enumerate().for_each(|(i, v)| *v = f(i));
}

pub fn sum<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks: Vec<f64> =
        (0..n.div_ceil(CHUNK)).into_par_iter().map(|c| (c * CHUNK..((c + 1) * CHUNK).min(n)).map(&f).sum()).collect();
    chunks.into_iter().sum()
}

pub fn max<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    (0..n).into_par_iter().with_min_len(CHUNK).map(f).reduce(|| f64::NEG_INFINITY, f64::max)
}

pub fn min<F>(n: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    -max(n, |i| -f(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_is_independent_of_pool_size() {
        let f = |i: usize| ((i as f64) * 0.37).sin() * 1e-3 + 1.0 / (1.0 + i as f64);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| sum(100_003, f));
        let many = rayon::ThreadPoolBuilder::new().num_threads(7).build().unwrap().install(|| sum(100_003, f));
        assert_eq!(one.to_bits(), many.to_bits());
    }
}
