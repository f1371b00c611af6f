//! Data-parallel helpers. With the `parallel` feature these dispatch to rayon;
//! without it they run sequentially. Output order never depends on scheduling.

/// Work below this many elements is not worth splitting.
#[cfg(feature = "parallel")]
const MIN_PARALLEL: usize = 1 << 14;

#[cfg(feature = "parallel")]
static FORCE_SEQUENTIAL: std::sync::atomic::AtomicBool = std::sync::atomic::AtomicBool::new(false);

/// Routes every helper through the sequential path until reset. Process-wide;
/// meant for benchmarks comparing the two modes in one binary.
pub fn force_sequential(on: bool) {
    #[cfg(feature = "parallel")]
    FORCE_SEQUENTIAL.store(on, std::sync::atomic::Ordering::Relaxed);
    let _ = on;
}

#[cfg(feature = "parallel")]
fn forced() -> bool {
    FORCE_SEQUENTIAL.load(std::sync::atomic::Ordering::Relaxed)
}

#[cfg(feature = "parallel")]
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    use rayon::prelude::*;
    if data.len() < MIN_PARALLEL || forced() {
        data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
    } else {
        data.par_chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
    }
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    data.chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if forced() {
        return items.iter().map(f).collect();
    }
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// `map` over `0..n`.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    let idx: Vec<usize> = (0..n).collect();
    map(&idx, |&i| f(i))
}

pub fn is_parallel() -> bool {
    #[cfg(feature = "parallel")]
    return !forced();
    #[cfg(not(feature = "parallel"))]
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_sequential_matches() {
        let a = map_range(40_000, |i| i * i % 97);
        force_sequential(true);
        let b = map_range(40_000, |i| i * i % 97);
        force_sequential(false);
        assert_eq!(a, b);
    }
}
