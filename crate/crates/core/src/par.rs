//! Data-parallel helpers. With the `parallel` feature (default) these run on
//! rayon; without it they fall back to plain sequential iteration. Results are
//! always returned in input order, so output never depends on scheduling.

use crate::error::Result;

#[cfg(feature = "parallel")]
pub fn ordered_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn ordered_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Run `f` with at most `threads` workers (`0` means the rayon default).
#[cfg(feature = "parallel")]
pub fn with_threads<R, F>(threads: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R, F>(_threads: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    Ok(f())
}

pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_map_keeps_input_order() {
        let items: Vec<u64> = (0..1000).collect();
        let out = with_threads(4, || ordered_map(&items, |x| x * x)).unwrap();
        assert_eq!(out, items.iter().map(|x| x * x).collect::<Vec<_>>());
    }
}
