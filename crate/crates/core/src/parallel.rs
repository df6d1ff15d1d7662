//! Order-preserving maps over case indices.
//!
//! With the `parallel` feature (the default) [`par_map_indexed`] fans out
//! over the rayon thread pool; without it, it runs sequentially. Results
//! always come back in index order, so reports are deterministic either way.

/// `(0..n).map(f)`, in parallel when the `parallel` feature is enabled.
#[cfg(feature = "parallel")]
pub fn par_map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// `(0..n).map(f)`, in parallel when the `parallel` feature is enabled.
#[cfg(not(feature = "parallel"))]
pub fn par_map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    seq_map_indexed(n, f)
}

/// `(0..n).map(f)` on the calling thread.
pub fn seq_map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Maps over a slice, preserving order.
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    par_map_indexed(items.len(), |i| f(&items[i]))
}

/// Whether [`par_map_indexed`] runs on the thread pool.
pub const fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let v = par_map_indexed(1000, |i| i * i);
        assert_eq!(v, seq_map_indexed(1000, |i| i * i));
        assert_eq!(par_map(&[3, 1, 2], |x| x + 1), vec![4, 2, 3]);
    }
}
