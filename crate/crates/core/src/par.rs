//! Row/plane iteration that goes parallel when the `rayon` feature is on.

#[cfg(feature = "rayon")]
use rayon::prelude::*;

/// Calls `f(index, chunk)` for each `chunk_len` chunk of `buf`.
pub(crate) fn for_each_chunk_mut<T, F>(buf: &mut [T], chunk_len: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Send + Sync,
{
    if chunk_len == 0 {
        return;
    }
    #[cfg(feature = "rayon")]
    buf.par_chunks_mut(chunk_len).enumerate().for_each(|(i, c)| f(i, c));
    #[cfg(not(feature = "rayon"))]
    buf.chunks_mut(chunk_len).enumerate().for_each(|(i, c)| f(i, c));
}
