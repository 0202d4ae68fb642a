//! Replica-level execution: data-parallel via rayon under the `parallel`
//! feature, with a sequential fallback that produces identical results.

/// Map `f` over `0..n` replica indices, preserving index order in the output.
///
/// Every replica derives its own RNG from `(master seed, index)`, so the
/// result does not depend on thread count or scheduling.
#[cfg(feature = "parallel")]
pub fn replica_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn replica_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Always-sequential variant, kept for benchmarking against the parallel path.
pub fn replica_map_seq<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Deterministic per-replica seed derivation (splittable 64-bit mix).
#[inline]
pub fn derive_seed(master: u64, index: u64) -> u64 {
    // splitmix64 of master xor golden-ratio-spread index
    let mut z = master ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
