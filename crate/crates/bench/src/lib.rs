//! Inputs shared by the benchmarks.

use poset_cde::Poset;

/// The `a x b` grid poset.
pub fn grid(a: usize, b: usize) -> Poset {
    Poset::chain(a).direct_product(&Poset::chain(b))
}
