//! Fixtures shared by the criterion benchmarks.

use shiish_core::Word;

/// Every word of `[n]^n`, materialized so benchmarks time only the work on them.
pub fn words(n: usize) -> Vec<Word> {
    shiish_core::all_words(n).expect("benchmark sizes stay under the word cap").collect()
}

/// `(n, k)` pairs for `2 <= k <= n`.
pub fn cells(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (2..=n).map(move |k| (n, k))
}
