//! The parking process and the parking-function predicates built on it:
//! classical, Ish (via the centre), `k`-partial (via `a↑k`), and the
//! permutation characterization with its constructive witness.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{compose, Permutation, Word};

/// Result of running the parking process on a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParkingOutcome {
    /// `2n` slots, `slots[p - 1]` is the driver in slot `p` or 0.
    slots: Vec<usize>,
    /// `spot_of[i - 1]` is the slot taken by driver `i`.
    spot_of: Vec<usize>,
    first_free: usize,
}

impl ParkingOutcome {
    pub fn n(&self) -> usize {
        self.spot_of.len()
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    /// Slot taken by driver `i` (1-based), in `[1, 2n]`.
    pub fn spot_of(&self, driver: usize) -> usize {
        self.spot_of[driver - 1]
    }

    /// Smallest empty slot in `[1, n + 1]`; slot `n + 1` counts as free.
    pub fn first_free(&self) -> usize {
        self.first_free
    }

    pub fn parks(&self, driver: usize) -> bool {
        self.spot_of(driver) <= self.n()
    }

    /// Drivers that found a slot in `[1, n]`, ascending.
    pub fn parked_set(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.parks(i)).collect()
    }

    /// Occupied slots in `[1, n]`, ascending. Unlike the parked drivers,
    /// this set does not change when the word is permuted.
    pub fn occupied_slots(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&p| self.slots[p - 1] != 0).collect()
    }

    pub fn parks_everyone(&self) -> bool {
        (1..=self.n()).all(|i| self.parks(i))
    }
}

/// Drivers `n, n-1, ..., 1` in turn take the first empty slot at or after
/// their preference, over a street of `2n` slots.
pub fn run_parking(a: &Word) -> ParkingOutcome {
    let n = a.n();
    let mut slots = vec![0usize; 2 * n];
    let mut spot_of = vec![0usize; n];
    for driver in (1..=n).rev() {
        let mut p = a.at(driver) as usize;
        while slots[p - 1] != 0 {
            p += 1;
        }
        assert!(p <= 2 * n, "parking overflow past slot 2n");
        spot_of[driver - 1] = p;
        slots[p - 1] = driver;
    }
    let first_free = (1..=n).find(|&p| slots[p - 1] == 0).unwrap_or(n + 1);
    ParkingOutcome { slots, spot_of, first_free }
}

/// `|{j : a_j <= i}| >= i` for every `i` in `[n]`.
pub fn is_parking_function(a: &Word) -> bool {
    let counts = value_counts(a.values(), a.n());
    let mut at_most = 0usize;
    (1..=a.n()).all(|i| {
        at_most += counts[i];
        at_most >= i
    })
}

/// Whether every driver in `[k, n]` parks, decided by the counting criterion
/// `|{j ∈ [k, n] : a_j <= i}| + k - 1 >= i` for all `i ∈ [k, n]`.
pub fn parks_all_tail(a: &Word, k: usize) -> Result<bool> {
    let n = a.n();
    check_k(n, k)?;
    let counts = value_counts(&a.values()[k - 1..], n);
    let mut at_most = 0usize;
    for i in 1..=n {
        at_most += counts[i];
        if i >= k && at_most + k - 1 < i {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The centre `Z(a)`: the largest set `i_1 > ... > i_m` with `a_{i_j} <= j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Centre {
    members: Vec<usize>,
}

impl Centre {
    /// Members in descending order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Greedy scan from `n` down to 1, taking `i` whenever `a_i` fits the next
/// rank. Sets with the defining property are closed under union, so the
/// greedy set is the largest one.
pub fn centre(a: &Word) -> Centre {
    let mut members = Vec::new();
    for i in (1..=a.n()).rev() {
        if a.at(i) as usize <= members.len() + 1 {
            members.push(i);
        }
    }
    Centre { members }
}

pub fn is_ish_parking(a: &Word) -> bool {
    centre(a).contains(1)
}

/// How equal tail values are ordered by [`sort_tail_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    AscendingIndex,
    DescendingIndex,
}

/// `(a↑k, π)`: `π` fixes `[k - 1]` and orders positions `k..=n` so their
/// values are non-increasing, equal values keeping ascending index.
pub fn sort_tail(a: &Word, k: usize) -> Result<(Word, Permutation)> {
    sort_tail_with(a, k, TieBreak::AscendingIndex)
}

pub fn sort_tail_with(a: &Word, k: usize, ties: TieBreak) -> Result<(Word, Permutation)> {
    let n = a.n();
    check_k(n, k)?;
    let mut images: Vec<usize> = (1..=n).collect();
    images[k - 1..].sort_by(|&x, &y| {
        let by_value = a.at(y).cmp(&a.at(x));
        match ties {
            TieBreak::AscendingIndex => by_value.then(x.cmp(&y)),
            TieBreak::DescendingIndex => by_value.then(y.cmp(&x)),
        }
    });
    let pi = Permutation::new(images).expect("reordering of [n] is a permutation");
    let sorted = compose(a, &pi)?;
    Ok((sorted, pi))
}

/// Parks every element of `[k, n]` and `1 ∈ Z(a↑k)`.
pub fn is_k_partial(a: &Word, k: usize) -> Result<bool> {
    if !parks_all_tail(a, k)? {
        return Ok(false);
    }
    let (sorted, _) = sort_tail(a, k)?;
    Ok(is_ish_parking(&sorted))
}

/// The pieces of the constructive permutation witness: `σ = π ∘ τ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaWitness {
    pub sorted: Word,
    pub pi: Permutation,
    pub tau: Permutation,
    pub sigma: Permutation,
}

/// Builds `τ` from `Z = Z(a↑k)`, `B = [k-1] \ Z` and `C = [k, n] \ Z`:
/// first `Z` descending, then `B` ascending, then `C` descending; returns
/// `σ = π ∘ τ`. `None` when `a` is not `k`-partial.
pub fn sigma_construction(a: &Word, k: usize) -> Result<Option<SigmaWitness>> {
    if !is_k_partial(a, k)? {
        return Ok(None);
    }
    let n = a.n();
    let (sorted, pi) = sort_tail(a, k)?;
    let z = centre(&sorted);
    let mut images: Vec<usize> = z.members().to_vec();
    images.extend((1..k).filter(|i| !z.contains(*i)));
    images.extend((k..=n).rev().filter(|i| !z.contains(*i)));
    let tau = Permutation::new(images).expect("Z, B and C partition [n]");
    let sigma = pi.then_after(&tau)?;
    Ok(Some(SigmaWitness { sorted, pi, tau, sigma }))
}

/// The permutation witness `σ` for `k`-partiality, or `None`.
pub fn sigma_characterization(a: &Word, k: usize) -> Result<Option<Permutation>> {
    Ok(sigma_construction(a, k)?.map(|w| w.sigma))
}

/// Checks the two conditions on `σ`:
/// `a_{σ(i)} <= i` for `i ∈ [a_1]` and for `i ∈ [k, n]` with `σ(i) >= k`;
/// `σ(i+1) < σ(i)` for `i ∈ [a_1 - 1]` with `σ(i) < k`.
pub fn satisfies_sigma_conditions(a: &Word, k: usize, sigma: &Permutation) -> Result<bool> {
    let n = a.n();
    check_k(n, k)?;
    if sigma.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: sigma.n() });
    }
    let a1 = a.at(1) as usize;
    let bounded = |i: usize| a.at(sigma.apply(i)) as usize <= i;
    let head_ok = (1..=a1).all(bounded);
    let tail_ok = (k..=n).filter(|&i| sigma.apply(i) >= k).all(bounded);
    let descent_ok = (1..a1)
        .filter(|&i| sigma.apply(i) < k)
        .all(|i| sigma.apply(i + 1) < sigma.apply(i));
    Ok(head_ok && tail_ok && descent_ok)
}

/// `T_k = k n^{k-1} (n+1)^{n-k}`, the number of words parking all of `[k, n]`.
pub fn count_tail_parkers(n: usize, k: usize) -> Result<u128> {
    check_k(n, k)?;
    let n128 = n as u128;
    let pow = |base: u128, exp: usize| -> Result<u128> {
        (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base).ok_or(Error::Overflow("T_k")))
    };
    (k as u128)
        .checked_mul(pow(n128, k - 1)?)
        .and_then(|x| pow(n128 + 1, n - k).ok().and_then(|y| x.checked_mul(y)))
        .ok_or(Error::Overflow("T_k"))
}

/// Per-word classification as exposed on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub word: Word,
    pub parking: bool,
    pub ish: bool,
    /// `k`-partial membership keyed by `k` as a decimal string.
    pub partial: BTreeMap<String, bool>,
    pub centre: Centre,
    /// Witness for the largest requested `k`, when one exists.
    pub sigma: Option<Permutation>,
    pub sigma_k: Option<usize>,
}

/// Classifies `a` for each `k` in `ks` (every `k` must lie in `[2, n]`).
pub fn classify(a: &Word, ks: &[usize]) -> Result<Classification> {
    let mut partial = BTreeMap::new();
    for &k in ks {
        partial.insert(k.to_string(), is_k_partial(a, k)?);
    }
    let sigma_k = ks.iter().copied().max();
    let sigma = match sigma_k {
        Some(k) => sigma_characterization(a, k)?,
        None => None,
    };
    Ok(Classification {
        word: a.clone(),
        parking: is_parking_function(a),
        ish: is_ish_parking(a),
        partial,
        centre: centre(a),
        sigma,
        sigma_k,
    })
}

pub(crate) fn check_k(n: usize, k: usize) -> Result<()> {
    if k < 2 || k > n {
        return Err(Error::InvalidK { n, k });
    }
    Ok(())
}

// counts[v] = number of entries equal to v, for v in [1, n].
fn value_counts(values: &[u32], n: usize) -> Vec<usize> {
    let mut counts = vec![0usize; n + 1];
    for &v in values {
        counts[v as usize] += 1;
    }
    counts
}
