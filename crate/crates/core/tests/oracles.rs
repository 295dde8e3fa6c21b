//! Values recomputed here without the library's algorithms.

use shiish_core::arrangement::{build_arrangement, enumerate_regions};
use shiish_core::graphs::build_gkn;
use shiish_core::parking::{count_tail_parkers, is_k_partial, parks_all_tail};
use shiish_core::word::all_words;

// Drivers n, ..., 1 on a street of exactly n spots; overflow is just dropped.
fn parks_by_arrival(values: &[u32]) -> Vec<bool> {
    let n = values.len();
    let mut taken = vec![false; n + 1];
    let mut parked = vec![false; n];
    for (idx, &v) in values.iter().enumerate().rev() {
        if let Some(p) = (v as usize..=n).find(|&p| !taken[p]) {
            taken[p] = true;
            parked[idx] = true;
        }
    }
    parked
}

#[test]
fn tail_count_formula_by_independent_simulation() {
    for n in 2..=6usize {
        for k in 2..=n {
            let mut count = 0u128;
            for a in all_words(n).unwrap() {
                let parked = parks_by_arrival(a.values());
                if (k..=n).all(|i| parked[i - 1]) {
                    count += 1;
                }
                assert_eq!((k..=n).all(|i| parked[i - 1]), parks_all_tail(&a, k).unwrap());
            }
            let formula = k as u128 * (n as u128).pow(k as u32 - 1) * (n as u128 + 1).pow((n - k) as u32);
            assert_eq!(count, formula, "n={n} k={k}");
            assert_eq!(count_tail_parkers(n, k).unwrap(), formula);
        }
    }
}

#[test]
fn tail_counts_for_n4() {
    let got: Vec<u128> = (2..=4).map(|k| count_tail_parkers(4, k).unwrap()).collect();
    assert_eq!(got, vec![200, 240, 256]);
}

#[test]
fn partial_counts_equal_cayley() {
    for n in 2..=6usize {
        let cayley = (n + 1).pow(n as u32 - 1);
        for k in 2..=n {
            let count = all_words(n).unwrap().filter(|a| is_k_partial(a, k).unwrap()).count();
            assert_eq!(count, cayley, "n={n} k={k}");
        }
    }
}

#[test]
fn hyperplane_counts() {
    // n(n-1)/2 central, sum over j of min(j,k)-1 from the first coordinate,
    // and one shifted hyperplane per pair k <= i < j.
    for n in 2..=7usize {
        for k in 2..=n {
            let central = n * (n - 1) / 2;
            let first: usize = (2..=n).map(|j| j.min(k) - 1).sum();
            let tail = (k..=n).map(|i| n - i).sum::<usize>();
            let expected = central + first + tail;
            assert_eq!(build_arrangement(n, k).unwrap().len(), expected, "n={n} k={k}");
        }
    }
}

#[test]
fn graph_arc_counts() {
    for n in 2..=7usize {
        for k in 2..=n {
            let expected: u32 = (n * (n - 1) / 2) as u32
                + (2..=n).map(|j| (j.min(k) - 1) as u32).sum::<u32>()
                + (k..=n).map(|i| (n - i) as u32).sum::<u32>();
            assert_eq!(build_gkn(n, k).unwrap().arc_count(), expected, "n={n} k={k}");
        }
    }
}

#[test]
fn region_counts_n6_shi_and_ish() {
    for k in [2, 6] {
        let count = enumerate_regions(&build_arrangement(6, k).unwrap()).unwrap().len();
        assert_eq!(count, 7usize.pow(5));
    }
}
