//! Cross-validation of the five characterizations of the labels of `A^k_n`,
//! reproduction of the published worked examples, and count sweeps.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arrangement::{build_arrangement, enumerate_regions_capped};
use crate::error::{Error, Result};
use crate::graphs::{build_gkn, build_rooted, dfs_burn, is_g_parking_bruteforce};
use crate::parking::{
    centre, check_k, count_tail_parkers, is_k_partial, parks_all_tail, satisfies_sigma_conditions,
    sigma_construction, sort_tail,
};
use crate::word::{all_words_capped, compose, Permutation, Word};

/// Largest `n` for the full five-way comparison.
pub const FULL_CHECK_MAX_N: usize = 5;
/// Largest `n` accepted at all; the subset test is skipped above
/// [`FULL_CHECK_MAX_N`].
pub const CROSS_VALIDATE_MAX_N: usize = 6;
pub const SWEEP_MAX_N: usize = 6;
pub const MAX_SAMPLES: usize = 10;

pub const PS_LABELS: &str = "ps_labels";
pub const BURNING: &str = "burning";
pub const BRUTEFORCE: &str = "bruteforce";
pub const PARTIAL: &str = "partial";
pub const SIGMA: &str = "sigma";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub ps_labels: usize,
    pub burning: usize,
    /// `None` when the subset test was skipped.
    pub bruteforce: Option<usize>,
    pub partial: usize,
    pub sigma: usize,
}

/// Words in one set but not the other, at most [`MAX_SAMPLES`] of each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub left: String,
    pub right: String,
    pub only_left: Vec<Word>,
    pub only_right: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub n: usize,
    pub k: usize,
    /// `(n + 1)^(n - 1)`.
    pub expected: u64,
    pub counts: Counts,
    pub mismatches: Vec<Mismatch>,
    /// Regions sharing a label with an earlier region.
    pub duplicate_labels: usize,
    /// Region labels with an entry outside `[1, n]`.
    pub labels_out_of_range: usize,
    pub pass: bool,
}

impl EquivalenceReport {
    pub fn header() -> String {
        format!(
            "{:>2} {:>2} {:>6} {:>9} {:>7} {:>10} {:>7} {:>6}  result",
            "n", "k", "expect", "ps_labels", "burning", "bruteforce", "partial", "sigma"
        )
    }
}

impl fmt::Display for EquivalenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.counts;
        let brute = c.bruteforce.map_or_else(|| "-".to_string(), |b| b.to_string());
        write!(
            f,
            "{:>2} {:>2} {:>6} {:>9} {:>7} {:>10} {:>7} {:>6}  {}",
            self.n,
            self.k,
            self.expected,
            c.ps_labels,
            c.burning,
            brute,
            c.partial,
            c.sigma,
            if self.pass { "pass" } else { "FAIL" }
        )?;
        for m in &self.mismatches {
            write!(f, "\n      {} vs {}: only {} {:?}, only {} {:?}", m.left, m.right, m.left,
                display_words(&m.only_left), m.right, display_words(&m.only_right))?;
        }
        Ok(())
    }
}

fn display_words(words: &[Word]) -> Vec<String> {
    words.iter().map(ToString::to_string).collect()
}

/// Labels of the regions of `A^k_n` as words, plus the duplicate and
/// out-of-range counts.
pub fn label_set(n: usize, k: usize) -> Result<(BTreeSet<Word>, usize, usize)> {
    let spec = build_arrangement(n, k)?;
    let regions = enumerate_regions_capped(&spec, CROSS_VALIDATE_MAX_N)?;
    let mut set = BTreeSet::new();
    let mut duplicates = 0;
    let mut out_of_range = 0;
    for (_, label) in &regions {
        match label.to_word() {
            Ok(word) => {
                if !set.insert(word) {
                    duplicates += 1;
                }
            }
            Err(_) => out_of_range += 1,
        }
    }
    Ok((set, duplicates, out_of_range))
}

/// Some `σ` satisfies the permutation conditions, by search over all of `S_n`.
pub fn sigma_exists(a: &Word, k: usize, perms: &[Permutation]) -> Result<bool> {
    for s in perms {
        if satisfies_sigma_conditions(a, k, s)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Compares the five characterizations over `[n]^n`.
pub fn cross_validate(n: usize, k: usize) -> Result<EquivalenceReport> {
    if n > CROSS_VALIDATE_MAX_N {
        return Err(Error::BudgetExceeded { what: "cross validation", n, cap: CROSS_VALIDATE_MAX_N });
    }
    check_k(n, k)?;
    let with_bruteforce = n <= FULL_CHECK_MAX_N;
    let (labels, duplicate_labels, labels_out_of_range) = label_set(n, k)?;

    let rooted = build_rooted(n, k)?;
    let graph = build_gkn(n, k)?;
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let words: Vec<Word> = all_words_capped(n, CROSS_VALIDATE_MAX_N)?.collect();

    let flags: Vec<[bool; 4]> = words
        .par_iter()
        .map(|a| -> Result<[bool; 4]> {
            let brute = with_bruteforce && is_g_parking_bruteforce(&graph, a)?;
            Ok([dfs_burn(&rooted, a)?.success, brute, is_k_partial(a, k)?, sigma_exists(a, k, &perms)?])
        })
        .collect::<Result<_>>()?;
    let select = |slot: usize| -> BTreeSet<Word> {
        words.iter().zip(&flags).filter(|(_, f)| f[slot]).map(|(a, _)| a.clone()).collect()
    };

    let mut others = vec![(BURNING, select(0))];
    if with_bruteforce {
        others.push((BRUTEFORCE, select(1)));
    }
    others.push((PARTIAL, select(2)));
    others.push((SIGMA, select(3)));

    let size = |name: &str| others.iter().find(|(o, _)| *o == name).map(|(_, s)| s.len());
    let counts = Counts {
        ps_labels: labels.len(),
        burning: size(BURNING).unwrap_or(0),
        bruteforce: size(BRUTEFORCE),
        partial: size(PARTIAL).unwrap_or(0),
        sigma: size(SIGMA).unwrap_or(0),
    };
    let mismatches: Vec<Mismatch> = others
        .iter()
        .filter(|(_, set)| *set != labels)
        .map(|(name, set)| Mismatch {
            left: PS_LABELS.to_string(),
            right: name.to_string(),
            only_left: labels.difference(set).take(MAX_SAMPLES).cloned().collect(),
            only_right: set.difference(&labels).take(MAX_SAMPLES).cloned().collect(),
        })
        .collect();
    let expected = (n as u64 + 1).pow(n as u32 - 1);
    let pass = mismatches.is_empty()
        && duplicate_labels == 0
        && labels_out_of_range == 0
        && counts.ps_labels as u64 == expected;
    Ok(EquivalenceReport { n, k, expected, counts, mismatches, duplicate_labels, labels_out_of_range, pass })
}

/// One published value, expected against computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactCheck {
    pub name: String,
    pub expected: Value,
    pub computed: Value,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TablesReport {
    pub checks: Vec<ArtifactCheck>,
    pub pass: bool,
}

impl fmt::Display for TablesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.checks.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{:<28} {}", c.name, if c.pass { "pass" } else { "FAIL" })?;
            if !c.pass {
                write!(f, "  expected {} computed {}", c.expected, c.computed)?;
            }
        }
        Ok(())
    }
}

fn words_of(list: &[&str]) -> Vec<Word> {
    list.iter().map(|s| s.parse().expect("literal word")).collect()
}

fn strings(words: impl IntoIterator<Item = Word>) -> Vec<String> {
    words.into_iter().map(|w| w.to_string()).collect()
}

fn equal(name: &str, expected: Value, computed: Value) -> ArtifactCheck {
    let pass = expected == computed;
    ArtifactCheck { name: name.to_string(), expected, computed, pass }
}

fn membership(name: &str, expected: &[&str], labels: &BTreeSet<Word>) -> ArtifactCheck {
    let wanted = words_of(expected);
    let missing: Vec<Word> = wanted.iter().filter(|w| !labels.contains(*w)).cloned().collect();
    ArtifactCheck {
        name: name.to_string(),
        expected: json!(strings(wanted)),
        computed: json!({ "missing": strings(missing.clone()) }),
        pass: missing.is_empty(),
    }
}

pub const ISH3_LABELS: [&str; 16] = [
    "133", "132", "131", "123", "231", "122", "113", "112", "111", "121", "221", "213", "212", "211", "311", "321",
];
pub const SHI4_FAMILY: [&str; 5] = ["2311", "2312", "2411", "2412", "2413"];
pub const ISH4_FAMILY: [&str; 5] = ["2311", "2411", "2412", "2413", "2414"];
pub const A34_EXTRA_LABEL: &str = "2313";

/// Recomputes the label set of `Ish_3`, the `n = 4` label families, the burning
/// traces for `4213`, the neighbour list of vertex 1, three centres and the
/// `n = 8` permutation example.
pub fn reproduce_tables() -> Result<TablesReport> {
    let mut checks = Vec::new();

    let (ish3, _, _) = label_set(3, 3)?;
    let mut expected: Vec<Word> = words_of(&ISH3_LABELS);
    expected.sort();
    checks.push(equal("ish3_labels", json!(strings(expected)), json!(strings(ish3))));

    let (shi4, _, _) = label_set(4, 2)?;
    let (a34, _, _) = label_set(4, 3)?;
    let (ish4, _, _) = label_set(4, 4)?;
    checks.push(membership("shi4_family", &SHI4_FAMILY, &shi4));
    checks.push(membership("a34_family", &SHI4_FAMILY, &a34));
    checks.push(membership("ish4_family", &ISH4_FAMILY, &ish4));
    checks.push(membership("a34_label_2313", &[A34_EXTRA_LABEL], &a34));

    let a: Word = "4213".parse()?;
    let k2 = dfs_burn(&build_rooted(4, 2)?, &a)?;
    checks.push(equal(
        "burn_4213_k2",
        json!({ "burnt": [0, 3, 2, 4, 1], "tree": [[0, 3], [0, 2], [2, 4], [0, 1]], "success": true }),
        json!({ "burnt": k2.burnt, "tree": k2.tree, "success": k2.success }),
    ));
    for k in [3, 4] {
        let r = dfs_burn(&build_rooted(4, k)?, &a)?;
        checks.push(equal(&format!("burn_4213_k{k}"), json!({ "success": false }), json!({ "success": r.success })));
    }
    checks.push(equal("neighbors_1_g34", json!([8, 4, 7, 3, 2]), json!(build_rooted(4, 3)?.neighbors(1))));
    for (word, z) in [("4321", vec![4, 3, 2, 1]), ("4231", vec![4, 2]), ("4213", vec![3, 2])] {
        let computed = centre(&word.parse()?).members().to_vec();
        checks.push(equal(&format!("centre_{word}"), json!(z), json!(computed)));
    }

    let a: Word = "26631461".parse()?;
    let computed = match sigma_construction(&a, 5)? {
        Some(s) => {
            let image = compose(&a, &s.sigma)?;
            json!({
                "sorted": s.sorted.to_string(),
                "tau": s.tau.to_string(),
                "sigma": s.sigma.to_string(),
                "composed": image.to_string(),
            })
        }
        None => Value::Null,
    };
    checks.push(equal(
        "sigma_n8_k5",
        json!({ "sorted": "26636411", "tau": "87412365", "sigma": "85412367", "composed": "11326646" }),
        computed,
    ));

    let pass = checks.iter().all(|c| c.pass);
    Ok(TablesReport { checks, pass })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub k: usize,
    pub regions: usize,
    pub expected_regions: u64,
    pub tail_bruteforce: u128,
    pub tail_formula: u128,
    pub pass: bool,
}

impl fmt::Display for SweepRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:>2} {:>2} {:>7} {:>7} {:>9} {:>9}  {}",
            self.n,
            self.k,
            self.regions,
            self.expected_regions,
            self.tail_bruteforce,
            self.tail_formula,
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

/// Region counts and brute-force `T_k` for every `(n, k)` with `3 <= n <= n_max`.
pub fn count_sweep(n_max: usize) -> Result<Vec<SweepRow>> {
    if n_max > SWEEP_MAX_N {
        return Err(Error::BudgetExceeded { what: "count sweep", n: n_max, cap: SWEEP_MAX_N });
    }
    let cells: Vec<(usize, usize)> = (3..=n_max).flat_map(|n| (2..=n).map(move |k| (n, k))).collect();
    cells
        .par_iter()
        .map(|&(n, k)| {
            let spec = build_arrangement(n, k)?;
            let regions = enumerate_regions_capped(&spec, SWEEP_MAX_N)?.len();
            let expected_regions = (n as u64 + 1).pow(n as u32 - 1);
            let mut tail_bruteforce = 0u128;
            for a in all_words_capped(n, SWEEP_MAX_N)? {
                if parks_all_tail(&a, k)? {
                    tail_bruteforce += 1;
                }
            }
            let tail_formula = count_tail_parkers(n, k)?;
            let pass = regions as u64 == expected_regions && tail_bruteforce == tail_formula;
            Ok(SweepRow { n, k, regions, expected_regions, tail_bruteforce, tail_formula, pass })
        })
        .collect()
}

/// Everything `verify` runs, merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n_max: usize,
    pub cells: Vec<EquivalenceReport>,
    pub tables: TablesReport,
    pub sweep: Vec<SweepRow>,
    pub pass: bool,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "equivalence")?;
        writeln!(f, "{}", EquivalenceReport::header())?;
        for c in &self.cells {
            writeln!(f, "{c}")?;
        }
        writeln!(f, "\nworked examples")?;
        writeln!(f, "{}", self.tables)?;
        writeln!(f, "\ncounts")?;
        writeln!(f, "{:>2} {:>2} {:>7} {:>7} {:>9} {:>9}  result", "n", "k", "regions", "expect", "T_k brute", "T_k")?;
        for row in &self.sweep {
            writeln!(f, "{row}")?;
        }
        write!(f, "\n{}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Cross-validates every `(n, k)` with `3 <= n <= n_max`, reproduces the
/// worked examples and sweeps the counts.
pub fn verify_all(n_max: usize) -> Result<VerifyReport> {
    if n_max < 3 {
        return Err(Error::InvalidN { n: n_max, min: 3 });
    }
    if n_max > CROSS_VALIDATE_MAX_N {
        return Err(Error::BudgetExceeded { what: "verification", n: n_max, cap: CROSS_VALIDATE_MAX_N });
    }
    let cells = (3..=n_max)
        .flat_map(|n| (2..=n).map(move |k| (n, k)))
        .map(|(n, k)| cross_validate(n, k))
        .collect::<Result<Vec<_>>>()?;
    let tables = reproduce_tables()?;
    let sweep = count_sweep(n_max)?;
    let pass = cells.iter().all(|c| c.pass) && tables.pass && sweep.iter().all(|r| r.pass);
    Ok(VerifyReport { n_max, cells, tables, sweep, pass })
}

/// `1 ∈ burnt` and `a` parks `[k, n]`, the first of the three equivalent
/// statements about a burning run.
pub fn parks_tail_and_burns_one(a: &Word, k: usize) -> Result<bool> {
    let g = build_rooted(a.n(), k)?;
    Ok(parks_all_tail(a, k)? && dfs_burn(&g, a)?.burnt.contains(&1))
}

/// Burnt prefix up to the smallest burnt vertex, mapped through the sorting
/// permutation, next to the centre of `a↑k`. Both sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixCheck {
    /// The smallest burnt vertex is 1 or burns last.
    pub condition: bool,
    pub prefix: Vec<usize>,
    pub centre: Vec<usize>,
}

/// `None` when no burnt vertex lies below `k`.
pub fn burnt_prefix_and_centre(a: &Word, k: usize) -> Result<Option<PrefixCheck>> {
    let g = build_rooted(a.n(), k)?;
    let r = dfs_burn(&g, a)?;
    let burnt = &r.burnt[1..];
    let Some((p, &min)) = burnt.iter().enumerate().min_by_key(|(_, &v)| v) else {
        return Ok(None);
    };
    if min >= k {
        return Ok(None);
    }
    let condition = min == 1 || p + 1 == burnt.len();
    let (sorted, pi) = sort_tail(a, k)?;
    let mut prefix: Vec<usize> = burnt[..=p].iter().map(|&v| pi.apply(v)).collect();
    prefix.sort_unstable();
    let mut z = centre(&sorted).members().to_vec();
    z.sort_unstable();
    Ok(Some(PrefixCheck { condition, prefix, centre: z }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cells_pass() {
        for (n, k) in [(3, 2), (3, 3), (4, 2), (4, 4)] {
            let r = cross_validate(n, k).unwrap();
            assert!(r.pass, "{r}");
            assert_eq!(r.counts.bruteforce, Some(r.expected as usize));
        }
    }

    #[test]
    fn ish3_label_set() {
        let (labels, dup, out) = label_set(3, 3).unwrap();
        assert_eq!((dup, out), (0, 0));
        let expected: BTreeSet<Word> = words_of(&ISH3_LABELS).into_iter().collect();
        assert_eq!(labels, expected);
    }

    #[test]
    fn literal_sigma_set_is_too_large_for_intermediate_k() {
        let r = cross_validate(4, 3).unwrap();
        assert!(!r.pass);
        assert_eq!(r.counts.ps_labels, 125);
        assert_eq!(r.counts.burning, 125);
        assert_eq!(r.counts.bruteforce, Some(125));
        assert_eq!(r.counts.partial, 125);
        assert!(r.counts.sigma > 125);
        assert_eq!(r.mismatches.len(), 1);
        assert_eq!(r.mismatches[0].right, SIGMA);
        assert!(r.mismatches[0].only_left.is_empty());
        assert!(r.mismatches[0].only_right.contains(&"1144".parse().unwrap()));
    }

    #[test]
    fn tables_reproduce() {
        let t = reproduce_tables().unwrap();
        assert!(t.pass, "{t}");
        assert_eq!(t.checks.len(), 13);
    }

    #[test]
    fn sweep_small() {
        let rows = count_sweep(4).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|r| r.pass));
        let tails: Vec<u128> = rows.iter().filter(|r| r.n == 4).map(|r| r.tail_formula).collect();
        assert_eq!(tails, vec![200, 240, 256]);
        assert!(matches!(count_sweep(7), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn report_json_shape() {
        let r = cross_validate(3, 2).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["n", "k", "counts", "mismatches", "pass"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["counts"]["ps_labels"], 16);
    }

    #[test]
    fn budgets() {
        assert!(matches!(cross_validate(7, 2), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(verify_all(2), Err(Error::InvalidN { .. })));
        assert!(matches!(verify_all(7), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn three_statements_agree() {
        for n in 3..=5 {
            for k in 2..=n {
                let g = build_rooted(n, k).unwrap();
                for a in all_words_capped(n, 5).unwrap() {
                    let first = parks_tail_and_burns_one(&a, k).unwrap();
                    let second = is_k_partial(&a, k).unwrap();
                    let third = dfs_burn(&g, &a).unwrap().success;
                    assert_eq!(first, second, "{a} k={k}");
                    assert_eq!(second, third, "{a} k={k}");
                }
            }
        }
    }
}
