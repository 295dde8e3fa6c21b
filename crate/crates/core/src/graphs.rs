//! The multidigraph `G^k_n`, its rooted extension with ordered neighbour
//! lists, the depth-first burning algorithm and its inverse.
//!
//! Arcs of the rooted graph are written `(i, j)` with `j = v + m·n`: `v` is
//! the target vertex and `m` distinguishes parallel copies. Vertex 0 is the
//! root and never appears as a target.

use std::collections::HashSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parking::check_k;
use crate::word::Word;

/// Largest `n` accepted by [`is_g_parking_bruteforce`] (it visits `2^n` subsets).
pub const BRUTEFORCE_MAX_N: usize = 16;

/// A loopless, connected multidigraph on `[n]` stored as a multiplicity matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiDiGraph {
    n: usize,
    mult: Vec<u32>,
}

impl MultiDiGraph {
    /// Builds the graph from `(u, v, multiplicity)` triples, rejecting loops
    /// and disconnected results.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize, u32)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidN { n, min: 1 });
        }
        let mut mult = vec![0u32; n * n];
        for (u, v, m) in arcs {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::InvalidGraph(format!("arc ({u}, {v}) leaves [1, {n}]")));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            mult[(u - 1) * n + (v - 1)] += m;
        }
        let graph = MultiDiGraph { n, mult };
        if !graph.is_weakly_connected() {
            return Err(Error::InvalidGraph("not connected".into()));
        }
        Ok(graph)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        self.mult[(u - 1) * self.n + (v - 1)]
    }

    /// `(u, v, multiplicity)` for every pair with at least one arc.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        let n = self.n;
        (1..=n)
            .flat_map(move |u| (1..=n).map(move |v| (u, v)))
            .map(|(u, v)| (u, v, self.multiplicity(u, v)))
            .filter(|&(_, _, m)| m > 0)
    }

    pub fn arc_count(&self) -> u32 {
        self.mult.iter().sum()
    }

    fn is_weakly_connected(&self) -> bool {
        let mut seen = vec![false; self.n + 1];
        let mut stack = vec![1usize];
        seen[1] = true;
        while let Some(u) = stack.pop() {
            for v in 1..=self.n {
                if !seen[v] && (self.multiplicity(u, v) > 0 || self.multiplicity(v, u) > 0) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen[1..].iter().all(|&s| s)
    }

    /// Graphviz rendering; parallel arcs become parallel edges labelled by copy index.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n");
        for v in 1..=self.n {
            let _ = writeln!(out, "  {v};");
        }
        for (u, v, m) in self.arcs() {
            for copy in 0..m {
                if m > 1 {
                    let _ = writeln!(out, "  {u} -> {v} [label=\"{copy}\"];");
                } else {
                    let _ = writeln!(out, "  {u} -> {v};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// `G^k_n`: one arc `(i, j)` per hyperplane `x_i = x_j` and one arc `(j, i)`
/// per hyperplane `x_i = x_j + a`, `a >= 1`.
pub fn build_gkn(n: usize, k: usize) -> Result<MultiDiGraph> {
    if n < 2 {
        return Err(Error::InvalidN { n, min: 2 });
    }
    check_k(n, k)?;
    let mut arcs = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            arcs.push((i, j, 1));
        }
    }
    for j in 2..=n {
        arcs.push((j, 1, (j.min(k) - 1) as u32));
    }
    for i in k..=n {
        for j in i + 1..=n {
            arcs.push((j, i, 1));
        }
    }
    MultiDiGraph::new(n, arcs)
}

/// `G^k_n` with the extra root 0 and every arc reversed, carrying the
/// neighbour order used by the burning algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedGraph {
    n: usize,
    k: usize,
    neighbors: Vec<Vec<usize>>,
}

impl RootedGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `N(i)` for `i ∈ {0} ∪ [n]`, entries encoded as `v + m·n`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Target vertex of an encoded entry, in `[1, n]` (so `decode(n) = n`).
    #[inline]
    pub fn decode(&self, j: usize) -> usize {
        (j - 1) % self.n + 1
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        i <= self.n && self.neighbors[i].contains(&j)
    }

    /// The unrooted graph `G^k_n` this was built from.
    pub fn underlying(&self) -> MultiDiGraph {
        build_gkn(self.n, self.k).expect("parameters were validated at construction")
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {name} {{\n  0 [shape=doublecircle];\n");
        for v in 1..=self.n {
            let _ = writeln!(out, "  {v};");
        }
        for (i, list) in self.neighbors.iter().enumerate() {
            for (rank, &j) in list.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  {i} -> {} [label=\"{j}\", taillabel=\"{}\"];",
                    self.decode(j),
                    rank + 1
                );
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Builds the rooted graph with the neighbour order:
/// `N(0) = ⟨n, ..., 1⟩`; `N(1)` holds `i + m·n` for `i > 1`,
/// `0 <= m <= min(i, k) - 2`, by `i` then `m`, both descending; `N(i)` for
/// `i >= 2` holds every `m' < i`, plus every `m' > i` when `i >= k`, descending.
pub fn build_rooted(n: usize, k: usize) -> Result<RootedGraph> {
    if n < 2 {
        return Err(Error::InvalidN { n, min: 2 });
    }
    check_k(n, k)?;
    let mut neighbors = Vec::with_capacity(n + 1);
    neighbors.push((1..=n).rev().collect());
    let mut root_list = Vec::new();
    for i in (2..=n).rev() {
        for m in (0..=i.min(k) - 2).rev() {
            root_list.push(i + m * n);
        }
    }
    neighbors.push(root_list);
    for i in 2..=n {
        let upper = if i >= k { n } else { i - 1 };
        neighbors.push((1..=upper).rev().filter(|&m| m != i).collect());
    }
    Ok(RootedGraph { n, k, neighbors })
}

/// Trace of one burning run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BurnReport {
    /// Burnt vertices in burning order, starting with the root 0.
    pub burnt: Vec<usize>,
    /// Tree arcs `(i, j)` in insertion order, `j` encoded.
    pub tree: Vec<(usize, usize)>,
    /// Dampened arcs `(i, j)` in insertion order, `j` encoded.
    pub damp: Vec<(usize, usize)>,
    pub success: bool,
}

/// Depth-first burning from the root. A visited unburnt vertex with value 1
/// burns and is explored; otherwise its value drops by one and the arc is
/// dampened. The recursion is unrolled onto an explicit stack.
pub fn dfs_burn(g: &RootedGraph, a: &Word) -> Result<BurnReport> {
    let n = g.n();
    if a.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: a.n() });
    }
    let mut values: Vec<u32> = std::iter::once(0).chain(a.values().iter().copied()).collect();
    let mut is_burnt = vec![false; n + 1];
    is_burnt[0] = true;
    let mut report = BurnReport { burnt: vec![0], tree: Vec::new(), damp: Vec::new(), success: false };

    // (vertex, index of the next neighbour to visit)
    let mut stack = vec![(0usize, 0usize)];
    while let Some(frame) = stack.last_mut() {
        let (i, next) = *frame;
        let Some(&j) = g.neighbors(i).get(next) else {
            stack.pop();
            continue;
        };
        frame.1 += 1;
        let v = g.decode(j);
        if is_burnt[v] {
            continue;
        }
        if values[v] == 1 {
            report.tree.push((i, j));
            report.burnt.push(v);
            is_burnt[v] = true;
            stack.push((v, 0));
        } else {
            report.damp.push((i, j));
            values[v] -= 1;
        }
    }
    report.success = report.burnt.len() == n + 1;
    Ok(report)
}

/// Burning-based G-parking test on `G^k_n`.
pub fn is_g_parking(g: &RootedGraph, a: &Word) -> Result<bool> {
    Ok(dfs_burn(g, a)?.success)
}

/// Inverse of [`dfs_burn`]: rebuilds the word from an oriented spanning tree
/// rooted at 0, given as encoded arcs of `g`.
pub fn tree_to_word(g: &RootedGraph, tree: &[(usize, usize)]) -> Result<Word> {
    let n = g.n();
    validate_tree(g, tree)?;
    let tree_arcs: HashSet<(usize, usize)> = tree.iter().copied().collect();

    let mut values = vec![1u32; n + 1];
    let mut visited = vec![false; n + 1];
    visited[0] = true;
    let mut stack = vec![(0usize, 0usize)];
    while let Some(frame) = stack.last_mut() {
        let (i, next) = *frame;
        let Some(&j) = g.neighbors(i).get(next) else {
            stack.pop();
            continue;
        };
        frame.1 += 1;
        let v = g.decode(j);
        if visited[v] {
            continue;
        }
        if tree_arcs.contains(&(i, j)) {
            visited[v] = true;
            stack.push((v, 0));
        } else {
            values[v] += 1;
        }
    }
    if !visited.iter().all(|&x| x) {
        return Err(Error::InvalidTree("traversal did not reach every vertex".into()));
    }
    Word::new(values[1..].to_vec())
}

fn validate_tree(g: &RootedGraph, tree: &[(usize, usize)]) -> Result<()> {
    let n = g.n();
    if tree.len() != n {
        return Err(Error::InvalidTree(format!("expected {n} arcs, found {}", tree.len())));
    }
    let mut parent = vec![None; n + 1];
    for &(i, j) in tree {
        if !g.has_arc(i, j) {
            return Err(Error::InvalidTree(format!("({i}, {j}) is not an arc of the graph")));
        }
        let v = g.decode(j);
        if parent[v].replace(i).is_some() {
            return Err(Error::InvalidTree(format!("vertex {v} has two incoming tree arcs")));
        }
    }
    for start in 1..=n {
        let mut v = start;
        for _ in 0..=n {
            match parent[v] {
                Some(0) => break,
                Some(p) => v = p,
                None => return Err(Error::InvalidTree(format!("vertex {v} has no incoming tree arc"))),
            }
        }
        if parent[v] != Some(0) {
            return Err(Error::InvalidTree(format!("cycle through vertex {start}")));
        }
    }
    Ok(())
}

/// Subset definition of G-parking: every non-empty `I ⊆ [n]` holds some `i`
/// with at least `a_i - 1` arcs (with multiplicity) leaving `I`.
pub fn is_g_parking_bruteforce(g: &MultiDiGraph, a: &Word) -> Result<bool> {
    let n = g.n();
    if a.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: a.n() });
    }
    if n > BRUTEFORCE_MAX_N {
        return Err(Error::BudgetExceeded { what: "subset G-parking test", n, cap: BRUTEFORCE_MAX_N });
    }
    let full: u32 = (1u32 << n) - 1;
    let in_set = |mask: u32, v: usize| mask & (1 << (v - 1)) != 0;
    for subset in 1..=full {
        let witness = (1..=n).filter(|&i| in_set(subset, i)).any(|i| {
            let leaving: u32 = (1..=n).filter(|&v| !in_set(subset, v)).map(|v| g.multiplicity(i, v)).sum();
            leaving as i64 >= a.at(i) as i64 - 1
        });
        if !witness {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parking::{centre, sort_tail};
    use crate::word::{all_words, Permutation};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn gkn_shapes() {
        let k4 = build_gkn(4, 2).unwrap();
        for u in 1..=4 {
            for v in 1..=4 {
                assert_eq!(k4.multiplicity(u, v), u32::from(u != v), "({u},{v})");
            }
        }
        let ish = build_gkn(4, 4).unwrap();
        assert_eq!(ish.multiplicity(4, 1), 3);
        let mid = build_gkn(4, 3).unwrap();
        assert_eq!(mid.multiplicity(3, 1), 2);
        assert_eq!(mid.multiplicity(4, 3), 1);
        assert_eq!(mid.multiplicity(3, 4), 1);
        assert!(build_gkn(4, 5).is_err());
        assert!(build_gkn(1, 2).is_err());
    }

    #[test]
    fn gkn_arc_count_matches_hyperplane_count() {
        for n in 2..=7 {
            for k in 2..=n {
                let g = build_gkn(n, k).unwrap();
                let equalities = n * (n - 1) / 2;
                let shifted: usize = (2..=n).map(|j| j.min(k) - 1).sum::<usize>() + (n - k) * (n - k + 1) / 2;
                assert_eq!(g.arc_count() as usize, equalities + shifted);
            }
        }
    }

    #[test]
    fn multidigraph_rejects_loops_and_disconnection() {
        assert!(MultiDiGraph::new(2, [(1, 1, 1)]).is_err());
        assert!(MultiDiGraph::new(3, [(1, 2, 1)]).is_err());
        assert!(MultiDiGraph::new(3, [(1, 2, 1), (3, 2, 2)]).is_ok());
    }

    #[test]
    fn neighbour_tables() {
        let g3 = build_rooted(4, 3).unwrap();
        assert_eq!(g3.neighbors(0), &[4, 3, 2, 1]);
        assert_eq!(g3.neighbors(1), &[8, 4, 7, 3, 2]);
        assert_eq!(g3.neighbors(2), &[1]);
        assert_eq!(g3.neighbors(3), &[4, 2, 1]);
        assert_eq!(g3.neighbors(4), &[3, 2, 1]);
        let g2 = build_rooted(4, 2).unwrap();
        assert_eq!(g2.neighbors(1), &[4, 3, 2]);
        assert_eq!(g2.neighbors(2), &[4, 3, 1]);
        assert_eq!(g2.neighbors(3), &[4, 2, 1]);
        let g4 = build_rooted(4, 4).unwrap();
        assert_eq!(g4.neighbors(1), &[12, 8, 4, 7, 3, 2]);
        assert_eq!(g4.neighbors(2), &[1]);
        assert_eq!(g4.neighbors(3), &[2, 1]);
        assert_eq!(g4.decode(8), 4);
        assert_eq!(g4.decode(4), 4);
    }

    #[test]
    fn rooted_lists_reverse_the_arcs_of_gkn() {
        for n in 2..=6 {
            for k in 2..=n {
                let g = build_rooted(n, k).unwrap();
                let base = g.underlying();
                for u in 1..=n {
                    for v in 1..=n {
                        let copies = g.neighbors(v).iter().filter(|&&j| g.decode(j) == u).count();
                        assert_eq!(copies as u32, base.multiplicity(u, v), "n={n} k={k} ({u},{v})");
                    }
                }
                for i in 0..=n {
                    let list = g.neighbors(i);
                    let distinct: HashSet<_> = list.iter().collect();
                    assert_eq!(distinct.len(), list.len());
                }
            }
        }
    }

    #[test]
    fn burn_worked_example() {
        let a = w("4213");
        let r2 = dfs_burn(&build_rooted(4, 2).unwrap(), &a).unwrap();
        assert_eq!(r2.burnt, vec![0, 3, 2, 4, 1]);
        assert_eq!(r2.tree, vec![(0, 3), (0, 2), (2, 4), (0, 1)]);
        assert!(r2.success);

        let r3 = dfs_burn(&build_rooted(4, 3).unwrap(), &a).unwrap();
        assert!(!r3.success);

        let r4 = dfs_burn(&build_rooted(4, 4).unwrap(), &a).unwrap();
        assert_eq!(r4.burnt, vec![0, 3, 2]);
        assert_eq!(r4.tree, vec![(0, 3), (0, 2)]);
        assert_eq!(r4.damp, vec![(0, 4), (3, 2), (3, 1), (2, 1), (0, 1)]);
        assert!(!r4.success);
    }

    #[test]
    fn burn_report_json() {
        let r = dfs_burn(&build_rooted(4, 2).unwrap(), &w("4213")).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["burnt"], serde_json::json!([0, 3, 2, 4, 1]));
        assert_eq!(json["tree"], serde_json::json!([[0, 3], [0, 2], [2, 4], [0, 1]]));
        assert_eq!(json["success"], true);
        assert!(json["damp"].is_array());
    }

    #[test]
    fn burn_all_ones_is_a_descending_path() {
        for n in 2..=6 {
            for k in 2..=n {
                let r = dfs_burn(&build_rooted(n, k).unwrap(), &Word::ones(n)).unwrap();
                assert!(r.success);
                let mut expected = vec![(0, n)];
                expected.extend((2..=n).rev().map(|v| (v, v - 1)));
                assert_eq!(r.tree, expected);
                assert!(r.damp.is_empty());
            }
        }
    }

    #[test]
    fn tree_to_word_examples() {
        let g = build_rooted(4, 2).unwrap();
        assert_eq!(tree_to_word(&g, &[(0, 3), (0, 2), (2, 4), (0, 1)]).unwrap(), w("4213"));
        for n in 2..=5 {
            for k in 2..=n {
                let g = build_rooted(n, k).unwrap();
                let mut path = vec![(0, n)];
                path.extend((2..=n).rev().map(|v| (v, v - 1)));
                assert_eq!(tree_to_word(&g, &path).unwrap(), Word::ones(n));
            }
        }
    }

    #[test]
    fn tree_to_word_rejects_bad_trees() {
        let g = build_rooted(4, 3).unwrap();
        // (2, 4) is not an arc when k = 3.
        assert!(tree_to_word(&g, &[(0, 3), (0, 2), (2, 4), (0, 1)]).is_err());
        assert!(tree_to_word(&g, &[(0, 3), (0, 2)]).is_err());
        // 3 and 4 point at each other.
        assert!(tree_to_word(&g, &[(0, 1), (0, 2), (4, 3), (3, 4)]).is_err());
        assert!(tree_to_word(&g, &[(0, 1), (0, 2), (0, 3), (0, 3)]).is_err());
    }

    #[test]
    fn bruteforce_examples() {
        let a = w("4213");
        assert!(is_g_parking_bruteforce(&build_gkn(4, 2).unwrap(), &a).unwrap());
        assert!(!is_g_parking_bruteforce(&build_gkn(4, 4).unwrap(), &a).unwrap());
        assert!(is_g_parking(&build_rooted(4, 2).unwrap(), &a).unwrap());
        assert!(!is_g_parking(&build_rooted(4, 4).unwrap(), &a).unwrap());
        for k in 2..=4 {
            assert!(is_g_parking_bruteforce(&build_gkn(4, k).unwrap(), &Word::ones(4)).unwrap());
            assert!(is_g_parking(&build_rooted(4, k).unwrap(), &Word::ones(4)).unwrap());
        }
        assert!(is_g_parking_bruteforce(&build_gkn(4, 2).unwrap(), &Word::ones(3)).is_err());
    }

    #[test]
    fn burning_agrees_with_subset_definition() {
        for n in 2..=5 {
            for k in 2..=n {
                let rooted = build_rooted(n, k).unwrap();
                let plain = build_gkn(n, k).unwrap();
                for a in all_words(n).unwrap() {
                    assert_eq!(
                        is_g_parking(&rooted, &a).unwrap(),
                        is_g_parking_bruteforce(&plain, &a).unwrap(),
                        "n={n} k={k} a={a}"
                    );
                }
            }
        }
    }

    #[test]
    fn burn_report_is_a_tree_and_roundtrips() {
        for n in 2..=4 {
            for k in 2..=n {
                let g = build_rooted(n, k).unwrap();
                let mut seen_trees = HashSet::new();
                for a in all_words(n).unwrap() {
                    let r = dfs_burn(&g, &a).unwrap();
                    assert_eq!(r.tree.len(), r.burnt.len() - 1);
                    let distinct: HashSet<_> = r.burnt.iter().collect();
                    assert_eq!(distinct.len(), r.burnt.len());
                    if r.success {
                        assert!(seen_trees.insert(r.tree.clone()), "tree reused for {a}");
                        assert_eq!(tree_to_word(&g, &r.tree).unwrap(), a);
                    }
                }
            }
        }
    }

    #[test]
    fn burnt_values_count_dampened_arcs() {
        for n in 2..=5 {
            for k in 2..=n {
                let g = build_rooted(n, k).unwrap();
                for a in all_words(n).unwrap() {
                    let r = dfs_burn(&g, &a).unwrap();
                    for &v in &r.burnt[1..] {
                        let damped = r.damp.iter().filter(|&&(_, j)| g.decode(j) == v).count();
                        assert_eq!(a.at(v) as usize, damped + 1, "n={n} k={k} a={a} v={v}");
                    }
                    if k == 2 {
                        for (pos, &v) in r.burnt.iter().enumerate().skip(1) {
                            assert!(a.at(v) as usize <= pos, "n={n} a={a} v={v}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn burnt_position_bound_fails_with_parallel_arcs() {
        let g = build_rooted(3, 3).unwrap();
        let a = w("123");
        let r = dfs_burn(&g, &a).unwrap();
        assert!(r.success);
        let late = r.burnt.iter().enumerate().skip(1).any(|(pos, &v)| a.at(v) as usize > pos);
        assert!(late, "{:?}", r.burnt);
    }

    #[test]
    fn burnt_prefix_differs_from_centre_of_sorted_tail() {
        let g = build_rooted(3, 2).unwrap();
        let a = w("121");
        let r = dfs_burn(&g, &a).unwrap();
        assert_eq!(r.burnt, vec![0, 3, 1, 2]);
        let (sorted, pi) = sort_tail(&a, 2).unwrap();
        assert_eq!(pi, Permutation::identity(3));
        assert_eq!(centre(&sorted).members(), &[3, 2, 1]);
    }

    #[test]
    fn successful_burns_put_one_in_centre_of_sorted_tail() {
        for n in 2..=5 {
            for k in 2..=n {
                let g = build_rooted(n, k).unwrap();
                for a in all_words(n).unwrap() {
                    if dfs_burn(&g, &a).unwrap().success {
                        let (sorted, _) = sort_tail(&a, k).unwrap();
                        assert!(centre(&sorted).contains(1), "n={n} k={k} a={a}");
                    }
                }
            }
        }
    }
}
