//! Hyperplanes of `A^k_n`, its regions as feasible sign vectors, and the
//! Pak-Stanley labelling computed three ways: by breadth-first crossing from
//! the base region, by summing over separating hyperplanes, and from the
//! `(w, H, I)` description of a region.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parking::check_k;
use crate::word::{Label, Permutation};

/// Largest `n` for which [`enumerate_regions`] runs without an explicit cap.
pub const DEFAULT_REGION_CAP: usize = 6;

/// The hyperplane `x_p - x_q = c` with `p < q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hyperplane {
    pub p: usize,
    pub q: usize,
    pub c: u32,
}

impl Hyperplane {
    /// Coordinate whose label entry grows when crossing away from the base
    /// region: `p` for `x_p = x_q`, `q` for the shifted hyperplanes.
    pub fn increment_coordinate(&self) -> usize {
        if self.c == 0 {
            self.p
        } else {
            self.q
        }
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c == 0 {
            write!(f, "x{} = x{}", self.p, self.q)
        } else {
            write!(f, "x{} = x{} + {}", self.p, self.q, self.c)
        }
    }
}

/// `A^k_n` with its hyperplanes in canonical `(p, q, c)` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrangementSpec {
    n: usize,
    k: usize,
    hyperplanes: Vec<Hyperplane>,
    // Index of (p, q, 0) for each pair, row-major over (p - 1, q - 1).
    pair_start: Vec<usize>,
    max_offset: Vec<u32>,
}

/// `{x_i = x_j}` ∪ `{x_1 = x_j + i : i < min(j, k)}` ∪ `{x_i = x_j + 1 : k <= i < j}`.
pub fn build_arrangement(n: usize, k: usize) -> Result<ArrangementSpec> {
    if n < 2 {
        return Err(Error::InvalidN { n, min: 2 });
    }
    check_k(n, k)?;
    let mut hyperplanes = Vec::new();
    let mut pair_start = vec![usize::MAX; n * n];
    let mut max_offset = vec![0u32; n * n];
    for p in 1..=n {
        for q in p + 1..=n {
            let m = if p == 1 {
                (q.min(k) - 1) as u32
            } else if p >= k {
                1
            } else {
                0
            };
            pair_start[(p - 1) * n + (q - 1)] = hyperplanes.len();
            max_offset[(p - 1) * n + (q - 1)] = m;
            hyperplanes.extend((0..=m).map(|c| Hyperplane { p, q, c }));
        }
    }
    Ok(ArrangementSpec { n, k, hyperplanes, pair_start, max_offset })
}

impl ArrangementSpec {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    /// `m_pq`: the largest `c` with `x_p - x_q = c` in the arrangement (`p < q`).
    pub fn max_offset(&self, p: usize, q: usize) -> u32 {
        self.max_offset[(p - 1) * self.n + (q - 1)]
    }

    pub fn index_of(&self, h: Hyperplane) -> Option<usize> {
        if h.p == 0 || h.p >= h.q || h.q > self.n || h.c > self.max_offset(h.p, h.q) {
            return None;
        }
        Some(self.pair_start[(h.p - 1) * self.n + (h.q - 1)] + h.c as usize)
    }
}

/// Side of `x_p - x_q = c` on which a region lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    /// `x_p - x_q < c`
    Below,
    /// `x_p - x_q > c`
    Above,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Below => Side::Above,
            Side::Above => Side::Below,
        }
    }
}

/// A total sign assignment over the canonical hyperplane list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(Vec<Side>);

impl SignVector {
    pub fn new(sides: Vec<Side>) -> Self {
        SignVector(sides)
    }

    pub fn sides(&self) -> &[Side] {
        &self.0
    }

    pub fn side(&self, index: usize) -> Side {
        self.0[index]
    }

    /// `'1'` for above, `'0'` for below, in canonical hyperplane order.
    pub fn to_bitstring(&self) -> String {
        self.0.iter().map(|s| if *s == Side::Above { '1' } else { '0' }).collect()
    }

    pub fn from_bitstring(bits: &str) -> Result<Self> {
        bits.chars()
            .map(|ch| match ch {
                '0' => Ok(Side::Below),
                '1' => Ok(Side::Above),
                _ => Err(Error::MalformedSigns(format!("unexpected character {ch:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignVector)
    }
}

/// A rational point `numerators / denominator` inside a region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub numerators: Vec<i64>,
    pub denominator: i64,
}

impl Witness {
    /// Whether the point lies strictly on the stated side of every assigned hyperplane.
    pub fn satisfies(&self, spec: &ArrangementSpec, assignment: &[Option<Side>]) -> bool {
        spec.hyperplanes().iter().zip(assignment).all(|(h, side)| match side {
            None => true,
            Some(side) => {
                let diff = self.numerators[h.p - 1] - self.numerators[h.q - 1];
                let bound = i64::from(h.c) * self.denominator;
                match side {
                    Side::Below => diff < bound,
                    Side::Above => diff > bound,
                }
            }
        })
    }
}

/// Finds a point satisfying the strict system, or `None` if it is empty.
///
/// `x_u - x_v < b` becomes the edge `v -> u` of weight `b·M - 1` with
/// `M = #constraints + 1`; the system has a real solution iff this graph has
/// no negative cycle, and shortest-path potentials divided by `M` are one.
pub fn solve(spec: &ArrangementSpec, assignment: &[Option<Side>]) -> Result<Option<Witness>> {
    if assignment.len() != spec.len() {
        return Err(Error::MalformedSigns(format!(
            "{} signs for {} hyperplanes",
            assignment.len(),
            spec.len()
        )));
    }
    let constraints = assignment.iter().filter(|s| s.is_some()).count();
    let scale = constraints as i64 + 1;
    let mut edges = Vec::with_capacity(constraints);
    for (h, side) in spec.hyperplanes().iter().zip(assignment) {
        let c = i64::from(h.c);
        match side {
            None => {}
            // x_p - x_q < c
            Some(Side::Below) => edges.push((h.q - 1, h.p - 1, c * scale - 1)),
            // x_q - x_p < -c
            Some(Side::Above) => edges.push((h.p - 1, h.q - 1, -c * scale - 1)),
        }
    }
    Ok(shortest_potentials(spec.n(), &edges).map(|numerators| Witness { numerators, denominator: scale }))
}

pub fn is_feasible(spec: &ArrangementSpec, assignment: &[Option<Side>]) -> Result<bool> {
    Ok(solve(spec, assignment)?.is_some())
}

// Bellman-Ford from a virtual source joined to every vertex by a 0-weight edge.
fn shortest_potentials(vertices: usize, edges: &[(usize, usize, i64)]) -> Option<Vec<i64>> {
    let mut dist = vec![0i64; vertices];
    for _ in 0..=vertices {
        let mut changed = false;
        for &(from, to, weight) in edges {
            let candidate = dist[from] + weight;
            if candidate < dist[to] {
                dist[to] = candidate;
                changed = true;
            }
        }
        if !changed {
            return Some(dist);
        }
    }
    None
}

/// A region of the arrangement: a feasible total sign vector and a point in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    signs: SignVector,
    witness: Witness,
}

impl Region {
    /// Certifies `signs` by solving the strict system; `None` if empty.
    pub fn from_signs(spec: &ArrangementSpec, signs: SignVector) -> Result<Option<Region>> {
        let assignment: Vec<Option<Side>> = signs.sides().iter().copied().map(Some).collect();
        Ok(solve(spec, &assignment)?.map(|witness| Region { signs, witness }))
    }

    /// The region containing `numerators / denominator`, which must avoid every hyperplane.
    pub fn containing(spec: &ArrangementSpec, numerators: Vec<i64>, denominator: i64) -> Result<Region> {
        if numerators.len() != spec.n() || denominator <= 0 {
            return Err(Error::MalformedSigns("point has the wrong dimension".into()));
        }
        let mut sides = Vec::with_capacity(spec.len());
        for h in spec.hyperplanes() {
            let diff = numerators[h.p - 1] - numerators[h.q - 1];
            let bound = i64::from(h.c) * denominator;
            sides.push(match diff.cmp(&bound) {
                std::cmp::Ordering::Less => Side::Below,
                std::cmp::Ordering::Greater => Side::Above,
                std::cmp::Ordering::Equal => {
                    return Err(Error::MalformedSigns(format!("point lies on {h}")));
                }
            });
        }
        Ok(Region { signs: SignVector(sides), witness: Witness { numerators, denominator } })
    }

    pub fn signs(&self) -> &SignVector {
        &self.signs
    }

    pub fn witness(&self) -> &Witness {
        &self.witness
    }

    pub fn side(&self, spec: &ArrangementSpec, h: Hyperplane) -> Option<Side> {
        spec.index_of(h).map(|idx| self.signs.side(idx))
    }

    /// Whether `x_p > x_q` in this region (`p != q`).
    pub fn greater(&self, spec: &ArrangementSpec, p: usize, q: usize) -> bool {
        if p < q {
            self.side(spec, Hyperplane { p, q, c: 0 }) == Some(Side::Above)
        } else {
            self.side(spec, Hyperplane { p: q, q: p, c: 0 }) == Some(Side::Below)
        }
    }
}

/// The region `x_n + 1 > x_1 > ... > x_n`, through the point `x_i = (n - i)/n`.
pub fn base_region(spec: &ArrangementSpec) -> Region {
    let n = spec.n() as i64;
    let numerators = (1..=n).map(|i| n - i).collect();
    Region::containing(spec, numerators, n).expect("the base point avoids every hyperplane")
}

/// Breadth-first search over regions from the base region, flipping one
/// hyperplane at a time and labelling each new region from its parent.
/// Output is sorted by sign vector.
pub fn enumerate_regions(spec: &ArrangementSpec) -> Result<Vec<(Region, Label)>> {
    enumerate_regions_capped(spec, DEFAULT_REGION_CAP)
}

pub fn enumerate_regions_capped(spec: &ArrangementSpec, cap: usize) -> Result<Vec<(Region, Label)>> {
    if spec.n() > cap {
        return Err(Error::BudgetExceeded { what: "region enumeration", n: spec.n(), cap });
    }
    let base = base_region(spec);
    let mut found: HashMap<SignVector, (Witness, Vec<i64>)> = HashMap::new();
    let mut queue = VecDeque::new();
    found.insert(base.signs.clone(), (base.witness.clone(), vec![1; spec.n()]));
    queue.push_back(base.signs.clone());

    while let Some(current) = queue.pop_front() {
        let label = found[&current].1.clone();
        for (idx, h) in spec.hyperplanes().iter().enumerate() {
            let mut sides = current.0.clone();
            sides[idx] = sides[idx].flipped();
            if !offsets_monotone(spec, &sides, *h) {
                continue;
            }
            let next = SignVector(sides);
            if found.contains_key(&next) {
                continue;
            }
            let assignment: Vec<Option<Side>> = next.0.iter().copied().map(Some).collect();
            let Some(witness) = solve(spec, &assignment)? else {
                continue;
            };
            let mut next_label = label.clone();
            let step = if current.side(idx) == base.signs.side(idx) { 1 } else { -1 };
            next_label[h.increment_coordinate() - 1] += step;
            found.insert(next.clone(), (witness, next_label));
            queue.push_back(next);
        }
    }

    let mut regions: Vec<(Region, Label)> = found
        .into_iter()
        .map(|(signs, (witness, label))| {
            let entries = label.into_iter().map(|e| u32::try_from(e).expect("labels stay positive")).collect();
            (Region { signs, witness }, Label::new(entries).expect("labels stay positive"))
        })
        .collect();
    regions.sort_by(|a, b| a.0.signs.cmp(&b.0.signs));
    Ok(regions)
}

// Along one pair, "above c" must imply "above c - 1"; checked around the
// flipped hyperplane only.
fn offsets_monotone(spec: &ArrangementSpec, sides: &[Side], h: Hyperplane) -> bool {
    let idx = spec.index_of(h).expect("hyperplane of the spec");
    match sides[idx] {
        Side::Above => h.c == 0 || sides[idx - 1] == Side::Above,
        Side::Below => h.c == spec.max_offset(h.p, h.q) || sides[idx + 1] == Side::Below,
    }
}

/// `(1, ..., 1)` plus the increment of every hyperplane separating `region`
/// from the base region.
pub fn label_direct(spec: &ArrangementSpec, region: &Region) -> Label {
    let base = base_region(spec);
    let mut entries = vec![1u32; spec.n()];
    for (idx, h) in spec.hyperplanes().iter().enumerate() {
        if region.signs.side(idx) != base.signs.side(idx) {
            entries[h.increment_coordinate() - 1] += 1;
        }
    }
    Label::new(entries).expect("entries start at 1")
}

/// The `(w, H, I)` description of a region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionDescription {
    /// `x_{w_1} > x_{w_2} > ... > x_{w_n}`.
    pub w: Permutation,
    /// `(i, j, a)` with `i < j`, `x_i > x_j` and `a - 1 < x_i - x_j < a`.
    #[serde(rename = "H")]
    pub h: Vec<(usize, usize, u32)>,
    /// `(i, j)` with `i < j`, `x_i > x_j` and `x_i - x_j > m_ij`.
    #[serde(rename = "I")]
    pub i: Vec<(usize, usize)>,
}

pub fn describe(spec: &ArrangementSpec, region: &Region) -> RegionDescription {
    let n = spec.n();
    let mut order: Vec<usize> = (1..=n).collect();
    let rank = |i: usize| (1..=n).filter(|&j| j != i && region.greater(spec, j, i)).count();
    order.sort_by_key(|&i| rank(i));
    let w = Permutation::new(order).expect("coordinate ranks are distinct");

    let mut h = Vec::new();
    let mut i_pairs = Vec::new();
    for p in 1..=n {
        for q in p + 1..=n {
            if !region.greater(spec, p, q) {
                continue;
            }
            let m = spec.max_offset(p, q);
            let below = (1..=m).find(|&c| region.side(spec, Hyperplane { p, q, c }) == Some(Side::Below));
            match below {
                Some(a) => h.push((p, q, a)),
                None => i_pairs.push((p, q)),
            }
        }
    }
    RegionDescription { w, h, i: i_pairs }
}

/// `t(w)` with `t_{w_i} = |{j <= i : w_j >= w_i}|`, plus `(a - 1)·e_j` for
/// each `(i, j, a) ∈ H`, plus `m_ij·e_j` for each `(i, j) ∈ I`.
pub fn label_from_description(spec: &ArrangementSpec, d: &RegionDescription) -> Label {
    let n = spec.n();
    let w = d.w.images();
    let mut entries = vec![0u32; n];
    for (pos, &wi) in w.iter().enumerate() {
        entries[wi - 1] = w[..=pos].iter().filter(|&&wj| wj >= wi).count() as u32;
    }
    for &(_, j, a) in &d.h {
        entries[j - 1] += a - 1;
    }
    for &(i, j) in &d.i {
        entries[j - 1] += spec.max_offset(i, j);
    }
    Label::new(entries).expect("t(w) entries are positive")
}

/// `w` decorated with the arcs of `H` that survive the omission rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub w: Permutation,
    pub arcs: Vec<(usize, usize, u32)>,
}

/// Drops an arc `(j, p, a)` when another arc `(i, m, a)` of `H` with the same
/// label spans it. Spans are measured by position in `w`, where every arc
/// runs left to right.
pub fn draw_diagram(_spec: &ArrangementSpec, d: &RegionDescription) -> Diagram {
    let position = d.w.inverse();
    let span = |(i, j, _): (usize, usize, u32)| (position.apply(i), position.apply(j));
    let arcs = d
        .h
        .iter()
        .copied()
        .filter(|&inner| {
            let (lo, hi) = span(inner);
            !d.h.iter().copied().any(|outer| {
                let (olo, ohi) = span(outer);
                outer != inner && outer.2 == inner.2 && olo <= lo && hi <= ohi
            })
        })
        .collect();
    Diagram { w: d.w.clone(), arcs }
}

/// One region as exported on the command line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub signs: String,
    pub w: Permutation,
    #[serde(rename = "H")]
    pub h: Vec<(usize, usize, u32)>,
    #[serde(rename = "I")]
    pub i: Vec<(usize, usize)>,
    pub label: Label,
    pub diagram: Vec<(usize, usize, u32)>,
}

pub fn region_record(spec: &ArrangementSpec, region: &Region, label: &Label) -> RegionRecord {
    let d = describe(spec, region);
    let diagram = draw_diagram(spec, &d).arcs;
    RegionRecord {
        signs: region.signs.to_bitstring(),
        w: d.w,
        h: d.h,
        i: d.i,
        label: label.clone(),
        diagram,
    }
}
