//! Words in `[n]^n`, permutations of `[n]` and region labels.
//!
//! Every public interface is 1-based: position `i` of a word is `word.at(i)`
//! with `1 <= i <= n`, and permutations map `[1, n]` onto itself.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `n` for which [`all_words`] agrees to enumerate `[n]^n`.
pub const DEFAULT_WORD_CAP: usize = 7;

/// An `n`-tuple with every entry in `[1, n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::EmptyWord);
        }
        for (idx, &value) in values.iter().enumerate() {
            if value == 0 || value as usize > n {
                return Err(Error::EntryOutOfRange { position: idx + 1, value, n });
            }
        }
        Ok(Word(values))
    }

    /// The all-ones word `(1, ..., 1)`.
    pub fn ones(n: usize) -> Self {
        assert!(n > 0, "words must have at least one entry");
        Word(vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Entry at 1-based position `i`.
    #[inline]
    pub fn at(&self, i: usize) -> u32 {
        self.0[i - 1]
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn into_values(self) -> Vec<u32> {
        self.0
    }
}

impl TryFrom<Vec<u32>> for Word {
    type Error = Error;

    fn try_from(values: Vec<u32>) -> Result<Self> {
        Word::new(values)
    }
}

impl From<Word> for Vec<u32> {
    fn from(word: Word) -> Self {
        word.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_entries(f, &self.0)
    }
}

/// Accepts `"4213"` (only when `n <= 9`), `"4,2,1,3"` or `"[4,2,1,3]"`.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_err = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix('[')
            .and_then(|rest| rest.strip_suffix(']'))
            .unwrap_or(trimmed);
        let values: Vec<u32> = if inner.contains(',') {
            inner
                .split(',')
                .map(|tok| tok.trim().parse::<u32>().map_err(|e| parse_err(&e.to_string())))
                .collect::<Result<_>>()?
        } else {
            if inner.is_empty() {
                return Err(parse_err("empty word"));
            }
            if inner.len() > 9 {
                return Err(parse_err("digit-string form is limited to n <= 9; use commas"));
            }
            inner
                .chars()
                .map(|c| c.to_digit(10).ok_or_else(|| parse_err("expected decimal digits")))
                .collect::<Result<_>>()?
        };
        Word::new(values)
    }
}

/// A bijection of `[1, n]`, stored as its image list `(w(1), ..., w(n))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &image in &images {
            if image == 0 || image > n || seen[image] {
                return Err(Error::NotAPermutation { images });
            }
            seen[image] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n).collect())
    }

    /// `(n, n-1, ..., 1)`.
    pub fn reverse(n: usize) -> Self {
        Permutation((1..=n).rev().collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn then_after(&self, other: &Permutation) -> Result<Permutation> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch { left: self.n(), right: other.n() });
        }
        Ok(Permutation(other.0.iter().map(|&i| self.apply(i)).collect()))
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.n()];
        for (idx, &image) in self.0.iter().enumerate() {
            inv[image - 1] = idx + 1;
        }
        Permutation(inv)
    }

    /// Every permutation of `[1, n]`, in lexicographic order of image lists.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        use itertools::Itertools;
        (1..=n).permutations(n).map(Permutation)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<u32> = self.0.iter().map(|&x| x as u32).collect();
        write_entries(f, &entries)
    }
}

/// A Pak-Stanley label: `n` positive entries.
///
/// Labels produced by the labelling of an arrangement are expected to lie in
/// `[1, n]`; that is checked by [`Label::to_word`], not assumed here.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Label(Vec<u32>);

impl Label {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(position) = entries.iter().position(|&e| e == 0) {
            return Err(Error::EntryOutOfRange { position: position + 1, value: 0, n: entries.len() });
        }
        Ok(Label(entries))
    }

    pub fn ones(n: usize) -> Self {
        Label(vec![1; n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn to_word(&self) -> Result<Word> {
        Word::new(self.0.clone())
    }
}

impl TryFrom<Vec<u32>> for Label {
    type Error = Error;

    fn try_from(entries: Vec<u32>) -> Result<Self> {
        Label::new(entries)
    }
}

impl From<Label> for Vec<u32> {
    fn from(label: Label) -> Self {
        label.0
    }
}

impl From<Word> for Label {
    fn from(word: Word) -> Self {
        Label(word.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_entries(f, &self.0)
    }
}

// Digit string when every entry is a single digit, comma-separated otherwise.
fn write_entries(f: &mut fmt::Formatter<'_>, entries: &[u32]) -> fmt::Result {
    if entries.iter().all(|&e| e <= 9) {
        for e in entries {
            write!(f, "{e}")?;
        }
        Ok(())
    } else {
        let parts: Vec<String> = entries.iter().map(u32::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// `a ∘ w = (a_{w(1)}, ..., a_{w(n)})`.
pub fn compose(a: &Word, w: &Permutation) -> Result<Word> {
    if a.n() != w.n() {
        return Err(Error::DimensionMismatch { left: a.n(), right: w.n() });
    }
    Ok(Word(w.images().iter().map(|&i| a.at(i)).collect()))
}

/// All `n^n` words of `[n]^n` in lexicographic order, refusing `n` above
/// [`DEFAULT_WORD_CAP`].
pub fn all_words(n: usize) -> Result<Words> {
    all_words_capped(n, DEFAULT_WORD_CAP)
}

pub fn all_words_capped(n: usize, cap: usize) -> Result<Words> {
    if n == 0 {
        return Err(Error::InvalidN { n, min: 1 });
    }
    if n > cap {
        return Err(Error::BudgetExceeded { what: "word enumeration", n, cap });
    }
    Ok(Words { next: Some(vec![1; n]) })
}

/// Odometer over `[n]^n`; see [`all_words`].
#[derive(Debug, Clone)]
pub struct Words {
    next: Option<Vec<u32>>,
}

impl Iterator for Words {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let current = self.next.take()?;
        let n = current.len() as u32;
        let mut succ = current.clone();
        // Increment the last position that is not yet n, resetting the tail.
        if let Some(pos) = succ.iter().rposition(|&v| v < n) {
            succ[pos] += 1;
            for v in &mut succ[pos + 1..] {
                *v = 1;
            }
            self.next = Some(succ);
        }
        Some(Word(current))
    }
}
