//! Finite posets as bit-row strict-order matrices.
//!
//! Elements are indices `0..n` with `n <= 64`, so each "strictly below" set
//! fits in one `u64` and comparability tests are single bit probes. Every
//! `Poset` is transitively closed at construction; downstream code relies on
//! that.

mod generate;
mod iso;
mod text;

pub use generate::all_posets;
pub use iso::{canonical_key, contains_induced, is_isomorphic};
pub use text::{format_poset_text, parse_poset_text};

use crate::error::{Error, Result};

/// Hard cap on element count so relation rows fit a machine word.
pub const MAX_ELEMENTS: usize = 64;

/// Order relation between two elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Less,
    Greater,
    Incomparable,
    Equal,
}

impl Rel {
    /// The relation seen from the other side.
    pub fn flip(self) -> Rel {
        match self {
            Rel::Less => Rel::Greater,
            Rel::Greater => Rel::Less,
            other => other,
        }
    }
}

/// A finite poset with a strict order, transitively closed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    /// Bit `j` of `below[i]` is set iff `j < i` in the strict order.
    below: Vec<u64>,
    labels: Option<Vec<String>>,
}

impl std::fmt::Debug for Poset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poset(n={}; ", self.n)?;
        let covers: Vec<String> = self
            .covers()
            .iter()
            .map(|&(lo, hi)| format!("{}<{}", self.label(lo), self.label(hi)))
            .collect();
        write!(f, "covers: {})", covers.join(", "))
    }
}

impl Poset {
    /// Builds a poset as the transitive closure of the given cover pairs
    /// `(lo, hi)`, each meaning `lo < hi`.
    pub fn from_covers(n: usize, covers: &[(usize, usize)]) -> Result<Poset> {
        if n > MAX_ELEMENTS {
            return Err(Error::SizeTooLarge {
                got: n,
                max: MAX_ELEMENTS,
            });
        }
        let mut below = vec![0u64; n];
        for &(lo, hi) in covers {
            check_index(lo, n)?;
            check_index(hi, n)?;
            if lo == hi {
                return Err(Error::CycleDetected(lo));
            }
            below[hi] |= 1 << lo;
        }
        transitive_close(&mut below);
        for (i, &row) in below.iter().enumerate() {
            if row & (1 << i) != 0 {
                return Err(Error::CycleDetected(i));
            }
        }
        Ok(Poset {
            n,
            below,
            labels: None,
        })
    }

    /// The antichain on `n` elements.
    pub fn antichain(n: usize) -> Result<Poset> {
        Poset::from_covers(n, &[])
    }

    /// The chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Result<Poset> {
        let covers: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_covers(n, &covers)
    }

    /// The Boolean lattice of all subsets of `{1..n}` ordered by inclusion,
    /// optionally without the empty set. Element `i` is the subset with
    /// member mask `i` (shifted down by one when the empty set is dropped).
    pub fn boolean_lattice(rank: u32, include_empty: bool) -> Result<Poset> {
        if rank > 6 {
            return Err(Error::RankTooLarge(rank));
        }
        let full = 1usize << rank;
        let masks: Vec<usize> = if include_empty {
            (0..full).collect()
        } else {
            (1..full).collect()
        };
        let n = masks.len();
        let mut below = vec![0u64; n];
        for (i, &mi) in masks.iter().enumerate() {
            for (j, &mj) in masks.iter().enumerate() {
                if mj != mi && mj & mi == mj {
                    below[i] |= 1 << j;
                }
            }
        }
        let labels = masks.iter().map(|&m| subset_label(m)).collect();
        Ok(Poset {
            n,
            below,
            labels: Some(labels),
        })
    }

    /// Internal constructor for rows already known to be a closed strict order.
    pub(crate) fn from_closed_rows(below: Vec<u64>, labels: Option<Vec<String>>) -> Poset {
        let p = Poset {
            n: below.len(),
            below,
            labels,
        };
        debug_assert!(p.validate().is_ok());
        p
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Strictly-below set of `i` as a bit row.
    pub fn below_row(&self, i: usize) -> u64 {
        self.below[i]
    }

    /// Strictly-above set of `i` as a bit row.
    pub fn above_row(&self, i: usize) -> u64 {
        let mut row = 0u64;
        for j in 0..self.n {
            if self.below[j] & (1 << i) != 0 {
                row |= 1 << j;
            }
        }
        row
    }

    /// True iff `x < y`, unchecked indices.
    #[inline]
    pub fn less(&self, x: usize, y: usize) -> bool {
        self.below[y] & (1 << x) != 0
    }

    #[inline]
    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.less(x, y) || self.less(y, x)
    }

    /// Unchecked relation between two valid indices.
    #[inline]
    pub fn rel(&self, x: usize, y: usize) -> Rel {
        if x == y {
            Rel::Equal
        } else if self.less(x, y) {
            Rel::Less
        } else if self.less(y, x) {
            Rel::Greater
        } else {
            Rel::Incomparable
        }
    }

    /// Relation with index checking.
    pub fn relation(&self, x: usize, y: usize) -> Result<Rel> {
        check_index(x, self.n)?;
        check_index(y, self.n)?;
        Ok(self.rel(x, y))
    }

    /// The dual poset: all relations reversed, labels kept.
    pub fn dual(&self) -> Poset {
        let below = (0..self.n).map(|i| self.above_row(i)).collect();
        Poset {
            n: self.n,
            below,
            labels: self.labels.clone(),
        }
    }

    /// Induced subposet on the distinct elements of `s`, re-indexed in
    /// increasing order of original index.
    pub fn induced(&self, s: &[usize]) -> Result<Poset> {
        let mut keep = Vec::from(s);
        for &i in &keep {
            check_index(i, self.n)?;
        }
        keep.sort_unstable();
        keep.dedup();
        let k = keep.len();
        let mut below = vec![0u64; k];
        for a in 0..k {
            for b in 0..k {
                if self.less(keep[a], keep[b]) {
                    below[b] |= 1 << a;
                }
            }
        }
        let labels = self
            .labels
            .as_ref()
            .map(|ls| keep.iter().map(|&i| ls[i].clone()).collect());
        Ok(Poset {
            n: k,
            below,
            labels,
        })
    }

    /// Display label for an element.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(ls) => ls[i].clone(),
            None => i.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.n);
        self.labels = Some(labels);
    }

    /// Index of the element carrying `label`, if any.
    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        (0..self.n).find(|&i| self.label(i) == label)
    }

    /// Cover pairs `(lo, hi)`: `lo < hi` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for hi in 0..self.n {
            let lows = self.below[hi];
            for lo in bits(lows) {
                if self.below[hi] & self.above_row(lo) == 0 {
                    out.push((lo, hi));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Elements of `mask` with nothing in `mask` above them.
    pub fn maximal_in(&self, mask: u64) -> u64 {
        let mut out = 0u64;
        for i in bits(mask) {
            if self.above_row(i) & mask == 0 {
                out |= 1 << i;
            }
        }
        out
    }

    /// Elements of `mask` with nothing in `mask` below them.
    pub fn minimal_in(&self, mask: u64) -> u64 {
        let mut out = 0u64;
        for i in bits(mask) {
            if self.below[i] & mask == 0 {
                out |= 1 << i;
            }
        }
        out
    }

    /// All-elements mask.
    pub fn full_mask(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// True iff `mask` is downward closed.
    pub fn is_down_set(&self, mask: u64) -> bool {
        bits(mask).all(|i| self.below[i] & !mask == 0)
    }

    /// All down-sets (order ideals) as masks, ascending. Exponential; meant
    /// for small posets.
    pub fn down_sets(&self) -> Vec<u64> {
        assert!(self.n <= 20, "down-set enumeration is for small posets");
        (0..=self.full_mask())
            .filter(|&m| self.is_down_set(m))
            .collect()
    }

    /// Checks the three structural invariants. Constructors uphold them; this
    /// is the validator tests run against generated posets.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.n {
            if self.below[i] & (1 << i) != 0 {
                return Err(Error::CycleDetected(i));
            }
            if self.below[i] & !self.full_mask() != 0 {
                return Err(Error::IndexOutOfRange {
                    index: 64,
                    size: self.n,
                });
            }
            for j in bits(self.below[i]) {
                if self.below[j] & (1 << i) != 0 {
                    return Err(Error::CycleDetected(i));
                }
                if self.below[j] & !self.below[i] != 0 {
                    return Err(Error::Parse(format!(
                        "not transitively closed at {} < {}",
                        j, i
                    )));
                }
            }
        }
        Ok(())
    }
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, size: n });
    }
    Ok(())
}

/// In-place Warshall closure of strict-order bit rows.
pub(crate) fn transitive_close(below: &mut [u64]) {
    let n = below.len();
    for k in 0..n {
        for i in 0..n {
            if below[i] & (1 << k) != 0 {
                below[i] |= below[k];
            }
        }
    }
}

/// Iterator over the set bit indices of a mask, ascending.
pub fn bits(mask: u64) -> impl Iterator<Item = usize> {
    std::iter::successors(if mask == 0 { None } else { Some(mask) }, |&m| {
        let rest = m & (m - 1);
        if rest == 0 {
            None
        } else {
            Some(rest)
        }
    })
    .map(|m| m.trailing_zeros() as usize)
}

fn subset_label(mask: usize) -> String {
    if mask == 0 {
        return "∅".to_string();
    }
    let members: Vec<String> = (0..7)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| (b + 1).to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_close_transitively() {
        let p = Poset::from_covers(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.below_row(2), 0b011);
        assert!(p.less(0, 2));
        p.validate().unwrap();
    }

    #[test]
    fn empty_cover_list_is_antichain() {
        let p = Poset::from_covers(3, &[]).unwrap();
        assert!((0..3).all(|i| p.below_row(i) == 0));
    }

    #[test]
    fn two_cycle_is_rejected() {
        assert!(matches!(
            Poset::from_covers(2, &[(0, 1), (1, 0)]),
            Err(Error::CycleDetected(_))
        ));
        assert!(matches!(
            Poset::from_covers(2, &[(0, 0)]),
            Err(Error::CycleDetected(0))
        ));
        assert!(matches!(
            Poset::from_covers(2, &[(0, 5)]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn boolean_lattice_b2_has_five_strict_pairs() {
        let p = Poset::boolean_lattice(2, true).unwrap();
        assert_eq!(p.len(), 4);
        let pairs: usize = (0..4).map(|i| p.below_row(i).count_ones() as usize).sum();
        assert_eq!(pairs, 5);
        assert_eq!(p.label(0), "∅");
        assert_eq!(p.label(3), "{1,2}");
    }

    #[test]
    fn boolean_lattice_rank_zero_and_cap() {
        let p = Poset::boolean_lattice(0, true).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.below_row(0), 0);
        assert!(matches!(
            Poset::boolean_lattice(7, true),
            Err(Error::RankTooLarge(7))
        ));
    }

    #[test]
    fn boolean_lattice_without_empty_has_singleton_minimals() {
        let p = Poset::boolean_lattice(3, false).unwrap();
        assert_eq!(p.len(), 7);
        let minimal = p.minimal_in(p.full_mask());
        let minimal_labels: Vec<String> = bits(minimal).map(|i| p.label(i)).collect();
        assert_eq!(minimal_labels, vec!["{1}", "{2}", "{3}"]);
    }

    #[test]
    fn dual_reverses_and_involutes() {
        let chain = Poset::chain(3).unwrap();
        let d = chain.dual();
        assert!(d.less(2, 0));
        assert_eq!(d.dual(), chain);
        let b2 = Poset::boolean_lattice(2, true).unwrap();
        assert_eq!(b2.dual().dual(), b2);
    }

    #[test]
    fn b2_is_self_dual_via_complement() {
        let b2 = Poset::boolean_lattice(2, true).unwrap();
        let d = b2.dual();
        // complement map: mask -> 3 ^ mask
        let phi: Vec<usize> = (0..4).map(|m| 3 ^ m).collect();
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(b2.rel(x, y), d.rel(phi[x], phi[y]));
            }
        }
    }

    #[test]
    fn induced_reindexes_and_preserves_order() {
        let b3 = Poset::boolean_lattice(3, true).unwrap();
        // {∅, {1}, {1,2,3}} is a 3-chain
        let q = b3.induced(&[0, 1, 7]).unwrap();
        assert_eq!(q, {
            let mut c = Poset::chain(3).unwrap();
            c.set_labels(vec!["∅".into(), "{1}".into(), "{1,2,3}".into()]);
            c
        });
        // whole set gives the poset back
        let all: Vec<usize> = (0..8).collect();
        assert_eq!(b3.induced(&all).unwrap(), b3);
    }

    #[test]
    fn relation_reports_all_four_cases() {
        let b2 = Poset::boolean_lattice(2, true).unwrap();
        let one = b2.index_of_label("{1}").unwrap();
        let two = b2.index_of_label("{2}").unwrap();
        let both = b2.index_of_label("{1,2}").unwrap();
        assert_eq!(b2.relation(one, both).unwrap(), Rel::Less);
        assert_eq!(b2.relation(both, one).unwrap(), Rel::Greater);
        assert_eq!(b2.relation(one, two).unwrap(), Rel::Incomparable);
        assert_eq!(b2.relation(one, one).unwrap(), Rel::Equal);
        assert!(b2.relation(0, 9).is_err());
    }

    #[test]
    fn covers_of_b2_are_the_hasse_diagram() {
        let b2 = Poset::boolean_lattice(2, true).unwrap();
        assert_eq!(b2.covers(), vec![(0, 1), (0, 2), (1, 3), (2, 3)]);
    }

    #[test]
    fn down_sets_of_v() {
        // V poset: 0 < 1, 0 < 2
        let v = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(v.down_sets(), vec![0b000, 0b001, 0b011, 0b101, 0b111]);
    }
}
