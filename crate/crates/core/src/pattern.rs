//! Poset permutations and patterns.
//!
//! A pattern is a permutation of a small poset `Q`. Containment of a pattern
//! in a permutation is purely relational: some increasing position tuple
//! whose entries pairwise realize the same less/greater/incomparable matrix
//! as the pattern. Two notations are parsed: chain patterns like `132`
//! (digits, on the totally ordered `[k]`) and set patterns like
//! `{1}{1,2}{2}` (tokens ordered by inclusion). `∅` and `{}` both denote the
//! empty set. Note `123` and `{1}{2}{3}` are different patterns.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poset::{Poset, Rel};

/// Longest supported pattern.
pub const MAX_PATTERN: usize = 8;

/// A pattern: a permutation of a small poset, remembered with the notation
/// it was parsed from (or a normalized rendering for derived patterns).
#[derive(Clone)]
pub struct Pattern {
    poset: Poset,
    entries: Vec<usize>,
    text: String,
    /// Flattened k*k matrix: relation between the entries at two positions.
    rels: Vec<Rel>,
}

impl Pattern {
    pub fn parse(text: &str) -> Result<Pattern> {
        let tokens = tokenize(text)?;
        match tokens {
            Tokens::Chain(digits) => Pattern::from_chain(&digits),
            Tokens::Sets(sets) => Pattern::from_sets(&sets),
        }
    }

    /// Chain pattern from 1-based ranks, e.g. `[1,3,2]` for `132`.
    pub fn from_chain(digits: &[usize]) -> Result<Pattern> {
        let k = digits.len();
        let mut seen = vec![false; k + 1];
        for &d in digits {
            if d == 0 || d > k || seen[d] {
                return Err(Error::NotAPermutation(
                    digits.iter().map(usize::to_string).collect::<String>(),
                ));
            }
            seen[d] = true;
        }
        check_pattern_len(k)?;
        let mut poset = Poset::chain(k)?;
        poset.set_labels((1..=k).map(|d| d.to_string()).collect());
        let entries: Vec<usize> = digits.iter().map(|&d| d - 1).collect();
        Ok(Pattern::assemble(poset, entries))
    }

    /// Set-notation pattern from ground-set subsets in entry order.
    pub fn from_sets(sets: &[BTreeSet<u32>]) -> Result<Pattern> {
        let k = sets.len();
        check_pattern_len(k)?;
        for (i, s) in sets.iter().enumerate() {
            if sets[..i].contains(s) {
                return Err(Error::DuplicateEntry(set_token(s)));
            }
        }
        let mut below = vec![0u64; k];
        for (i, si) in sets.iter().enumerate() {
            for (j, sj) in sets.iter().enumerate() {
                if si != sj && sj.is_subset(si) {
                    below[i] |= 1 << j;
                }
            }
        }
        let mut poset = Poset::from_closed_rows(below, None);
        poset.set_labels(sets.iter().map(set_token).collect());
        Ok(Pattern::assemble(poset, (0..k).collect()))
    }

    fn assemble(poset: Poset, entries: Vec<usize>) -> Pattern {
        let k = entries.len();
        let mut rels = vec![Rel::Equal; k * k];
        for a in 0..k {
            for b in 0..k {
                rels[a * k + b] = poset.rel(entries[a], entries[b]);
            }
        }
        let text = render(&poset, &entries);
        Pattern {
            poset,
            entries,
            text,
            rels,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Normalized notation; reparsing it reproduces the relation matrix.
    pub fn text(&self) -> &str {
        &self.text
    }

    /// Relation between the entries at positions `a` and `b` (0-based).
    #[inline]
    pub fn rel(&self, a: usize, b: usize) -> Rel {
        self.rels[a * self.len() + b]
    }

    /// The reversed pattern, on the same poset.
    pub fn reverse(&self) -> Pattern {
        let entries: Vec<usize> = self.entries.iter().rev().copied().collect();
        Pattern::assemble(self.poset.clone(), entries)
    }

    /// The same entry sequence read on the dual poset.
    pub fn dual(&self) -> Pattern {
        Pattern::assemble(self.poset.dual(), self.entries.clone())
    }
}

/// Pattern identity is the relation matrix, not the notation: `{1}{2}∅` and
/// any relabeling with the same pairwise relations are the same pattern.
impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.rels == other.rels
    }
}

impl Eq for Pattern {}

impl std::fmt::Debug for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Pattern({})", self.text)
    }
}

impl std::fmt::Display for Pattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.text)
    }
}

impl std::str::FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Pattern> {
        Pattern::parse(s)
    }
}

fn check_pattern_len(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Parse("empty pattern".into()));
    }
    if k > MAX_PATTERN {
        return Err(Error::SizeTooLarge {
            got: k,
            max: MAX_PATTERN,
        });
    }
    Ok(())
}

enum Tokens {
    Chain(Vec<usize>),
    Sets(Vec<BTreeSet<u32>>),
}

fn tokenize(text: &str) -> Result<Tokens> {
    let mut chars = text.chars().peekable();
    let mut digits: Vec<usize> = Vec::new();
    let mut sets: Vec<BTreeSet<u32>> = Vec::new();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            chars.next();
            digits.push(c as usize - '0' as usize);
        } else if c == '∅' {
            chars.next();
            sets.push(BTreeSet::new());
        } else if c == '{' {
            chars.next();
            sets.push(read_set_body(&mut chars)?);
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    match (digits.is_empty(), sets.is_empty()) {
        (false, true) => {
            let mut seen = BTreeSet::new();
            for &d in &digits {
                if !seen.insert(d) {
                    return Err(Error::DuplicateEntry(d.to_string()));
                }
            }
            Ok(Tokens::Chain(digits))
        }
        (true, false) => Ok(Tokens::Sets(sets)),
        (true, true) => Err(Error::Parse("empty pattern".into())),
        (false, false) => Err(Error::Parse(
            "cannot mix chain digits and set tokens".into(),
        )),
    }
}

fn read_set_body(chars: &mut std::iter::Peekable<std::str::Chars>) -> Result<BTreeSet<u32>> {
    let mut set = BTreeSet::new();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        match chars.peek() {
            Some('}') => {
                chars.next();
                return Ok(set);
            }
            Some(c) if c.is_ascii_digit() => {
                let mut value: u32 = 0;
                while let Some(&d) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        value = value * 10 + v;
                        chars.next();
                    } else {
                        break;
                    }
                }
                if value == 0 {
                    return Err(Error::Parse("set members must be positive".into()));
                }
                if !set.insert(value) {
                    return Err(Error::DuplicateEntry(value.to_string()));
                }
                while chars.peek().is_some_and(|c| c.is_whitespace()) {
                    chars.next();
                }
                match chars.peek() {
                    Some(',') => {
                        chars.next();
                    }
                    Some('}') => {}
                    other => {
                        return Err(Error::Parse(format!(
                            "expected `,` or `}}` in set, found {other:?}"
                        )))
                    }
                }
            }
            other => {
                return Err(Error::Parse(format!(
                    "expected set member or `}}`, found {other:?}"
                )))
            }
        }
    }
}

fn set_token(s: &BTreeSet<u32>) -> String {
    if s.is_empty() {
        return "∅".to_string();
    }
    let members: Vec<String> = s.iter().map(u32::to_string).collect();
    format!("{{{}}}", members.join(","))
}

/// Renders entries as chain digits when the pattern poset is a total order,
/// otherwise as set tokens built from principal down-sets (which always
/// realize the same relation matrix, whatever the poset looked like).
fn render(poset: &Poset, entries: &[usize]) -> String {
    let n = poset.len();
    let total = (0..n).all(|i| (0..n).all(|j| i == j || poset.comparable(i, j)));
    if total {
        entries
            .iter()
            .map(|&e| (poset.below_row(e).count_ones() as usize + 1).to_string())
            .collect()
    } else {
        entries
            .iter()
            .map(|&e| {
                let mut principal: BTreeSet<u32> = crate::poset::bits(poset.below_row(e))
                    .map(|j| j as u32 + 1)
                    .collect();
                principal.insert(e as u32 + 1);
                set_token(&principal)
            })
            .collect()
    }
}

/// An ordered listing of all elements of a poset.
#[derive(Clone, PartialEq, Eq)]
pub struct PosetPermutation {
    poset: Arc<Poset>,
    entries: Vec<usize>,
}

impl PosetPermutation {
    pub fn new(poset: Arc<Poset>, entries: Vec<usize>) -> Result<PosetPermutation> {
        let n = poset.len();
        if entries.len() != n {
            return Err(Error::Parse(format!(
                "expected {} entries, found {}",
                n,
                entries.len()
            )));
        }
        let mut seen = vec![false; n];
        for &e in &entries {
            if e >= n {
                return Err(Error::IndexOutOfRange { index: e, size: n });
            }
            if seen[e] {
                return Err(Error::DuplicateEntry(poset.label(e)));
            }
            seen[e] = true;
        }
        Ok(PosetPermutation { poset, entries })
    }

    /// Parses whitespace-separated element labels, e.g. `"{1} ∅ {1,2} {2}"`.
    pub fn from_labels(poset: Arc<Poset>, text: &str) -> Result<PosetPermutation> {
        let mut entries = Vec::new();
        for token in text.split_whitespace() {
            let i = poset
                .index_of_label(token)
                .ok_or_else(|| Error::Parse(format!("unknown element label `{token}`")))?;
            entries.push(i);
        }
        PosetPermutation::new(poset, entries)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn poset_arc(&self) -> Arc<Poset> {
        Arc::clone(&self.poset)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Entries as whitespace-separated labels on one line.
    pub fn format(&self) -> String {
        self.entries
            .iter()
            .map(|&e| self.poset.label(e))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Lexicographically first increasing positions (0-based) realizing the
    /// pattern's relation matrix, or `None` if the permutation avoids it.
    pub fn occurrence(&self, pattern: &Pattern) -> Option<Vec<usize>> {
        occurrence_in(&self.poset, &self.entries, pattern)
    }

    pub fn contains(&self, pattern: &Pattern) -> bool {
        self.occurrence(pattern).is_some()
    }

    pub fn avoids(&self, pattern: &Pattern) -> bool {
        self.occurrence(pattern).is_none()
    }

    /// Entries in reverse order, on the same poset.
    pub fn reverse(&self) -> PosetPermutation {
        PosetPermutation {
            poset: Arc::clone(&self.poset),
            entries: self.entries.iter().rev().copied().collect(),
        }
    }

    /// Maps every entry through `phi`, an isomorphism onto the dual (a
    /// bijection with `x < y` iff `phi(y) < phi(x)`, whose existence makes
    /// the poset self-dual). The result is re-read as a permutation of the
    /// same poset: if `self` avoids a pattern, the result avoids the
    /// pattern's dual.
    pub fn dualize(&self, phi: &[usize]) -> Result<PosetPermutation> {
        let n = self.poset.len();
        if phi.len() != n {
            return Err(Error::NotAnIsomorphism(format!(
                "map covers {} of {} elements",
                phi.len(),
                n
            )));
        }
        let mut seen = vec![false; n];
        for &v in phi {
            if v >= n || seen[v] {
                return Err(Error::NotAnIsomorphism("map is not a bijection".into()));
            }
            seen[v] = true;
        }
        for x in 0..n {
            for y in 0..n {
                if self.poset.less(x, y) != self.poset.less(phi[y], phi[x]) {
                    return Err(Error::NotAnIsomorphism(format!(
                        "order not reversed on ({}, {})",
                        self.poset.label(x),
                        self.poset.label(y)
                    )));
                }
            }
        }
        PosetPermutation::new(
            Arc::clone(&self.poset),
            self.entries.iter().map(|&e| phi[e]).collect(),
        )
    }
}

impl std::fmt::Debug for PosetPermutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})", self.format())
    }
}

/// The complement map on a Boolean lattice built with the empty set, the
/// standard isomorphism onto its dual.
pub fn boolean_complement_map(lattice: &Poset) -> Result<Vec<usize>> {
    let full = lattice.len();
    if !full.is_power_of_two() {
        return Err(Error::NotABooleanLattice);
    }
    // elements of `boolean_lattice(n, true)` are indexed by subset mask
    Ok((0..full).map(|m| (full - 1) ^ m).collect())
}

/// Occurrence search on raw entries; shared by `PosetPermutation` and the
/// counting routines.
pub(crate) fn occurrence_in(
    poset: &Poset,
    entries: &[usize],
    pattern: &Pattern,
) -> Option<Vec<usize>> {
    let k = pattern.len();
    if k > entries.len() {
        return None;
    }
    let mut positions = Vec::with_capacity(k);
    if search(poset, entries, pattern, &mut positions, 0) {
        Some(positions)
    } else {
        None
    }
}

fn search(
    poset: &Poset,
    entries: &[usize],
    pattern: &Pattern,
    positions: &mut Vec<usize>,
    from: usize,
) -> bool {
    let a = positions.len();
    if a == pattern.len() {
        return true;
    }
    // not enough room for the remaining pattern entries
    let remaining = pattern.len() - a;
    for i in from..=entries.len().saturating_sub(remaining) {
        let ok = positions
            .iter()
            .enumerate()
            .all(|(b, &pos)| poset.rel(entries[pos], entries[i]) == pattern.rel(b, a));
        if ok {
            positions.push(i);
            if search(poset, entries, pattern, positions, i + 1) {
                return true;
            }
            positions.pop();
        }
    }
    false
}

/// True iff some occurrence of `pattern` ends exactly at the last position
/// of `entries`. Used by the pruned counter: a prefix that avoided the
/// pattern can only gain an occurrence through its newest entry.
pub(crate) fn occurrence_ending_at_last(
    poset: &Poset,
    entries: &[usize],
    pattern: &Pattern,
) -> bool {
    let k = pattern.len();
    let n = entries.len();
    if k > n {
        return false;
    }
    let mut positions = Vec::with_capacity(k - 1);
    search_with_fixed_last(poset, entries, pattern, &mut positions, 0, n - 1)
}

fn search_with_fixed_last(
    poset: &Poset,
    entries: &[usize],
    pattern: &Pattern,
    positions: &mut Vec<usize>,
    from: usize,
    last: usize,
) -> bool {
    let a = positions.len();
    let k = pattern.len();
    if a == k - 1 {
        return positions
            .iter()
            .enumerate()
            .all(|(b, &pos)| poset.rel(entries[pos], entries[last]) == pattern.rel(b, k - 1));
    }
    let remaining = k - 1 - a;
    if from + remaining > last {
        return false;
    }
    for i in from..=(last - remaining) {
        let ok = positions
            .iter()
            .enumerate()
            .all(|(b, &pos)| poset.rel(entries[pos], entries[i]) == pattern.rel(b, a));
        if ok {
            positions.push(i);
            if search_with_fixed_last(poset, entries, pattern, positions, i + 1, last) {
                return true;
            }
            positions.pop();
        }
    }
    false
}

/// Iterator over all permutations of `0..n` in lexicographic order.
pub fn index_permutations(n: usize) -> IndexPermutations {
    IndexPermutations {
        next: Some((0..n).collect()),
    }
}

pub struct IndexPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for IndexPermutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(current)
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    let n = a.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// All permutations of a poset, lexicographic by entry index.
pub fn all_permutations(poset: &Arc<Poset>) -> impl Iterator<Item = PosetPermutation> + '_ {
    index_permutations(poset.len()).map(move |entries| PosetPermutation {
        poset: Arc::clone(poset),
        entries,
    })
}

/// `count` uniformly random permutations from a seeded generator; used by
/// the sampled property checks.
pub fn sample_permutations(poset: &Arc<Poset>, count: usize, seed: u64) -> Vec<PosetPermutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut entries: Vec<usize> = (0..poset.len()).collect();
            entries.shuffle(&mut rng);
            PosetPermutation {
                poset: Arc::clone(poset),
                entries,
            }
        })
        .collect()
}
