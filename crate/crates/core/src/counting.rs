//! Counting machinery: avoider counts, linear extensions, the left/right
//! reorientation bound, and the Boolean-lattice bounds with their V-shaped
//! witness family.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pattern::{occurrence_ending_at_last, occurrence_in, Pattern, PosetPermutation};
use crate::poset::{bits, transitive_close, Poset};

/// Arbitrary-precision non-negative count.
pub type Count = BigUint;

/// Default cap on the number of order ideals the extension DP may memoize.
pub const DEFAULT_IDEAL_CAP: usize = 1 << 22;

/// How `av_count` enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountMode {
    /// Extend prefixes, abandoning any prefix that already contains the
    /// pattern. Practical to around 16 elements.
    #[default]
    Pruned,
    /// Filter all n! permutations. Practical to around 10 elements.
    Naive,
}

/// Number of permutations of `p` avoiding `pattern`.
pub fn av_count(p: &Poset, pattern: &Pattern, mode: CountMode) -> Count {
    let n = p.len();
    if n == 0 {
        return Count::one();
    }
    let total: u64 = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut entries = Vec::with_capacity(n);
            entries.push(first);
            let mut used = vec![false; n];
            used[first] = true;
            match mode {
                CountMode::Pruned => {
                    if occurrence_ending_at_last(p, &entries, pattern) {
                        return 0;
                    }
                    count_pruned(p, pattern, &mut entries, &mut used)
                }
                CountMode::Naive => count_naive(p, pattern, &mut entries, &mut used),
            }
        })
        .sum();
    Count::from(total)
}

fn count_pruned(p: &Poset, pattern: &Pattern, entries: &mut Vec<usize>, used: &mut [bool]) -> u64 {
    let n = p.len();
    if entries.len() == n {
        return 1;
    }
    let mut total = 0;
    for e in 0..n {
        if used[e] {
            continue;
        }
        entries.push(e);
        // containment is prefix-monotone, so only occurrences ending at the
        // new entry can appear
        if !occurrence_ending_at_last(p, entries, pattern) {
            used[e] = true;
            total += count_pruned(p, pattern, entries, used);
            used[e] = false;
        }
        entries.pop();
    }
    total
}

fn count_naive(p: &Poset, pattern: &Pattern, entries: &mut Vec<usize>, used: &mut [bool]) -> u64 {
    let n = p.len();
    if entries.len() == n {
        return u64::from(occurrence_in(p, entries, pattern).is_none());
    }
    let mut total = 0;
    for e in 0..n {
        if used[e] {
            continue;
        }
        entries.push(e);
        used[e] = true;
        total += count_naive(p, pattern, entries, used);
        used[e] = false;
        entries.pop();
    }
    total
}

/// Number of linear extensions of `p` (equivalently its 21-avoiders),
/// by dynamic programming over order ideals with the default memo budget.
pub fn extension_count(p: &Poset) -> Result<Count> {
    extension_count_with_cap(p, DEFAULT_IDEAL_CAP)
}

/// Extension count with an explicit cap on memoized ideals; exceeding the
/// cap reports the instance as too large rather than thrashing.
pub fn extension_count_with_cap(p: &Poset, cap: usize) -> Result<Count> {
    let n = p.len();
    let above: Vec<u64> = (0..n).map(|i| p.above_row(i)).collect();
    let mut memo: HashMap<u64, Count> = HashMap::new();
    fn rec(above: &[u64], mask: u64, memo: &mut HashMap<u64, Count>, cap: usize) -> Result<Count> {
        if mask == 0 {
            return Ok(Count::one());
        }
        if let Some(v) = memo.get(&mask) {
            return Ok(v.clone());
        }
        let mut total = Count::zero();
        // the last entry of an extension of the ideal must be maximal in it
        for m in bits(mask) {
            if above[m] & mask == 0 {
                total += rec(above, mask & !(1 << m), memo, cap)?;
            }
        }
        if memo.len() >= cap {
            return Err(Error::MemoBudgetExceeded { cap });
        }
        memo.insert(mask, total.clone());
        Ok(total)
    }
    rec(&above, p.full_mask(), &mut memo, cap)
}

/// Which side of its down-set an element must sit on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A total left/right labeling of a poset's elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaLabeling {
    sides: Vec<Side>,
}

impl DeltaLabeling {
    pub fn new(sides: Vec<Side>) -> DeltaLabeling {
        DeltaLabeling { sides }
    }

    pub fn all_right(n: usize) -> DeltaLabeling {
        DeltaLabeling {
            sides: vec![Side::Right; n],
        }
    }

    pub fn all_left(n: usize) -> DeltaLabeling {
        DeltaLabeling {
            sides: vec![Side::Left; n],
        }
    }

    /// Labeling with `Left` exactly on the set bits of `mask`.
    pub fn from_left_mask(n: usize, mask: u64) -> DeltaLabeling {
        DeltaLabeling {
            sides: (0..n)
                .map(|i| {
                    if mask & (1 << i) != 0 {
                        Side::Left
                    } else {
                        Side::Right
                    }
                })
                .collect(),
        }
    }

    /// All `2^n` labelings, in mask order. Meant for small posets.
    pub fn all_labelings(n: usize) -> impl Iterator<Item = DeltaLabeling> {
        assert!(n <= 20);
        (0u64..(1 << n)).map(move |m| DeltaLabeling::from_left_mask(n, m))
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }

    #[inline]
    pub fn side(&self, i: usize) -> Side {
        self.sides[i]
    }

    /// True iff every element sits wholly on its labeled side of everything
    /// strictly below it. This is the defining filter; `delta_legal_count`
    /// reaches the same number through the reorientation.
    pub fn is_legal(&self, sigma: &PosetPermutation) -> bool {
        let p = sigma.poset();
        let n = p.len();
        assert_eq!(self.sides.len(), n);
        let mut pos = vec![0usize; n];
        for (i, &e) in sigma.entries().iter().enumerate() {
            pos[e] = i;
        }
        (0..n).all(|x| {
            bits(p.below_row(x)).all(|y| match self.sides[x] {
                Side::Left => pos[x] < pos[y],
                Side::Right => pos[x] > pos[y],
            })
        })
    }
}

/// Reorients every comparable pair by the label of its upper element: an
/// `R`-labeled element stays above its down-set, an `L`-labeled element
/// moves below it. Returns the transitive closure, which is always acyclic.
pub fn reorient(p: &Poset, delta: &DeltaLabeling) -> Poset {
    let n = p.len();
    assert_eq!(delta.len(), n);
    let mut below = vec![0u64; n];
    for y in 0..n {
        for x in bits(p.below_row(y)) {
            match delta.side(y) {
                Side::Right => below[y] |= 1 << x,
                Side::Left => below[x] |= 1 << y,
            }
        }
    }
    transitive_close(&mut below);
    for (i, &row) in below.iter().enumerate() {
        assert!(
            row & (1 << i) == 0,
            "reorientation produced a cycle, which the construction forbids"
        );
    }
    Poset::from_closed_rows(below, p.labels().map(<[String]>::to_vec))
}

/// `|Λ^δ|`: the number of δ-legal permutations, counted as the linear
/// extensions of the reoriented poset.
pub fn delta_legal_count(p: &Poset, delta: &DeltaLabeling) -> Result<Count> {
    extension_count(&reorient(p, delta))
}

/// Witness for strictness in the reorientation bound: elements `(x, y, z)`
/// with `z < y`, `z < x`, `x ~ y` and differing labels, if any exist.
pub fn delta_strictness_witness(p: &Poset, delta: &DeltaLabeling) -> Option<(usize, usize, usize)> {
    let n = p.len();
    for x in 0..n {
        for y in 0..n {
            if x == y || p.comparable(x, y) || delta.side(x) == delta.side(y) {
                continue;
            }
            for z in bits(p.below_row(x)) {
                if p.less(z, y) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// Locates the bottom element of a Boolean lattice, or reports that the
/// poset is not one. Recognition is structural: a unique bottom, one atom
/// per rank bit, and order matching atom-set inclusion exactly.
pub fn boolean_bottom(p: &Poset) -> Result<usize> {
    let n = p.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotABooleanLattice);
    }
    let rank = n.trailing_zeros() as usize;
    let bottom = (0..n)
        .find(|&b| p.below_row(b) == 0 && p.above_row(b) == p.full_mask() & !(1 << b))
        .ok_or(Error::NotABooleanLattice)?;
    let atoms: Vec<usize> = (0..n).filter(|&a| p.below_row(a) == 1 << bottom).collect();
    if atoms.len() != rank {
        return Err(Error::NotABooleanLattice);
    }
    let mut atomset = vec![0u64; n];
    for (i, set) in atomset.iter_mut().enumerate() {
        for (t, &a) in atoms.iter().enumerate() {
            if a == i || p.less(a, i) {
                *set |= 1 << t;
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            if atomset[x] == atomset[y] {
                return Err(Error::NotABooleanLattice);
            }
            let subset = atomset[x] & !atomset[y] == 0;
            if p.less(x, y) != subset {
                return Err(Error::NotABooleanLattice);
            }
        }
    }
    Ok(bottom)
}

/// Lemma-6 characterization on a Boolean lattice: true iff, for every
/// element, the nonempty elements strictly below it all sit on one side of
/// it. Equivalent to avoiding `{1}{1,2}{2}` (the empty set never takes part
/// in that pattern).
pub fn splits_check(sigma: &PosetPermutation) -> Result<bool> {
    let p = sigma.poset();
    let bottom = boolean_bottom(p)?;
    let n = p.len();
    let mut pos = vec![0usize; n];
    for (i, &e) in sigma.entries().iter().enumerate() {
        pos[e] = i;
    }
    for x in 0..n {
        if x == bottom {
            continue;
        }
        let lows = p.below_row(x) & !(1 << bottom);
        let mut before = false;
        let mut after = false;
        for y in bits(lows) {
            if pos[y] < pos[x] {
                before = true;
            } else {
                after = true;
            }
        }
        if before && after {
            return Ok(false);
        }
    }
    Ok(true)
}

fn factorial_big(k: u64) -> Count {
    let mut out = Count::one();
    for i in 2..=k {
        out *= i;
    }
    out
}

fn pow2_big(e: usize) -> Count {
    Count::one() << e
}

/// Size of the V-shaped family on the rank-`n` Boolean lattice:
/// `2^n · Π_{k=0..n} C(n,k)! · Π_{k=2..n} (C(n,k)+1)`, all in integers.
pub fn v_shaped_count(rank: u32) -> Count {
    let mut out = pow2_big(rank as usize);
    for k in 0..=rank {
        out *= factorial_big(binomial(u64::from(rank), u64::from(k)));
    }
    for k in 2..=rank {
        out *= binomial(u64::from(rank), u64::from(k)) + 1;
    }
    out
}

/// Lower and upper bounds for the number of `{1}{1,2}{2}`-avoiding
/// permutations on the rank-`n` Boolean lattice: the V-shaped family size
/// from below, `2^(2^n + n - 1) · e(B_n)` from above.
pub fn theorem5_bounds(rank: u32) -> Result<(Count, Count)> {
    let lower = v_shaped_count(rank);
    let lattice = Poset::boolean_lattice(rank, true)?;
    let extensions = extension_count(&lattice)?;
    let upper = pow2_big((1usize << rank) + rank as usize - 1) * extensions;
    Ok((lower, upper))
}

/// Largest rank `v_shaped_family` will materialize.
pub const MAX_V_SHAPED_RANK: u32 = 3;

/// Materializes every permutation of the construction behind the lower
/// bound: per-rank row permutations, a split point per row above the first,
/// and an insertion slot for the empty set. Yields `v_shaped_count(rank)`
/// pairwise distinct permutations, each avoiding `{1}{1,2}{2}`.
pub fn v_shaped_family(rank: u32) -> Result<Vec<PosetPermutation>> {
    if rank > MAX_V_SHAPED_RANK {
        return Err(Error::SizeTooLarge {
            got: rank as usize,
            max: MAX_V_SHAPED_RANK as usize,
        });
    }
    let lattice = Arc::new(Poset::boolean_lattice(rank, true)?);
    let n = rank as usize;
    // row k = elements (subset masks) of popcount k, ascending
    let rows: Vec<Vec<usize>> = (1..=n)
        .map(|k| {
            (0..lattice.len())
                .filter(|&m| m.count_ones() as usize == k)
                .collect()
        })
        .collect();
    // all orderings of each row, lexicographic
    let row_perms: Vec<Vec<Vec<usize>>> = rows
        .iter()
        .map(|row| {
            crate::pattern::index_permutations(row.len())
                .map(|perm| perm.into_iter().map(|i| row[i]).collect())
                .collect()
        })
        .collect();
    let mut family = Vec::new();
    let mut perm_choice = vec![0usize; rows.len()];
    loop {
        // split points j_k for rows 2..=n, odometer over 0..=row_len
        let mut splits = vec![0usize; rows.len().saturating_sub(1)];
        loop {
            let mut rho: Vec<usize> = Vec::with_capacity(lattice.len() - 1);
            for k in (2..=n).rev() {
                let perm = &row_perms[k - 1][perm_choice[k - 1]];
                rho.extend_from_slice(&perm[..splits[k - 2]]);
            }
            if n >= 1 {
                rho.extend_from_slice(&row_perms[0][perm_choice[0]]);
            }
            for k in 2..=n {
                let perm = &row_perms[k - 1][perm_choice[k - 1]];
                rho.extend_from_slice(&perm[splits[k - 2]..]);
            }
            for slot in 0..=rho.len() {
                let mut entries = rho.clone();
                entries.insert(slot, 0); // element 0 is the empty set
                family.push(
                    PosetPermutation::new(Arc::clone(&lattice), entries)
                        .expect("construction yields permutations"),
                );
            }
            // advance split odometer
            let mut k = 2;
            loop {
                if k > n {
                    break;
                }
                splits[k - 2] += 1;
                if splits[k - 2] <= rows[k - 1].len() {
                    break;
                }
                splits[k - 2] = 0;
                k += 1;
            }
            if k > n {
                break;
            }
        }
        // advance row-permutation odometer
        let mut k = 1;
        loop {
            if k > n {
                break;
            }
            perm_choice[k - 1] += 1;
            if perm_choice[k - 1] < row_perms[k - 1].len() {
                break;
            }
            perm_choice[k - 1] = 0;
            k += 1;
        }
        if k > n {
            break;
        }
    }
    Ok(family)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::all_permutations;
    use std::collections::HashSet;

    fn pat(text: &str) -> Pattern {
        Pattern::parse(text).unwrap()
    }

    fn count_u64(c: &Count) -> u64 {
        use num_traits::ToPrimitive;
        c.to_u64().unwrap()
    }

    #[test]
    fn b2_exact_counts() {
        let b2 = Poset::boolean_lattice(2, true).unwrap();
        for (text, expect) in [
            ("132", 18),
            ("123", 18),
            ("{1}{1,2}{2}", 16),
            ("{1}{2}{1,2}", 16),
        ] {
            let naive = av_count(&b2, &pat(text), CountMode::Naive);
            let pruned = av_count(&b2, &pat(text), CountMode::Pruned);
            assert_eq!(count_u64(&naive), expect, "naive Av({text})");
            assert_eq!(naive, pruned, "modes must agree on {text}");
        }
    }

    #[test]
    fn chain_and_antichain_counts() {
        let c3 = Poset::chain(3).unwrap();
        assert_eq!(count_u64(&av_count(&c3, &pat("132"), CountMode::Naive)), 5);
        let a3 = Poset::antichain(3).unwrap();
        assert_eq!(count_u64(&av_count(&a3, &pat("123"), CountMode::Naive)), 6);
    }

    #[test]
    fn extension_counts() {
        let b2 = Poset::boolean_lattice(2, true).unwrap();
        assert_eq!(count_u64(&extension_count(&b2).unwrap()), 2);
        let c5 = Poset::chain(5).unwrap();
        assert_eq!(count_u64(&extension_count(&c5).unwrap()), 1);
        let a4 = Poset::antichain(4).unwrap();
        assert_eq!(count_u64(&extension_count(&a4).unwrap()), 24);
        let b3 = Poset::boolean_lattice(3, true).unwrap();
        assert_eq!(count_u64(&extension_count(&b3).unwrap()), 48);
    }

    #[test]
    fn extension_count_matches_21_avoiders() {
        for n in 1..=4 {
            for p in crate::poset::all_posets(n).unwrap() {
                let dp = extension_count(&p).unwrap();
                let filter = av_count(&p, &pat("21"), CountMode::Naive);
                assert_eq!(dp, filter, "{p:?}");
            }
        }
    }

    #[test]
    fn extension_count_on_the_rank_five_lattice() {
        // 32 elements, 7581 order ideals; the count brushes against the
        // u64 ceiling, which is why Count is arbitrary precision
        let b5 = Poset::boolean_lattice(5, true).unwrap();
        assert_eq!(
            extension_count(&b5).unwrap().to_string(),
            "14807804035657359360"
        );
    }

    #[test]
    fn memo_cap_is_enforced() {
        let a = Poset::antichain(10).unwrap();
        assert!(matches!(
            extension_count_with_cap(&a, 16),
            Err(Error::MemoBudgetExceeded { cap: 16 })
        ));
    }

    #[test]
    fn reorient_identity_and_dual() {
        let b2 = Poset::boolean_lattice(2, true).unwrap();
        let same = reorient(&b2, &DeltaLabeling::all_right(4));
        assert_eq!(same, b2);
        let dualized = reorient(&b2, &DeltaLabeling::all_left(4));
        assert_eq!(dualized, b2.dual());
    }

    #[test]
    fn reorient_v_poset_gains_a_relation() {
        // V: z=0 < x=1, z < y=2; delta(x)=L, delta(y)=R
        let v = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        let delta = DeltaLabeling::new(vec![Side::Right, Side::Left, Side::Right]);
        let r = reorient(&v, &delta);
        // x <' z <' y, and the closure adds x <' y
        assert!(r.less(1, 0));
        assert!(r.less(0, 2));
        assert!(r.less(1, 2));
        assert!(delta_strictness_witness(&v, &delta).is_some());
    }

    #[test]
    fn delta_legal_counts_examples() {
        // all-R counts linear extensions
        let b3 = Poset::boolean_lattice(3, true).unwrap();
        assert_eq!(
            delta_legal_count(&b3, &DeltaLabeling::all_right(8)).unwrap(),
            extension_count(&b3).unwrap()
        );
        // V poset, delta(x)=L others R: only (x, z, y)
        let v = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        let delta = DeltaLabeling::new(vec![Side::Right, Side::Left, Side::Right]);
        assert_eq!(count_u64(&delta_legal_count(&v, &delta).unwrap()), 1);
        // B2 minus empty set with the top labeled L: top first, then the
        // two middle elements in either order
        let b2m = Poset::boolean_lattice(2, false).unwrap();
        let top = b2m.index_of_label("{1,2}").unwrap();
        let mut sides = vec![Side::Right; 3];
        sides[top] = Side::Left;
        assert_eq!(
            count_u64(&delta_legal_count(&b2m, &DeltaLabeling::new(sides)).unwrap()),
            2
        );
    }

    #[test]
    fn delta_legal_count_agrees_with_direct_filter() {
        let v = Arc::new(Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap());
        for delta in DeltaLabeling::all_labelings(3) {
            let by_reorient = delta_legal_count(&v, &delta).unwrap();
            let by_filter = all_permutations(&v).filter(|s| delta.is_legal(s)).count();
            assert_eq!(count_u64(&by_reorient), by_filter as u64);
        }
    }

    #[test]
    fn splits_check_examples() {
        let b2 = Arc::new(Poset::boolean_lattice(2, true).unwrap());
        let good = PosetPermutation::from_labels(Arc::clone(&b2), "∅ {1} {2} {1,2}").unwrap();
        assert!(splits_check(&good).unwrap());
        let bad = PosetPermutation::from_labels(Arc::clone(&b2), "{1} {1,2} {2} ∅").unwrap();
        assert!(!splits_check(&bad).unwrap());
        assert!(bad.contains(&pat("{1}{1,2}{2}")));
    }

    #[test]
    fn splits_check_equals_avoidance_on_b2() {
        let b2 = Arc::new(Poset::boolean_lattice(2, true).unwrap());
        let pattern = pat("{1}{1,2}{2}");
        let mut holds = 0;
        for sigma in all_permutations(&b2) {
            let split = splits_check(&sigma).unwrap();
            assert_eq!(split, sigma.avoids(&pattern));
            holds += usize::from(split);
        }
        assert_eq!(holds, 16);
    }

    #[test]
    fn splits_check_rejects_non_boolean_posets() {
        let c4 = Arc::new(Poset::chain(4).unwrap());
        let sigma = PosetPermutation::new(Arc::clone(&c4), vec![0, 1, 2, 3]).unwrap();
        assert!(matches!(
            splits_check(&sigma),
            Err(Error::NotABooleanLattice)
        ));
    }

    #[test]
    fn theorem5_bound_values() {
        assert_eq!(
            theorem5_bounds(1).unwrap(),
            (Count::from(2u32), Count::from(4u32))
        );
        assert_eq!(
            theorem5_bounds(2).unwrap(),
            (Count::from(16u32), Count::from(64u32))
        );
        assert_eq!(
            theorem5_bounds(3).unwrap(),
            (Count::from(2304u32), Count::from(49152u32))
        );
    }

    #[test]
    fn lower_bound_matches_displayed_formula() {
        // 2^(n-1)/(n+1) · Π (C(n,k)+1)! equals the integer product form
        for n in 1..=4u32 {
            let mut display = pow2_big(n as usize - 1);
            for k in 0..=n {
                display *= factorial_big(binomial(u64::from(n), u64::from(k)) + 1);
            }
            let (quot, rem) = num_integer::Integer::div_rem(&display, &Count::from(n + 1));
            assert!(rem.is_zero(), "n+1 must divide the displayed product");
            assert_eq!(quot, v_shaped_count(n), "n = {n}");
        }
    }

    #[test]
    fn v_shaped_family_small_ranks() {
        let fam1 = v_shaped_family(1).unwrap();
        assert_eq!(fam1.len(), 2);
        let fam2 = v_shaped_family(2).unwrap();
        assert_eq!(fam2.len(), 16);
        let pattern = pat("{1}{1,2}{2}");
        let distinct: HashSet<Vec<usize>> = fam2.iter().map(|s| s.entries().to_vec()).collect();
        assert_eq!(distinct.len(), 16);
        for sigma in &fam2 {
            assert!(splits_check(sigma).unwrap());
            assert!(sigma.avoids(&pattern));
        }
        assert!(v_shaped_family(4).is_err());
    }
}
