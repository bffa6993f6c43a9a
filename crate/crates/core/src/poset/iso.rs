//! Isomorphism testing and canonical keys for small posets.
//!
//! Both routines refine elements into invariant classes first (down-set /
//! up-set sizes, then the class multisets of neighbours, iterated to a fixed
//! point) and only search relabelings inside compatible classes. At the
//! sizes we generate (n <= 7) this is instant without a canonical-labeling
//! library.

use super::{bits, Poset};

/// Stable invariant classes: elements get equal ids iff the iterated
/// refinement cannot tell them apart. Ids are ordered by invariant value.
fn refine_classes(p: &Poset) -> Vec<usize> {
    let n = p.len();
    let mut class: Vec<usize> = vec![0; n];
    let mut sig: Vec<(usize, usize)> = (0..n)
        .map(|i| {
            (
                p.below_row(i).count_ones() as usize,
                p.above_row(i).count_ones() as usize,
            )
        })
        .collect();
    loop {
        let mut keys: Vec<(Vec<usize>, usize)> = (0..n)
            .map(|i| {
                let mut down: Vec<usize> = bits(p.below_row(i)).map(|j| class[j]).collect();
                let mut up: Vec<usize> = bits(p.above_row(i)).map(|j| class[j]).collect();
                down.sort_unstable();
                up.sort_unstable();
                let mut key = vec![sig[i].0, sig[i].1, usize::MAX];
                key.extend(down);
                key.push(usize::MAX);
                key.extend(up);
                (key, i)
            })
            .collect();
        keys.sort();
        let mut next = vec![0usize; n];
        let mut id = 0usize;
        for w in 0..keys.len() {
            if w > 0 && keys[w].0 != keys[w - 1].0 {
                id += 1;
            }
            next[keys[w].1] = id;
        }
        if next == class {
            return class;
        }
        sig = (0..n).map(|i| (next[i], 0)).collect();
        class = next;
    }
}

/// Encodes `p` relabeled by `perm` (new index `i` holds old element
/// `perm[i]`) as a row-major bit matrix. Requires `n <= 8`.
fn encode(p: &Poset, perm: &[usize]) -> u64 {
    let n = p.len();
    let mut code = 0u64;
    for i in 0..n {
        for j in 0..n {
            if p.less(perm[i], perm[j]) {
                code |= 1 << (i * n + j);
            }
        }
    }
    code
}

/// A canonical key for posets on at most 8 elements: equal keys iff
/// isomorphic. The key is the minimum bit-matrix encoding over all
/// relabelings that sort the refinement classes.
pub fn canonical_key(p: &Poset) -> u64 {
    let n = p.len();
    assert!(n <= 8, "canonical_key supports at most 8 elements");
    if n == 0 {
        return 0;
    }
    let class = refine_classes(p);
    // group element indices by class id, classes already ordered by invariant
    let max_class = *class.iter().max().unwrap();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); max_class + 1];
    for (i, &c) in class.iter().enumerate() {
        groups[c].push(i);
    }
    let mut best = u64::MAX;
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    fn rec(p: &Poset, groups: &[Vec<usize>], g: usize, perm: &mut Vec<usize>, best: &mut u64) {
        if g == groups.len() {
            *best = (*best).min(encode(p, perm));
            return;
        }
        // all orderings within this class block
        let block = &groups[g];
        let mut order: Vec<usize> = block.clone();
        permute_all(&mut order, 0, &mut |arrangement| {
            let len_before = perm.len();
            perm.extend_from_slice(arrangement);
            rec(p, groups, g + 1, perm, best);
            perm.truncate(len_before);
        });
    }
    rec(p, &groups, 0, &mut perm, &mut best);
    best
}

fn permute_all(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute_all(items, k + 1, f);
        items.swap(k, i);
    }
}

/// Backtracking isomorphism test pruned by per-element down/up-set sizes.
/// The signature pairs are directly comparable across the two posets, unlike
/// refinement class ids, so pruning can never discard a real isomorphism.
pub fn is_isomorphic(p: &Poset, q: &Poset) -> bool {
    if p.len() != q.len() {
        return false;
    }
    let n = p.len();
    if n == 0 {
        return true;
    }
    let sig = |r: &Poset, i: usize| (r.below_row(i).count_ones(), r.above_row(i).count_ones());
    let sp: Vec<_> = (0..n).map(|i| sig(p, i)).collect();
    let sq: Vec<_> = (0..n).map(|i| sig(q, i)).collect();
    let mut mp = sp.clone();
    let mut mq = sq.clone();
    mp.sort_unstable();
    mq.sort_unstable();
    if mp != mq {
        return false;
    }
    // map p-element i -> q-element image[i], matching signatures only
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn rec(
        p: &Poset,
        q: &Poset,
        sp: &[(u32, u32)],
        sq: &[(u32, u32)],
        i: usize,
        image: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let n = p.len();
        if i == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] || sq[cand] != sp[i] {
                continue;
            }
            let ok = (0..i).all(|j| p.rel(j, i) == q.rel(image[j], cand));
            if ok {
                image[i] = cand;
                used[cand] = true;
                if rec(p, q, sp, sq, i + 1, image, used) {
                    return true;
                }
                used[cand] = false;
                image[i] = usize::MAX;
            }
        }
        false
    }
    rec(p, q, &sp, &sq, 0, &mut image, &mut used)
}

/// Searches `p` for an induced copy of `q`, returning a sorted witness
/// subset `s` with `p.induced(s)` isomorphic to `q`. Deterministic: the
/// search assigns q-elements in index order and tries p-candidates in
/// index order.
pub fn contains_induced(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    if q.len() > p.len() {
        return None;
    }
    let k = q.len();
    if k == 0 {
        return Some(Vec::new());
    }
    let mut image = vec![usize::MAX; k];
    let mut used = vec![false; p.len()];
    fn rec(p: &Poset, q: &Poset, i: usize, image: &mut [usize], used: &mut [bool]) -> bool {
        if i == q.len() {
            return true;
        }
        for cand in 0..p.len() {
            if used[cand] {
                continue;
            }
            // comparability-count pruning: an induced image of q-element i
            // needs at least as many elements below/above it in p
            if (p.below_row(cand).count_ones() as usize) < bits_below_count(q, i)
                || (p.above_row(cand).count_ones() as usize) < bits_above_count(q, i)
            {
                continue;
            }
            let ok = (0..i).all(|j| q.rel(j, i) == p.rel(image[j], cand));
            if ok {
                image[i] = cand;
                used[cand] = true;
                if rec(p, q, i + 1, image, used) {
                    return true;
                }
                used[cand] = false;
                image[i] = usize::MAX;
            }
        }
        false
    }
    if rec(p, q, 0, &mut image, &mut used) {
        let mut witness = image;
        witness.sort_unstable();
        Some(witness)
    } else {
        None
    }
}

fn bits_below_count(q: &Poset, i: usize) -> usize {
    q.below_row(i).count_ones() as usize
}

fn bits_above_count(q: &Poset, i: usize) -> usize {
    q.above_row(i).count_ones() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Poset;

    #[test]
    fn chains_and_antichains() {
        let c3 = Poset::chain(3).unwrap();
        let a3 = Poset::antichain(3).unwrap();
        assert!(!is_isomorphic(&c3, &a3));
        assert!(is_isomorphic(&c3, &c3.dual()));
        assert_ne!(canonical_key(&c3), canonical_key(&a3));
    }

    #[test]
    fn relabeled_posets_share_a_key() {
        // V poset two ways
        let v1 = Poset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        let v2 = Poset::from_covers(3, &[(2, 0), (2, 1)]).unwrap();
        assert!(is_isomorphic(&v1, &v2));
        assert_eq!(canonical_key(&v1), canonical_key(&v2));
        let lambda = v1.dual();
        assert!(!is_isomorphic(&v1, &lambda));
        assert_ne!(canonical_key(&v1), canonical_key(&lambda));
    }

    #[test]
    fn induced_search_finds_chain_in_chain() {
        let c5 = Poset::chain(5).unwrap();
        let c3 = Poset::chain(3).unwrap();
        let w = contains_induced(&c5, &c3).unwrap();
        assert_eq!(w.len(), 3);
        let sub = c5.induced(&w).unwrap();
        assert!(is_isomorphic(&sub, &c3));
    }

    #[test]
    fn induced_search_respects_size() {
        let b2 = Poset::boolean_lattice(2, true).unwrap();
        let c5 = Poset::chain(5).unwrap();
        assert!(contains_induced(&b2, &c5).is_none());
    }
}
