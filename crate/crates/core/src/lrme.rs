//! Left-to-right minimal elements and the labeling machinery behind the
//! 132-vs-123 injection.
//!
//! An LRME of a permutation is an entry with no earlier strictly-smaller
//! entry. Fixing an admissible LRME set, the remaining elements carry a
//! labeling ω, and the fillings that keep exactly that LRME set are the
//! ω-legal permutations Λ^ω of the residual poset. The `f` and `g`
//! algorithms implement the injection from the prefix-order minimal such
//! fillings into the maximal ones.
//!
//! Positions are 1-based throughout this module, matching the μ/ν indexing
//! convention the algorithms are stated in. In particular ω values refer to
//! residual ranks (the ν indices), never to absolute positions.

use crate::error::{Error, Result};
use crate::pattern::PosetPermutation;
use crate::poset::{bits, Poset};

/// A list of elements with strictly increasing 1-based positions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LrmeSet {
    pub elements: Vec<usize>,
    pub positions: Vec<usize>,
}

impl LrmeSet {
    pub fn new(elements: Vec<usize>, positions: Vec<usize>) -> LrmeSet {
        LrmeSet {
            elements,
            positions,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Shape sanity for a poset on `n` elements: equal-length lists,
    /// distinct valid elements, strictly increasing positions within `1..=n`.
    pub fn well_formed(&self, n: usize) -> bool {
        if self.elements.len() != self.positions.len() {
            return false;
        }
        let mut seen = vec![false; n];
        for &e in &self.elements {
            if e >= n || seen[e] {
                return false;
            }
            seen[e] = true;
        }
        self.positions.iter().all(|&p| p >= 1 && p <= n)
            && self.positions.windows(2).all(|w| w[0] < w[1])
    }
}

/// The LRME set of a permutation: entries with no earlier strictly-smaller
/// entry (informally, less than or incomparable to everything before them).
pub fn lrme_of(sigma: &PosetPermutation) -> LrmeSet {
    let p = sigma.poset();
    let mut elements = Vec::new();
    let mut positions = Vec::new();
    let mut seen = 0u64;
    for (i, &e) in sigma.entries().iter().enumerate() {
        if p.below_row(e) & seen == 0 {
            elements.push(e);
            positions.push(i + 1);
        }
        seen |= 1 << e;
    }
    LrmeSet::new(elements, positions)
}

/// The left-to-right minima of a permutation: entries strictly less than
/// every preceding entry. Every LRM is an LRME; the converse fails, which
/// is exactly the pitfall the two names guard against.
pub fn lrm_of(sigma: &PosetPermutation) -> LrmeSet {
    let p = sigma.poset();
    let mut elements = Vec::new();
    let mut positions = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for (i, &e) in sigma.entries().iter().enumerate() {
        if seen.iter().all(|&earlier| p.less(e, earlier)) {
            elements.push(e);
            positions.push(i + 1);
        }
        seen.push(e);
    }
    LrmeSet::new(elements, positions)
}

/// Elements of a poset on `n` elements not listed in `x`, ascending.
pub fn residual_elements(x: &LrmeSet, n: usize) -> Vec<usize> {
    (0..n).filter(|e| !x.elements.contains(e)).collect()
}

/// Positions `1..=n` not used by `x`, ascending (the ν indices).
pub fn residual_positions(x: &LrmeSet, n: usize) -> Vec<usize> {
    (1..=n).filter(|p| !x.positions.contains(p)).collect()
}

/// A residual poset together with a labeling ω that satisfies the two
/// legality conditions: at least `i` elements labeled `<= i` for every `i`,
/// and larger elements never labeled above smaller ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaLabeling {
    poset: Poset,
    omega: Vec<usize>,
}

impl OmegaLabeling {
    pub fn new(poset: Poset, omega: Vec<usize>) -> Result<OmegaLabeling> {
        let n = poset.len();
        if omega.len() != n {
            return Err(Error::InvalidOmegaLabeling(format!(
                "{} labels for {} elements",
                omega.len(),
                n
            )));
        }
        for (e, &w) in omega.iter().enumerate() {
            if w == 0 || w > n {
                return Err(Error::InvalidOmegaLabeling(format!(
                    "label {w} of element {} outside 1..={n}",
                    poset.label(e)
                )));
            }
        }
        for i in 1..=n {
            let have = omega.iter().filter(|&&w| w <= i).count();
            if have < i {
                return Err(Error::InvalidOmegaLabeling(format!(
                    "only {have} elements labeled <= {i}"
                )));
            }
        }
        for x in 0..n {
            for y in bits(poset.below_row(x)) {
                if omega[x] > omega[y] {
                    return Err(Error::InvalidOmegaLabeling(format!(
                        "{} > {} but label {} > {}",
                        poset.label(x),
                        poset.label(y),
                        omega[x],
                        omega[y]
                    )));
                }
            }
        }
        Ok(OmegaLabeling { poset, omega })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// The 1-based label of an element.
    pub fn omega(&self, element: usize) -> usize {
        self.omega[element]
    }

    /// True iff every entry's label is at most its 1-based position.
    pub fn is_legal(&self, perm: &[usize]) -> bool {
        perm.iter()
            .enumerate()
            .all(|(i, &e)| self.omega[e] <= i + 1)
    }

    fn check_permutation(&self, perm: &[usize]) -> Result<()> {
        let n = self.len();
        if perm.len() != n {
            return Err(Error::Parse(format!(
                "expected {} entries, found {}",
                n,
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &e in perm {
            if e >= n {
                return Err(Error::IndexOutOfRange { index: e, size: n });
            }
            if seen[e] {
                return Err(Error::DuplicateEntry(self.poset.label(e)));
            }
            seen[e] = true;
        }
        Ok(())
    }

    fn check_legal(&self, perm: &[usize]) -> Result<()> {
        self.check_permutation(perm)?;
        for (i, &e) in perm.iter().enumerate() {
            if self.omega[e] > i + 1 {
                return Err(Error::NotOmegaLegal(i + 1));
            }
        }
        Ok(())
    }

    /// All ω-legal permutations Λ^ω, in lexicographic entry order.
    pub fn legal_perms(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        self.enumerate_legal(&mut perm, &mut used, &mut out);
        out
    }

    fn enumerate_legal(&self, perm: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = self.len();
        if perm.len() == n {
            out.push(perm.clone());
            return;
        }
        let i = perm.len();
        for e in 0..n {
            if !used[e] && self.omega[e] <= i + 1 {
                perm.push(e);
                used[e] = true;
                self.enumerate_legal(perm, used, out);
                used[e] = false;
                perm.pop();
            }
        }
    }

    /// `a > b` in the prefix order: they agree up to some position where
    /// `a`'s entry is strictly greater.
    pub fn prefix_gt(&self, a: &[usize], b: &[usize]) -> bool {
        for (&x, &y) in a.iter().zip(b.iter()) {
            if x == y {
                continue;
            }
            return self.poset.less(y, x);
        }
        false
    }

    /// The prefix-order minimal and maximal ω-legal permutations.
    pub fn lambda_extremes(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let all = self.legal_perms();
        let min = all
            .iter()
            .filter(|a| !all.iter().any(|b| self.prefix_gt(a, b)))
            .cloned()
            .collect();
        let max = all
            .iter()
            .filter(|a| !all.iter().any(|b| self.prefix_gt(b, a)))
            .cloned()
            .collect();
        (min, max)
    }

    /// Greedy membership test for Λ^ω_min: at every position the entry is
    /// minimal among the still-eligible elements. Coincides with the
    /// prefix-order definition (tested exhaustively).
    pub fn is_greedy_min(&self, perm: &[usize]) -> bool {
        self.extreme_violation(perm, false).is_none()
    }

    /// Greedy membership test for Λ^ω_max.
    pub fn is_greedy_max(&self, perm: &[usize]) -> bool {
        self.extreme_violation(perm, true).is_none()
    }

    /// First 1-based position where `perm` fails to pick a minimal
    /// (or, with `maximal`, a maximal) eligible element.
    fn extreme_violation(&self, perm: &[usize], maximal: bool) -> Option<usize> {
        let n = self.len();
        let mut used = vec![false; n];
        for (i, &e) in perm.iter().enumerate() {
            if self.omega[e] > i + 1 {
                return Some(i + 1);
            }
            let beaten = (0..n).any(|y| {
                !used[y]
                    && y != e
                    && self.omega[y] <= i + 1
                    && if maximal {
                        self.poset.less(e, y)
                    } else {
                        self.poset.less(y, e)
                    }
            });
            if beaten {
                return Some(i + 1);
            }
            used[e] = true;
        }
        None
    }

    /// All greedy-minimal fillings, enumerated directly; cross-checks the
    /// definitional `lambda_extremes`.
    pub fn enumerate_greedy(&self, maximal: bool) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        let mut perm = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(
            l: &OmegaLabeling,
            maximal: bool,
            perm: &mut Vec<usize>,
            used: &mut [bool],
            out: &mut Vec<Vec<usize>>,
        ) {
            let n = l.len();
            if perm.len() == n {
                out.push(perm.clone());
                return;
            }
            let i = perm.len();
            let eligible: Vec<usize> = (0..n)
                .filter(|&e| !used[e] && l.omega[e] <= i + 1)
                .collect();
            for &e in &eligible {
                let extreme = eligible.iter().all(|&y| {
                    y == e
                        || if maximal {
                            !l.poset.less(e, y)
                        } else {
                            !l.poset.less(y, e)
                        }
                });
                if extreme {
                    perm.push(e);
                    used[e] = true;
                    rec(l, maximal, perm, used, out);
                    used[e] = false;
                    perm.pop();
                }
            }
        }
        rec(self, maximal, &mut perm, &mut used, &mut out);
        out
    }

    /// Runs the forward algorithm, recording every intermediate permutation
    /// and the positions marked at each step. The input must be ω-legal.
    pub fn f_trace(&self, sigma: &[usize]) -> Result<FgTrace> {
        self.check_legal(sigma)?;
        let n = sigma.len();
        let mut steps = vec![sigma.to_vec()];
        let mut all_marks = Vec::with_capacity(n);
        let mut cur = sigma.to_vec();
        for i in 0..n {
            let mut marks = vec![i];
            for j in i + 1..n {
                if self.poset.less(cur[*marks.last().unwrap()], cur[j]) {
                    marks.push(j);
                }
            }
            let mut next = cur.clone();
            let k = marks.len() - 1;
            next[marks[0]] = cur[marks[k]];
            for t in 1..=k {
                next[marks[t]] = cur[marks[t - 1]];
            }
            all_marks.push(marks);
            steps.push(next.clone());
            cur = next;
        }
        Ok(FgTrace {
            steps,
            marks: all_marks,
        })
    }

    /// The forward map into Λ^ω_max; its restriction to Λ^ω_min is the
    /// injection φ.
    pub fn f_map(&self, sigma: &[usize]) -> Result<Vec<usize>> {
        let trace = self.f_trace(sigma)?;
        Ok(trace.steps.into_iter().next_back().unwrap())
    }

    /// Runs the reverse algorithm from a Λ^ω_max member, recording the
    /// intermediates top-down (entry `t` of `steps` is π^(n-t)).
    pub fn g_trace(&self, pi: &[usize]) -> Result<FgTrace> {
        self.check_permutation(pi)?;
        if let Some(pos) = self.extreme_violation(pi, true) {
            return Err(Error::NotInLambdaMax(pos));
        }
        let n = pi.len();
        let mut steps = vec![pi.to_vec()];
        let mut all_marks = Vec::with_capacity(n);
        let mut cur = pi.to_vec();
        for i in (1..=n).rev() {
            let i0 = i - 1;
            // marked right to left: an entry joins when it is less than the
            // entry at the last marked position and its label allows step i
            let mut marked_desc = vec![i0];
            let mut last = i0;
            for j in (i0 + 1..n).rev() {
                if self.poset.less(cur[j], cur[last]) && self.omega[cur[j]] <= i {
                    marked_desc.push(j);
                    last = j;
                }
            }
            let mut beta = vec![i0];
            beta.extend(marked_desc[1..].iter().rev());
            let l = beta.len() - 1;
            let mut next = cur.clone();
            for t in 0..l {
                next[beta[t]] = cur[beta[t + 1]];
            }
            next[beta[l]] = cur[beta[0]];
            all_marks.push(beta);
            steps.push(next.clone());
            cur = next;
        }
        Ok(FgTrace {
            steps,
            marks: all_marks,
        })
    }

    /// The reverse map; `g(f(σ)) = σ` on Λ^ω_min and `f(g(π)) = π` on
    /// Λ^ω_max.
    pub fn g_map(&self, pi: &[usize]) -> Result<Vec<usize>> {
        let trace = self.g_trace(pi)?;
        Ok(trace.steps.into_iter().next_back().unwrap())
    }

    /// `i`-minimality: no later inversion (σ_k < σ_j with k > j > i, all
    /// 1-based) whose lower entry is labeled at most j. 0-minimality of an
    /// ω-legal permutation is membership in Λ^ω_min; every permutation is
    /// n-minimal.
    pub fn is_i_minimal(&self, sigma: &[usize], i: usize) -> bool {
        let n = sigma.len();
        for j0 in i..n {
            for k0 in j0 + 1..n {
                if self.poset.less(sigma[k0], sigma[j0]) && self.omega[sigma[k0]] <= j0 + 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Witness `(x, y, z)` with `x < z`, `y < z`, `x ~ y`, `ω(x) < ω(y)`,
    /// if one exists; φ is a bijection when there is none.
    pub fn phi_condition(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                if x == y || self.poset.comparable(x, y) || self.omega[x] >= self.omega[y] {
                    continue;
                }
                for z in bits(self.poset.above_row(x)) {
                    if self.poset.less(y, z) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }
}

/// Intermediate permutations and per-step marked positions from one run of
/// the `f` or `g` algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgTrace {
    /// `n + 1` permutations in the order the algorithm produced them.
    pub steps: Vec<Vec<usize>>,
    /// For each of the `n` steps, the marked positions (0-based, ascending).
    pub marks: Vec<Vec<usize>>,
}

/// Builds the residual labeling of an admissible LRME set: the induced
/// poset on the unlisted elements, each labeled with the first residual
/// slot it could legally occupy (the smallest `i` such that some listed
/// element below it sits before the `i`-th free position).
pub fn omega_of(x: &LrmeSet, p: &Poset) -> Result<OmegaLabeling> {
    let n = p.len();
    if !x.well_formed(n) {
        return Err(Error::NotAdmissible(
            "malformed element/position lists".into(),
        ));
    }
    let residual = residual_elements(x, n);
    let nu = residual_positions(x, n);
    let mut omega = Vec::with_capacity(residual.len());
    for &y in &residual {
        // earliest listed position strictly below y
        let first_below = x
            .elements
            .iter()
            .zip(&x.positions)
            .filter(|&(&e, _)| p.less(e, y))
            .map(|(_, &pos)| pos)
            .min();
        let Some(mu) = first_below else {
            return Err(Error::NotAdmissible(format!(
                "element {} is above no listed element",
                p.label(y)
            )));
        };
        let Some(i) = nu.iter().position(|&v| v > mu) else {
            return Err(Error::NotAdmissible(format!(
                "element {} has no residual slot after position {mu}",
                p.label(y)
            )));
        };
        omega.push(i + 1);
    }
    let induced = p.induced(&residual)?;
    OmegaLabeling::new(induced, omega).map_err(|e| match e {
        Error::InvalidOmegaLabeling(msg) => Error::NotAdmissible(msg),
        other => other,
    })
}

/// Admissibility of an LRME set: position one is used, no listed element
/// sits strictly below a later listed one, and the residual labeling
/// exists (every unlisted element is above some listed one in time, with
/// enough early labels to fill every slot). Equivalent to the existence of
/// a permutation with exactly this LRME set, which tests verify by brute
/// force.
pub fn is_admissible(x: &LrmeSet, p: &Poset) -> bool {
    let n = p.len();
    if !x.well_formed(n) || x.is_empty() {
        return false;
    }
    if x.positions[0] != 1 {
        return false;
    }
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if p.less(x.elements[i], x.elements[j]) {
                return false;
            }
        }
    }
    omega_of(x, p).is_ok()
}

/// Interleaves an LRME set with a residual filling (indices into the
/// residual poset) into full permutation entries.
pub fn interleave(x: &LrmeSet, filling: &[usize], p: &Poset) -> Vec<usize> {
    let n = p.len();
    let residual = residual_elements(x, n);
    let nu = residual_positions(x, n);
    assert_eq!(filling.len(), nu.len());
    let mut entries = vec![usize::MAX; n];
    for (&e, &pos) in x.elements.iter().zip(&x.positions) {
        entries[pos - 1] = e;
    }
    for (&slot, &f) in nu.iter().zip(filling) {
        entries[slot - 1] = residual[f];
    }
    entries
}

/// Renders an f-run and a g-run as the two-column ladder layout, one
/// permutation per line with the step's marked entries bracketed.
pub fn format_fg_trace(p: &Poset, f: &FgTrace, g: &FgTrace) -> String {
    let mut out = String::new();
    let n = f.steps.len() - 1;
    out.push_str("f(sigma):\n");
    for (t, step) in f.steps.iter().enumerate() {
        let marks: &[usize] = if t < n { &f.marks[t] } else { &[] };
        out.push_str(&format!("sigma^{t} = {}\n", render_line(p, step, marks)));
    }
    out.push_str("g(pi):\n");
    for (t, step) in g.steps.iter().enumerate() {
        let marks: &[usize] = if t < n { &g.marks[t] } else { &[] };
        out.push_str(&format!("pi^{} = {}\n", n - t, render_line(p, step, marks)));
    }
    out
}

fn render_line(p: &Poset, entries: &[usize], marks: &[usize]) -> String {
    entries
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            if marks.contains(&i) {
                format!("[{}]", p.label(e))
            } else {
                p.label(e)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
