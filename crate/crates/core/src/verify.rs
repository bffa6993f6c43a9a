//! Verification drivers: the 132-vs-123 theorem with its five-element
//! witness posets, the open split-pattern conjecture, exhaustive scans over
//! all small posets, the Wilf-class table, and the left-to-right-minima
//! probe.

use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::counting::{av_count, CountMode};
use crate::error::{Error, Result};
use crate::lrme::{lrm_of, LrmeSet};
use crate::pattern::{all_permutations, Pattern};
use crate::poset::{canonical_key, contains_induced, Poset};

/// Outcome of a single check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Counterexample,
}

#[derive(Debug, Clone, Serialize)]
pub struct PatternCount {
    pub pattern: String,
    pub count: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    /// Which named shape was found.
    pub shape: String,
    /// Element labels of the induced copy, ascending by index.
    pub elements: Vec<String>,
}

/// Result of one per-poset check.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub poset: String,
    pub canonical: String,
    pub counts: Vec<PatternCount>,
    pub equal: bool,
    pub witness: Option<Witness>,
    pub verdict: Verdict,
}

impl Report {
    pub fn csv_row(&self) -> String {
        let counts = self
            .counts
            .iter()
            .map(|c| c.count.clone())
            .collect::<Vec<_>>()
            .join(",");
        let witness = match &self.witness {
            Some(w) => format!("{}:{}", w.shape, w.elements.join(" ")),
            None => String::new(),
        };
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Counterexample => "counterexample",
        };
        format!(
            "{},{},{},{},{}",
            self.canonical, counts, self.equal, witness, verdict
        )
    }
}

/// Aggregate over a scan.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub check: String,
    pub max_size: usize,
    pub posets_checked: usize,
    pub equal_count: usize,
    pub strict_count: usize,
    pub counterexamples: Vec<Report>,
    #[serde(skip)]
    pub reports: Vec<Report>,
}

impl Summary {
    pub fn csv(&self) -> String {
        let mut out = String::from("canonical,count_a,count_b,equal,witness,verdict\n");
        for r in &self.reports {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }

    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Named posets: the theorem's strictness witnesses Q1/Q2/Q3, the
/// conjecture's R1/R2, the T/U pair, and the parameterized families
/// `chain_k`, `antichain_k`, `boolean_n`.
pub fn named_poset(name: &str) -> Result<Poset> {
    let labeled = |n: usize, covers: &[(usize, usize)]| -> Result<Poset> {
        let mut p = Poset::from_covers(n, covers)?;
        p.set_labels(
            ["a", "b", "c", "d", "e"][..n]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        );
        Ok(p)
    };
    match name {
        // a=0, b=1, c=2, d=3, e=4
        "Q1" => labeled(5, &[(3, 0), (0, 2), (4, 1), (1, 2)]),
        "Q2" => labeled(5, &[(4, 0), (4, 1), (3, 0), (0, 2), (1, 2)]),
        "Q3" => labeled(5, &[(4, 3), (4, 1), (3, 0), (0, 2), (1, 2)]),
        "R1" => labeled(4, &[(0, 1), (1, 2), (3, 2)]),
        "R2" => labeled(5, &[(0, 1), (2, 1), (2, 3), (4, 3)]),
        "T" => labeled(4, &[(0, 1), (2, 3)]),
        "U" => labeled(5, &[(0, 1), (1, 2), (2, 3)]),
        _ => {
            if let Some(k) = name.strip_prefix("chain_") {
                let k: usize = k.parse().map_err(|_| Error::UnknownName(name.into()))?;
                Poset::chain(k)
            } else if let Some(k) = name.strip_prefix("antichain_") {
                let k: usize = k.parse().map_err(|_| Error::UnknownName(name.into()))?;
                Poset::antichain(k)
            } else if let Some(r) = name.strip_prefix("boolean_") {
                let r: u32 = r.parse().map_err(|_| Error::UnknownName(name.into()))?;
                Poset::boolean_lattice(r, true)
            } else {
                Err(Error::UnknownName(name.into()))
            }
        }
    }
}

fn poset_signature(p: &Poset) -> (String, String) {
    let covers: Vec<String> = p
        .covers()
        .iter()
        .map(|&(lo, hi)| format!("{}<{}", p.label(lo), p.label(hi)))
        .collect();
    let desc = format!("n={}; covers: {}", p.len(), covers.join(" "));
    let canonical = format!("{}:{:016x}", p.len(), canonical_key(p));
    (desc, canonical)
}

fn first_induced_witness(p: &Poset, shapes: &[&str]) -> Option<Witness> {
    for name in shapes {
        let q = named_poset(name).expect("named shapes exist");
        if let Some(subset) = contains_induced(p, &q) {
            return Some(Witness {
                shape: (*name).to_string(),
                elements: subset.iter().map(|&i| p.label(i)).collect(),
            });
        }
    }
    None
}

fn comparison_report(
    p: &Poset,
    pattern_low: &Pattern,
    pattern_high: &Pattern,
    shapes: &[&str],
) -> Report {
    let low = av_count(p, pattern_low, CountMode::Pruned);
    let high = av_count(p, pattern_high, CountMode::Pruned);
    let witness = first_induced_witness(p, shapes);
    let equal = low == high;
    let consistent = low <= high && equal == witness.is_none();
    let (desc, canonical) = poset_signature(p);
    Report {
        poset: desc,
        canonical,
        counts: vec![
            PatternCount {
                pattern: pattern_low.text().into(),
                count: low.to_string(),
            },
            PatternCount {
                pattern: pattern_high.text().into(),
                count: high.to_string(),
            },
        ],
        equal,
        witness,
        verdict: if consistent {
            Verdict::Pass
        } else {
            Verdict::Counterexample
        },
    }
}

/// Checks `Av_P(132) <= Av_P(123)` and that strictness coincides with an
/// induced Q1, Q2 or Q3.
pub fn check_theorem3(p: &Poset) -> Report {
    comparison_report(
        p,
        &Pattern::parse("132").unwrap(),
        &Pattern::parse("123").unwrap(),
        &["Q1", "Q2", "Q3"],
    )
}

/// Checks the conjectured `Av_P({1}{1,2}{2}) <= Av_P({1}{2}{1,2})` with
/// strictness conjectured to coincide with an induced R1 or R2. A violation
/// is a counterexample report, not a program error.
pub fn check_conjecture(p: &Poset) -> Report {
    comparison_report(
        p,
        &Pattern::parse("{1}{1,2}{2}").unwrap(),
        &Pattern::parse("{1}{2}{1,2}").unwrap(),
        &["R1", "R2"],
    )
}

/// Which scan to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Theorem3,
    Conjecture,
}

impl std::str::FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<CheckKind> {
        match s {
            "theorem3" => Ok(CheckKind::Theorem3),
            "conjecture" => Ok(CheckKind::Conjecture),
            other => Err(Error::Parse(format!("unknown check `{other}`"))),
        }
    }
}

/// Runs the chosen check over every non-isomorphic poset with at most
/// `max_size` elements. Posets are checked in the deterministic generator
/// order; parallelism cannot reorder the reports.
pub fn scan(max_size: usize, check: CheckKind) -> Result<Summary> {
    let mut reports: Vec<Report> = Vec::new();
    for size in 1..=max_size {
        let posets = crate::poset::all_posets(size)?;
        let mut batch: Vec<Report> = posets
            .par_iter()
            .map(|p| match check {
                CheckKind::Theorem3 => check_theorem3(p),
                CheckKind::Conjecture => check_conjecture(p),
            })
            .collect();
        reports.append(&mut batch);
    }
    let counterexamples: Vec<Report> = reports
        .iter()
        .filter(|r| r.verdict != Verdict::Pass)
        .cloned()
        .collect();
    Ok(Summary {
        check: match check {
            CheckKind::Theorem3 => "theorem3".into(),
            CheckKind::Conjecture => "conjecture".into(),
        },
        max_size,
        posets_checked: reports.len(),
        equal_count: reports.iter().filter(|r| r.equal).count(),
        strict_count: reports.iter().filter(|r| !r.equal).count(),
        counterexamples,
        reports,
    })
}

/// The length-three Wilf classes: patterns listed row by row as in the
/// classification table, plus the trivial all-incomparable pattern.
pub const WILF_CLASSES: &[&[&str]] = &[
    &["123", "321"],
    &["132", "312", "213", "231"],
    &["{1}{2}{1,2}", "{1}{2}∅", "∅{1}{2}", "{1,2}{1}{2}"],
    &["{1}{1,2}{2}", "{1}∅{2}"],
    &["{1}{3}{1,2}", "{1,2}{3}{1}"],
    &["{1}{1,2}{3}", "{1,2}{1}{3}", "{3}{1}{1,2}", "{3}{1,2}{1}"],
    &["{1}{2}{3}"],
];

/// The 18 nontrivial length-three patterns, class by class.
pub fn nontrivial_length3_patterns() -> Vec<Pattern> {
    WILF_CLASSES[..6]
        .iter()
        .flat_map(|class| class.iter().map(|t| Pattern::parse(t).unwrap()))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct WilfClass {
    /// First pattern of the class row, as an identifier.
    pub class: String,
    pub rows: Vec<PatternCount>,
    pub equal_within_class: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WilfTable {
    pub n: u32,
    pub classes: Vec<WilfClass>,
    pub verdict: Verdict,
}

impl WilfTable {
    pub fn csv(&self) -> String {
        let mut out = String::from("class,pattern,count,equal_within_class\n");
        for class in &self.classes {
            for row in &class.rows {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    class.class, row.pattern, row.count, class.equal_within_class
                ));
            }
        }
        out
    }
}

/// Avoider counts on the rank-`n` Boolean lattice for the requested
/// patterns (default: all 18 nontrivial length-three patterns), grouped by
/// Wilf class. Within-class counts must agree; the verdict reports it.
pub fn wilf_table(n: u32, patterns: Option<&[Pattern]>) -> Result<WilfTable> {
    if n > 3 {
        return Err(Error::SizeTooLarge {
            got: n as usize,
            max: 3,
        });
    }
    let lattice = Poset::boolean_lattice(n, true)?;
    let defaults;
    let patterns = match patterns {
        Some(ps) => ps,
        None => {
            defaults = nontrivial_length3_patterns();
            &defaults
        }
    };
    let counts: Vec<String> = patterns
        .par_iter()
        .map(|p| av_count(&lattice, p, CountMode::Pruned).to_string())
        .collect();
    // group rows by the class holding an equal pattern; unknown patterns
    // form singleton classes named by their own text
    let mut grouped: BTreeMap<usize, Vec<PatternCount>> = BTreeMap::new();
    let mut extras: Vec<WilfClass> = Vec::new();
    for (pattern, count) in patterns.iter().zip(counts) {
        let row = PatternCount {
            pattern: pattern.text().into(),
            count,
        };
        let class_index = WILF_CLASSES
            .iter()
            .position(|class| class.iter().any(|t| Pattern::parse(t).unwrap() == *pattern));
        match class_index {
            Some(ci) => grouped.entry(ci).or_default().push(row),
            None => extras.push(WilfClass {
                class: row.pattern.clone(),
                rows: vec![row],
                equal_within_class: true,
            }),
        }
    }
    let mut classes: Vec<WilfClass> = grouped
        .into_iter()
        .map(|(ci, rows)| {
            let equal = rows.windows(2).all(|w| w[0].count == w[1].count);
            WilfClass {
                class: WILF_CLASSES[ci][0].to_string(),
                rows,
                equal_within_class: equal,
            }
        })
        .collect();
    classes.append(&mut extras);
    let verdict = if classes.iter().all(|c| c.equal_within_class) {
        Verdict::Pass
    } else {
        Verdict::Counterexample
    };
    Ok(WilfTable {
        n,
        classes,
        verdict,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LrmSetReport {
    pub elements: Vec<String>,
    pub positions: Vec<usize>,
    pub completions: u64,
    pub counts: Vec<PatternCount>,
}

/// Outcome of the left-to-right-minima probe.
#[derive(Debug, Clone, Serialize)]
pub struct LrmProbeReport {
    pub poset: String,
    pub canonical: String,
    pub lrm_sets: usize,
    /// Sets with fewer `{1}{2}{1,2}`-avoiding completions than
    /// `{1}{1,2}{2}`-avoiding ones, which would refute the observation.
    pub violations: Vec<LrmSetReport>,
    pub verdict: Verdict,
}

/// Enumerates the realizable left-to-right-minima sets of `p` and compares,
/// for each, how many permutations with exactly that LRM set avoid
/// `{1}{2}{1,2}` versus `{1}{1,2}{2}`.
pub fn lrm_probe(p: &Poset) -> Result<LrmProbeReport> {
    if p.len() > 7 {
        return Err(Error::SizeTooLarge {
            got: p.len(),
            max: 7,
        });
    }
    let arc = Arc::new(p.clone());
    let pat_1_2_12 = Pattern::parse("{1}{2}{1,2}").unwrap();
    let pat_1_12_2 = Pattern::parse("{1}{1,2}{2}").unwrap();
    let mut buckets: BTreeMap<LrmeSet, (u64, u64, u64)> = BTreeMap::new();
    for sigma in all_permutations(&arc) {
        let set = lrm_of(&sigma);
        let entry = buckets.entry(set).or_insert((0, 0, 0));
        entry.0 += 1;
        entry.1 += u64::from(sigma.avoids(&pat_1_2_12));
        entry.2 += u64::from(sigma.avoids(&pat_1_12_2));
    }
    let lrm_sets = buckets.len();
    let violations: Vec<LrmSetReport> = buckets
        .into_iter()
        .filter(|(_, (_, a, b))| a < b)
        .map(|(set, (completions, a, b))| LrmSetReport {
            elements: set.elements.iter().map(|&e| p.label(e)).collect(),
            positions: set.positions.clone(),
            completions,
            counts: vec![
                PatternCount {
                    pattern: pat_1_2_12.text().into(),
                    count: a.to_string(),
                },
                PatternCount {
                    pattern: pat_1_12_2.text().into(),
                    count: b.to_string(),
                },
            ],
        })
        .collect();
    let (desc, canonical) = poset_signature(p);
    Ok(LrmProbeReport {
        poset: desc,
        canonical,
        lrm_sets,
        verdict: if violations.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Counterexample
        },
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::PosetPermutation;
    use num_traits::ToPrimitive;

    fn count(p: &Poset, text: &str) -> u64 {
        av_count(p, &Pattern::parse(text).unwrap(), CountMode::Naive)
            .to_u64()
            .unwrap()
    }

    #[test]
    fn named_posets_match_their_figures() {
        let q1 = named_poset("Q1").unwrap();
        assert_eq!(q1.len(), 5);
        // closure of d<a<c, e<b<c: six strict pairs
        let pairs: u32 = (0..5).map(|i| q1.below_row(i).count_ones()).sum();
        assert_eq!(pairs, 6);
        let t = named_poset("T").unwrap();
        assert_eq!(t.covers(), vec![(0, 1), (2, 3)]);
        let u = named_poset("U").unwrap();
        assert_eq!(u.covers(), vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(named_poset("chain_3").unwrap(), Poset::chain(3).unwrap());
        assert_eq!(
            named_poset("boolean_2").unwrap(),
            Poset::boolean_lattice(2, true).unwrap()
        );
        assert!(matches!(named_poset("Q9"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn q_posets_differ_and_sit_inside_b3() {
        let q1 = named_poset("Q1").unwrap();
        let q2 = named_poset("Q2").unwrap();
        let q3 = named_poset("Q3").unwrap();
        assert!(!crate::poset::is_isomorphic(&q1, &q2));
        assert!(!crate::poset::is_isomorphic(&q1, &q3));
        assert!(!crate::poset::is_isomorphic(&q2, &q3));
        let b3 = Poset::boolean_lattice(3, true).unwrap();
        let witness = first_induced_witness(&b3, &["Q1", "Q2", "Q3"]).unwrap();
        assert_eq!(witness.shape, "Q1");
        // the corollary's witness: {1},{3},{1,2},{2,3},{1,2,3}
        let subset: Vec<usize> = ["{1}", "{3}", "{1,2}", "{2,3}", "{1,2,3}"]
            .iter()
            .map(|l| b3.index_of_label(l).unwrap())
            .collect();
        let induced = b3.induced(&subset).unwrap();
        assert!(crate::poset::is_isomorphic(&induced, &q1));
    }

    #[test]
    fn theorem3_on_small_posets() {
        let c5 = Poset::chain(5).unwrap();
        let r = check_theorem3(&c5);
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.equal);
        assert_eq!(r.counts[0].count, "42");
        assert_eq!(r.counts[1].count, "42");

        let q1 = named_poset("Q1").unwrap();
        let r = check_theorem3(&q1);
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(!r.equal, "Q1 must be strict");
        assert_eq!(r.witness.as_ref().unwrap().shape, "Q1");

        let b2 = Poset::boolean_lattice(2, true).unwrap();
        let r = check_theorem3(&b2);
        assert!(r.equal);
        assert!(r.witness.is_none());
        assert_eq!(r.counts[0].count, "18");
    }

    #[test]
    fn conjecture_on_small_posets() {
        let r1 = named_poset("R1").unwrap();
        let r = check_conjecture(&r1);
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(!r.equal, "R1 must be strict");

        let r2 = named_poset("R2").unwrap();
        let r = check_conjecture(&r2);
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(!r.equal, "R2 must be strict");

        let b2 = Poset::boolean_lattice(2, true).unwrap();
        let r = check_conjecture(&b2);
        assert!(r.equal);
        assert!(r.witness.is_none());
        assert_eq!(r.counts[0].count, "16");

        let a4 = Poset::antichain(4).unwrap();
        let r = check_conjecture(&a4);
        assert!(r.equal);
        assert_eq!(r.counts[0].count, "24");
        assert_eq!(r.counts[1].count, "24");
    }

    #[test]
    fn scan_small_sizes_hold() {
        let s = scan(4, CheckKind::Theorem3).unwrap();
        assert_eq!(s.posets_checked, 1 + 2 + 5 + 16);
        assert!(s.holds());
        let s = scan(4, CheckKind::Conjecture).unwrap();
        assert!(s.holds());
        let s = scan(1, CheckKind::Theorem3).unwrap();
        assert_eq!(s.posets_checked, 1);
        assert_eq!(s.equal_count, 1);
    }

    #[test]
    fn scan_rejects_large_sizes() {
        assert!(scan(8, CheckKind::Theorem3).is_err());
    }

    #[test]
    fn wilf_table_b2() {
        let table = wilf_table(2, None).unwrap();
        assert_eq!(table.verdict, Verdict::Pass);
        let class_of = |name: &str| {
            table
                .classes
                .iter()
                .find(|c| c.class == name)
                .unwrap_or_else(|| panic!("class {name}"))
        };
        assert!(class_of("123").rows.iter().all(|r| r.count == "18"));
        assert!(class_of("{1}{1,2}{2}").rows.iter().all(|r| r.count == "16"));
        let total: usize = table.classes.iter().map(|c| c.rows.len()).sum();
        assert_eq!(total, 18);
    }

    #[test]
    fn example10_inequalities() {
        let t = named_poset("T").unwrap();
        assert!(count(&t, "{1}{1,2}{3}") < count(&t, "{1}{3}{1,2}"));
        let u = named_poset("U").unwrap();
        assert!(count(&u, "{1}{3}{1,2}") < count(&u, "{1}{1,2}{3}"));
    }

    #[test]
    fn lrm_probe_b2_has_no_violations() {
        let b2 = Poset::boolean_lattice(2, true).unwrap();
        let report = lrm_probe(&b2).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.violations.is_empty());
        assert!(report.lrm_sets > 0);
    }

    #[test]
    fn lrm_probe_rejects_large_posets() {
        let c7 = Poset::chain(7).unwrap();
        assert!(lrm_probe(&c7).is_ok());
        let a8 = Poset::antichain(8).unwrap();
        assert!(matches!(lrm_probe(&a8), Err(Error::SizeTooLarge { .. })));
    }

    #[test]
    fn summary_serialization_is_stable() {
        let s = scan(3, CheckKind::Theorem3).unwrap();
        let a = serde_json::to_string_pretty(&s).unwrap();
        let b = serde_json::to_string_pretty(&scan(3, CheckKind::Theorem3).unwrap()).unwrap();
        assert_eq!(a, b);
        let csv = s.csv();
        assert_eq!(csv.lines().count(), 1 + s.posets_checked);
    }

    #[test]
    fn fixed_lrme_regression_cases() {
        use crate::lrme::{interleave, lrme_of, omega_of};
        // A split-avoiding permutation whose LRME set forces the other
        // pattern: ({1},{2},{1,2},∅) is the unique filling of its own LRME
        // set, and it contains {1}{2}{1,2}.
        let b2 = Arc::new(Poset::boolean_lattice(2, true).unwrap());
        let sigma = PosetPermutation::from_labels(Arc::clone(&b2), "{1} {2} {1,2} ∅").unwrap();
        assert!(sigma.avoids(&Pattern::parse("{1}{1,2}{2}").unwrap()));
        let x = lrme_of(&sigma);
        let l = omega_of(&x, &b2).unwrap();
        let fillings = l.legal_perms();
        assert_eq!(fillings.len(), 1, "the LRME set admits exactly one filling");
        let rebuilt = interleave(&x, &fillings[0], &b2);
        assert_eq!(rebuilt, sigma.entries());
        assert!(sigma.contains(&Pattern::parse("{1}{2}{1,2}").unwrap()));
    }

    #[test]
    fn lrm_occurrence_regression_case() {
        // contains {1}{2}{1,2}, yet no occurrence begins with an LRM
        let b3 = Arc::new(Poset::boolean_lattice(3, true).unwrap());
        let sigma = PosetPermutation::from_labels(
            Arc::clone(&b3),
            "{1,2,3} {1,2} {1,3} {1} {2} {3} {2,3} ∅",
        )
        .unwrap();
        let pat = Pattern::parse("{1}{2}{1,2}").unwrap();
        assert!(sigma.contains(&pat));
        let lrm_positions = lrm_of(&sigma).positions;
        let entries = sigma.entries();
        let p = sigma.poset();
        let mut first_positions = Vec::new();
        for i in 0..8 {
            for j in i + 1..8 {
                for k in j + 1..8 {
                    let occ = [i, j, k];
                    let matches = (0..3).all(|a| {
                        (0..3).all(|b| p.rel(entries[occ[a]], entries[occ[b]]) == pat.rel(a, b))
                    });
                    if matches {
                        first_positions.push(i + 1);
                    }
                }
            }
        }
        assert!(!first_positions.is_empty());
        for first in first_positions {
            assert!(
                !lrm_positions.contains(&first),
                "no occurrence may start at an LRM"
            );
        }
    }
}
