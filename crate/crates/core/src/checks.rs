//! Verification of the 4- and 5-point conditions.
//!
//! Symmetry and the ⊙-on-repeats rule hold structurally for every
//! [`TernaryMap`], so only the 4-point condition (3), the 5-point condition
//! (4) and the optional full-resolution condition (*) need checking.

use std::fmt;

use itertools::Itertools;

use crate::error::TernaryError;
use crate::quartets::resolves;
use crate::taxa::{SymbolId, TaxonSet};
use crate::ternary::TernaryMap;

/// Value counts of a map over the 3-subsets of a 4- or 5-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionProfile {
    pub subset: Vec<usize>,
    /// `(symbol, count)`, by descending count then symbol id.
    pub counts: Vec<(SymbolId, usize)>,
}

impl PartitionProfile {
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    /// Exactly two values, taken `n` and `m` times (in either order).
    pub fn is_partitioned(&self, n: usize, m: usize) -> bool {
        match self.counts[..] {
            [(_, a), (_, b)] => (a, b) == (n, m) || (a, b) == (m, n),
            _ => false,
        }
    }

    pub fn describe(&self, map: &TernaryMap) -> String {
        self.counts.iter().map(|&(s, c)| format!("{}:{c}", map.symbol_name(s))).join(" ")
    }
}

fn profile_of(map: &TernaryMap, subset: &[usize]) -> PartitionProfile {
    let counts = subset
        .iter()
        .tuple_combinations()
        .map(|(&i, &j, &k)| map.sym(i, j, k))
        .counts()
        .into_iter()
        .sorted_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)))
        .collect();
    PartitionProfile { subset: subset.to_vec(), counts }
}

/// Profile of a 4- or 5-subset (taxon indices, distinct).
pub fn partition_profile(map: &TernaryMap, subset: &[usize]) -> Result<PartitionProfile, TernaryError> {
    if !(4..=5).contains(&subset.len()) {
        return Err(TernaryError::SubsetSize { got: subset.len(), expected: "4 or 5" });
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= map.n()) {
        return Err(TernaryError::UnknownTaxon(format!("#{bad}")));
    }
    if subset.iter().all_unique() {
        Ok(profile_of(map, subset))
    } else {
        Err(TernaryError::SubsetSize { got: subset.iter().unique().count(), expected: "4 or 5 distinct" })
    }
}

fn violates_condition3(map: &TernaryMap, [a, b, c, d]: [usize; 4]) -> bool {
    let p = profile_of(map, &[a, b, c, d]);
    match p.distinct() {
        1 => false,
        2 => !p.is_partitioned(2, 2),
        _ => true,
    }
}

/// 4-sets with three or more values, or two values split 1-3.
pub fn check_condition3(map: &TernaryMap) -> Vec<[usize; 4]> {
    (0..map.n())
        .tuple_combinations()
        .map(|(a, b, c, d)| [a, b, c, d])
        .filter(|&s| violates_condition3(map, s))
        .collect()
}

/// 5-sets that are 5-5 partitioned.
pub fn check_condition4(map: &TernaryMap) -> Vec<[usize; 5]> {
    (0..map.n())
        .tuple_combinations()
        .map(|(a, b, c, d, e)| [a, b, c, d, e])
        .filter(|s| profile_of(map, s).is_partitioned(5, 5))
        .collect()
}

/// How a resolving fifth taxon is recognised in condition (*).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StarMode {
    /// `e` must produce the exact six/four pattern of a generated quartet.
    #[default]
    Strict,
    /// Any 4-6 partition of `{x,y,z,u,e}` counts.
    Loose,
}

fn resolved(map: &TernaryMap, [a, b, c, d]: [usize; 4], mode: StarMode) -> bool {
    (0..map.n()).filter(|e| ![a, b, c, d].contains(e)).any(|e| match mode {
        StarMode::Strict => [[a, b, c, d], [a, c, b, d], [a, d, b, c]].into_iter().any(|s| resolves(map, s, e)),
        StarMode::Loose => profile_of(map, &[a, b, c, d, e]).is_partitioned(4, 6),
    })
}

/// Constant 4-sets that no fifth taxon resolves.
pub fn check_star(map: &TernaryMap, mode: StarMode) -> Vec<[usize; 4]> {
    (0..map.n())
        .tuple_combinations()
        .map(|(a, b, c, d)| [a, b, c, d])
        .filter(|&s| profile_of(map, &s).distinct() == 1 && !resolved(map, s, mode))
        .collect()
}

/// Isomorphism type of the edge-colored K5 on a 5-set, where edge `{a,b}`
/// carries the value of the triple avoiding `a` and `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum K5Type {
    /// Two triangles and a 4-cycle.
    Type1,
    /// Two 5-cycles.
    Type2,
    /// A 4-cycle and its complement.
    Type3,
    /// A triangle and its complement.
    Type4,
    /// Monochromatic.
    Type5,
    /// Some vertex sees three colors or a 1-3 split.
    Invalid,
}

pub fn classify_k5(map: &TernaryMap, subset: [usize; 5]) -> K5Type {
    let color = |a: usize, b: usize| {
        let rest: Vec<usize> = (0..5).filter(|&v| v != a && v != b).map(|v| subset[v]).collect();
        map.sym(rest[0], rest[1], rest[2])
    };
    let edges: Vec<((usize, usize), SymbolId)> =
        (0..5).tuple_combinations().map(|(a, b)| ((a, b), color(a, b))).collect();
    let palette: Vec<SymbolId> = edges.iter().map(|e| e.1).unique().collect();
    // Per color, the degree of each vertex; every class must be Eulerian.
    let mut class_sizes = Vec::new();
    for &c in &palette {
        let mut degree = [0usize; 5];
        let mut size = 0;
        for &((a, b), col) in &edges {
            if col == c {
                degree[a] += 1;
                degree[b] += 1;
                size += 1;
            }
        }
        if degree.iter().any(|d| d % 2 == 1) {
            return K5Type::Invalid;
        }
        class_sizes.push(size);
    }
    class_sizes.sort_unstable();
    match class_sizes[..] {
        [10] => K5Type::Type5,
        [3, 7] => K5Type::Type4,
        [4, 6] => K5Type::Type3,
        [5, 5] => K5Type::Type2,
        [3, 3, 4] => K5Type::Type1,
        _ => K5Type::Invalid,
    }
}

/// Which condition a violation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    Symmetry,
    Odot,
    FourPoint,
    FivePoint,
    FullyResolved,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Symmetry => "1",
            Condition::Odot => "2",
            Condition::FourPoint => "3",
            Condition::FivePoint => "4",
            Condition::FullyResolved => "*",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub subset: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Stop at the first violation of (3) or (4).
    pub fail_fast: bool,
    /// Also report condition (*).
    pub star: Option<StarMode>,
}

/// Outcome of [`verify_metric`].
#[derive(Clone, Debug)]
pub struct MetricReport {
    pub verdict: bool,
    pub violations: Vec<Violation>,
    taxa: TaxonSet,
}

impl MetricReport {
    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    /// Violations of (*), when it was requested.
    pub fn star_violations(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| v.condition == Condition::FullyResolved)
    }

    pub fn is_fully_resolved(&self) -> bool {
        self.star_violations().next().is_none()
    }
}

impl fmt::Display for MetricReport {
    /// One line per violation: `COND <id> SUBSET <taxa...> DETAIL <profile>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            let names = v.subset.iter().map(|&i| self.taxa.name(i)).join(" ");
            writeln!(f, "COND {} SUBSET {} DETAIL {}", v.condition, names, v.detail)?;
        }
        Ok(())
    }
}

/// Checks conditions (3) and (4), and (*) if asked. The verdict ignores (*).
pub fn verify_metric(map: &TernaryMap, options: &VerifyOptions) -> MetricReport {
    let mut violations = Vec::new();
    let n = map.n();
    let violation = |condition, subset: &[usize]| Violation {
        condition,
        subset: subset.to_vec(),
        detail: profile_of(map, subset).describe(map),
    };
    'outer: {
        for (a, b, c, d) in (0..n).tuple_combinations() {
            if violates_condition3(map, [a, b, c, d]) {
                violations.push(violation(Condition::FourPoint, &[a, b, c, d]));
                if options.fail_fast {
                    break 'outer;
                }
            }
        }
        for (a, b, c, d, e) in (0..n).tuple_combinations() {
            let s = [a, b, c, d, e];
            if profile_of(map, &s).is_partitioned(5, 5) {
                violations.push(violation(Condition::FivePoint, &s));
                if options.fail_fast {
                    break 'outer;
                }
            }
        }
    }
    let verdict = violations.is_empty();
    if let Some(mode) = options.star {
        for s in check_star(map, mode) {
            violations.push(violation(Condition::FullyResolved, &s));
        }
    }
    MetricReport { verdict, violations, taxa: map.taxa().clone() }
}
