//! Quartet systems and the quartets a ternary map generates.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;

use crate::taxa::TaxonSet;
use crate::ternary::TernaryMap;

/// A split `ab|cd` of four distinct taxa (by index), stored canonically:
/// each pair sorted, the pair holding the smallest taxon first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quartet([[usize; 2]; 2]);

impl Quartet {
    /// The quartet `ab|cd`.
    pub fn new(a: usize, b: usize, c: usize, d: usize) -> Self {
        assert!(a != b && a != c && a != d && b != c && b != d && c != d, "quartet needs four distinct taxa");
        let p = [a.min(b), a.max(b)];
        let q = [c.min(d), c.max(d)];
        Quartet(if p[0] < q[0] { [p, q] } else { [q, p] })
    }

    pub fn pairs(&self) -> [[usize; 2]; 2] {
        self.0
    }

    /// The four taxa, sorted.
    pub fn support(&self) -> [usize; 4] {
        let [[a, b], [c, d]] = self.0;
        let mut s = [a, b, c, d];
        s.sort_unstable();
        s
    }

    pub fn display<'a>(&'a self, taxa: &'a TaxonSet) -> impl fmt::Display + 'a {
        DisplayQuartet(self, taxa)
    }
}

struct DisplayQuartet<'a>(&'a Quartet, &'a TaxonSet);

impl fmt::Display for DisplayQuartet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = self.0 .0;
        let t = self.1;
        write!(f, "{} {} | {} {}", t.name(a), t.name(b), t.name(c), t.name(d))
    }
}

/// The three quartets on a 4-set.
fn splits([a, b, c, d]: [usize; 4]) -> [Quartet; 3] {
    [Quartet::new(a, b, c, d), Quartet::new(a, c, b, d), Quartet::new(a, d, b, c)]
}

/// A set of quartets over a taxon set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuartetSystem {
    taxa: TaxonSet,
    members: HashSet<Quartet>,
}

impl QuartetSystem {
    pub fn new(taxa: TaxonSet) -> Self {
        QuartetSystem { taxa, members: HashSet::new() }
    }

    pub fn from_quartets(taxa: TaxonSet, quartets: impl IntoIterator<Item = Quartet>) -> Self {
        let mut s = Self::new(taxa);
        for q in quartets {
            s.insert(q);
        }
        s
    }

    /// Builds a system from named quartets `[[a, b], [c, d]]`.
    pub fn from_names<S: AsRef<str>>(
        taxa: TaxonSet,
        quartets: &[[[S; 2]; 2]],
    ) -> Result<Self, crate::error::TernaryError> {
        let mut s = Self::new(taxa);
        for [[a, b], [c, d]] in quartets {
            let idx = |x: &S| s.taxa.lookup(x.as_ref());
            let q = Quartet::new(idx(a)?, idx(b)?, idx(c)?, idx(d)?);
            s.insert(q);
        }
        Ok(s)
    }

    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    pub fn insert(&mut self, q: Quartet) -> bool {
        assert!(q.support()[3] < self.taxa.len(), "quartet outside the taxon set");
        self.members.insert(q)
    }

    pub fn contains(&self, q: &Quartet) -> bool {
        self.members.contains(q)
    }

    /// Membership test for `ab|cd` given as indices.
    pub fn has(&self, a: usize, b: usize, c: usize, d: usize) -> bool {
        self.members.contains(&Quartet::new(a, b, c, d))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in canonical order.
    pub fn sorted(&self) -> Vec<Quartet> {
        self.members.iter().copied().sorted().collect()
    }

    /// One `a b | c d` line per quartet, canonical order.
    pub fn to_lines(&self) -> String {
        self.sorted().iter().map(|q| format!("{}\n", q.display(&self.taxa))).collect()
    }

    /// 4-sets carrying two or more quartets.
    pub fn non_thin_subsets(&self) -> Vec<[usize; 4]> {
        self.members
            .iter()
            .map(Quartet::support)
            .counts()
            .into_iter()
            .filter(|&(_, c)| c > 1)
            .map(|(s, _)| s)
            .sorted()
            .collect()
    }

    /// At most one quartet per 4-set.
    pub fn is_thin(&self) -> bool {
        self.non_thin_subsets().is_empty()
    }

    /// `ab|ce` and `ab|de` imply `ab|cd`.
    pub fn is_transitive(&self) -> bool {
        let n = self.taxa.len();
        for q in &self.members {
            let [p, r] = q.pairs();
            for ([a, b], side) in [(p, r), (r, p)] {
                for [c, e] in [side, [side[1], side[0]]] {
                    for d in 0..n {
                        if d == a || d == b || d == c || d == e {
                            continue;
                        }
                        if self.has(a, b, d, e) && !self.has(a, b, c, d) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `ab|cd` implies `ae|cd` or `ab|ce` for every fifth taxon `e`.
    pub fn is_saturated(&self) -> bool {
        self.saturation_witness().is_none()
    }

    /// A labeling `(a, b, c, d, e)` violating saturation, if any.
    pub fn saturation_witness(&self) -> Option<[usize; 5]> {
        let n = self.taxa.len();
        for q in self.sorted() {
            let [p, r] = q.pairs();
            for ([x, y], [z, w]) in [(p, r), (r, p)] {
                for (a, b) in [(x, y), (y, x)] {
                    for (c, d) in [(z, w), (w, z)] {
                        for e in 0..n {
                            if e == a || e == b || e == c || e == d {
                                continue;
                            }
                            if !self.has(a, e, c, d) && !self.has(a, b, c, e) {
                                return Some([a, b, c, d, e]);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Exactly one quartet on every 4-set.
    pub fn is_complete(&self) -> bool {
        (0..self.taxa.len())
            .tuple_combinations()
            .all(|(a, b, c, d)| splits([a, b, c, d]).iter().filter(|q| self.contains(q)).count() == 1)
    }
}

/// Does `e` resolve `x, y, z, u` towards `xy|zu`? Requires the six triples
/// `xyz, xyu, xzu, yzu, xye, zue` to share one value and the four triples
/// `xue, xze, yze, yue` to share another.
pub fn resolves(map: &TernaryMap, [x, y, z, u]: [usize; 4], e: usize) -> bool {
    let c = map.sym(x, y, z);
    let same = [map.sym(x, y, u), map.sym(x, z, u), map.sym(y, z, u), map.sym(x, y, e), map.sym(z, u, e)];
    if same.iter().any(|&v| v != c) {
        return false;
    }
    let d = map.sym(x, u, e);
    d != c && map.sym(x, z, e) == d && map.sym(y, z, e) == d && map.sym(y, u, e) == d
}

/// Quartets generated by a ternary map.
///
/// `xy|zu` is generated when `δ(xzu) = δ(yzu) ≠ δ(xyz) = δ(xyu)`, or when
/// `δ` is constant on `{x,y,z,u}` and some fifth taxon resolves it towards
/// `xy|zu`. Inputs violating the 5-point condition may generate several
/// quartets on one 4-set; they are all kept (see
/// [`QuartetSystem::non_thin_subsets`]).
pub fn generate_quartets(map: &TernaryMap) -> QuartetSystem {
    let n = map.n();
    let mut system = QuartetSystem::new(map.taxa().clone());
    for (a, b, c, d) in (0..n).tuple_combinations() {
        let constant = {
            let v = map.sym(a, b, c);
            map.sym(a, b, d) == v && map.sym(a, c, d) == v && map.sym(b, c, d) == v
        };
        for [x, y, z, u] in [[a, b, c, d], [a, c, b, d], [a, d, b, c]] {
            let generated = if constant {
                (0..n).filter(|&e| e != a && e != b && e != c && e != d).any(|e| resolves(map, [x, y, z, u], e))
            } else {
                let s = map.sym(x, z, u);
                let t = map.sym(x, y, z);
                map.sym(y, z, u) == s && map.sym(x, y, u) == t && s != t
            };
            if generated {
                system.insert(Quartet::new(x, y, z, u));
            }
        }
    }
    system
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxa::SymbolAlphabet;

    fn taxa5() -> TaxonSet {
        TaxonSet::new(["u", "w", "x", "y", "z"]).unwrap()
    }

    fn sys(quartets: &[[[&str; 2]; 2]]) -> QuartetSystem {
        QuartetSystem::from_names(taxa5(), quartets).unwrap()
    }

    /// A 5-taxon map given by the triples that take the second symbol.
    fn map5(second: &[[&str; 3]]) -> TernaryMap {
        let t = taxa5();
        let all: Vec<[String; 3]> =
            (0..5).tuple_combinations().map(|(i, j, k)| t.names_of(&[i, j, k]).try_into().unwrap()).collect();
        let entries = all.into_iter().map(|tr| {
            let hit = second.iter().any(|s| {
                let mut s = s.map(String::from);
                s.sort();
                s == tr
            });
            (tr, if hit { "q" } else { "p" })
        });
        TernaryMap::build(t, SymbolAlphabet::new(["p", "q"]).unwrap(), entries).unwrap()
    }

    #[test]
    fn quartet_canonical_form() {
        assert_eq!(Quartet::new(3, 2, 1, 0), Quartet::new(0, 1, 2, 3));
        assert_eq!(Quartet::new(0, 3, 2, 1).pairs(), [[0, 3], [1, 2]]);
        assert_eq!(Quartet::new(4, 1, 0, 2).support(), [0, 1, 2, 4]);
    }

    #[test]
    fn predicates_on_small_systems() {
        let empty = QuartetSystem::new(taxa5());
        assert!(empty.is_thin() && empty.is_transitive() && empty.is_saturated());
        assert!(!empty.is_complete());

        let two = sys(&[[["x", "y"], ["z", "u"]], [["x", "z"], ["y", "u"]]]);
        assert!(!two.is_thin());
        assert_eq!(two.non_thin_subsets().len(), 1);

        // ab|ce and ab|de without ab|cd
        let intrans = sys(&[[["x", "y"], ["z", "w"]], [["x", "y"], ["u", "w"]]]);
        assert!(!intrans.is_transitive());
    }

    #[test]
    fn constant_generates_nothing() {
        let m = TernaryMap::constant(taxa5(), "p").unwrap();
        assert!(generate_quartets(&m).is_empty());
    }

    #[test]
    fn one_interior_edge_pattern() {
        // value q exactly on the triples containing both x and w
        let m = map5(&[["w", "x", "z"], ["w", "x", "u"], ["w", "x", "y"]]);
        let q = generate_quartets(&m);
        assert_eq!(q, sys(&[[["x", "w"], ["y", "u"]], [["x", "w"], ["z", "u"]], [["x", "w"], ["y", "z"]]]));
        assert!(!q.is_complete());
    }

    #[test]
    fn two_five_cycles_are_not_saturated() {
        // edge {a,b} of K5 carries the value of the triple avoiding a and b;
        // color q is the 5-cycle x-z-w-y-u-x.
        let m = map5(&[["y", "u", "w"], ["y", "z", "w"], ["x", "z", "w"], ["x", "u", "z"], ["x", "y", "u"]]);
        let q = generate_quartets(&m);
        let expected = sys(&[
            [["y", "w"], ["z", "u"]],
            [["x", "u"], ["y", "z"]],
            [["x", "z"], ["u", "w"]],
            [["x", "y"], ["z", "w"]],
            [["x", "w"], ["y", "u"]],
        ]);
        assert_eq!(q, expected);
        assert!(q.is_thin());
        assert!(q.is_complete());
        assert!(!q.is_saturated());
    }
}
