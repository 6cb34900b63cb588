//! Exhaustive enumeration used as an independent check on the algorithms.
//!
//! Everything here is brute force: all phylogenetic trees on a small taxon
//! set, all discriminating colorings of a topology, and tree search by
//! encoding every candidate.

use std::collections::{HashSet, VecDeque};

use itertools::Itertools;

use crate::checks::{check_condition3, check_condition4, check_star, StarMode};
use crate::error::OracleError;
use crate::quartets::generate_quartets;
use crate::taxa::{SymbolAlphabet, SymbolId, TaxonSet};
use crate::ternary::{triple_rank, TernaryMap};
use crate::tree::{ColoredTree, Topology, TreeBuilder};

pub const MAX_ENUMERATION: usize = 7;
pub const MAX_BRUTE_FORCE: usize = 6;

/// Taxa `t1, ..., tn`.
pub fn default_taxa(n: usize) -> TaxonSet {
    TaxonSet::new((1..=n).map(|i| format!("t{i}"))).expect("t-names are valid")
}

/// All phylogenetic trees on `t1..tn`, `3 <= n <= 7`.
pub fn enumerate_trees(n: usize) -> Result<Vec<Topology>, OracleError> {
    if !(3..=MAX_ENUMERATION).contains(&n) {
        return Err(OracleError::Size { got: n, min: 3, max: MAX_ENUMERATION });
    }
    enumerate_trees_on(&default_taxa(n))
}

/// Tree under construction: `taxon[v]` for leaves, `None` for interior.
#[derive(Clone)]
struct Shape {
    taxon: Vec<Option<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Shape {
    fn topology(&self, taxa: &TaxonSet) -> Topology {
        let mut b = TreeBuilder::new();
        for t in &self.taxon {
            match t {
                Some(i) => b.leaf(taxa.name(*i)),
                None => b.uncolored(),
            };
        }
        for &(u, v) in &self.edges {
            b.edge(u, v);
        }
        b.build_topology().expect("leaf insertion keeps a valid tree")
    }
}

/// All phylogenetic trees on the given taxa, by leaf insertion: taxon `k`
/// is attached to every edge and every interior vertex of each tree on the
/// first `k` taxa.
pub fn enumerate_trees_on(taxa: &TaxonSet) -> Result<Vec<Topology>, OracleError> {
    let n = taxa.len();
    if !(3..=MAX_ENUMERATION).contains(&n) {
        return Err(OracleError::Size { got: n, min: 3, max: MAX_ENUMERATION });
    }
    let star = Shape { taxon: vec![None, Some(0), Some(1), Some(2)], edges: vec![(0, 1), (0, 2), (0, 3)] };
    let mut level = vec![star];
    for t in 3..n {
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for shape in &level {
            let mut push = |s: Shape| {
                let key = s.topology(&taxa_prefix(taxa, t + 1)).canonical_form();
                if seen.insert(key) {
                    next.push(s);
                }
            };
            for (e, &(u, v)) in shape.edges.iter().enumerate() {
                let mut s = shape.clone();
                let w = s.taxon.len();
                s.taxon.push(None);
                s.taxon.push(Some(t));
                s.edges[e] = (u, w);
                s.edges.push((w, v));
                s.edges.push((w, w + 1));
                push(s);
            }
            for v in (0..shape.taxon.len()).filter(|&v| shape.taxon[v].is_none()) {
                let mut s = shape.clone();
                s.taxon.push(Some(t));
                s.edges.push((v, s.taxon.len() - 1));
                push(s);
            }
        }
        level = next;
    }
    Ok(level.iter().map(|s| s.topology(taxa)).collect())
}

fn taxa_prefix(taxa: &TaxonSet, k: usize) -> TaxonSet {
    TaxonSet::new(taxa.names()[..k].iter()).expect("prefix of a valid taxon set")
}

/// Symbols `a, b, c, ...`.
pub fn default_symbols(k: usize) -> Vec<String> {
    assert!(k <= 26, "at most 26 default symbols");
    (0..k).map(|i| char::from(b'a' + i as u8).to_string()).collect()
}

/// All discriminating colorings of `topology` with symbols `a, b, ...`.
pub fn enumerate_colorings(topology: &Topology, k: usize) -> Vec<ColoredTree> {
    enumerate_colorings_with(topology, &default_symbols(k))
}

/// All colorings with the given symbols in which adjacent interior vertices
/// differ. Their number is `k (k-1)^(I-1)` for `I` interior vertices.
pub fn enumerate_colorings_with(topology: &Topology, symbols: &[String]) -> Vec<ColoredTree> {
    let k = symbols.len();
    // BFS over the interior subtree; each vertex after the first has one
    // earlier interior neighbor.
    let first = topology.interior_vertices().next().expect("trees have an interior vertex");
    let mut order = vec![(first, None)];
    let mut seen = vec![false; topology.vertex_count()];
    seen[first] = true;
    let mut queue = VecDeque::from([first]);
    while let Some(u) = queue.pop_front() {
        for &w in topology.neighbors(u) {
            if !seen[w] && !topology.is_leaf(w) {
                seen[w] = true;
                order.push((w, Some(u)));
                queue.push_back(w);
            }
        }
    }
    let mut out = Vec::new();
    let mut assignment = vec![usize::MAX; topology.vertex_count()];
    fn fill(
        step: usize,
        order: &[(usize, Option<usize>)],
        k: usize,
        assignment: &mut Vec<usize>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        if step == order.len() {
            emit(assignment);
            return;
        }
        let (v, parent) = order[step];
        for c in 0..k {
            if parent.is_some_and(|p| assignment[p] == c) {
                continue;
            }
            assignment[v] = c;
            fill(step + 1, order, k, assignment, emit);
        }
        assignment[v] = usize::MAX;
    }
    fill(0, &order, k, &mut assignment, &mut |a| {
        let colors = a.iter().map(|&c| (c != usize::MAX).then(|| symbols[c].clone())).collect();
        out.push(topology.clone().with_colors(colors).expect("symbols are valid tokens"));
    });
    out
}

/// Every `stride`-th item so that at most `cap` remain.
pub fn sample_evenly<T>(items: Vec<T>, cap: usize) -> Vec<T> {
    if items.len() <= cap {
        return items;
    }
    let stride = items.len().div_ceil(cap);
    items.into_iter().step_by(stride).collect()
}

/// All discriminating colored trees on `t1..tn` with at most `k` colors,
/// colorings capped per topology.
pub fn corpus(n: usize, k: usize, cap: usize) -> Result<Vec<ColoredTree>, OracleError> {
    Ok(enumerate_trees(n)?.iter().flat_map(|t| sample_evenly(enumerate_colorings(t, k), cap)).collect())
}

/// Tree search by exhaustive encoding; at most six taxa.
pub fn brute_force_reconstruct(map: &TernaryMap) -> Result<Option<ColoredTree>, OracleError> {
    let n = map.n();
    if !(3..=MAX_BRUTE_FORCE).contains(&n) {
        return Err(OracleError::Size { got: n, min: 3, max: MAX_BRUTE_FORCE });
    }
    let symbols: Vec<String> = map.used_symbols().iter().map(|&s| map.symbol_name(s).to_string()).collect();
    // A tree on n taxa has at most n - 2 interior vertices.
    if symbols.len() > n - 2 {
        return Ok(None);
    }
    for topology in enumerate_trees_on(map.taxa())? {
        if let Some(tree) =
            enumerate_colorings_with(&topology, &symbols).into_iter().find(|tree| tree.encode().same_values(map))
        {
            return Ok(Some(tree));
        }
    }
    Ok(None)
}

const WITNESS_TAXA: [&str; 6] = ["a1", "a2", "b1", "b2", "c1", "c2"];

fn is_non_thin_witness(map: &TernaryMap, s1: [usize; 4], s2: [usize; 4]) -> bool {
    if !check_condition3(map).is_empty() || !check_star(map, StarMode::Strict).is_empty() {
        return false;
    }
    if check_condition4(map).is_empty() {
        return false;
    }
    let quartets = generate_quartets(map);
    let on = |s: [usize; 4]| quartets.sorted().iter().filter(|q| q.support() == s).count();
    on(s1) >= 2 && on(s2) >= 2
}

/// A 6-taxon map over two symbols satisfying (3) and (*) but not (4) that
/// generates two quartets on each of `{a1,a2,b1,b2}` and `{a1,a2,c1,c2}`.
///
/// Maps constant on both 4-sets are tried first, then all two-symbol maps.
pub fn find_fig6_like() -> Option<TernaryMap> {
    let taxa = TaxonSet::new(WITNESS_TAXA).unwrap();
    let alphabet = SymbolAlphabet::new(["p", "q"]).unwrap();
    let s1 = [0, 1, 2, 3];
    let s2 = [0, 1, 4, 5];
    let triples: Vec<[usize; 3]> = (0..6).tuple_combinations().map(|(i, j, k)| [i, j, k]).collect();
    let within = |s: [usize; 4], t: [usize; 3]| t.iter().all(|x| s.contains(x));
    let fixed1: Vec<usize> = (0..20).filter(|&r| within(s1, triples[r])).collect();
    let fixed2: Vec<usize> = (0..20).filter(|&r| within(s2, triples[r])).collect();
    let free: Vec<usize> = (0..20).filter(|r| !fixed1.contains(r) && !fixed2.contains(r)).collect();

    let make = |bits: &[bool; 20]| {
        let mut values = vec![SymbolId(0); 20];
        for (r, t) in triples.iter().enumerate() {
            values[triple_rank(*t)] = SymbolId(bits[r] as u32);
        }
        TernaryMap::from_ranked(taxa.clone(), alphabet.clone(), values)
    };
    for (c1, c2) in [(false, false), (false, true), (true, false), (true, true)] {
        for mask in 0u32..(1 << free.len()) {
            let mut bits = [false; 20];
            for &r in &fixed1 {
                bits[r] = c1;
            }
            for &r in &fixed2 {
                bits[r] = c2;
            }
            for (b, &r) in free.iter().enumerate() {
                bits[r] = mask >> b & 1 == 1;
            }
            let map = make(&bits);
            if is_non_thin_witness(&map, s1, s2) {
                return Some(map);
            }
        }
    }
    for mask in 0u32..(1 << 20) {
        let mut bits = [false; 20];
        for (r, bit) in bits.iter_mut().enumerate() {
            *bit = mask >> r & 1 == 1;
        }
        let map = make(&bits);
        if is_non_thin_witness(&map, s1, s2) {
            return Some(map);
        }
    }
    None
}
