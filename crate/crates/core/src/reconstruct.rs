//! Bottom-up reconstruction of a colored tree from its ternary map.
//!
//! Each round computes the classes of δ-equivalent taxa, picks one
//! nontrivial class (a pseudo-cherry of the tree being rebuilt), creates an
//! interior vertex for it and replaces the class by a single composite taxon
//! `@k`. The loop ends when a class absorbs all remaining taxa, or all but
//! one. The assembled tree is re-encoded and compared with the input, which
//! certifies the result and catches any input that is not a metric.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;

use crate::checks::{check_star, StarMode};
use crate::error::ReconstructError;
use crate::taxa::{SymbolId, TaxonSet};
use crate::ternary::TernaryMap;
use crate::tree::{ColoredTree, TreeBuilder, VertexId};

/// The `m` for which `x` and `y` are `m`-equivalent, if any: some third taxon
/// `z` has `δ(x,y,z) = m`, and for all other `u, v`, `δ(x,u,v) = m` exactly
/// when `δ(y,u,v) = m`.
pub fn m_equivalent(map: &TernaryMap, x: usize, y: usize) -> Option<SymbolId> {
    assert!(x != y, "m_equivalent needs two distinct taxa");
    let n = map.n();
    let others: Vec<usize> = (0..n).filter(|&v| v != x && v != y).collect();
    let candidates: Vec<SymbolId> = others.iter().map(|&z| map.sym(x, y, z)).unique().collect();
    candidates.into_iter().find(|&m| {
        others.iter().tuple_combinations().all(|(&u, &v)| (map.sym(x, u, v) == m) == (map.sym(y, u, v) == m))
    })
}

/// One class of the δ-equivalence relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClass {
    /// Taxon indices, sorted.
    pub members: Vec<usize>,
    /// The common `m` of a nontrivial class; `None` for singletons.
    pub symbol: Option<SymbolId>,
}

impl EquivalenceClass {
    pub fn is_trivial(&self) -> bool {
        self.members.len() < 2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceClasses {
    /// Ordered by smallest member.
    pub classes: Vec<EquivalenceClass>,
}

impl EquivalenceClasses {
    pub fn nontrivial(&self) -> impl Iterator<Item = &EquivalenceClass> {
        self.classes.iter().filter(|c| !c.is_trivial())
    }
}

/// Partition of the taxa into δ-equivalence classes.
///
/// Fails with a witness triple if pairwise equivalence is not transitive,
/// or two equivalences through a shared taxon carry different symbols.
pub fn delta_equivalence_classes(map: &TernaryMap) -> Result<EquivalenceClasses, ReconstructError> {
    let n = map.n();
    let mut eq = vec![vec![None; n]; n];
    for (x, y) in (0..n).tuple_combinations() {
        let m = m_equivalent(map, x, y);
        eq[x][y] = m;
        eq[y][x] = m;
    }
    for x in 0..n {
        for y in 0..n {
            let Some(m) = eq[x][y] else { continue };
            for z in (0..n).filter(|&z| z != x && z != y) {
                if let Some(m2) = eq[y][z] {
                    if m2 != m || eq[x][z] != Some(m) {
                        return Err(ReconstructError::NotTransitive(
                            map.taxa().names_of(&[x, y, z]).try_into().unwrap(),
                        ));
                    }
                }
            }
        }
    }
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let mut members = vec![x];
        members.extend((x + 1..n).filter(|&y| eq[x][y].is_some()));
        for &m in &members {
            assigned[m] = true;
        }
        let symbol = members.get(1).and_then(|&y| eq[x][y]);
        classes.push(EquivalenceClass { members, symbol });
    }
    Ok(EquivalenceClasses { classes })
}

/// One contraction: `members` become the composite taxon `composite`.
#[derive(Clone, Debug)]
pub struct ContractionStep {
    pub members: Vec<String>,
    pub composite: String,
    pub symbol: String,
    /// Map on the remaining taxa plus the composite; `None` once fewer than
    /// three taxa would remain.
    pub reduced: Option<TernaryMap>,
    /// Taxa left outside the class when `reduced` is `None`.
    pub leftover: Vec<String>,
}

impl fmt::Display for ContractionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CONTRACT {{{}}} -> {} COLOR {}", self.members.join(","), self.composite, self.symbol)
    }
}

/// Replaces the class by one composite taxon whose values are those of any
/// member. All members must agree on every pair of outside taxa.
pub fn contract_class(
    map: &TernaryMap,
    class: &[usize],
    symbol: SymbolId,
    composite: &str,
) -> Result<ContractionStep, ReconstructError> {
    let n = map.n();
    let taxa = map.taxa();
    let mut members = class.to_vec();
    members.sort_unstable();
    members.dedup();
    assert!(members.len() >= 2, "a contracted class has at least two members");
    let outside: Vec<usize> = (0..n).filter(|v| !members.contains(v)).collect();
    let rep = members[0];
    for (&u, &v) in outside.iter().tuple_combinations() {
        let want = map.sym(rep, u, v);
        if let Some(&x) = members[1..].iter().find(|&&x| map.sym(x, u, v) != want) {
            return Err(ReconstructError::NotContractible(taxa.names_of(&[rep, x, u, v]).try_into().unwrap()));
        }
    }
    let member_names = taxa.names_of(&members);
    let symbol_name = map.symbol_name(symbol).to_string();
    if outside.len() < 2 {
        return Ok(ContractionStep {
            members: member_names,
            composite: composite.to_string(),
            symbol: symbol_name,
            reduced: None,
            leftover: taxa.names_of(&outside),
        });
    }
    let mut names = taxa.names_of(&outside);
    names.push(composite.to_string());
    let reduced_taxa = TaxonSet::with_composites(names).expect("composite name is fresh");
    let back: Vec<usize> =
        reduced_taxa.iter().map(|name| if name == composite { rep } else { taxa.index_of(name).unwrap() }).collect();
    let reduced =
        TernaryMap::from_fn(reduced_taxa, map.alphabet().clone(), |i, j, k| map.sym(back[i], back[j], back[k]));
    Ok(ContractionStep {
        members: member_names,
        composite: composite.to_string(),
        symbol: symbol_name,
        reduced: Some(reduced),
        leftover: Vec::new(),
    })
}

/// A reconstructed tree with the contraction steps that built it.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub tree: ColoredTree,
    pub steps: Vec<ContractionStep>,
}

impl Reconstruction {
    /// One `CONTRACT` line per step.
    pub fn trace(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }
}

pub fn reconstruct_tree(map: &TernaryMap) -> Result<ColoredTree, ReconstructError> {
    reconstruct_with_trace(map).map(|r| r.tree)
}

pub fn reconstruct_with_trace(map: &TernaryMap) -> Result<Reconstruction, ReconstructError> {
    let mut builder = TreeBuilder::new();
    let mut color_of: Vec<Option<String>> = Vec::new();
    let mut node_of: HashMap<String, VertexId> = HashMap::new();
    for name in map.taxa().iter() {
        node_of.insert(name.to_string(), builder.leaf(name));
        color_of.push(None);
    }

    let mut current = map.clone();
    let mut steps = Vec::new();
    let mut counter = 0usize;
    loop {
        let classes = delta_equivalence_classes(&current)?;
        let Some(class) = classes.nontrivial().next() else {
            return Err(ReconstructError::NoPseudoCherry(current.taxa().names().to_vec()));
        };
        let symbol = class.symbol.expect("nontrivial classes carry a symbol");
        let composite = loop {
            counter += 1;
            let name = format!("@{counter}");
            if current.taxa().index_of(&name).is_none() {
                break name;
            }
        };
        let step = contract_class(&current, &class.members, symbol, &composite)?;

        let neighbors: Vec<VertexId> = step.members.iter().chain(&step.leftover).map(|name| node_of[name]).collect();
        // A member that is itself a vertex of this color stands for the same
        // vertex: it was contracted earlier while it still had other
        // interior neighbors.
        let same: Vec<VertexId> =
            neighbors.iter().copied().filter(|&v| color_of[v].as_deref() == Some(&step.symbol)).collect();
        let center = match same[..] {
            [] => {
                color_of.push(Some(step.symbol.clone()));
                builder.interior(step.symbol.clone())
            }
            [v] => v,
            _ => return Err(ReconstructError::ColorCollision(step.symbol.clone())),
        };
        for &v in &neighbors {
            if v != center {
                builder.edge(center, v);
            }
        }
        node_of.insert(composite, center);
        let reduced = step.reduced.clone();
        steps.push(step);
        match reduced {
            Some(r) => current = r,
            None => break,
        }
    }

    let tree = builder.build().map_err(ReconstructError::InvalidTree)?;
    if !tree.is_discriminating() {
        let color = tree
            .topology()
            .edges()
            .find(|&(u, v)| tree.color(u).is_some() && tree.color(u) == tree.color(v))
            .and_then(|(u, _)| tree.color(u))
            .unwrap_or_default()
            .to_string();
        return Err(ReconstructError::ColorCollision(color));
    }
    let encoded = tree.encode();
    if let Some(t) = encoded.first_difference(map).expect("same taxa") {
        return Err(ReconstructError::Mismatch(map.taxa().names_of(&t).try_into().unwrap()));
    }
    Ok(Reconstruction { tree, steps })
}

/// True iff the map is fully resolved, i.e. its tree is binary. Assumes the
/// map passes [`crate::checks::verify_metric`].
pub fn check_binary(map: &TernaryMap) -> bool {
    check_star(map, StarMode::Strict).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_newick;
    use crate::table::parse_table;

    const FIG2: &str = "((x1,x2)a,y,(z1,z2)c)b;";

    fn idx(map: &TernaryMap, name: &str) -> usize {
        map.taxa().index_of(name).unwrap()
    }

    #[test]
    fn equivalence_on_the_five_taxon_tree() {
        let m = parse_newick(FIG2).unwrap().encode();
        let a = m.alphabet().id_of("a");
        assert_eq!(m_equivalent(&m, idx(&m, "x1"), idx(&m, "x2")), a);
        assert_eq!(m_equivalent(&m, idx(&m, "x1"), idx(&m, "y")), None);
        let classes = delta_equivalence_classes(&m).unwrap();
        let named: Vec<(Vec<String>, Option<&str>)> = classes
            .classes
            .iter()
            .map(|c| (m.taxa().names_of(&c.members), c.symbol.map(|s| m.symbol_name(s))))
            .collect();
        assert_eq!(
            named,
            vec![
                (vec!["x1".into(), "x2".into()], Some("a")),
                (vec!["y".into()], None),
                (vec!["z1".into(), "z2".into()], Some("c")),
            ]
        );
    }

    #[test]
    fn star_is_one_class() {
        let m = parse_newick("(a,b,c,d,e)m;").unwrap().encode();
        let classes = delta_equivalence_classes(&m).unwrap();
        assert_eq!(classes.classes.len(), 1);
        assert_eq!(classes.classes[0].members, vec![0, 1, 2, 3, 4]);
        assert_eq!(m_equivalent(&m, 0, 3), m.alphabet().id_of("m"));
    }

    #[test]
    fn contraction_of_a_cherry() {
        let m = parse_newick(FIG2).unwrap().encode();
        let a = m.alphabet().id_of("a").unwrap();
        let step = contract_class(&m, &[idx(&m, "x1"), idx(&m, "x2")], a, "@1").unwrap();
        let r = step.reduced.as_ref().unwrap();
        assert_eq!(r.taxa().names(), ["@1", "y", "z1", "z2"]);
        assert_eq!(r.get("@1", "y", "z1").unwrap(), Some("b"));
        assert_eq!(r.get("@1", "z1", "z2").unwrap(), Some("c"));
        assert_eq!(r.get("y", "z1", "z2").unwrap(), Some("c"));
        assert_eq!(step.to_string(), "CONTRACT {x1,x2} -> @1 COLOR a");
    }

    #[test]
    fn contraction_termination() {
        let m = parse_newick("(a,b,c,d,e)m;").unwrap().encode();
        let s = m.alphabet().id_of("m").unwrap();
        let step = contract_class(&m, &[0, 1, 2], s, "@1").unwrap();
        assert_eq!(step.reduced.unwrap().n(), 3);
        let step = contract_class(&m, &[0, 1, 2, 3], s, "@1").unwrap();
        assert!(step.reduced.is_none());
        assert_eq!(step.leftover, vec!["e".to_string()]);
    }

    #[test]
    fn contraction_rejects_disagreeing_members() {
        let m = parse_table("taxa: x y z u\nsymbols: a b\nx y z a\nx y u a\nx z u a\ny z u b\n").unwrap();
        let a = m.alphabet().id_of("a").unwrap();
        let err = contract_class(&m, &[idx(&m, "x"), idx(&m, "y")], a, "@1").unwrap_err();
        assert!(matches!(err, ReconstructError::NotContractible(_)));
    }

    #[test]
    fn roundtrip_fixtures() {
        for text in [FIG2, "(x,y,z)a;", "((x,y)a,z,u)b;", "((a,b)p,(c,d)q,(e,f)r)s;", "((a,b)p,(c,d)q,(e,f)q,g)p2;"] {
            let t = parse_newick(text).unwrap();
            let r = reconstruct_with_trace(&t.encode()).unwrap();
            assert!(r.tree.isomorphic(&t).unwrap(), "{text} -> {}", r.tree.to_newick());
        }
    }

    #[test]
    fn roundtrip_needs_vertex_merge() {
        // a1, a2 hang off a vertex with two interior neighbors. They are
        // contracted first, and the composite later rejoins the same vertex.
        let t = parse_newick("((p1,p2)p,(q1,q2)q,a1,a2)m;").unwrap();
        let r = reconstruct_with_trace(&t.encode()).unwrap();
        assert_eq!(r.steps[0].members, vec!["a1", "a2"]);
        assert_eq!(
            r.trace(),
            "CONTRACT {a1,a2} -> @1 COLOR m\nCONTRACT {p1,p2} -> @2 COLOR p\n\
             CONTRACT {@1,@2} -> @3 COLOR m\nCONTRACT {@3,q1,q2} -> @4 COLOR q\n"
        );
        assert!(r.tree.isomorphic(&t).unwrap());
    }

    #[test]
    fn constant_map_is_a_star() {
        let m = TernaryMap::constant(TaxonSet::new(["a", "b", "c", "d", "e", "f"]).unwrap(), "k").unwrap();
        let t = reconstruct_tree(&m).unwrap();
        assert_eq!(t.to_newick(), "(a,b,c,d,e,f)k;");
    }

    #[test]
    fn two_five_cycles_are_rejected() {
        let m = parse_table(
            "taxa: u w x y z\nsymbols: p q\n\
             u w x p\nu w y q\nu w z p\nu x y q\nu x z q\nu y z p\nw x y p\nw x z q\nw y z q\nx y z p\n",
        )
        .unwrap();
        assert!(reconstruct_tree(&m).is_err());
    }

    #[test]
    fn binary_check() {
        assert!(check_binary(&parse_newick(FIG2).unwrap().encode()));
        assert!(!check_binary(&parse_newick("(a,b,c,d,e)m;").unwrap().encode()));
        assert!(check_binary(&parse_newick("((x,y)a,z,u)b;").unwrap().encode()));
    }
}
