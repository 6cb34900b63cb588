//! Unrooted phylogenetic trees with colored interior vertices.
//!
//! A [`Topology`] is a validated leaf-labeled tree without degree-2 vertices;
//! a [`ColoredTree`] adds a color to each interior vertex. Medians, displayed
//! quartets and pseudo-cherries depend only on the topology.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use itertools::Itertools;

use crate::error::TreeError;
use crate::quartets::{Quartet, QuartetSystem};
use crate::taxa::{check_token, SymbolAlphabet, SymbolId, TaxonSet};
use crate::ternary::{binom3, triple_rank, TernaryMap};

pub type VertexId = usize;

#[derive(Clone, Debug)]
enum NodeSpec {
    Leaf(String),
    Interior(Option<String>),
}

/// Incremental construction of a tree; validation happens in `build`.
#[derive(Clone, Debug, Default)]
pub struct TreeBuilder {
    nodes: Vec<NodeSpec>,
    edges: Vec<(VertexId, VertexId)>,
}

impl TreeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn leaf(&mut self, taxon: impl Into<String>) -> VertexId {
        self.nodes.push(NodeSpec::Leaf(taxon.into()));
        self.nodes.len() - 1
    }

    pub fn interior(&mut self, color: impl Into<String>) -> VertexId {
        self.nodes.push(NodeSpec::Interior(Some(color.into())));
        self.nodes.len() - 1
    }

    pub fn uncolored(&mut self) -> VertexId {
        self.nodes.push(NodeSpec::Interior(None));
        self.nodes.len() - 1
    }

    pub fn edge(&mut self, u: VertexId, v: VertexId) -> &mut Self {
        self.edges.push((u, v));
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.nodes.len()
    }

    /// Validates the shape, ignoring colors.
    pub fn build_topology(&self) -> Result<Topology, TreeError> {
        let describe = |v: VertexId| match &self.nodes[v] {
            NodeSpec::Leaf(name) => name.clone(),
            NodeSpec::Interior(Some(c)) => format!("#{v} ({c})"),
            NodeSpec::Interior(None) => format!("#{v}"),
        };
        let vcount = self.nodes.len();
        let leaves: Vec<(VertexId, &String)> = self
            .nodes
            .iter()
            .enumerate()
            .filter_map(|(v, n)| match n {
                NodeSpec::Leaf(name) => Some((v, name)),
                NodeSpec::Interior(_) => None,
            })
            .collect();
        let taxa = TaxonSet::new(leaves.iter().map(|(_, name)| name.as_str()))?;

        let mut adj = vec![Vec::new(); vcount];
        let mut seen = BTreeSet::new();
        for &(u, v) in &self.edges {
            if u >= vcount {
                return Err(TreeError::VertexOutOfRange(u));
            }
            if v >= vcount {
                return Err(TreeError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(TreeError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(TreeError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        if self.edges.len() + 1 != vcount {
            return Err(TreeError::NotATree("edge count is not vertex count minus one"));
        }
        let mut reached = vec![false; vcount];
        let mut stack = vec![0];
        reached[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !reached[w] {
                    reached[w] = true;
                    stack.push(w);
                }
            }
        }
        if reached.iter().any(|r| !r) {
            return Err(TreeError::NotATree("disconnected"));
        }

        let mut leaf_vertex = vec![0; taxa.len()];
        let mut taxon_at = vec![None; vcount];
        for &(v, name) in &leaves {
            let t = taxa.index_of(name).unwrap();
            leaf_vertex[t] = v;
            taxon_at[v] = Some(t);
            if adj[v].len() != 1 {
                return Err(TreeError::LeafDegree { taxon: name.clone(), degree: adj[v].len() });
            }
        }
        for v in 0..vcount {
            if taxon_at[v].is_none() {
                match adj[v].len() {
                    0 | 1 => return Err(TreeError::UnlabeledLeaf(describe(v))),
                    2 => return Err(TreeError::DegreeTwo(describe(v))),
                    _ => {}
                }
            }
        }
        Ok(Topology { taxa, adj, leaf_vertex, taxon_at })
    }

    /// Validates shape and colors.
    pub fn build(&self) -> Result<ColoredTree, TreeError> {
        let topology = self.build_topology()?;
        let mut colors = vec![None; self.nodes.len()];
        for (v, node) in self.nodes.iter().enumerate() {
            if let NodeSpec::Interior(color) = node {
                match color {
                    Some(c) => {
                        check_token("symbol", c)?;
                        colors[v] = Some(c.clone());
                    }
                    None => return Err(TreeError::MissingColor(format!("#{v}"))),
                }
            }
        }
        Ok(ColoredTree { topology, colors })
    }
}

/// A validated unrooted phylogenetic tree shape with leaves labeled by taxa.
#[derive(Clone, Debug)]
pub struct Topology {
    taxa: TaxonSet,
    adj: Vec<Vec<VertexId>>,
    leaf_vertex: Vec<VertexId>,
    taxon_at: Vec<Option<usize>>,
}

impl Topology {
    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    /// Taxon index carried by `v`, if it is a leaf.
    pub fn taxon_at(&self, v: VertexId) -> Option<usize> {
        self.taxon_at[v]
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.taxon_at[v].is_some()
    }

    /// Leaf vertex of a taxon index.
    pub fn leaf(&self, taxon: usize) -> VertexId {
        self.leaf_vertex[taxon]
    }

    pub fn interior_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.adj.len()).filter(|&v| self.taxon_at[v].is_none())
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, ns)| ns.iter().filter(move |&&w| u < w).map(move |&w| (u, w)))
    }

    pub fn is_binary(&self) -> bool {
        self.interior_vertices().all(|v| self.adj[v].len() == 3)
    }

    /// Parent pointers of a traversal rooted at `root` (the root points to itself).
    fn parents_from(&self, root: VertexId) -> Vec<VertexId> {
        let mut parent = vec![usize::MAX; self.adj.len()];
        parent[root] = root;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Median of three vertices given the parent array rooted at `a`:
    /// the first vertex on the path from `b` towards `a` that also lies on
    /// the path from `c` to `a`.
    fn median_rooted(&self, parent: &[VertexId], b: VertexId, c: VertexId, mark: &mut [bool]) -> VertexId {
        let mut on_c = Vec::new();
        let mut v = c;
        loop {
            mark[v] = true;
            on_c.push(v);
            if parent[v] == v {
                break;
            }
            v = parent[v];
        }
        let mut m = b;
        while !mark[m] {
            m = parent[m];
        }
        for v in on_c {
            mark[v] = false;
        }
        m
    }

    /// Median vertex of three distinct taxa (by index).
    pub fn median(&self, x: usize, y: usize, z: usize) -> VertexId {
        assert!(x != y && y != z && x != z, "median needs three distinct taxa");
        let parent = self.parents_from(self.leaf_vertex[x]);
        let mut mark = vec![false; self.adj.len()];
        self.median_rooted(&parent, self.leaf_vertex[y], self.leaf_vertex[z], &mut mark)
    }

    /// Median of every 3-subset, indexed like [`TernaryMap`] storage.
    pub fn median_table(&self) -> MedianTable {
        let n = self.taxa.len();
        let mut medians = vec![0; binom3(n)];
        let mut mark = vec![false; self.adj.len()];
        for i in 0..n {
            let parent = self.parents_from(self.leaf_vertex[i]);
            for (j, k) in (i + 1..n).tuple_combinations() {
                medians[triple_rank([i, j, k])] =
                    self.median_rooted(&parent, self.leaf_vertex[j], self.leaf_vertex[k], &mut mark);
            }
        }
        MedianTable { medians }
    }

    fn path(&self, parent: &[VertexId], to: VertexId) -> Vec<VertexId> {
        let mut out = vec![to];
        let mut v = to;
        while parent[v] != v {
            v = parent[v];
            out.push(v);
        }
        out
    }

    /// All quartets `ab|cd` whose `a`–`b` and `c`–`d` paths are vertex-disjoint.
    pub fn displayed_quartets(&self) -> QuartetSystem {
        let n = self.taxa.len();
        let parents: Vec<Vec<VertexId>> = (0..n).map(|i| self.parents_from(self.leaf_vertex[i])).collect();
        let mut mark = vec![false; self.adj.len()];
        let mut system = QuartetSystem::new(self.taxa.clone());
        for (a, b, c, d) in (0..n).tuple_combinations() {
            for [p, q, r, s] in [[a, b, c, d], [a, c, b, d], [a, d, b, c]] {
                let first = self.path(&parents[p], self.leaf_vertex[q]);
                for &v in &first {
                    mark[v] = true;
                }
                let disjoint = self.path(&parents[r], self.leaf_vertex[s]).iter().all(|&v| !mark[v]);
                for &v in &first {
                    mark[v] = false;
                }
                if disjoint {
                    system.insert(Quartet::new(p, q, r, s));
                }
            }
        }
        system
    }

    /// Leaf sets (taxon indices, sorted) of size at least two that are the
    /// full set of leaves adjacent to some interior vertex.
    pub fn pseudo_cherries(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self
            .interior_vertices()
            .map(|v| self.adj[v].iter().filter_map(|&w| self.taxon_at[w]).sorted().collect::<Vec<_>>())
            .filter(|c| c.len() >= 2)
            .collect();
        out.sort();
        out
    }

    fn canonical_subtree(&self, v: VertexId, from: VertexId, colors: Option<&[Option<String>]>, out: &mut String) {
        if let Some(t) = self.taxon_at[v] {
            out.push_str(self.taxa.name(t));
            return;
        }
        let children: Vec<String> = self.adj[v]
            .iter()
            .filter(|&&w| w != from)
            .map(|&w| {
                let mut s = String::new();
                self.canonical_subtree(w, v, colors, &mut s);
                s
            })
            .sorted()
            .collect();
        out.push('(');
        out.push_str(&children.join(","));
        out.push(')');
        if let Some(colors) = colors {
            out.push_str(colors[v].as_deref().unwrap_or(""));
        }
    }

    /// Canonical Newick-like string: rooted at the interior neighbor of the
    /// smallest taxon, children sorted by their own canonical strings.
    pub(crate) fn canonical_string(&self, colors: Option<&[Option<String>]>) -> String {
        let root = self.adj[self.leaf_vertex[0]][0];
        let mut s = String::new();
        self.canonical_subtree(root, usize::MAX, colors, &mut s);
        s.push(';');
        s
    }

    /// Canonical form of the uncolored shape; equal strings mean isomorphic
    /// topologies (with leaf labels fixed).
    pub fn canonical_form(&self) -> String {
        self.canonical_string(None)
    }

    /// Attaches colors (indexed by vertex; leaves must be `None`).
    pub fn with_colors(self, colors: Vec<Option<String>>) -> Result<ColoredTree, TreeError> {
        assert_eq!(colors.len(), self.adj.len());
        for (v, color) in colors.iter().enumerate() {
            match (color, self.is_leaf(v)) {
                (Some(c), false) => check_token("symbol", c)?,
                (None, false) => return Err(TreeError::MissingColor(format!("#{v}"))),
                (_, true) => {}
            }
        }
        let colors = colors.into_iter().enumerate().map(|(v, c)| if self.is_leaf(v) { None } else { c }).collect();
        Ok(ColoredTree { topology: self, colors })
    }

    /// Rebuilds the topology under a different set of taxon names. The
    /// `rename` closure maps old names to new ones.
    pub fn relabel(&self, rename: impl Fn(&str) -> String) -> Result<Topology, TreeError> {
        let mut b = TreeBuilder::new();
        for v in 0..self.adj.len() {
            match self.taxon_at[v] {
                Some(t) => b.leaf(rename(self.taxa.name(t))),
                None => b.uncolored(),
            };
        }
        for (u, w) in self.edges() {
            b.edge(u, w);
        }
        b.build_topology()
    }
}

/// Median vertex of every 3-subset, stored in ternary-map rank order.
#[derive(Clone, Debug)]
pub struct MedianTable {
    medians: Vec<VertexId>,
}

impl MedianTable {
    pub fn get(&self, i: usize, j: usize, k: usize) -> VertexId {
        self.medians[triple_rank(crate::ternary::sort3(i, j, k))]
    }
}

/// A phylogenetic tree whose interior vertices carry colors.
#[derive(Clone, Debug)]
pub struct ColoredTree {
    topology: Topology,
    colors: Vec<Option<String>>,
}

impl ColoredTree {
    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn taxa(&self) -> &TaxonSet {
        &self.topology.taxa
    }

    /// Color of an interior vertex; `None` for leaves.
    pub fn color(&self, v: VertexId) -> Option<&str> {
        self.colors[v].as_deref()
    }

    pub fn colors(&self) -> &[Option<String>] {
        &self.colors
    }

    /// Median of three distinct named taxa.
    pub fn median(&self, x: &str, y: &str, z: &str) -> Result<VertexId, TreeError> {
        let taxa = &self.topology.taxa;
        let (i, j, k) = (taxa.lookup(x)?, taxa.lookup(y)?, taxa.lookup(z)?);
        if i == j || j == k || i == k {
            return Err(crate::error::TernaryError::RepeatedTaxon([x.into(), y.into(), z.into()]).into());
        }
        Ok(self.topology.median(i, j, k))
    }

    /// The ternary map sending each 3-subset to the color of its median.
    /// Its alphabet is the sorted set of colors that actually occur.
    pub fn encode(&self) -> TernaryMap {
        let medians = self.topology.median_table();
        let mut used: Vec<&str> = (0..binom3(self.taxa().len()))
            .map(|r| self.colors[medians.medians[r]].as_deref().expect("median is interior"))
            .collect();
        used.sort_unstable();
        used.dedup();
        let alphabet = SymbolAlphabet::new(used.iter().copied()).expect("colors were validated");
        let ids: Vec<Option<SymbolId>> =
            self.colors.iter().map(|c| c.as_deref().and_then(|c| alphabet.id_of(c))).collect();
        TernaryMap::from_fn(self.taxa().clone(), alphabet, |i, j, k| ids[medians.get(i, j, k)].unwrap())
    }

    pub fn displayed_quartets(&self) -> QuartetSystem {
        self.topology.displayed_quartets()
    }

    /// True iff adjacent interior vertices always differ in color.
    pub fn is_discriminating(&self) -> bool {
        self.topology
            .edges()
            .all(|(u, v)| self.colors[u].is_none() || self.colors[v].is_none() || self.colors[u] != self.colors[v])
    }

    pub fn is_binary(&self) -> bool {
        self.topology.is_binary()
    }

    /// Named pseudo-cherries.
    pub fn pseudo_cherries(&self) -> Vec<Vec<String>> {
        self.topology.pseudo_cherries().iter().map(|c| self.taxa().names_of(c)).collect()
    }

    /// Isomorphism fixing every leaf label and preserving interior colors.
    pub fn isomorphic(&self, other: &ColoredTree) -> Result<bool, TreeError> {
        if self.taxa() != other.taxa() {
            return Err(TreeError::DifferentTaxa);
        }
        Ok(self.to_newick() == other.to_newick())
    }

    /// Canonical Newick text (see [`crate::newick`]).
    pub fn to_newick(&self) -> String {
        self.topology.canonical_string(Some(&self.colors))
    }

    /// Graphviz rendering.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph tree {\n");
        for v in 0..self.topology.vertex_count() {
            match self.topology.taxon_at(v) {
                Some(t) => writeln!(out, "  v{v} [label=\"{}\", shape=plaintext];", self.taxa().name(t)),
                None => writeln!(out, "  v{v} [label=\"{}\", shape=circle];", self.colors[v].as_deref().unwrap_or("")),
            }
            .unwrap();
        }
        for (u, v) in self.topology.edges() {
            writeln!(out, "  v{u} -- v{v};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::newick::parse_newick;

    const FIG2: &str = "((x1,x2)a,y,(z1,z2)c)b;";

    fn vertex_color<'a>(t: &'a ColoredTree, x: &str, y: &str, z: &str) -> &'a str {
        t.color(t.median(x, y, z).unwrap()).unwrap()
    }

    #[test]
    fn star_median_is_center() {
        let mut b = TreeBuilder::new();
        let c = b.interior("m");
        for name in ["x", "y", "z"] {
            let l = b.leaf(name);
            b.edge(c, l);
        }
        let t = b.build().unwrap();
        assert_eq!(t.median("x", "y", "z").unwrap(), c);
        assert_eq!(t.median("z", "x", "y").unwrap(), c);
        assert!(t.median("x", "x", "y").is_err());
    }

    #[test]
    fn five_taxon_binary_medians() {
        let t = parse_newick(FIG2).unwrap();
        // v1 = a sits on all triples containing x1 and x2; v3 = c on z1, z2.
        assert_eq!(vertex_color(&t, "x1", "x2", "z1"), "a");
        assert_eq!(vertex_color(&t, "x1", "y", "z1"), "b");
        assert_eq!(vertex_color(&t, "z2", "y", "z1"), "c");
    }

    #[test]
    fn encode_star_is_constant() {
        let t = parse_newick("(x,y,z,u)a;").unwrap();
        let m = t.encode();
        assert_eq!(m.alphabet().symbols(), ["a"]);
        assert!(m.entries().all(|(_, v)| m.symbol_name(v) == "a"));
    }

    #[test]
    fn encode_three_colors() {
        let m = parse_newick(FIG2).unwrap().encode();
        let mut expected_b = 0;
        for ([i, j, k], v) in m.entries() {
            let names = m.taxa().names_of(&[i, j, k]);
            let has = |s: &str| names.iter().any(|n| n == s);
            let want = if has("x1") && has("x2") {
                "a"
            } else if has("z1") && has("z2") {
                "c"
            } else {
                expected_b += 1;
                "b"
            };
            assert_eq!(m.symbol_name(v), want, "{names:?}");
        }
        assert_eq!(expected_b, 4);
    }

    #[test]
    fn displayed_quartets_fixtures() {
        let star = parse_newick("(a,b,c,d,e)m;").unwrap();
        assert!(star.displayed_quartets().is_empty());
        let quartet = parse_newick("((x,y)a,z,u)b;").unwrap();
        let q = quartet.displayed_quartets();
        assert_eq!(q.to_lines(), "u z | x y\n");
        let fig2 = parse_newick(FIG2).unwrap().displayed_quartets();
        assert_eq!(fig2.len(), 5);
    }

    #[test]
    fn discriminating() {
        assert!(parse_newick("(x,y,z,u)a;").unwrap().is_discriminating());
        assert!(!parse_newick("((x1,x2)a,y,(z1,z2)c)a;").unwrap().is_discriminating());
        assert!(parse_newick("((x1,x2)a,y,(z1,z2)a)b;").unwrap().is_discriminating());
    }

    #[test]
    fn isomorphism_respects_colors_and_taxa() {
        let t = parse_newick(FIG2).unwrap();
        let same = parse_newick("((z2,z1)c,(x2,x1)a,y)b;").unwrap();
        assert!(t.isomorphic(&same).unwrap());
        let recolored = parse_newick("((x1,x2)a,y,(z1,z2)d)b;").unwrap();
        assert!(!t.isomorphic(&recolored).unwrap());
        let other = parse_newick("((x1,x2)a,w,(z1,z2)c)b;").unwrap();
        assert_eq!(t.isomorphic(&other), Err(TreeError::DifferentTaxa));
    }

    #[test]
    fn builder_rejects_invalid_shapes() {
        let mut b = TreeBuilder::new();
        let c = b.interior("a");
        let d = b.interior("b");
        let x = b.leaf("x");
        let y = b.leaf("y");
        let z = b.leaf("z");
        b.edge(c, x).edge(c, y).edge(c, d).edge(d, z);
        assert!(matches!(b.build(), Err(TreeError::DegreeTwo(_))));

        let mut b = TreeBuilder::new();
        let c = b.interior("a");
        let x = b.leaf("x");
        let y = b.leaf("y");
        let z = b.leaf("z");
        b.edge(c, x).edge(c, y).edge(x, y).edge(c, z);
        assert!(matches!(b.build(), Err(TreeError::NotATree(_))));

        let mut b = TreeBuilder::new();
        let c = b.uncolored();
        for name in ["x", "y", "z"] {
            let l = b.leaf(name);
            b.edge(c, l);
        }
        assert!(b.build_topology().is_ok());
        assert!(matches!(b.build(), Err(TreeError::MissingColor(_))));
    }

    #[test]
    fn dot_lists_every_edge() {
        let t = parse_newick(FIG2).unwrap();
        let dot = t.to_dot();
        assert_eq!(dot.matches(" -- ").count(), t.topology().vertex_count() - 1);
    }
}
