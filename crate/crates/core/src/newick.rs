//! Newick dialect for colored unrooted trees.
//!
//! Leaf names are taxa, interior labels are colors and are mandatory. The
//! text is written in rooted syntax and read as unrooted: an outermost group
//! with two children is suppressed (its label is dropped), one with a single
//! child is a degree-2 vertex. Branch lengths are not accepted.
//!
//! [`write_newick`] emits the canonical form used for isomorphism tests.

use crate::error::TreeError;
use crate::tree::{ColoredTree, TreeBuilder, VertexId};

struct Node {
    label: Option<String>,
    children: Vec<usize>,
    pos: usize,
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    nodes: Vec<Node>,
}

const DELIMS: &[char] = &['(', ')', ',', ';', ':', '[', ']', '\'', '"'];

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, TreeError> {
        Err(TreeError::Syntax { pos: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn label(&mut self) -> Option<String> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let end = rest.find(|c: char| c.is_whitespace() || DELIMS.contains(&c)).unwrap_or(rest.len());
        if end == 0 {
            return None;
        }
        self.pos += end;
        Some(rest[..end].to_string())
    }

    fn subtree(&mut self) -> Result<usize, TreeError> {
        let start = self.pos;
        let mut children = Vec::new();
        if self.peek() == Some('(') {
            self.pos += 1;
            loop {
                children.push(self.subtree()?);
                match self.peek() {
                    Some(',') => self.pos += 1,
                    Some(')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(c) => return self.error(format!("expected ',' or ')', found {c:?}")),
                    None => return self.error("unexpected end of input inside a group"),
                }
            }
        }
        let label = self.label();
        match self.peek() {
            Some(':') => return self.error("branch lengths are not supported"),
            Some(c @ ('[' | ']' | '\'' | '"')) => return self.error(format!("unsupported character {c:?}")),
            _ => {}
        }
        if children.is_empty() && label.is_none() {
            return match self.peek() {
                Some(c) => self.error(format!("expected a taxon name or '(', found {c:?}")),
                None => self.error("unexpected end of input"),
            };
        }
        self.nodes.push(Node { label, children, pos: start });
        Ok(self.nodes.len() - 1)
    }
}

/// Parses one tree terminated by `;`.
pub fn parse_newick(text: &str) -> Result<ColoredTree, TreeError> {
    let mut p = Parser { text, pos: 0, nodes: Vec::new() };
    let root = p.subtree()?;
    if p.peek() != Some(';') {
        return p.error("expected ';'");
    }
    p.pos += 1;
    if p.peek().is_some() {
        return p.error("trailing characters after ';'");
    }

    let nodes = p.nodes;
    let mut b = TreeBuilder::new();
    let mut vertex: Vec<Option<VertexId>> = vec![None; nodes.len()];
    let describe = |i: usize| match &nodes[i].label {
        Some(l) => format!("{l} (byte {})", nodes[i].pos),
        None => format!("unlabeled group at byte {}", nodes[i].pos),
    };

    match nodes[root].children.len() {
        0 => {}
        1 => return Err(TreeError::DegreeTwo(describe(root))),
        2 => {}
        _ => {
            vertex[root] = Some(match &nodes[root].label {
                Some(c) => b.interior(c.clone()),
                None => return Err(TreeError::MissingColor(describe(root))),
            })
        }
    }
    // Pre-order: parents are created before children.
    let mut stack = vec![root];
    let mut edges = Vec::new();
    while let Some(i) = stack.pop() {
        for &c in &nodes[i].children {
            let v = if nodes[c].children.is_empty() {
                b.leaf(nodes[c].label.clone().expect("leaf labels are checked while parsing"))
            } else {
                match &nodes[c].label {
                    Some(color) => b.interior(color.clone()),
                    None => return Err(TreeError::MissingColor(describe(c))),
                }
            };
            vertex[c] = Some(v);
            if let Some(pv) = vertex[i] {
                edges.push((pv, v));
            }
            stack.push(c);
        }
    }
    if nodes[root].children.len() == 2 {
        let (l, r) = (nodes[root].children[0], nodes[root].children[1]);
        edges.push((vertex[l].unwrap(), vertex[r].unwrap()));
    }
    if nodes[root].children.is_empty() {
        b.leaf(nodes[root].label.clone().unwrap());
    }
    for (u, v) in edges {
        b.edge(u, v);
    }
    b.build()
}

/// Canonical Newick: rooted at the interior neighbor of the smallest taxon,
/// every group sorted by the text of its members.
pub fn write_newick(tree: &ColoredTree) -> String {
    tree.to_newick()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_on_three() {
        let t = parse_newick("(x,y,z)a;").unwrap();
        assert_eq!(t.taxa().names(), ["x", "y", "z"]);
        assert_eq!(t.topology().vertex_count(), 4);
        assert_eq!(write_newick(&t), "(x,y,z)a;");
    }

    #[test]
    fn five_taxon_binary() {
        let t = parse_newick(" ( (x1 , x2)a, y,(z1,z2)c ) b ;\n").unwrap();
        assert!(t.is_binary());
        assert_eq!(write_newick(&t), "(((z1,z2)c,y)b,x1,x2)a;");
        let again = parse_newick(&write_newick(&t)).unwrap();
        assert!(again.isomorphic(&t).unwrap());
    }

    #[test]
    fn binary_root_is_suppressed() {
        let t = parse_newick("((x,y)a,(z,u)b)r;").unwrap();
        assert_eq!(t.topology().vertex_count(), 6);
        assert_eq!(write_newick(&t), "((x,y)a,u,z)b;");
        let leafy = parse_newick("(x,(y,z)a);").unwrap();
        assert_eq!(write_newick(&leafy), "(x,y,z)a;");
    }

    #[test]
    fn unary_nodes_are_degree_two() {
        assert!(matches!(parse_newick("((x,y)a)b;"), Err(TreeError::DegreeTwo(_))));
        assert!(matches!(parse_newick("(((x,y)a)c,z,u)b;"), Err(TreeError::DegreeTwo(_))));
    }

    #[test]
    fn missing_interior_label() {
        assert!(matches!(parse_newick("((x,y),z,u)b;"), Err(TreeError::MissingColor(_))));
        assert!(matches!(parse_newick("(x,y,z);"), Err(TreeError::MissingColor(_))));
    }

    #[test]
    fn syntax_errors_have_positions() {
        assert_eq!(parse_newick("(x,y,z)a").unwrap_err(), TreeError::Syntax { pos: 8, message: "expected ';'".into() });
        assert!(matches!(parse_newick("(x:1.0,y,z)a;"), Err(TreeError::Syntax { pos: 2, .. })));
        assert!(matches!(parse_newick("(x,,z)a;"), Err(TreeError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_newick("(x,y,z)a; extra"), Err(TreeError::Syntax { .. })));
        assert!(matches!(parse_newick("(x,y"), Err(TreeError::Syntax { .. })));
    }

    #[test]
    fn duplicate_and_too_few_taxa() {
        assert!(matches!(parse_newick("(x,x,z)a;"), Err(TreeError::Taxa(_))));
        assert!(matches!(parse_newick("(x,y)a;"), Err(TreeError::Taxa(_))));
        assert!(matches!(parse_newick("x;"), Err(TreeError::Taxa(_))));
    }
}
