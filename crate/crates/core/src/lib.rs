//! Symbolic ternary metrics on unrooted phylogenetic trees.
//!
//! A tree whose interior vertices carry colors is encoded by the map sending
//! every three taxa to the color of their median. This crate encodes trees,
//! checks whether an arbitrary map of that shape comes from a tree, derives
//! the quartets such a map generates and rebuilds the tree from the map.
//!
//! ```
//! use symtern::{parse_newick, reconstruct_tree, verify_metric, VerifyOptions};
//!
//! let tree = parse_newick("((x1,x2)a,y,(z1,z2)c)b;").unwrap();
//! let map = tree.encode();
//! assert!(verify_metric(&map, &VerifyOptions::default()).verdict);
//! let rebuilt = reconstruct_tree(&map).unwrap();
//! assert!(rebuilt.isomorphic(&tree).unwrap());
//! ```

pub mod checks;
pub mod cli;
pub mod error;
pub mod newick;
pub mod oracle;
pub mod quartets;
pub mod reconstruct;
pub mod table;
pub mod taxa;
pub mod ternary;
pub mod tree;

pub use checks::{
    check_condition3, check_condition4, check_star, classify_k5, partition_profile, verify_metric, Condition, K5Type,
    MetricReport, PartitionProfile, StarMode, VerifyOptions, Violation,
};
pub use error::{OracleError, ReconstructError, TableError, TernaryError, TreeError};
pub use newick::{parse_newick, write_newick};
pub use quartets::{generate_quartets, resolves, Quartet, QuartetSystem};
pub use reconstruct::{
    check_binary, contract_class, delta_equivalence_classes, m_equivalent, reconstruct_tree, reconstruct_with_trace,
    ContractionStep, EquivalenceClass, EquivalenceClasses, Reconstruction,
};
pub use table::{parse_table, write_table};
pub use taxa::{SymbolAlphabet, SymbolId, TaxonSet, ODOT};
pub use ternary::TernaryMap;
pub use tree::{ColoredTree, MedianTable, Topology, TreeBuilder, VertexId};
