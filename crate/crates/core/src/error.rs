use thiserror::Error;

/// Errors raised while building or querying taxa, alphabets and ternary maps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TernaryError {
    #[error("invalid {kind} name {name:?}: {reason}")]
    BadName { kind: &'static str, name: String, reason: &'static str },
    #[error("duplicate taxon {0:?}")]
    DuplicateTaxon(String),
    #[error("at least 3 taxa are required, got {0}")]
    TooFewTaxa(usize),
    #[error("symbol alphabet is empty")]
    EmptyAlphabet,
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("unknown taxon {0:?}")]
    UnknownTaxon(String),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("⊙ assigned to the triple of distinct taxa {{{}}}", .0.join(","))]
    OdotOnDistinct([String; 3]),
    #[error("entry repeats a taxon: {{{}}}", .0.join(","))]
    RepeatedTaxon([String; 3]),
    #[error("conflicting values {first:?} and {second:?} for {{{}}}", .triple.join(","))]
    Conflict { triple: [String; 3], first: String, second: String },
    #[error("{} of {expected} triples missing, first: {}", .missing.len(), fmt_missing(.missing))]
    Incomplete { expected: usize, missing: Vec<[String; 3]> },
    #[error("maps are on different taxa sets")]
    DifferentTaxa,
    #[error("subset of size {got} not allowed here ({expected})")]
    SubsetSize { got: usize, expected: &'static str },
}

fn fmt_missing(missing: &[[String; 3]]) -> String {
    missing.iter().take(5).map(|t| format!("{{{}}}", t.join(","))).collect::<Vec<_>>().join(" ")
}

/// Syntax or content errors in the triple-table text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Content(#[from] TernaryError),
}

/// Errors raised while validating or parsing colored trees.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("newick syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error(transparent)]
    Taxa(#[from] TernaryError),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("graph is not a tree ({0})")]
    NotATree(&'static str),
    #[error("vertex {0} has degree 2")]
    DegreeTwo(String),
    #[error("leaf {taxon:?} has degree {degree}, expected 1")]
    LeafDegree { taxon: String, degree: usize },
    #[error("interior vertex {0} has degree 1 but carries no taxon")]
    UnlabeledLeaf(String),
    #[error("interior vertex {0} has no color")]
    MissingColor(String),
    #[error("trees are on different taxa sets")]
    DifferentTaxa,
}

impl TreeError {
    pub fn is_syntax(&self) -> bool {
        matches!(self, TreeError::Syntax { .. })
    }
}

/// Witnessed failure to reconstruct a tree: the input is not a symbolic
/// ternary metric.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReconstructError {
    #[error("not a metric: no two taxa are equivalent among {{{}}}", .0.join(","))]
    NoPseudoCherry(Vec<String>),
    #[error("not a metric: equivalence is not transitive on {{{}}}", .0.join(","))]
    NotTransitive([String; 3]),
    #[error("not a metric: {} and {} disagree on {{{},{}}}", .0[0], .0[1], .0[2], .0[3])]
    NotContractible([String; 4]),
    #[error("not a metric: adjacent vertices would share color {0:?}")]
    ColorCollision(String),
    #[error("not a metric: assembled graph is not a phylogenetic tree: {0}")]
    InvalidTree(TreeError),
    #[error("not a metric: re-encoded tree differs on {{{}}}", .0.join(","))]
    Mismatch([String; 3]),
}

/// Errors raised by the enumeration oracles.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("size {got} outside the supported range {min}..={max}")]
    Size { got: usize, min: usize, max: usize },
}
