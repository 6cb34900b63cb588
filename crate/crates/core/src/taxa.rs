//! Taxon sets and symbol alphabets.

use std::fmt;

use crate::error::TernaryError;

/// The printable stand-in for the "non-event" value returned on repeated
/// arguments. It is never a member of any alphabet.
pub const ODOT: &str = "⊙";

/// Prefix reserved for composite taxa created during reconstruction.
pub const COMPOSITE_PREFIX: char = '@';

/// Characters that may not appear in taxon or symbol names. They would
/// collide with the triple-table or Newick syntax.
const RESERVED: &[char] = &['#', '(', ')', ',', ':', ';', '[', ']', '\'', '"'];

pub(crate) fn check_token(kind: &'static str, name: &str) -> Result<(), TernaryError> {
    if name.is_empty() {
        return Err(TernaryError::BadName { kind, name: name.to_string(), reason: "empty" });
    }
    if name.chars().any(char::is_whitespace) {
        return Err(TernaryError::BadName { kind, name: name.to_string(), reason: "contains whitespace" });
    }
    if name.contains(RESERVED) {
        return Err(TernaryError::BadName { kind, name: name.to_string(), reason: "contains a reserved character" });
    }
    if name == ODOT {
        return Err(TernaryError::BadName { kind, name: name.to_string(), reason: "is the reserved ⊙ value" });
    }
    Ok(())
}

/// An ordered set of at least three distinct taxa.
///
/// Taxa are kept sorted by name, so index order is the canonical order used
/// everywhere else in the crate (triples, quartets, reports).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TaxonSet {
    names: Vec<String>,
}

impl TaxonSet {
    pub fn new<I, S>(names: I) -> Result<Self, TernaryError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for name in &names {
            check_token("taxon", name)?;
            if name.starts_with(COMPOSITE_PREFIX) {
                return Err(TernaryError::BadName {
                    kind: "taxon",
                    name: name.clone(),
                    reason: "the '@' prefix is reserved for composite taxa",
                });
            }
        }
        Self::with_composites(names)
    }

    /// Like [`TaxonSet::new`] but admits `@`-prefixed composite names.
    pub(crate) fn with_composites(mut names: Vec<String>) -> Result<Self, TernaryError> {
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(TernaryError::DuplicateTaxon(w[0].clone()));
        }
        if names.len() < 3 {
            return Err(TernaryError::TooFewTaxa(names.len()));
        }
        Ok(TaxonSet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    pub fn lookup(&self, name: &str) -> Result<usize, TernaryError> {
        self.index_of(name).ok_or_else(|| TernaryError::UnknownTaxon(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    /// Names of the given indices, in the given order.
    pub fn names_of(&self, indices: &[usize]) -> Vec<String> {
        indices.iter().map(|&i| self.names[i].clone()).collect()
    }
}

impl fmt::Display for TaxonSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.names.join(" "))
    }
}

/// Index of a symbol inside a [`SymbolAlphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub(crate) u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The id at position `index` of some alphabet; callers check the range.
    pub fn from_index(index: usize) -> Self {
        SymbolId(u32::try_from(index).expect("symbol index fits in u32"))
    }
}

/// A non-empty finite set of opaque symbols.
///
/// Symbols keep their declaration order for output; algorithms only ever
/// compare them for equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolAlphabet {
    symbols: Vec<String>,
}

impl SymbolAlphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self, TernaryError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(TernaryError::EmptyAlphabet);
        }
        for (i, s) in symbols.iter().enumerate() {
            check_token("symbol", s)?;
            if symbols[..i].contains(s) {
                return Err(TernaryError::DuplicateSymbol(s.clone()));
            }
        }
        Ok(SymbolAlphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, id: SymbolId) -> &str {
        &self.symbols[id.index()]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn id_of(&self, symbol: &str) -> Option<SymbolId> {
        self.symbols.iter().position(|s| s == symbol).map(|i| SymbolId(i as u32))
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbols.len() as u32).map(SymbolId)
    }
}

impl fmt::Display for SymbolAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbols.join(" "))
    }
}
