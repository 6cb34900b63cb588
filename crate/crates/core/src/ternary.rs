//! The canonical store of a symmetric ternary map.
//!
//! Values live on 3-subsets only: index `(i, j, k)` with `i < j < k` is ranked
//! in colexicographic order, so symmetry holds by construction and any lookup
//! with a repeated argument answers ⊙ without touching storage.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::TernaryError;
use crate::taxa::{SymbolAlphabet, SymbolId, TaxonSet};

pub(crate) fn binom3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

fn binom2(n: usize) -> usize {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

#[inline]
pub(crate) fn sort3(a: usize, b: usize, c: usize) -> [usize; 3] {
    let mut t = [a, b, c];
    if t[0] > t[1] {
        t.swap(0, 1);
    }
    if t[1] > t[2] {
        t.swap(1, 2);
    }
    if t[0] > t[1] {
        t.swap(0, 1);
    }
    t
}

/// Colex rank of a sorted triple of distinct indices.
#[inline]
pub(crate) fn triple_rank(t: [usize; 3]) -> usize {
    binom3(t[2]) + binom2(t[1]) + t[0]
}

/// A total symmetric map from the 3-subsets of a taxon set into an alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryMap {
    taxa: TaxonSet,
    alphabet: SymbolAlphabet,
    values: Vec<SymbolId>,
}

impl TernaryMap {
    /// Builds a map from named entries, one per 3-subset.
    ///
    /// Taxa inside an entry may come in any order. Listing a subset twice is
    /// accepted only if both entries agree.
    pub fn build<I, S, T>(taxa: TaxonSet, alphabet: SymbolAlphabet, entries: I) -> Result<Self, TernaryError>
    where
        I: IntoIterator<Item = ([S; 3], T)>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let n = taxa.len();
        let mut slots: Vec<Option<SymbolId>> = vec![None; binom3(n)];
        for (triple, symbol) in entries {
            let names = triple.each_ref().map(|s| s.as_ref().to_string());
            let idx = [taxa.lookup(&names[0])?, taxa.lookup(&names[1])?, taxa.lookup(&names[2])?];
            if idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2] {
                return Err(TernaryError::RepeatedTaxon(names));
            }
            let symbol = symbol.as_ref();
            if symbol == crate::taxa::ODOT {
                return Err(TernaryError::OdotOnDistinct(names));
            }
            let id = alphabet.id_of(symbol).ok_or_else(|| TernaryError::UnknownSymbol(symbol.to_string()))?;
            let sorted = sort3(idx[0], idx[1], idx[2]);
            let slot = &mut slots[triple_rank(sorted)];
            match *slot {
                Some(prev) if prev != id => {
                    return Err(TernaryError::Conflict {
                        triple: taxa.names_of(&sorted).try_into().unwrap(),
                        first: alphabet.symbol(prev).to_string(),
                        second: symbol.to_string(),
                    });
                }
                _ => *slot = Some(id),
            }
        }
        let missing: Vec<[String; 3]> = (0..n)
            .tuple_combinations()
            .filter(|&(i, j, k)| slots[triple_rank([i, j, k])].is_none())
            .map(|(i, j, k)| taxa.names_of(&[i, j, k]).try_into().unwrap())
            .collect();
        if !missing.is_empty() {
            return Err(TernaryError::Incomplete { expected: slots.len(), missing });
        }
        let values = slots.into_iter().map(Option::unwrap).collect();
        Ok(TernaryMap { taxa, alphabet, values })
    }

    /// Builds a map by evaluating `f` on every sorted triple `i < j < k`.
    pub fn from_fn(
        taxa: TaxonSet,
        alphabet: SymbolAlphabet,
        mut f: impl FnMut(usize, usize, usize) -> SymbolId,
    ) -> Self {
        let n = taxa.len();
        let mut values = vec![SymbolId(0); binom3(n)];
        for (i, j, k) in (0..n).tuple_combinations() {
            let v = f(i, j, k);
            assert!(v.index() < alphabet.len(), "symbol id out of range");
            values[triple_rank([i, j, k])] = v;
        }
        TernaryMap { taxa, alphabet, values }
    }

    /// Builds a map from values in colex rank order.
    pub(crate) fn from_ranked(taxa: TaxonSet, alphabet: SymbolAlphabet, values: Vec<SymbolId>) -> Self {
        debug_assert_eq!(values.len(), binom3(taxa.len()));
        TernaryMap { taxa, alphabet, values }
    }

    /// A map with the same value on every triple.
    pub fn constant(taxa: TaxonSet, symbol: &str) -> Result<Self, TernaryError> {
        let alphabet = SymbolAlphabet::new([symbol])?;
        Ok(Self::from_fn(taxa, alphabet, |_, _, _| SymbolId(0)))
    }

    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    pub fn alphabet(&self) -> &SymbolAlphabet {
        &self.alphabet
    }

    /// Number of taxa.
    pub fn n(&self) -> usize {
        self.taxa.len()
    }

    /// Value on three taxon names; `None` stands for ⊙ (some name repeats).
    pub fn get(&self, x: &str, y: &str, z: &str) -> Result<Option<&str>, TernaryError> {
        let (i, j, k) = (self.taxa.lookup(x)?, self.taxa.lookup(y)?, self.taxa.lookup(z)?);
        Ok(self.value(i, j, k).map(|id| self.alphabet.symbol(id)))
    }

    /// Value on three taxon indices; `None` stands for ⊙.
    #[inline]
    pub fn value(&self, i: usize, j: usize, k: usize) -> Option<SymbolId> {
        if i == j || j == k || i == k {
            None
        } else {
            Some(self.values[triple_rank(sort3(i, j, k))])
        }
    }

    /// Value on three distinct taxon indices.
    #[inline]
    pub fn sym(&self, i: usize, j: usize, k: usize) -> SymbolId {
        debug_assert!(i != j && j != k && i != k);
        self.values[triple_rank(sort3(i, j, k))]
    }

    pub fn symbol_name(&self, id: SymbolId) -> &str {
        self.alphabet.symbol(id)
    }

    /// All stored triples in lexicographic order of sorted indices.
    pub fn entries(&self) -> impl Iterator<Item = ([usize; 3], SymbolId)> + '_ {
        (0..self.n()).tuple_combinations().map(move |(i, j, k)| ([i, j, k], self.values[triple_rank([i, j, k])]))
    }

    /// Named entries, the inverse of [`TernaryMap::build`].
    pub fn named_entries(&self) -> Vec<([String; 3], String)> {
        self.entries()
            .map(|(t, v)| (self.taxa.names_of(&t).try_into().unwrap(), self.alphabet.symbol(v).to_string()))
            .collect()
    }

    /// Symbols that occur on at least one triple, in alphabet order.
    pub fn used_symbols(&self) -> Vec<SymbolId> {
        let mut seen = vec![false; self.alphabet.len()];
        for v in &self.values {
            seen[v.index()] = true;
        }
        self.alphabet.ids().filter(|id| seen[id.index()]).collect()
    }

    /// Restriction to the named subset.
    pub fn restrict<S: AsRef<str>>(&self, subset: &[S]) -> Result<Self, TernaryError> {
        let idx = subset.iter().map(|s| self.taxa.lookup(s.as_ref())).collect::<Result<Vec<_>, _>>()?;
        self.restrict_indices(&idx)
    }

    /// Restriction to a subset given by taxon indices.
    pub fn restrict_indices(&self, subset: &[usize]) -> Result<Self, TernaryError> {
        if subset.len() < 3 {
            return Err(TernaryError::SubsetSize { got: subset.len(), expected: "at least 3" });
        }
        let names: Vec<String> = subset
            .iter()
            .map(|&i| {
                if i < self.n() {
                    Ok(self.taxa.name(i).to_string())
                } else {
                    Err(TernaryError::UnknownTaxon(format!("#{i}")))
                }
            })
            .collect::<Result<_, _>>()?;
        let taxa = TaxonSet::with_composites(names)?;
        let back: Vec<usize> = taxa.iter().map(|name| self.taxa.index_of(name).unwrap()).collect();
        Ok(Self::from_fn(taxa, self.alphabet.clone(), |i, j, k| self.sym(back[i], back[j], back[k])))
    }

    /// First sorted triple on which the two maps disagree. Symbols are
    /// compared by name, not by id.
    pub fn first_difference(&self, other: &TernaryMap) -> Result<Option<[usize; 3]>, TernaryError> {
        if self.taxa != other.taxa {
            return Err(TernaryError::DifferentTaxa);
        }
        // Translate ids once; symbols compare by name.
        let translate: HashMap<SymbolId, Option<SymbolId>> =
            self.alphabet.ids().map(|id| (id, other.alphabet.id_of(self.alphabet.symbol(id)))).collect();
        Ok(self.entries().find(|&(t, v)| translate[&v] != Some(other.sym(t[0], t[1], t[2]))).map(|(t, _)| t))
    }

    /// True iff both maps are on the same taxa and assign the same symbol
    /// names to every triple (declared alphabets may differ).
    pub fn same_values(&self, other: &TernaryMap) -> bool {
        matches!(self.first_difference(other), Ok(None))
    }

    /// Relabels symbols so the alphabet consists exactly of the used ones.
    pub fn compact(&self) -> Self {
        let used = self.used_symbols();
        let alphabet = SymbolAlphabet::new(used.iter().map(|&id| self.alphabet.symbol(id).to_string())).unwrap();
        let mut remap = vec![SymbolId(0); self.alphabet.len()];
        for (new, old) in used.iter().enumerate() {
            remap[old.index()] = SymbolId(new as u32);
        }
        let values = self.values.iter().map(|v| remap[v.index()]).collect();
        TernaryMap { taxa: self.taxa.clone(), alphabet, values }
    }
}
