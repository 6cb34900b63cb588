//! Triple-table text format.
//!
//! ```text
//! # comment
//! taxa: x y z u
//! symbols: a b
//! x y z a
//! x y u a
//! x z u b
//! y z u b
//! ```
//!
//! Both header lines come before any data line. Each data line names three
//! distinct taxa (any order) and a symbol. Everything after `#` is ignored.

use crate::error::TableError;
use crate::taxa::{SymbolAlphabet, TaxonSet};
use crate::ternary::TernaryMap;

pub fn parse_table(text: &str) -> Result<TernaryMap, TableError> {
    let mut taxa: Option<TaxonSet> = None;
    let mut symbols: Option<SymbolAlphabet> = None;
    let mut entries: Vec<([String; 3], String)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| TableError::Syntax { line, message };
        if let Some(rest) = content.strip_prefix("taxa:") {
            if taxa.is_some() {
                return Err(syntax("duplicate taxa header".into()));
            }
            if !entries.is_empty() {
                return Err(syntax("taxa header after data lines".into()));
            }
            taxa = Some(TaxonSet::new(rest.split_whitespace())?);
            continue;
        }
        if let Some(rest) = content.strip_prefix("symbols:") {
            if symbols.is_some() {
                return Err(syntax("duplicate symbols header".into()));
            }
            if !entries.is_empty() {
                return Err(syntax("symbols header after data lines".into()));
            }
            symbols = Some(SymbolAlphabet::new(rest.split_whitespace())?);
            continue;
        }
        if taxa.is_none() || symbols.is_none() {
            return Err(syntax("data line before the taxa and symbols headers".into()));
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let [x, y, z, s] = fields[..] else {
            return Err(syntax(format!("expected `x y z symbol`, found {} fields", fields.len())));
        };
        entries.push(([x.into(), y.into(), z.into()], s.into()));
    }

    let taxa = taxa.ok_or(TableError::Syntax { line: 0, message: "missing taxa header".into() })?;
    let symbols = symbols.ok_or(TableError::Syntax { line: 0, message: "missing symbols header".into() })?;
    Ok(TernaryMap::build(taxa, symbols, entries)?)
}

/// Writes the canonical table: taxa sorted, one line per 3-subset in
/// lexicographic order.
pub fn write_table(map: &TernaryMap) -> String {
    let mut out = String::new();
    out.push_str(&format!("taxa: {}\n", map.taxa()));
    out.push_str(&format!("symbols: {}\n", map.alphabet()));
    for ([i, j, k], v) in map.entries() {
        let t = map.taxa();
        out.push_str(&format!("{} {} {} {}\n", t.name(i), t.name(j), t.name(k), map.symbol_name(v)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::TernaryError;

    const QUARTET: &str =
        "# quartet xy|zu\ntaxa: x y z u\nsymbols: a b\nx y z a\nu y x a # trailing comment\nx z u b\n\ny z u b\n";

    #[test]
    fn parses_any_order() {
        let m = parse_table(QUARTET).unwrap();
        assert_eq!(m.get("y", "u", "x").unwrap(), Some("a"));
        assert_eq!(m.get("u", "z", "y").unwrap(), Some("b"));
    }

    #[test]
    fn roundtrip_is_identity() {
        let m = parse_table(QUARTET).unwrap();
        let text = write_table(&m);
        assert!(text.starts_with("taxa: u x y z\nsymbols: a b\n"));
        assert_eq!(parse_table(&text).unwrap(), m);
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_table("taxa: x y z\nsymbols: a\nx y a\n").unwrap_err();
        assert!(matches!(err, TableError::Syntax { line: 3, .. }));
        let err = parse_table("x y z a\ntaxa: x y z\n").unwrap_err();
        assert!(matches!(err, TableError::Syntax { line: 1, .. }));
        assert!(parse_table("symbols: a\n").is_err());
    }

    #[test]
    fn missing_triple_is_content_error() {
        let err = parse_table("taxa: x y z u\nsymbols: a\nx y z a\nx y u a\nx z u a\n").unwrap_err();
        assert!(matches!(err, TableError::Content(TernaryError::Incomplete { .. })));
    }
}
