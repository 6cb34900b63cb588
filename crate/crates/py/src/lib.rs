//! Python bindings for `symtern`.
//!
//! ```python
//! import pysymtern as st
//! tree = st.ColoredTree.from_newick("((x1,x2)a,y,(z1,z2)c)b;")
//! m = tree.encode()
//! assert st.verify_metric(m).verdict
//! assert st.reconstruct(m).isomorphic(tree)
//! ```

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use symtern::oracle;
use symtern::{checks, SymbolAlphabet, TaxonSet, ODOT};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A symmetric map from 3-subsets of taxa to symbols.
#[pyclass(name = "TernaryMap", module = "pysymtern", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTernaryMap {
    inner: symtern::TernaryMap,
}

#[pymethods]
impl PyTernaryMap {
    /// Builds a map from `(x, y, z, symbol)` entries covering every 3-subset.
    #[new]
    fn new(taxa: Vec<String>, symbols: Vec<String>, entries: Vec<(String, String, String, String)>) -> PyResult<Self> {
        let taxa = TaxonSet::new(taxa).map_err(value_error)?;
        let alphabet = SymbolAlphabet::new(symbols).map_err(value_error)?;
        let inner = symtern::TernaryMap::build(taxa, alphabet, entries.into_iter().map(|(x, y, z, s)| ([x, y, z], s)))
            .map_err(value_error)?;
        Ok(PyTernaryMap { inner })
    }

    /// Parses the triple-table text format.
    #[staticmethod]
    fn from_table(text: &str) -> PyResult<Self> {
        symtern::parse_table(text).map(|inner| PyTernaryMap { inner }).map_err(value_error)
    }

    fn to_table(&self) -> String {
        symtern::write_table(&self.inner)
    }

    /// Value on `{x, y, z}`; `⊙` when a taxon repeats.
    fn get(&self, x: &str, y: &str, z: &str) -> PyResult<String> {
        match self.inner.get(x, y, z).map_err(value_error)? {
            Some(s) => Ok(s.to_string()),
            None => Ok(ODOT.to_string()),
        }
    }

    #[getter]
    fn taxa(&self) -> Vec<String> {
        self.inner.taxa().names().to_vec()
    }

    #[getter]
    fn symbols(&self) -> Vec<String> {
        self.inner.alphabet().symbols().to_vec()
    }

    fn restrict(&self, taxa: Vec<String>) -> PyResult<Self> {
        self.inner.restrict(&taxa).map(|inner| PyTernaryMap { inner }).map_err(value_error)
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner.same_values(&other.inner)
    }

    fn __repr__(&self) -> String {
        format!("TernaryMap(taxa=[{}], symbols=[{}])", self.inner.taxa(), self.inner.alphabet())
    }
}

/// An unrooted tree with colored interior vertices.
#[pyclass(name = "ColoredTree", module = "pysymtern", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyColoredTree {
    inner: symtern::ColoredTree,
}

#[pymethods]
impl PyColoredTree {
    #[staticmethod]
    fn from_newick(text: &str) -> PyResult<Self> {
        symtern::parse_newick(text).map(|inner| PyColoredTree { inner }).map_err(value_error)
    }

    /// Canonical Newick text.
    fn to_newick(&self) -> String {
        self.inner.to_newick()
    }

    fn to_dot(&self) -> String {
        self.inner.to_dot()
    }

    fn encode(&self) -> PyTernaryMap {
        PyTernaryMap { inner: self.inner.encode() }
    }

    #[getter]
    fn taxa(&self) -> Vec<String> {
        self.inner.taxa().names().to_vec()
    }

    /// Color of the median of three taxa.
    fn median(&self, x: &str, y: &str, z: &str) -> PyResult<String> {
        let v = self.inner.median(x, y, z).map_err(value_error)?;
        Ok(self.inner.color(v).unwrap_or_default().to_string())
    }

    fn displayed_quartets(&self) -> Vec<((String, String), (String, String))> {
        quartet_tuples(&self.inner.displayed_quartets())
    }

    fn pseudo_cherries(&self) -> Vec<Vec<String>> {
        self.inner.pseudo_cherries()
    }

    fn is_discriminating(&self) -> bool {
        self.inner.is_discriminating()
    }

    fn is_binary(&self) -> bool {
        self.inner.is_binary()
    }

    fn isomorphic(&self, other: &Self) -> PyResult<bool> {
        self.inner.isomorphic(&other.inner).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("ColoredTree({:?})", self.inner.to_newick())
    }
}

/// Result of [`verify_metric`].
#[pyclass(name = "MetricReport", module = "pysymtern", frozen)]
struct PyMetricReport {
    #[pyo3(get)]
    verdict: bool,
    /// `(condition, taxa, detail)` per violation.
    #[pyo3(get)]
    violations: Vec<(String, Vec<String>, String)>,
    text: String,
}

#[pymethods]
impl PyMetricReport {
    fn __str__(&self) -> String {
        self.text.clone()
    }

    fn __bool__(&self) -> bool {
        self.verdict
    }
}

fn quartet_tuples(system: &symtern::QuartetSystem) -> Vec<((String, String), (String, String))> {
    let taxa = system.taxa();
    let name = |i: usize| taxa.name(i).to_string();
    system
        .sorted()
        .iter()
        .map(|q| {
            let [[a, b], [c, d]] = q.pairs();
            ((name(a), name(b)), (name(c), name(d)))
        })
        .collect()
}

fn parse_star(star: Option<&str>) -> PyResult<Option<checks::StarMode>> {
    match star {
        None => Ok(None),
        Some("strict") => Ok(Some(checks::StarMode::Strict)),
        Some("loose") => Ok(Some(checks::StarMode::Loose)),
        Some(other) => Err(PyValueError::new_err(format!("star must be 'strict' or 'loose', not {other:?}"))),
    }
}

/// Checks the 4- and 5-point conditions; `star="strict"` or `"loose"` also
/// reports 4-sets that no fifth taxon resolves.
#[pyfunction]
#[pyo3(signature = (map, fail_fast = false, star = None))]
fn verify_metric(map: &PyTernaryMap, fail_fast: bool, star: Option<&str>) -> PyResult<PyMetricReport> {
    let options = checks::VerifyOptions { fail_fast, star: parse_star(star)? };
    let report = symtern::verify_metric(&map.inner, &options);
    let taxa = report.taxa();
    let violations = report
        .violations
        .iter()
        .map(|v| (v.condition.to_string(), taxa.names_of(&v.subset), v.detail.clone()))
        .collect();
    Ok(PyMetricReport { verdict: report.verdict, violations, text: report.to_string() })
}

#[pyfunction]
fn generate_quartets(map: &PyTernaryMap) -> Vec<((String, String), (String, String))> {
    quartet_tuples(&symtern::generate_quartets(&map.inner))
}

/// Rebuilds the tree of a metric; raises `ValueError` with a witness otherwise.
#[pyfunction]
fn reconstruct(map: &PyTernaryMap) -> PyResult<PyColoredTree> {
    symtern::reconstruct_tree(&map.inner).map(|inner| PyColoredTree { inner }).map_err(value_error)
}

/// Like [`reconstruct`], also returning one `CONTRACT` line per step.
#[pyfunction]
fn reconstruct_with_trace(map: &PyTernaryMap) -> PyResult<(PyColoredTree, Vec<String>)> {
    let r = symtern::reconstruct_with_trace(&map.inner).map_err(value_error)?;
    let steps = r.steps.iter().map(ToString::to_string).collect();
    Ok((PyColoredTree { inner: r.tree }, steps))
}

#[pyfunction]
fn check_binary(map: &PyTernaryMap) -> bool {
    symtern::check_binary(&map.inner)
}

/// All discriminating colored trees on `t1..tn` with at most `k` colors.
#[pyfunction]
fn enumerate_colored_trees(n: usize, k: usize) -> PyResult<Vec<PyColoredTree>> {
    let trees = oracle::corpus(n, k, usize::MAX).map_err(value_error)?;
    Ok(trees.into_iter().map(|inner| PyColoredTree { inner }).collect())
}

/// Canonical forms of all tree shapes on `t1..tn`.
#[pyfunction]
fn enumerate_trees(n: usize) -> PyResult<Vec<String>> {
    let trees = oracle::enumerate_trees(n).map_err(value_error)?;
    Ok(trees.iter().map(|t| t.canonical_form()).collect())
}

#[pyfunction]
fn brute_force_reconstruct(map: &PyTernaryMap) -> PyResult<Option<PyColoredTree>> {
    let found = oracle::brute_force_reconstruct(&map.inner).map_err(value_error)?;
    Ok(found.map(|inner| PyColoredTree { inner }))
}

/// A 6-taxon map passing the 4-point condition but generating two quartets
/// on each of two 4-sets.
#[pyfunction]
fn find_fig6_like() -> Option<PyTernaryMap> {
    oracle::find_fig6_like().map(|inner| PyTernaryMap { inner })
}

#[pymodule]
fn pysymtern(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTernaryMap>()?;
    m.add_class::<PyColoredTree>()?;
    m.add_class::<PyMetricReport>()?;
    m.add_function(wrap_pyfunction!(verify_metric, m)?)?;
    m.add_function(wrap_pyfunction!(generate_quartets, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct_with_trace, m)?)?;
    m.add_function(wrap_pyfunction!(check_binary, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_trees, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_colored_trees, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(find_fig6_like, m)?)?;
    m.add("ODOT", ODOT)?;
    Ok(())
}
