//! Python bindings. Polynomials cross the boundary as coefficient lists
//! (Python ints, so nothing overflows); γ-vectors as lists of γ_j.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use forest::binary_trees::{self, NormalizedTree};
use forest::rooted_trees::{self, PruferCode, RootedTree};
use forest::stirling::{self, StirlingPermutation};
use forest::verify::{cmd_verify, Suite};
use forest::{poly, symfunc, Config, GammaVector, IntPolynomial};

fn value_error(e: forest::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn config(threads: Option<usize>, cap_override: bool) -> Config {
    Config {
        threads,
        cap_override,
    }
}

fn coeffs(p: &IntPolynomial) -> Vec<BigInt> {
    p.coeffs().to_vec()
}

fn gammas(g: &GammaVector) -> Vec<BigInt> {
    g.gammas().to_vec()
}

/// Coefficients of `T_n(t)` from the product formula.
#[pyfunction]
fn drake_polynomial(n: usize) -> PyResult<Vec<BigInt>> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be at least 1"));
    }
    Ok(coeffs(&poly::drake_polynomial(n)))
}

/// γ-vector of `T_n(t)` from the subset-sum formula.
#[pyfunction]
fn gamma_closed_form(n: usize) -> PyResult<Vec<BigInt>> {
    if n == 0 || n > 120 {
        return Err(PyValueError::new_err("n must be in 1..=120"));
    }
    Ok(gammas(&poly::gamma_closed_form(n)))
}

/// γ-coordinates of a palindromic polynomial given by its coefficients.
#[pyfunction]
fn to_gamma_basis(coefficients: Vec<BigInt>) -> PyResult<Vec<BigInt>> {
    let g = poly::to_gamma_basis(&IntPolynomial::new(coefficients)).map_err(value_error)?;
    Ok(gammas(&g))
}

#[pyfunction]
fn from_gamma_basis(degree: usize, gamma: Vec<BigInt>) -> PyResult<Vec<BigInt>> {
    let g = GammaVector::new(degree, gamma).map_err(value_error)?;
    Ok(coeffs(&poly::from_gamma_basis(&g)))
}

/// `T_n(t)` by enumerating every rooted tree on `[n]`.
#[pyfunction]
#[pyo3(signature = (n, threads=None, cap_override=false))]
fn descent_polynomial(
    n: usize,
    threads: Option<usize>,
    cap_override: bool,
) -> PyResult<Vec<BigInt>> {
    let p = rooted_trees::descent_polynomial_with(n, &config(threads, cap_override))
        .map_err(value_error)?;
    Ok(coeffs(&p))
}

#[pyfunction]
#[pyo3(signature = (n, cap_override=false))]
fn eulerian_polynomial(n: usize, cap_override: bool) -> PyResult<Vec<BigInt>> {
    Ok(coeffs(
        &poly::eulerian_polynomial_with(n, cap_override).map_err(value_error)?,
    ))
}

#[pyfunction]
#[pyo3(signature = (n, cap_override=false))]
fn eulerian_gamma_count(n: usize, cap_override: bool) -> PyResult<Vec<BigInt>> {
    Ok(gammas(
        &poly::eulerian_gamma_count_with(n, cap_override).map_err(value_error)?,
    ))
}

/// Tally of a filtered family by its statistic: `"ndrd_rdes"`, `"ndnl_nlyn"`
/// (trees on `[n]`), or `"naas_aapair"`, `"ntns_tnpair"` (words in `Q_n`).
#[pyfunction]
#[pyo3(signature = (kind, n, threads=None, cap_override=false))]
fn distribution(
    kind: &str,
    n: usize,
    threads: Option<usize>,
    cap_override: bool,
) -> PyResult<Vec<BigInt>> {
    let config = config(threads, cap_override);
    let g = match kind {
        "ndrd_rdes" => binary_trees::distribution_ndrd_rdes_with(n, &config),
        "ndnl_nlyn" => binary_trees::distribution_ndnl_nlyn_with(n, &config),
        "naas_aapair" => stirling::distribution_naas_aapair_with(n, &config),
        "ntns_tnpair" => stirling::distribution_ntns_tnpair_with(n, &config),
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown distribution {other:?}"
            )))
        }
    }
    .map_err(value_error)?;
    Ok(gammas(&g))
}

/// Number of bicolored combs (`"combs"`) or bicolored Lyndon trees
/// (`"lyndon"`) on `[n]` by count of nodes colored 1.
#[pyfunction]
#[pyo3(signature = (kind, n, threads=None, cap_override=false))]
fn bicolored_polynomial(
    kind: &str,
    n: usize,
    threads: Option<usize>,
    cap_override: bool,
) -> PyResult<Vec<BigInt>> {
    let config = config(threads, cap_override);
    let p = match kind {
        "combs" => binary_trees::bicolored_comb_polynomial(n, &config),
        "lyndon" => binary_trees::bicolored_lyndon_polynomial(n, &config),
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    }
    .map_err(value_error)?;
    Ok(coeffs(&p))
}

fn tuple_keyed<'py, K: AsRef<[u32]>>(
    py: Python<'py>,
    terms: impl IntoIterator<Item = (K, BigInt)>,
) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    for (key, c) in terms {
        dict.set_item(PyTuple::new(py, key.as_ref())?, c)?;
    }
    Ok(dict)
}

/// `{partition: count}` of normalized trees on `[n]` by comb type.
#[pyfunction]
#[pyo3(signature = (n, threads=None, cap_override=false))]
fn comb_type_expansion<'py>(
    py: Python<'py>,
    n: usize,
    threads: Option<usize>,
    cap_override: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let e = symfunc::comb_type_expansion_with(n, &config(threads, cap_override))
        .map_err(value_error)?;
    tuple_keyed(
        py,
        e.terms()
            .iter()
            .map(|(l, c)| (l.parts().to_vec(), c.clone())),
    )
}

/// `{exponent vector: coefficient}` of the colored-comb generating function
/// in `k` variables.
#[pyfunction]
#[pyo3(signature = (n, k, threads=None, cap_override=false))]
fn f_mcomb_direct<'py>(
    py: Python<'py>,
    n: usize,
    k: usize,
    threads: Option<usize>,
    cap_override: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let f =
        symfunc::f_mcomb_direct_with(n, k, &config(threads, cap_override)).map_err(value_error)?;
    tuple_keyed(py, f.terms().clone())
}

/// Expands `Σ c_λ e_λ` (a `{partition: coefficient}` dict) in `k` variables.
#[pyfunction]
fn expand_in_variables<'py>(
    py: Python<'py>,
    expansion: BTreeMap<Vec<u32>, BigInt>,
    k: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let weight = expansion
        .keys()
        .next()
        .map_or(0, |l| l.iter().map(|&p| p as usize).sum());
    let e = symfunc::ESymExpansion::from_terms(
        weight,
        expansion
            .into_iter()
            .map(|(l, c)| (symfunc::Partition::new(l), c)),
    )
    .map_err(value_error)?;
    tuple_keyed(py, e.to_variables(k).terms().clone())
}

/// Runs a verification suite; returns `(ok, report_text)`.
#[pyfunction]
#[pyo3(signature = (suite="all", n_max=5, threads=None, cap_override=false))]
fn verify(
    suite: &str,
    n_max: usize,
    threads: Option<usize>,
    cap_override: bool,
) -> PyResult<(bool, String)> {
    let suite: Suite = suite.parse().map_err(value_error)?;
    let report = cmd_verify(suite, n_max, &config(threads, cap_override)).map_err(value_error)?;
    Ok((report.is_success(), report.render_text(false)))
}

#[pyclass(name = "RootedTree", module = "gamma_forest", frozen)]
struct PyRootedTree(RootedTree);

#[pymethods]
impl PyRootedTree {
    /// Tree on `[n]` with the given root from a Prüfer sequence of length
    /// `n - 2`.
    #[staticmethod]
    fn from_prufer(n: usize, root: u32, seq: Vec<u32>) -> PyResult<Self> {
        let code = PruferCode::new(n, seq).map_err(value_error)?;
        RootedTree::from_edges(n, root, &code.decode())
            .map(PyRootedTree)
            .map_err(value_error)
    }

    /// Every rooted tree on `[n]`.
    #[staticmethod]
    fn all(n: usize) -> PyResult<Vec<PyRootedTree>> {
        Ok(rooted_trees::enumerate_rooted_trees(n)
            .map_err(value_error)?
            .map(PyRootedTree)
            .collect())
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn root(&self) -> u32 {
        self.0.root()
    }

    /// `(parent, child)` pairs sorted by child.
    fn edges(&self) -> Vec<(u32, u32)> {
        self.0.edges()
    }

    fn des(&self) -> usize {
        self.0.des()
    }

    /// Relabels `i -> n + 1 - i`.
    fn complement(&self) -> PyRootedTree {
        PyRootedTree(self.0.complement())
    }

    fn __repr__(&self) -> String {
        format!(
            "RootedTree(root={}, edges={:?})",
            self.0.root(),
            self.0.edges()
        )
    }

    fn __eq__(&self, other: &PyRootedTree) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "NormalizedTree", module = "gamma_forest", frozen)]
struct PyNormalizedTree(NormalizedTree);

#[pymethods]
impl PyNormalizedTree {
    /// Parses `"(1,(2,3))"`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        NormalizedTree::parse(text)
            .map(PyNormalizedTree)
            .map_err(value_error)
    }

    #[staticmethod]
    fn all(n: usize) -> PyResult<Vec<PyNormalizedTree>> {
        Ok(binary_trees::enumerate_normalized(n)
            .map_err(value_error)?
            .map(PyNormalizedTree)
            .collect())
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn rdes(&self) -> usize {
        self.0.rdes()
    }

    fn nlyn(&self) -> usize {
        self.0.nlyn()
    }

    fn free_count(&self) -> usize {
        self.0.free_count()
    }

    fn is_ndrd(&self) -> bool {
        self.0.is_ndrd()
    }

    fn is_ndnl(&self) -> bool {
        self.0.is_ndnl()
    }

    fn is_lyndon_tree(&self) -> bool {
        self.0.is_lyndon_tree()
    }

    fn comb_type(&self) -> Vec<u32> {
        self.0.comb_type().parts().to_vec()
    }

    /// Number of bicolored combs over this tree.
    fn comb_fiber_size(&self) -> u64 {
        self.0.comb_fiber().map_or(0, |f| f.size())
    }

    fn lyndon_fiber_size(&self) -> u64 {
        self.0.lyndon_fiber().map_or(0, |f| f.size())
    }

    fn insertion_code(&self) -> Vec<usize> {
        self.0.insertion_code()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("NormalizedTree({:?})", self.0.to_string())
    }

    fn __eq__(&self, other: &PyNormalizedTree) -> bool {
        self.0 == other.0
    }
}

#[pyclass(name = "StirlingPermutation", module = "gamma_forest", frozen)]
struct PyStirlingPermutation(StirlingPermutation);

#[pymethods]
impl PyStirlingPermutation {
    /// Parses `"1221"` or `"1,2,2,1"`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        StirlingPermutation::parse(text)
            .map(PyStirlingPermutation)
            .map_err(value_error)
    }

    #[staticmethod]
    fn all(n: usize) -> PyResult<Vec<PyStirlingPermutation>> {
        Ok(stirling::enumerate_stirling(n)
            .map_err(value_error)?
            .map(PyStirlingPermutation)
            .collect())
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn word(&self) -> Vec<u32> {
        self.0.word().to_vec()
    }

    fn aapair(&self) -> usize {
        self.0.aapair()
    }

    fn tnpair(&self) -> usize {
        self.0.tnpair()
    }

    fn is_naas(&self) -> bool {
        self.0.is_naas()
    }

    fn is_ntns(&self) -> bool {
        self.0.is_ntns()
    }

    fn ascending_adjacent_pairs(&self) -> Vec<(u32, u32)> {
        self.0.ascending_adjacent_pairs()
    }

    fn terminally_nested_pairs(&self) -> Vec<(u32, u32)> {
        self.0.terminally_nested_pairs()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("StirlingPermutation({:?})", self.0.to_string())
    }

    fn __eq__(&self, other: &PyStirlingPermutation) -> bool {
        self.0 == other.0
    }
}

#[pymodule]
fn gamma_forest(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(drake_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(to_gamma_basis, m)?)?;
    m.add_function(wrap_pyfunction!(from_gamma_basis, m)?)?;
    m.add_function(wrap_pyfunction!(descent_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(eulerian_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(eulerian_gamma_count, m)?)?;
    m.add_function(wrap_pyfunction!(distribution, m)?)?;
    m.add_function(wrap_pyfunction!(bicolored_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(comb_type_expansion, m)?)?;
    m.add_function(wrap_pyfunction!(f_mcomb_direct, m)?)?;
    m.add_function(wrap_pyfunction!(expand_in_variables, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_class::<PyRootedTree>()?;
    m.add_class::<PyNormalizedTree>()?;
    m.add_class::<PyStirlingPermutation>()?;
    Ok(())
}
