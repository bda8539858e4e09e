//! Python bindings: group specs, moment tensors (formula, dense exponential,
//! Haar, Monte Carlo), permutations and the verification suites.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use heatwg::coeff::q_to_f64;
use heatwg::heat::{self, bm_moment_tensor, expm_moment_tensor};
use heatwg::mc_oracle::{empirical_moment, SimConfig};
use heatwg::verify::{run_suite, Suite, VerifyOptions};
use heatwg::{weingarten, GroupFamily, GroupSpec, MomentTensor, Permutation, Q};

fn err(e: heatwg::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Group", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyGroup {
    inner: GroupSpec,
}

#[pymethods]
impl PyGroup {
    /// `family` is "O", "Sp" or "U".
    #[new]
    fn new(family: &str, n: usize) -> PyResult<Self> {
        let f: GroupFamily = family.parse().map_err(err)?;
        Ok(PyGroup { inner: GroupSpec::new(f, n).map_err(err)? })
    }

    #[getter]
    fn family(&self) -> String {
        self.inner.family.to_string()
    }

    #[getter(N)]
    fn big_n(&self) -> usize {
        self.inner.n
    }

    /// Dimension of the defining representation (2N for Sp).
    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim_v()
    }

    #[getter]
    fn lie_dim(&self) -> usize {
        self.inner.lie_dim()
    }

    #[getter]
    fn casimir_constant(&self) -> f64 {
        self.inner.casimir_constant()
    }

    fn __repr__(&self) -> String {
        format!("Group('{}', {})", self.inner.family, self.inner.n)
    }

    fn __eq__(&self, other: &PyGroup) -> bool {
        self.inner == other.inner
    }
}

/// A moment tensor, viewed as a side x side matrix over multi-indices.
#[pyclass(name = "Moment", frozen)]
pub struct PyMoment {
    inner: MomentTensor<f64>,
    exact: Option<MomentTensor<Q>>,
}

#[pymethods]
impl PyMoment {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn side(&self) -> usize {
        self.inner.side()
    }

    #[getter]
    fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Entry at 1-based multi-indices i, j.
    fn entry(&self, i: Vec<usize>, j: Vec<usize>) -> PyResult<f64> {
        self.inner.entry(&i, &j).map_err(err)
    }

    /// Exact entry as "p/q" (Haar moments only).
    fn exact_entry(&self, i: Vec<usize>, j: Vec<usize>) -> PyResult<String> {
        let e = self.exact.as_ref().ok_or_else(|| PyValueError::new_err("moment is not exact"))?;
        Ok(e.entry(&i, &j).map_err(err)?.to_string())
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        let a = self.inner.matrix();
        (0..a.nrows()).map(|r| a.row(r).iter().copied().collect()).collect()
    }

    fn max_abs_diff(&self, other: &PyMoment) -> PyResult<f64> {
        if self.inner.side() != other.inner.side() {
            return Err(PyValueError::new_err("shape mismatch"));
        }
        Ok(self.inner.max_abs_diff(&other.inner))
    }

    fn __repr__(&self) -> String {
        format!("Moment(n={}, m={}, side={})", self.inner.n(), self.inner.m(), self.inner.side())
    }
}

fn moment(inner: MomentTensor<f64>) -> PyMoment {
    PyMoment { inner, exact: None }
}

#[pyclass(name = "Permutation", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyPermutation {
    inner: Permutation,
}

#[pymethods]
impl PyPermutation {
    /// One-line notation, 1-based.
    #[new]
    fn new(images: Vec<usize>) -> PyResult<Self> {
        Ok(PyPermutation { inner: Permutation::from_images(&images).map_err(err)? })
    }

    fn images(&self) -> Vec<usize> {
        self.inner.images()
    }

    /// `a * b` applies b first.
    fn __mul__(&self, other: &PyPermutation) -> PyResult<PyPermutation> {
        Ok(PyPermutation { inner: self.inner.compose(&other.inner).map_err(err)? })
    }

    fn inverse(&self) -> PyPermutation {
        PyPermutation { inner: self.inner.inverse() }
    }

    fn signature(&self) -> i32 {
        self.inner.signature()
    }

    fn cycle_type(&self) -> Vec<usize> {
        self.inner.cycle_type()
    }

    fn __eq__(&self, other: &PyPermutation) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Permutation({:?})", self.inner.images())
    }
}

/// E[G_t^{⊗n} ⊗ conj(G_t)^{⊗m}] from the Brauer-algebra formula.
#[pyfunction]
#[pyo3(signature = (group, n, t, m = 0))]
fn bm_moment(group: &PyGroup, n: usize, t: f64, m: usize) -> PyResult<PyMoment> {
    Ok(moment(bm_moment_tensor(&group.inner, n, m, t).map_err(err)?))
}

/// Same moment via the dense matrix exponential of the Casimir.
#[pyfunction]
#[pyo3(signature = (group, n, t, m = 0))]
fn expm_moment(group: &PyGroup, n: usize, t: f64, m: usize) -> PyResult<PyMoment> {
    Ok(moment(expm_moment_tensor(&group.inner, n, m, t).map_err(err)?))
}

/// Haar moment with exact rational entries.
#[pyfunction]
#[pyo3(signature = (group, n, m = 0))]
fn haar_moment(group: &PyGroup, n: usize, m: usize) -> PyResult<PyMoment> {
    let q = weingarten::haar_moment(&group.inner, n, m).map_err(err)?;
    Ok(PyMoment { inner: q.map(q_to_f64), exact: Some(q) })
}

/// Monte Carlo estimate; returns (mean, standard error).
#[pyfunction]
#[pyo3(signature = (group, n, t, m = 0, paths = 10_000, step = 1.0 / 64.0, seed = 0, threads = 1))]
#[allow(clippy::too_many_arguments)]
fn mc_moment(
    py: Python<'_>,
    group: &PyGroup,
    n: usize,
    t: f64,
    m: usize,
    paths: usize,
    step: f64,
    seed: u64,
    threads: usize,
) -> PyResult<(PyMoment, PyMoment)> {
    let cfg = SimConfig::new(paths, step, t, seed).map_err(err)?.with_threads(threads);
    let g = group.inner;
    let e = py.detach(|| empirical_moment(&g, n, m, &cfg)).map_err(err)?;
    Ok((moment(e.mean), moment(e.stderr)))
}

/// The heat divided difference s_t(x_1, ..., x_k).
#[pyfunction]
fn s_t(t: f64, args: Vec<f64>) -> PyResult<f64> {
    if args.is_empty() {
        return Err(PyValueError::new_err("s_t needs at least one argument"));
    }
    Ok(heat::s_t_auto(t, &args))
}

/// Runs a verification suite; returns a dict with "suite", "passed" and "checks".
#[pyfunction]
#[pyo3(signature = (suite, seed = 0, mc_paths = None, mc_step = None, threads = 1))]
fn verify<'py>(
    py: Python<'py>,
    suite: &str,
    seed: u64,
    mc_paths: Option<usize>,
    mc_step: Option<f64>,
    threads: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let s: Suite = suite.parse().map_err(err)?;
    let mut opts = VerifyOptions { seed, threads, ..VerifyOptions::default() };
    if let Some(p) = mc_paths {
        opts.mc_paths = p;
    }
    if let Some(h) = mc_step {
        opts.mc_step = h;
    }
    let report = py.detach(|| run_suite(s, &opts)).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("suite", report.suite.name())?;
    out.set_item("passed", report.passed())?;
    out.set_item("max_deviation", report.max_deviation())?;
    let mut checks = Vec::with_capacity(report.checks.len());
    for c in &report.checks {
        let d = PyDict::new(py);
        d.set_item("name", &c.name)?;
        d.set_item("passed", c.passed)?;
        d.set_item("deviation", c.deviation)?;
        d.set_item("tolerance", c.tolerance)?;
        d.set_item("detail", &c.detail)?;
        checks.push(d);
    }
    out.set_item("checks", checks)?;
    Ok(out)
}

#[pymodule]
#[pyo3(name = "heatwg")]
pub fn heatwg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyMoment>()?;
    m.add_class::<PyPermutation>()?;
    m.add_function(wrap_pyfunction!(bm_moment, m)?)?;
    m.add_function(wrap_pyfunction!(expm_moment, m)?)?;
    m.add_function(wrap_pyfunction!(haar_moment, m)?)?;
    m.add_function(wrap_pyfunction!(mc_moment, m)?)?;
    m.add_function(wrap_pyfunction!(s_t, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("SUITES", ["algebra", "theorem", "haar-limit", "haar-values", "so-correction", "mc", "spectral"])?;
    Ok(())
}
