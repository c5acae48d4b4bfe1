//! Python bindings: `gpdef.Algebra`, `gpdef.Module` and a few module-level
//! functions over them. Reports are returned as plain dicts.

use std::sync::Arc;

use gpdef_core::algebra::{parse_algebra_with, Algebra};
use gpdef_core::deform::{self, DEFAULT_LEVEL_BOUND};
use gpdef_core::exactla::Field;
use gpdef_core::homalg::{self, default_reflexivity_bound, HomDim, Verdict, DEFAULT_GORENSTEIN_BOUND};
use gpdef_core::rep::{IsoResult, ModuleSpec, Rep};
use gpdef_core::{biserial, fixtures};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

create_exception!(gpdef, GpdefError, PyException, "Raised for any failure inside the gpdef library.");

fn py_err(e: gpdef_core::Error) -> PyErr {
    GpdefError::new_err(e.to_string())
}

fn to_dict<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| py_err(e.into()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn verdict(v: Verdict) -> Option<bool> {
    v.as_bool()
}

fn finite(d: HomDim) -> Option<usize> {
    d.finite()
}

/// A finite-dimensional quotient of a path algebra.
#[pyclass(name = "Algebra", module = "gpdef", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyAlgebra {
    inner: Arc<Algebra>,
}

impl PyAlgebra {
    pub fn inner(&self) -> &Arc<Algebra> {
        &self.inner
    }

    fn vertex(&self, name: &str) -> PyResult<usize> {
        self.inner.spec().vertex_index(name).map_err(py_err)
    }

    fn wrap(&self, m: Rep) -> PyRep {
        PyRep { inner: m }
    }
}

#[pymethods]
impl PyAlgebra {
    /// Parses the JSON algebra format; `field` ("Q", "F101", ...) overrides the file.
    #[staticmethod]
    #[pyo3(signature = (text, field = None))]
    fn from_json(text: &str, field: Option<&str>) -> PyResult<Self> {
        let field = field.map(|f| f.parse::<Field>()).transpose().map_err(py_err)?;
        let spec = parse_algebra_with(text, field).map_err(py_err)?;
        Ok(PyAlgebra { inner: Algebra::build(spec).map_err(py_err)? })
    }

    #[staticmethod]
    #[pyo3(signature = (path, field = None))]
    fn from_file(path: &str, field: Option<&str>) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| GpdefError::new_err(format!("{path}: {e}")))?;
        Self::from_json(&text, field)
    }

    /// One of the bundled algebras: "lambda0", "lambda1" or "lambda2".
    #[staticmethod]
    fn fixture(name: &str) -> PyResult<Self> {
        let inner = match name {
            "lambda0" => fixtures::lambda0(),
            "lambda1" => fixtures::lambda1(),
            "lambda2" => fixtures::lambda2(),
            _ => return Err(GpdefError::new_err(format!("unknown fixture `{name}`"))),
        };
        Ok(PyAlgebra { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.inner.spec().vertices.clone()
    }

    #[getter]
    fn arrows(&self) -> Vec<String> {
        self.inner.spec().arrows.iter().map(|a| a.name.clone()).collect()
    }

    #[getter]
    fn nilpotency(&self) -> usize {
        self.inner.nilpotency()
    }

    fn is_special_biserial(&self) -> bool {
        biserial::check_special_biserial(&self.inner).special_biserial
    }

    fn is_gentle(&self) -> bool {
        biserial::check_gentle(&self.inner).gentle
    }

    /// `(left injdim, right injdim)`; `None` where no bound was found.
    #[pyo3(signature = (bound = DEFAULT_GORENSTEIN_BOUND))]
    fn injective_dimensions(&self, bound: usize) -> PyResult<(Option<usize>, Option<usize>)> {
        let g = homalg::gorenstein_data(&self.inner, bound).map_err(py_err)?;
        Ok((finite(g.left_injdim), finite(g.right_injdim)))
    }

    /// Builds a module from its JSON description.
    fn module(&self, spec: &str) -> PyResult<PyRep> {
        let spec: ModuleSpec = serde_json::from_str(spec).map_err(|e| py_err(e.into()))?;
        Ok(self.wrap(spec.build(&self.inner).map_err(py_err)?))
    }

    fn simple(&self, vertex: &str) -> PyResult<PyRep> {
        Ok(self.wrap(Rep::simple(&self.inner, self.vertex(vertex)?)))
    }

    fn projective(&self, vertex: &str) -> PyResult<PyRep> {
        Ok(self.wrap(Rep::projective(&self.inner, self.vertex(vertex)?)))
    }

    /// String module of a word of arrow names; inverse letters end in "^-1".
    #[pyo3(signature = (word, vertex = None))]
    fn string_module(&self, word: Vec<String>, vertex: Option<&str>) -> PyResult<PyRep> {
        Ok(self.wrap(Rep::string_module(&self.inner, &word, vertex).map_err(py_err)?))
    }

    /// Indecomposable Gorenstein-projectives as `(label, module)` pairs.
    fn classify_gproj(&self) -> PyResult<Vec<(String, PyRep)>> {
        let entries = biserial::classify_gproj_gentle(&self.inner).map_err(py_err)?;
        Ok(entries.into_iter().map(|e| (e.label, PyRep { inner: e.module })).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Algebra(vertices={}, arrows={}, dim={}, field={})",
            self.inner.num_vertices(),
            self.inner.spec().num_arrows(),
            self.inner.dim(),
            self.inner.field()
        )
    }
}

/// A finite-dimensional module given as a quiver representation.
#[pyclass(name = "Module", module = "gpdef", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyRep {
    inner: Rep,
}

impl PyRep {
    pub fn inner(&self) -> &Rep {
        &self.inner
    }
}

fn same_algebra(m: &Rep, n: &Rep) -> PyResult<()> {
    if Arc::ptr_eq(m.algebra(), n.algebra()) {
        Ok(())
    } else {
        Err(py_err(gpdef_core::Error::AlgebraMismatch))
    }
}

#[pymethods]
impl PyRep {
    #[getter]
    fn dims(&self) -> Vec<usize> {
        self.inner.dims().to_vec()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn is_projective(&self) -> bool {
        homalg::is_projective(&self.inner)
    }

    /// `None` when the check is inconclusive within `bound`.
    #[pyo3(signature = (bound = None))]
    fn is_gorenstein_projective(&self, bound: Option<usize>) -> Option<bool> {
        let bound = bound.unwrap_or_else(|| default_reflexivity_bound(self.inner.algebra()));
        verdict(homalg::is_gorenstein_projective(&self.inner, bound))
    }

    /// `None` when the search was inconclusive.
    #[pyo3(signature = (other, seed = 0))]
    fn is_isomorphic(&self, other: &PyRep, seed: u64) -> PyResult<Option<bool>> {
        same_algebra(&self.inner, &other.inner)?;
        Ok(match self.inner.is_isomorphic(&other.inner, seed) {
            IsoResult::Yes(_) => Some(true),
            IsoResult::No(_) => Some(false),
            IsoResult::Inconclusive => None,
        })
    }

    /// `Ω^power` of the module, by default with projective summands removed.
    #[pyo3(signature = (power = 1, strip = true))]
    fn syzygy(&self, power: usize, strip: bool) -> PyResult<PyRep> {
        let s = homalg::syzygy(&self.inner, power).map_err(py_err)?;
        let s = if strip { homalg::strip_projective_summands(&s).0 } else { s };
        Ok(PyRep { inner: s })
    }

    fn direct_sum(&self, other: &PyRep) -> PyResult<PyRep> {
        same_algebra(&self.inner, &other.inner)?;
        Ok(PyRep { inner: self.inner.direct_sum(&other.inner).map_err(py_err)? })
    }

    /// Versal deformation report as a dict.
    #[pyo3(signature = (level_bound = DEFAULT_LEVEL_BOUND, seed = 0))]
    fn versal_report<'py>(&self, py: Python<'py>, level_bound: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let r = deform::versal_report(&self.inner, level_bound, seed).map_err(py_err)?;
        to_dict(py, &r)
    }

    fn __repr__(&self) -> String {
        format!("Module(dims={:?})", self.inner.dims())
    }
}

#[pyfunction]
fn hom_dim(m: &PyRep, n: &PyRep) -> PyResult<usize> {
    same_algebra(&m.inner, &n.inner)?;
    Ok(homalg::hom_basis(&m.inner, &n.inner).dim())
}

#[pyfunction]
#[pyo3(signature = (m, n, degree = 1))]
fn ext_dim(m: &PyRep, n: &PyRep, degree: usize) -> PyResult<usize> {
    same_algebra(&m.inner, &n.inner)?;
    Ok(homalg::ext(&m.inner, &n.inner, degree).dim)
}

#[pyfunction]
fn stable_hom_dim(m: &PyRep, n: &PyRep) -> PyResult<usize> {
    same_algebra(&m.inner, &n.inner)?;
    Ok(homalg::stable_hom(&m.inner, &n.inner).quotient_dim)
}

#[pyfunction]
#[pyo3(signature = (m, level_bound = DEFAULT_LEVEL_BOUND, seed = 0))]
fn versal_report<'py>(py: Python<'py>, m: &PyRep, level_bound: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    m.versal_report(py, level_bound, seed)
}

/// Reports for `m` and `Ω m` side by side.
#[pyfunction]
#[pyo3(signature = (m, level_bound = DEFAULT_LEVEL_BOUND, seed = 0))]
fn syzygy_compare<'py>(py: Python<'py>, m: &PyRep, level_bound: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let c = deform::syzygy_compare(&m.inner, level_bound, seed).map_err(py_err)?;
    to_dict(py, &c)
}

#[pymodule]
pub fn gpdef(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", gpdef_core::VERSION)?;
    m.add("GpdefError", m.py().get_type::<GpdefError>())?;
    m.add_class::<PyAlgebra>()?;
    m.add_class::<PyRep>()?;
    m.add_function(wrap_pyfunction!(hom_dim, m)?)?;
    m.add_function(wrap_pyfunction!(ext_dim, m)?)?;
    m.add_function(wrap_pyfunction!(stable_hom_dim, m)?)?;
    m.add_function(wrap_pyfunction!(versal_report, m)?)?;
    m.add_function(wrap_pyfunction!(syzygy_compare, m)?)?;
    Ok(())
}
