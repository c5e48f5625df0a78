//! Python bindings. Reports come back as plain dicts and lists.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyAny;

use bvtk::analysis::{class_evidence, sne_evidence, SearchParams};
use bvtk::blocks::{basic_block, coding_by_vertices};
use bvtk::dynamics::OrbitWindow;
use bvtk::pairs::{depth_witness, long_cuts_report, Window};
use bvtk::{codec, families, morphisms, render};

create_exception!(bvtk, BvtkError, PyException);

fn err(e: bvtk::Error) -> PyErr {
    BvtkError::new_err(e.to_string())
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| BvtkError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Diagram", frozen)]
struct PyDiagram(bvtk::Diagram);

#[pymethods]
impl PyDiagram {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        codec::from_json(text).map(PyDiagram).map_err(err)
    }

    /// Family by name: gj, gj-mod, dm2ww, fig1, kite, odometer, suo, kite-det.
    #[staticmethod]
    #[pyo3(signature = (name, levels=None, radices=None))]
    fn family(name: &str, levels: Option<usize>, radices: Option<Vec<usize>>) -> PyResult<Self> {
        let n = |def| levels.unwrap_or(def);
        let r = radices.unwrap_or_else(|| families::cycle(&[2, 3], n(6)));
        let d = match name {
            "gj" => families::gj(n(6)),
            "gj-mod" => families::gj_modified(n(6)),
            "dm2ww" => families::dm2ww(n(7)),
            "fig1" => families::fig1_family(n(7)),
            "kite" => families::kite_nondet_depth(n(families::KITE_DEPTH)),
            "odometer" => families::odometer_single(&r),
            "suo" => families::odometer_suo(&r),
            "kite-det" => families::kite_deterministic(&r, n(r.len() + 4)),
            _ => return Err(BvtkError::new_err(format!("unknown family `{name}`"))),
        };
        d.map(PyDiagram).map_err(err)
    }

    #[getter]
    fn depth(&self) -> usize {
        self.0.depth()
    }

    fn width(&self, n: usize) -> PyResult<usize> {
        self.level(n)?;
        Ok(self.0.width(n))
    }

    fn names(&self, n: usize) -> PyResult<Vec<String>> {
        self.level(n)?;
        Ok((0..self.0.width(n)).map(|v| self.0.name(n, v).to_string()).collect())
    }

    fn dim(&self, n: usize, vertex: &str) -> PyResult<u64> {
        Ok(self.0.dim(n, self.vertex(n, vertex)?))
    }

    fn to_json(&self) -> String {
        codec::to_json(&self.0)
    }

    fn to_dot(&self) -> String {
        render::to_dot(&self.0)
    }

    fn validate<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &bvtk::validate(&self.0))
    }

    /// k-basic block of a vertex as letter names.
    fn basic_block(&self, n: usize, vertex: &str, k: usize) -> PyResult<Vec<String>> {
        let b = basic_block(&self.0, n, self.vertex(n, vertex)?, k).map_err(err)?;
        Ok(b.names(&self.0))
    }

    fn coding(&self, n: usize, vertex: &str, j: usize) -> PyResult<Vec<String>> {
        let b = coding_by_vertices(&self.0, n, self.vertex(n, vertex)?, j).map_err(err)?;
        Ok(b.names(&self.0))
    }

    /// Level-k truncations along the orbit window lo..=hi.
    fn orbit(&self, spec: &PyPathSpec, k: usize, lo: i64, hi: i64) -> PyResult<Vec<String>> {
        let w = OrbitWindow::compute(&spec.0, lo, hi, &self.0).map_err(err)?;
        (lo..=hi)
            .map(|m| {
                let p = w.at(m);
                if k > p.len() {
                    return Err(err(bvtk::Error::LevelOutOfRange(k)));
                }
                Ok(p.truncate(k).display(&self.0).to_string())
            })
            .collect()
    }

    fn dots(&self, spec: &PyPathSpec, n: usize, lo: i64, hi: i64) -> PyResult<Vec<u64>> {
        let w = OrbitWindow::compute(&spec.0, lo, hi, &self.0).map_err(err)?;
        Ok((lo..=hi).map(|m| w.at(m).dot(&self.0, n)).collect())
    }

    /// Depth witness and cuts for j in (k, jmax].
    fn pair<'py>(
        &self,
        py: Python<'py>,
        x: &PyPathSpec,
        y: &PyPathSpec,
        k: usize,
        jmax: usize,
        lo: i64,
        hi: i64,
    ) -> PyResult<Bound<'py, PyAny>> {
        let w = Window::new(lo, hi);
        let depth = depth_witness(&x.0, &y.0, jmax.max(k), w, &self.0).map_err(err)?;
        let cuts = long_cuts_report(&x.0, &y.0, k, jmax, w, &self.0).map_err(err)?;
        to_py(py, &(depth, cuts))
    }

    #[pyo3(signature = (max_depth, horizon, window, prefix_bound=None))]
    fn classify<'py>(
        &self,
        py: Python<'py>,
        max_depth: usize,
        horizon: usize,
        window: i64,
        prefix_bound: Option<usize>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let mut p = SearchParams::new(&self.0, max_depth, horizon, window);
        if let Some(b) = prefix_bound {
            p.prefix_bound = b;
        }
        let r = py.detach(|| class_evidence(&self.0, &p)).map_err(err)?;
        to_py(py, &r)
    }

    fn sne<'py>(&self, py: Python<'py>, max_k: usize, horizon: usize) -> PyResult<Bound<'py, PyAny>> {
        let p = SearchParams::new(&self.0, max_k, horizon, 1);
        let r = py.detach(|| sne_evidence(&self.0, &p)).map_err(err)?;
        to_py(py, &r)
    }

    fn render_array(&self, spec: &PyPathSpec, rows: usize, lo: i64, hi: i64) -> PyResult<String> {
        render::array(&spec.0, rows, lo, hi, &self.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        let widths: Vec<String> = (1..=self.0.depth()).map(|n| self.0.width(n).to_string()).collect();
        format!("Diagram(depth={}, widths=[{}])", self.0.depth(), widths.join(", "))
    }
}

impl PyDiagram {
    fn level(&self, n: usize) -> PyResult<()> {
        if n > self.0.depth() {
            return Err(err(bvtk::Error::LevelOutOfRange(n)));
        }
        Ok(())
    }

    fn vertex(&self, n: usize, name: &str) -> PyResult<usize> {
        self.level(n)?;
        self.0
            .find(n, name)
            .ok_or_else(|| err(bvtk::Error::UnknownVertex(name.to_string())))
    }
}

#[pyclass(name = "PathSpec", frozen)]
struct PyPathSpec(bvtk::PathSpec);

#[pymethods]
impl PyPathSpec {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyPathSpec).map_err(err)
    }

    /// 1-based ordinals of the path resolved to level n.
    fn resolve(&self, d: &PyDiagram, n: usize) -> PyResult<Vec<usize>> {
        Ok(self.0.resolve(&d.0, n).map_err(err)?.ordinals_1based())
    }

    fn dot(&self, d: &PyDiagram, n: usize) -> PyResult<u64> {
        Ok(self.0.resolve(&d.0, n).map_err(err)?.dot(&d.0, n))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PathSpec('{}')", self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

#[pyfunction]
fn ptm_word(length: usize) -> String {
    morphisms::ptm_word(length)
}

#[pyfunction]
fn tau_apply(j: usize, word: &str) -> PyResult<String> {
    morphisms::tau(j).and_then(|t| t.apply(word)).map_err(err)
}

#[pyfunction]
fn desubstitute<'py>(py: Python<'py>, j: usize, word: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &morphisms::desubstitute(word, j).map_err(err)?)
}

#[pyfunction]
fn tilde_reduction(d: &PyDiagram, n: usize) -> PyResult<String> {
    morphisms::tilde_reduction(&d.0, n).map_err(err)
}

/// (period, exponent, tail) of a P^k Q form, or None.
#[pyfunction]
fn power_form(word: &str) -> Option<(String, usize, String)> {
    let w: Vec<char> = word.chars().collect();
    morphisms::power_form(&w).map(|f| (f.period.iter().collect(), f.exponent, f.tail.iter().collect()))
}

#[pymodule]
#[pyo3(name = "bvtk")]
fn bvtk_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDiagram>()?;
    m.add_class::<PyPathSpec>()?;
    m.add("BvtkError", m.py().get_type::<BvtkError>())?;
    m.add_function(wrap_pyfunction!(ptm_word, m)?)?;
    m.add_function(wrap_pyfunction!(tau_apply, m)?)?;
    m.add_function(wrap_pyfunction!(desubstitute, m)?)?;
    m.add_function(wrap_pyfunction!(tilde_reduction, m)?)?;
    m.add_function(wrap_pyfunction!(power_form, m)?)?;
    Ok(())
}
