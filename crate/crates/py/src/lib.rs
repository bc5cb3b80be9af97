//! Python bindings. Polynomials and skein expressions cross the boundary as
//! their canonical text; `Poly` wraps the former for arithmetic.

use std::collections::BTreeMap;

use linkoid::bracket;
use linkoid::corpus::Corpus;
use linkoid::diagram::ScrambleOptions;
use linkoid::kbsm;
use linkoid::oracle;
use linkoid::tcol;
use linkoid::theta::{self, Routing, Scheme};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(linkoid_py, ParseError, PyException, "Diagram text failed to parse or validate.");
create_exception!(linkoid_py, ComputeError, PyException, "The invariant cannot be computed for this input.");

fn compute_err(e: impl std::fmt::Display) -> PyErr {
    ComputeError::new_err(e.to_string())
}

#[pyclass(frozen, eq, from_py_object, module = "linkoid_py")]
#[derive(Clone, PartialEq)]
struct Poly(linkoid::LaurentPoly);

#[pymethods]
impl Poly {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(Poly).map_err(|e: linkoid::laurent::PolyError| PyValueError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn delta() -> Self {
        Poly(linkoid::LaurentPoly::delta())
    }

    fn mirror(&self) -> Self {
        Poly(self.0.mirror())
    }

    fn forget_pairs(&self) -> Self {
        Poly(self.0.forget_pairs())
    }

    fn __add__(&self, o: &Poly) -> Self {
        Poly(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &Poly) -> Self {
        Poly(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &Poly) -> Self {
        Poly(&self.0 * &o.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.0)
    }
}

#[pyclass(frozen, from_py_object, module = "linkoid_py")]
#[derive(Clone)]
struct Diagram(linkoid::Diagram);

#[pymethods]
impl Diagram {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        linkoid::Diagram::parse(text).map(Diagram).map_err(|e| ParseError::new_err(e.to_string()))
    }

    #[staticmethod]
    fn from_corpus(name: &str) -> PyResult<Self> {
        let c = Corpus::bundled().map_err(compute_err)?;
        c.diagram(name).map(Diagram).map_err(|e| ParseError::new_err(e.to_string()))
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[getter]
    fn crossings(&self) -> usize {
        self.0.crossing_count()
    }

    #[getter]
    fn open_components(&self) -> usize {
        self.0.open_count()
    }

    fn writhe(&self) -> i32 {
        self.0.writhe()
    }

    fn mirror(&self) -> Self {
        Diagram(self.0.mirror())
    }

    fn to_sphere(&self) -> Self {
        Diagram(self.0.to_sphere())
    }

    fn is_isomorphic(&self, other: &Diagram) -> bool {
        self.0.is_isomorphic(&other.0)
    }

    #[pyo3(signature = (normalized = false))]
    fn bracket(&self, py: Python<'_>, normalized: bool) -> PyResult<Poly> {
        let d = &self.0;
        py.detach(|| if normalized { bracket::normalized_bracket(d) } else { bracket::bracket(d) })
            .map(Poly)
            .map_err(compute_err)
    }

    #[pyo3(signature = (normalized = false))]
    fn ordered_bracket(&self, py: Python<'_>, normalized: bool) -> PyResult<Poly> {
        let d = &self.0;
        py.detach(|| if normalized { bracket::normalized_ordered_bracket(d) } else { bracket::ordered_bracket(d) })
            .map(Poly)
            .map_err(compute_err)
    }

    fn oracle_bracket(&self) -> PyResult<Poly> {
        oracle::oracle_bracket(&self.0).map(Poly).map_err(compute_err)
    }

    /// Skein-module expression as `(coefficient, basis)` pairs.
    #[pyo3(signature = (normalized = false, sphere = false))]
    fn kbsm(&self, py: Python<'_>, normalized: bool, sphere: bool) -> PyResult<Vec<(Poly, String)>> {
        let d = &self.0;
        let e = py
            .detach(|| match (normalized, sphere) {
                (true, true) => kbsm::normalized_skein_on_sphere(d),
                (true, false) => kbsm::normalized_skein(d),
                (false, true) => kbsm::reduce_on_sphere(d),
                (false, false) => kbsm::reduce_to_skein(d),
            })
            .map_err(compute_err)?;
        Ok(e.terms.into_iter().map(|(b, c)| (Poly(c), b.to_string())).collect())
    }

    #[pyo3(signature = (moves = 50, seed = 0, framed = false))]
    fn scramble(&self, moves: usize, seed: u64, framed: bool) -> Self {
        Diagram(self.0.scramble(&ScrambleOptions { steps: moves, seed, framed, max_crossings: None }).0)
    }

    /// The Θ-graph lift, optionally coloured by a scheme.
    #[pyo3(signature = (scheme = None))]
    fn theta(&self, scheme: Option<&str>) -> PyResult<Self> {
        let g = match scheme {
            Some(s) => {
                let s: Scheme = s.parse().map_err(PyValueError::new_err)?;
                theta::colored_theta(&self.0, s, Routing::default())
            }
            None => theta::build_theta(&self.0),
        };
        g.map(Diagram).map_err(compute_err)
    }

    /// T_col fingerprints. A spatial graph gives `{"": lines}`; a
    /// multi-linkoid gives one entry per applicable scheme.
    fn tcol(&self, py: Python<'_>) -> PyResult<BTreeMap<String, Vec<String>>> {
        let d = &self.0;
        py.detach(|| -> Result<_, String> {
            if d.is_spatial() {
                let r = tcol::t_col(d).map_err(|e| e.to_string())?;
                Ok(BTreeMap::from([(String::new(), r.lines())]))
            } else {
                let all = theta::t_col_schemes(d, Routing::default()).map_err(|e| e.to_string())?;
                Ok(all.into_iter().map(|(s, r)| (s.to_string(), r.lines())).collect())
            }
        })
        .map_err(ComputeError::new_err)
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }
}

#[pyfunction]
fn corpus_names() -> PyResult<Vec<String>> {
    let c = Corpus::bundled().map_err(compute_err)?;
    Ok(c.manifest.entries.iter().map(|e| e.name.clone()).collect())
}

#[pymodule]
fn linkoid_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poly>()?;
    m.add_class::<Diagram>()?;
    m.add_function(wrap_pyfunction!(corpus_names, m)?)?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    m.add("ComputeError", m.py().get_type::<ComputeError>())?;
    Ok(())
}
