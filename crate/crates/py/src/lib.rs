//! Python bindings: Pauli strings, Majorana images, encoding, verification
//! and depth reports. Models travel as text in the model file format.

use auxferm::circuit::{full_depth_report, DepthParams};
use auxferm::encoder::encode_model;
use auxferm::fermion::majorana as majorana_image;
use auxferm::models::{parse_model, render_model, FermionModel, GeneratorSpec};
use auxferm::sim::{equivalence_check, EquivalenceOptions, StateVector};
use auxferm::{Edge, MajoranaLabel, ModeLayout};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn to_py(e: auxferm::Error) -> PyErr {
    use auxferm::Error as E;
    match e {
        E::Parse { .. } | E::InvalidArgument(_) | E::InvalidEdge(..) | E::SiteOutOfRange { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn model_from_text(text: &str) -> PyResult<FermionModel> {
    parse_model(text).map_err(to_py)
}

/// A phased Pauli string with a real coefficient.
#[pyclass(name = "PauliTerm", frozen)]
struct PyPauliTerm(auxferm::PauliTerm);

#[pymethods]
impl PyPauliTerm {
    /// Parses text such as `"+1 X0 Z3"` or `"-i0.5 Y2"`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyPauliTerm).map_err(to_py)
    }

    fn weight(&self) -> usize {
        self.0.weight()
    }

    fn commutes(&self, other: &PyPauliTerm) -> bool {
        self.0.commutes(&other.0)
    }

    fn is_hermitian(&self) -> bool {
        self.0.is_hermitian()
    }

    fn __mul__(&self, other: &PyPauliTerm) -> PyPauliTerm {
        PyPauliTerm(&self.0 * &other.0)
    }

    fn __eq__(&self, other: &PyPauliTerm) -> bool {
        self.0 == other.0
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PauliTerm({:?})", self.0.to_string())
    }
}

/// Jordan-Wigner image of Majorana `kind` (`"c"` or `"d"`) of `site` in
/// `register` (0 is physical) on `n_sites` sites with `nu` registers.
#[pyfunction]
fn majorana(n_sites: usize, nu: usize, kind: &str, site: usize, register: usize) -> PyResult<PyPauliTerm> {
    let label = match kind {
        "c" => MajoranaLabel::c(site, register),
        "d" => MajoranaLabel::d(site, register),
        other => return Err(PyValueError::new_err(format!("kind must be c or d, got {other:?}"))),
    };
    majorana_image(&ModeLayout::new(n_sites, nu), label)
        .map(PyPauliTerm)
        .map_err(to_py)
}

/// Model text for a `KIND:N=..,d=..,seed=..` generator.
#[pyfunction]
fn generate_model(spec: &str) -> PyResult<String> {
    let spec: GeneratorSpec = spec.parse().map_err(to_py)?;
    render_model(&spec.generate().map_err(to_py)?).map_err(to_py)
}

/// Encodes model text; returns `chi`, `nu`, `n_qubits`, `max_weights` and
/// the Pauli `dump`.
#[pyfunction]
fn encode<'py>(py: Python<'py>, model_text: &str) -> PyResult<Bound<'py, PyDict>> {
    let (layout, assignment, encoded) = encode_model(&model_from_text(model_text)?).map_err(to_py)?;
    let weights = PyDict::new(py);
    for (kind, w) in encoded.max_weight_by_kind() {
        weights.set_item(kind.tag(), w)?;
    }
    let d = PyDict::new(py);
    d.set_item("chi", assignment.chi())?;
    d.set_item("nu", assignment.nu())?;
    d.set_item("n_qubits", layout.n_qubits())?;
    d.set_item("max_weights", weights)?;
    d.set_item("dump", encoded.dump())?;
    Ok(d)
}

/// Equivalence checks from a seeded random physical state; returns
/// `(name, value, threshold, passed)` tuples.
#[pyfunction]
#[pyo3(signature = (model_text, tau=0.1, steps=5, seed=0, corrupt_sign=None))]
fn verify(
    model_text: &str,
    tau: f64,
    steps: usize,
    seed: u64,
    corrupt_sign: Option<(usize, usize)>,
) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let model = model_from_text(model_text)?;
    let (layout, assignment, _) = encode_model(&model).map_err(to_py)?;
    let corrupt_sign = corrupt_sign
        .map(|(a, b)| Edge::new(a, b))
        .transpose()
        .map_err(to_py)?;
    let psi = StateVector::random(layout.n_sites, &mut ChaCha8Rng::seed_from_u64(seed)).map_err(to_py)?;
    let options = EquivalenceOptions {
        tau,
        steps,
        corrupt_sign,
        ..EquivalenceOptions::default()
    };
    let report = equivalence_check(&model, &layout, &assignment, &psi, &options).map_err(to_py)?;
    Ok(report
        .lines()
        .into_iter()
        .map(|l| (l.name, l.value, l.threshold, l.pass))
        .collect())
}

/// Depth report for preparation plus `steps` Trotter steps.
#[pyfunction]
#[pyo3(signature = (model_text, steps=5))]
fn depth_report<'py>(py: Python<'py>, model_text: &str, steps: usize) -> PyResult<Bound<'py, PyDict>> {
    let (_, assignment, encoded) = encode_model(&model_from_text(model_text)?).map_err(to_py)?;
    let r = full_depth_report(&encoded, &assignment, steps, DepthParams::default()).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("prep_depth", r.prep_depth)?;
    d.set_item("per_step_depth", r.per_step_depth)?;
    d.set_item("total_depth", r.total_depth(steps))?;
    d.set_item("ancillas", r.ancilla_total)?;
    d.set_item("table", r.render_table())?;
    Ok(d)
}

/// Twelve-significant-digit formatting used by every text output.
#[pyfunction]
fn sig12(x: f64) -> String {
    auxferm::format::sig12(x)
}

#[pymodule]
fn auxferm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPauliTerm>()?;
    m.add_function(wrap_pyfunction!(majorana, m)?)?;
    m.add_function(wrap_pyfunction!(generate_model, m)?)?;
    m.add_function(wrap_pyfunction!(encode, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(depth_report, m)?)?;
    m.add_function(wrap_pyfunction!(sig12, m)?)?;
    Ok(())
}
