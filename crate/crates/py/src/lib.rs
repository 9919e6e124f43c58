//! Python bindings: characters, the finite sums, L-values and the suite runner.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use weylcheck::characters::{enumerate_characters, CharacterFilter, DirichletCharacter};
use weylcheck::charsums::gsum::{g_sum as g_sum_core, GMethod};
use weylcheck::report::{render, Format};
use weylcheck::suites::SuiteParams;

fn err(e: weylcheck::error::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A Dirichlet character, stored as exponents on fixed unit-group generators.
#[pyclass(name = "Character", frozen, module = "weylcheck")]
#[derive(Clone)]
struct Character(DirichletCharacter);

#[pymethods]
impl Character {
    #[getter]
    fn modulus(&self) -> u64 {
        self.0.modulus()
    }

    #[getter]
    fn conductor(&self) -> u64 {
        self.0.conductor()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.0.order()
    }

    #[getter]
    fn exponents(&self) -> Vec<Vec<u64>> {
        self.0.component_exponents()
    }

    fn is_primitive(&self) -> bool {
        self.0.is_primitive()
    }

    fn conj(&self) -> Self {
        Character(self.0.conj())
    }

    fn __call__(&self, x: u64) -> Complex64 {
        self.0.eval(x % self.0.modulus())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Character(modulus={}, exponents={:?})", self.0.modulus(), self.0.component_exponents())
    }
}

/// Characters modulo `q`; `kind` is "all", "primitive" or "even".
#[pyfunction]
#[pyo3(signature = (q, kind = "all"))]
fn characters(q: u64, kind: &str) -> PyResult<Vec<Character>> {
    let filter = match kind {
        "all" => CharacterFilter::All,
        "primitive" => CharacterFilter::Primitive,
        "even" => CharacterFilter::Even,
        other => return Err(PyValueError::new_err(format!("unknown kind `{other}`"))),
    };
    if q == 0 || q > weylcheck::arith::MAX_MODULUS {
        return Err(PyValueError::new_err(format!("modulus {q} out of range")));
    }
    Ok(enumerate_characters(q, filter).into_iter().map(Character).collect())
}

#[pyfunction]
fn gauss_sum(chi: &Character, n: i64) -> Complex64 {
    weylcheck::charsums::gauss::gauss_sum(&chi.0, n).value
}

/// `g(χ, ψ)` for primitive characters modulo the same prime power.
#[pyfunction]
#[pyo3(signature = (chi, psi, method = "direct"))]
fn g_sum(chi: &Character, psi: &Character, method: &str) -> PyResult<Complex64> {
    let m = match method {
        "direct" => GMethod::Direct,
        "shifted" => GMethod::Shifted,
        other => return Err(PyValueError::new_err(format!("unknown method `{other}`"))),
    };
    g_sum_core(&chi.0, &psi.0, m).map(|v| v.value).map_err(err)
}

#[pyfunction]
fn kl3(a: i64, b: i64, c: i64, q: u64) -> PyResult<Complex64> {
    if q == 0 {
        return Err(PyValueError::new_err("q must be positive"));
    }
    Ok(weylcheck::charsums::kl3::kl3(a, b, c, q).value)
}

#[pyfunction]
fn rho(delta: i64, p: u64, beta: u32) -> PyResult<u64> {
    weylcheck::charsums::rho::rho(delta, p, beta).map_err(err)
}

#[pyfunction]
fn zeta(s: Complex64) -> PyResult<Complex64> {
    weylcheck::lfunc::hurwitz::zeta(s).map_err(err)
}

#[pyfunction]
fn dirichlet_l(s: Complex64, chi: &Character) -> PyResult<Complex64> {
    weylcheck::lfunc::dirichlet::dirichlet_l(s, &chi.0).map(|v| v.value).map_err(err)
}

/// Runs a verification suite and returns its canonical JSON report.
#[pyfunction]
#[pyo3(signature = (name, *, q_max=None, p=None, beta=None, q=None, d=None, sample=None, tol=None, seed=None, T=None, step=None, cmax=None))]
#[allow(non_snake_case, clippy::too_many_arguments)]
fn run_suite(
    py: Python<'_>,
    name: &str,
    q_max: Option<u64>,
    p: Option<u64>,
    beta: Option<u32>,
    q: Option<u64>,
    d: Option<u64>,
    sample: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
    T: Option<f64>,
    step: Option<f64>,
    cmax: Option<u64>,
) -> PyResult<String> {
    let params = SuiteParams { q_max, p, beta, q, d, sample, tol, seed, t_max: T, step, c_max: cmax };
    py.allow_threads(|| {
        let report = weylcheck::suites::run_suite(name, &params)?;
        render(&report, Format::Json)
    })
    .map_err(err)
}

#[pymodule(name = "weylcheck")]
fn weylcheck_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Character>()?;
    m.add_function(wrap_pyfunction!(characters, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_sum, m)?)?;
    m.add_function(wrap_pyfunction!(g_sum, m)?)?;
    m.add_function(wrap_pyfunction!(kl3, m)?)?;
    m.add_function(wrap_pyfunction!(rho, m)?)?;
    m.add_function(wrap_pyfunction!(zeta, m)?)?;
    m.add_function(wrap_pyfunction!(dirichlet_l, m)?)?;
    m.add_function(wrap_pyfunction!(run_suite, m)?)?;
    Ok(())
}
