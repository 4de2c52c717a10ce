//! Python bindings for `relator_forge`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use relator_forge::certify::{self as cert, FamilyMatch, Theorem};
use relator_forge::dsl::{parse_presentation, parse_word};
use relator_forge::kernel;
use relator_forge::obstruct::{abelianized_image_of_r, check_not_rf, check_not_rs};
use relator_forge::presentation::{self as pres, cyclic_equivalent, make_g};
use relator_forge::quotient;
use relator_forge::word::{self, Generator};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Word", frozen, from_py_object)]
#[derive(Clone)]
struct PyWord(word::Word);

#[pymethods]
impl PyWord {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_word(text, None).map(PyWord).map_err(value_err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Word('{}')", self.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __eq__(&self, other: &PyWord) -> bool {
        self.0 == other.0
    }

    fn __mul__(&self, other: &PyWord) -> PyWord {
        PyWord(self.0.mul(&other.0))
    }

    fn inverse(&self) -> PyWord {
        PyWord(self.0.inverse())
    }

    /// `by⁻¹ · self · by`
    fn conjugate(&self, by: &PyWord) -> PyWord {
        PyWord(self.0.conjugate(&by.0))
    }

    fn pow(&self, n: i64) -> PyWord {
        PyWord(self.0.pow(n))
    }

    fn commutator(&self, other: &PyWord) -> PyWord {
        PyWord(word::commutator(&self.0, &other.0))
    }

    fn cyclically_reduce(&self) -> (PyWord, PyWord) {
        let (core, conj) = self.0.cyclically_reduce();
        (PyWord(core), PyWord(conj))
    }

    fn exponent_sum(&self, generator: &str) -> PyResult<i64> {
        let g = Generator::new(generator).map_err(value_err)?;
        Ok(self.0.exponent_sum(&g))
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }
}

#[pyclass(name = "Presentation", frozen, from_py_object)]
#[derive(Clone)]
struct PyPresentation(pres::Presentation);

#[pymethods]
impl PyPresentation {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_presentation(text).map(PyPresentation).map_err(value_err)
    }

    /// `G_{r,w}(l,k)`.
    #[staticmethod]
    fn family(r: &PyWord, w: &PyWord, l: i64, k: i64) -> PyResult<Self> {
        make_g(&r.0, &w.0, l, k).map(PyPresentation).map_err(value_err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Presentation('{}')", self.0)
    }

    fn __eq__(&self, other: &PyPresentation) -> bool {
        self.0 == other.0
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.0.generators().iter().map(|g| g.to_string()).collect()
    }

    #[getter]
    fn relators(&self) -> Vec<PyWord> {
        self.0.relators().iter().cloned().map(PyWord).collect()
    }
}

#[pyfunction(name = "cyclic_equivalent")]
fn py_cyclic_equivalent(u: &PyWord, v: &PyWord) -> bool {
    cyclic_equivalent(&u.0, &v.0)
}

#[pyfunction(name = "canonical_relator")]
fn py_canonical_relator(w: &PyWord) -> PyWord {
    PyWord(pres::canonical_relator(&w.0))
}

/// Relator schemas of the kernel onto `Z`, as strings like `a_1^-1 a_0 a_1 a_0^-2`.
#[pyfunction]
fn z_kernel(p: &PyPresentation) -> PyResult<Vec<String>> {
    let ip = kernel::z_kernel(&p.0).map_err(value_err)?;
    Ok(ip.schemas().iter().map(|s| s.to_string()).collect())
}

/// Components of the kernel split modulo `n`, each a list of schema strings.
#[pyfunction]
fn split_mod(p: &PyPresentation, n: u32) -> PyResult<Vec<Vec<String>>> {
    let ip = kernel::z_kernel(&p.0).map_err(value_err)?;
    let parts = kernel::split_mod(&ip, n).map_err(value_err)?;
    Ok(parts
        .iter()
        .map(|c| c.schemas().iter().map(|s| s.to_string()).collect())
        .collect())
}

/// Rendered certificate for a recognized family member, or `None`.
#[pyfunction]
fn certify(p: &PyPresentation) -> PyResult<Option<String>> {
    match cert::certify_presentation(&p.0) {
        Ok((_, c)) => {
            cert::check(&c).map_err(value_err)?;
            Ok(Some(c.render()))
        }
        Err(cert::CertifyError::NoCertificate) => Ok(None),
        Err(e) => Err(value_err(e)),
    }
}

/// Certificate for `G(a, b^n; l, k)` (`family="A"`) or `G(a, b^-n a b^n; l, k)`
/// (`family="C"`), with its verification result.
#[pyfunction]
#[pyo3(signature = (family, n, l, k))]
fn certify_family(family: &str, n: i64, l: i64, k: i64) -> PyResult<(String, bool)> {
    let theorem = match family {
        "A" => Theorem::A,
        "C" => Theorem::C,
        other => {
            return Err(PyValueError::new_err(format!(
                "family must be 'A' or 'C', got {other:?}"
            )))
        }
    };
    let m = FamilyMatch {
        theorem,
        n,
        l,
        k,
        exact: true,
    };
    let c = m.certificate().map_err(value_err)?;
    Ok((c.render(), cert::verify(&c)))
}

/// Residual finiteness and solvability verdicts for `G_{r,w}(l,k)`.
#[pyfunction]
fn obstruct(r: &PyWord, w: &PyWord, l: i64, k: i64) -> PyResult<(String, String, String)> {
    let rf = check_not_rf(l, k).map_err(value_err)?;
    let rs = check_not_rs(&r.0, &w.0, l, k).map_err(value_err)?;
    let ab = abelianized_image_of_r(&r.0, l, k).map_err(value_err)?;
    Ok((rf.to_string(), rs.to_string(), ab.to_string()))
}

/// All `(σ_a, σ_b)` into `S_m` in one-line notation.
#[pyfunction]
fn quotients(p: &PyPresentation, m: usize) -> PyResult<Vec<(Vec<usize>, Vec<usize>)>> {
    let sols = quotient::enumerate_homs(&p.0, m).map_err(value_err)?;
    Ok(sols.iter().map(|s| (s.a.images(), s.b.images())).collect())
}

#[pyfunction]
fn element_always_trivial(p: &PyPresentation, e: &PyWord, m: usize) -> PyResult<bool> {
    quotient::element_always_trivial(&p.0, &e.0, m).map_err(value_err)
}

#[pymodule]
#[pyo3(name = "relator_forge")]
fn relator_forge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWord>()?;
    m.add_class::<PyPresentation>()?;
    m.add_function(wrap_pyfunction!(py_cyclic_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(py_canonical_relator, m)?)?;
    m.add_function(wrap_pyfunction!(z_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(split_mod, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(certify_family, m)?)?;
    m.add_function(wrap_pyfunction!(obstruct, m)?)?;
    m.add_function(wrap_pyfunction!(quotients, m)?)?;
    m.add_function(wrap_pyfunction!(element_always_trivial, m)?)?;
    Ok(())
}
