//! Python bindings for the ore-forge engine.
//!
//! The module exposes one class, `Presentation`, wrapping an iterated Ore
//! extension of CGL type, plus free functions for q-arithmetic. Structured
//! results (reports, certificates, deletion logs) come back as plain Python
//! dicts and lists; elements and coefficients travel as expression strings
//! in the same grammar the command-line tool uses.

use ore_forge::normal::{self, ProductSide, SkewVerdict};
use ore_forge::ore::engine::Ctx;
use ore_forge::presentation::{
    validate_structure, verify_confluence, verify_local_nilpotence, verify_sigma_delta_relation,
};
use ore_forge::{cauchon, grfilt, parse_element, qcalc, registry, spectra, CGLPresentation};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use serde_json::Value as JsonValue;

const DEFAULT_BOUND: u32 = 32;

fn oops(err: ore_forge::Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn json_to_py<'py>(py: Python<'py>, value: &JsonValue) -> PyResult<Bound<'py, PyAny>> {
    Ok(match value {
        JsonValue::Null => py.None().into_bound(py),
        JsonValue::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        JsonValue::Number(num) => {
            if let Some(i) = num.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else if let Some(u) = num.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else {
                num.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any()
            }
        }
        JsonValue::String(s) => s.into_pyobject(py)?.into_any(),
        JsonValue::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(json_to_py(py, item)?)?;
            }
            list.into_any()
        }
        JsonValue::Object(map) => {
            let dict = PyDict::new(py);
            for (key, item) in map {
                dict.set_item(key, json_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn to_py_dict(py: Python<'_>, value: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let json = serde_json::to_value(value)
        .map_err(|err| PyValueError::new_err(err.to_string()))?;
    Ok(json_to_py(py, &json)?.unbind())
}

/// An iterated Ore extension with a torus action, the central object of the
/// library.
#[pyclass(frozen)]
struct Presentation {
    inner: CGLPresentation,
}

impl Presentation {
    fn element(&self, expr: &str, bound: u32) -> PyResult<ore_forge::Element> {
        let raw = parse_element(expr, self.inner.gen_names()).map_err(oops)?;
        Ctx::new(&self.inner)
            .with_bound(bound)
            .normal_form(&raw)
            .map_err(oops)
    }
}

#[pymethods]
impl Presentation {
    /// Look up a built-in example by name, e.g. "qmat2" or "qaffine-5".
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Ok(Presentation {
            inner: registry::builtin(name).map_err(oops)?,
        })
    }

    /// Parse a presentation from its JSON file text.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Presentation {
            inner: CGLPresentation::from_json(text).map_err(oops)?,
        })
    }

    /// Read a presentation from a JSON file on disk.
    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Ok(Presentation {
            inner: CGLPresentation::load(path).map_err(oops)?,
        })
    }

    /// Serialize back to the JSON file format.
    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(oops)
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn generators(&self) -> Vec<String> {
        self.inner.gen_names().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("Presentation({:?}, n={})", self.inner.name(), self.inner.n())
    }

    /// Rewrite an expression to its ordered normal form.
    #[pyo3(signature = (expr, bound = DEFAULT_BOUND))]
    fn normal_form(&self, expr: &str, bound: u32) -> PyResult<String> {
        Ok(self
            .element(expr, bound)?
            .to_expr_string(self.inner.gen_names()))
    }

    /// Run every structural check; returns a dict with per-check results.
    #[pyo3(signature = (seed = 7, bound = DEFAULT_BOUND))]
    fn check(&self, py: Python<'_>, seed: u64, bound: u32) -> PyResult<Py<PyAny>> {
        let mut reports = vec![
            validate_structure(&self.inner),
            verify_local_nilpotence(&self.inner, bound),
        ];
        let mut twist = ore_forge::Report::new(format!("{}: eigenvalue twist", self.inner.name()));
        match verify_sigma_delta_relation(&self.inner) {
            Ok(ok) => twist.push("sigma_j delta_j = q_j delta_j sigma_j", ok, None),
            Err(err) => twist.fail("sigma_j delta_j = q_j delta_j sigma_j", err.to_string()),
        }
        reports.push(twist);
        reports.push(verify_confluence(&self.inner, 3, seed, 32).map_err(oops)?);
        let passed = reports.iter().all(ore_forge::Report::passed);
        to_py_dict(
            py,
            &serde_json::json!({
                "subject": self.inner.name(),
                "passed": passed,
                "reports": reports,
            }),
        )
    }

    /// Apply the deleting-derivations map at a 1-based level; returns the
    /// image as an expression string together with the clearing power.
    #[pyo3(signature = (level, expr, bound = DEFAULT_BOUND))]
    fn theta(&self, level: usize, expr: &str, bound: u32) -> PyResult<(String, u32)> {
        let n = self.inner.n();
        if level == 0 || level > n {
            return Err(oops(ore_forge::Error::IndexOutOfRange { index: level, n }));
        }
        let a = self.element(expr, bound)?;
        let image = cauchon::cauchon_theta(&self.inner, level - 1, &a, bound).map_err(oops)?;
        Ok((
            image.value.to_expr_string(self.inner.gen_names()),
            image.s_min,
        ))
    }

    /// Delete every derivation from the top level down; returns the list of
    /// step dicts and the final presentation.
    #[pyo3(signature = (bound = DEFAULT_BOUND))]
    fn delete_all(&self, py: Python<'_>, bound: u32) -> PyResult<(Py<PyAny>, Presentation)> {
        let steps = cauchon::deletion_sequence(&self.inner, bound).map_err(oops)?;
        let last = steps
            .last()
            .map(|step| step.after.clone())
            .unwrap_or_else(|| self.inner.clone());
        let summaries: Vec<_> = steps.iter().map(|step| step.summary()).collect();
        Ok((to_py_dict(py, &summaries)?, Presentation { inner: last }))
    }

    /// Build a normal element of the whole algebra from a normal element of
    /// the subalgebra below the top generator; returns its certificate.
    #[pyo3(signature = (expr, bound = DEFAULT_BOUND))]
    fn construct_normal(&self, py: Python<'_>, expr: &str, bound: u32) -> PyResult<Py<PyAny>> {
        let a = self.element(expr, bound)?;
        let cert = normal::construct_normal(&self.inner, &a, bound).map_err(oops)?;
        to_py_dict(py, &cert.summary(self.inner.gen_names()))
    }

    /// Certify that an element is normal, solving for all conjugations.
    #[pyo3(signature = (expr, bound = DEFAULT_BOUND))]
    fn verify_normal(&self, py: Python<'_>, expr: &str, bound: u32) -> PyResult<Py<PyAny>> {
        let a = self.element(expr, bound)?;
        let cert = normal::verify_normal(&self.inner, &a, bound).map_err(oops)?;
        to_py_dict(py, &cert.summary(self.inner.gen_names()))
    }

    /// Express the top derivation as an inner fraction generated by a
    /// lower-level normal element; returns den, num, and the verification.
    #[pyo3(signature = (expr, bound = DEFAULT_BOUND))]
    fn inner_d(&self, py: Python<'_>, expr: &str, bound: u32) -> PyResult<Py<PyAny>> {
        let a = self.element(expr, bound)?;
        let fraction = normal::inner_d_from_normal(&self.inner, &a, bound).map_err(oops)?;
        let inner = normal::verify_inner(&self.inner, &fraction).map_err(oops)?;
        let mut value = serde_json::to_value(fraction.summary(self.inner.gen_names()))
            .map_err(|err| PyValueError::new_err(err.to_string()))?;
        value["inner"] = JsonValue::Bool(inner);
        Ok(json_to_py(py, &value)?.unbind())
    }

    /// The same fraction from a monic twisting relation delta(a) = c a^power.
    #[pyo3(signature = (a_expr, c_expr, power, bound = DEFAULT_BOUND))]
    fn inner_d_from_monic(
        &self,
        py: Python<'_>,
        a_expr: &str,
        c_expr: &str,
        power: u32,
        bound: u32,
    ) -> PyResult<Py<PyAny>> {
        let a = self.element(a_expr, bound)?;
        let c = self.element(c_expr, bound)?;
        let fraction =
            normal::inner_d_from_monic(&self.inner, &a, &c, power, bound).map_err(oops)?;
        let inner = normal::verify_inner(&self.inner, &fraction).map_err(oops)?;
        let mut value = serde_json::to_value(fraction.summary(self.inner.gen_names()))
            .map_err(|err| PyValueError::new_err(err.to_string()))?;
        value["inner"] = JsonValue::Bool(inner);
        Ok(json_to_py(py, &value)?.unbind())
    }

    /// Consistency scan for an exact relation delta(c) = c e (side "right")
    /// or e c (side "left") at a 1-based level; returns the verdict name.
    #[pyo3(signature = (level, c_expr, e_expr, side = "right", bound = DEFAULT_BOUND))]
    fn skew_check(
        &self,
        level: usize,
        c_expr: &str,
        e_expr: &str,
        side: &str,
        bound: u32,
    ) -> PyResult<String> {
        let side = match side {
            "right" => ProductSide::Right,
            "left" => ProductSide::Left,
            other => {
                return Err(PyValueError::new_err(format!(
                    "side must be \"left\" or \"right\", not {other:?}"
                )))
            }
        };
        let n = self.inner.n();
        if level == 0 || level > n {
            return Err(oops(ore_forge::Error::IndexOutOfRange { index: level, n }));
        }
        let c = self.element(c_expr, bound)?;
        let e = self.element(e_expr, bound)?;
        let verdict = normal::skew_nilpotence_check(&self.inner, level - 1, &c, &e, side, bound)
            .map_err(oops)?;
        Ok(match verdict {
            SkewVerdict::Consistent => "consistent",
            SkewVerdict::HypothesisNotSatisfied => "hypothesis-not-satisfied",
            SkewVerdict::Counterexample => "counterexample",
        }
        .to_string())
    }

    /// Filtration degrees making the algebra graded, declared or searched.
    fn filtration(&self) -> PyResult<Vec<u32>> {
        Ok(grfilt::filtration_for(&self.inner)
            .map_err(oops)?
            .degrees()
            .to_vec())
    }

    /// Polynomial growth rate of the algebra, one per generator.
    fn gk_dimension(&self) -> usize {
        grfilt::gk_dimension(&self.inner)
    }

    /// The associated graded presentation: same constants, derivations erased.
    fn associated_graded(&self) -> PyResult<Presentation> {
        let degrees = grfilt::filtration_for(&self.inner).map_err(oops)?;
        Ok(Presentation {
            inner: grfilt::associated_graded(&self.inner, &degrees).map_err(oops)?,
        })
    }

    /// Height formula report over all torus-stable primes (quantum affine
    /// data only).
    fn tauvel(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py_dict(py, &spectra::tauvel_check(&self.inner).map_err(oops)?)
    }

    /// Catenarity of the torus-stable prime poset (quantum affine data only).
    fn catenary(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let poset = spectra::hprime_poset(&self.inner).map_err(oops)?;
        to_py_dict(py, &spectra::catenary_check(&poset))
    }

    /// Normal separation over all proper prime pairs (quantum affine data
    /// only).
    #[pyo3(signature = (bound = DEFAULT_BOUND))]
    fn normal_separation(&self, py: Python<'_>, bound: u32) -> PyResult<Py<PyAny>> {
        to_py_dict(
            py,
            &spectra::normal_separation_check(&self.inner, bound).map_err(oops)?,
        )
    }
}

/// The q-integer (m)_base as a canonical coefficient string.
#[pyfunction]
fn q_int(m: u32, base: &str) -> PyResult<String> {
    let base = ore_forge::parse_coeff(base).map_err(oops)?;
    Ok(qcalc::q_int(m, &base).map_err(oops)?.to_expr_string())
}

/// The Gaussian binomial coefficient binom(n, i)_base as a string.
#[pyfunction]
fn q_binomial(n: u32, i: u32, base: &str) -> PyResult<String> {
    let base = ore_forge::parse_coeff(base).map_err(oops)?;
    Ok(qcalc::q_binomial(n, i, &base)
        .map_err(oops)?
        .to_expr_string())
}

/// Parse a coefficient in q and return its canonical rendering.
#[pyfunction]
fn parse_coeff(text: &str) -> PyResult<String> {
    Ok(ore_forge::parse_coeff(text).map_err(oops)?.to_expr_string())
}

/// Names and descriptions of the built-in presentations.
#[pyfunction]
fn builtins() -> Vec<(String, String)> {
    registry::builtin_descriptions()
        .into_iter()
        .chain(registry::invalid_descriptions())
        .map(|(name, blurb)| (name.to_string(), blurb.to_string()))
        .collect()
}

/// Catenarity check for a poset given in "a < b" line format.
#[pyfunction]
fn catenary_from_text(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    let poset = spectra::FinitePoset::from_text(text).map_err(oops)?;
    to_py_dict(py, &spectra::catenary_check(&poset))
}

#[pymodule]
fn oreforge(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Presentation>()?;
    m.add_function(wrap_pyfunction!(q_int, m)?)?;
    m.add_function(wrap_pyfunction!(q_binomial, m)?)?;
    m.add_function(wrap_pyfunction!(parse_coeff, m)?)?;
    m.add_function(wrap_pyfunction!(builtins, m)?)?;
    m.add_function(wrap_pyfunction!(catenary_from_text, m)?)?;
    Ok(())
}
