use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use starfree::algebra::{syntactic_morphism, MonoidMorphism};
use starfree::automata::{compile, parse_dfa, parse_regex, render_dfa, Alphabet, Dfa};
use starfree::baseclass::BaseClass;
use starfree::covering::{decide_cover, CoverInstance, CoverOptions};
use starfree::sdlang::{is_prefix_code, min_sync_delay, parse_sd, synthesize, validate, SynthOptions};
use starfree::stutter::membership;

create_exception!(starfree_py, StarfreeError, PyException);

fn err(e: starfree::Error) -> PyErr {
    StarfreeError::new_err(e.to_string())
}

/// A complete deterministic automaton.
#[pyclass(name = "Dfa", frozen)]
struct PyDfa {
    inner: Dfa,
}

#[pymethods]
impl PyDfa {
    /// Compiles a regex over the given letters.
    #[staticmethod]
    fn from_regex(regex: &str, alphabet: &str) -> PyResult<Self> {
        let sigma = Alphabet::parse(alphabet).map_err(err)?;
        let ast = parse_regex(regex, &sigma).map_err(err)?;
        Ok(PyDfa {
            inner: compile(&ast, &sigma),
        })
    }

    /// Reads the `.dfa` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(PyDfa {
            inner: parse_dfa(text).map_err(err)?,
        })
    }

    fn render(&self) -> String {
        render_dfa(&self.inner)
    }

    #[getter]
    fn alphabet(&self) -> String {
        self.inner.alphabet().letters().iter().collect()
    }

    #[getter]
    fn num_states(&self) -> usize {
        self.inner.num_states()
    }

    fn accepts(&self, word: &str) -> PyResult<bool> {
        let w = self.inner.alphabet().word(word).map_err(err)?;
        Ok(self.inner.accepts(&w))
    }

    fn enumerate(&self, maxlen: usize) -> Vec<String> {
        let sigma = self.inner.alphabet();
        self.inner
            .enumerate(maxlen)
            .iter()
            .map(|w| w.iter().map(|&a| sigma.symbol(a)).collect())
            .collect()
    }

    fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    fn complement(&self) -> Self {
        PyDfa {
            inner: self.inner.complement(),
        }
    }

    fn union(&self, other: PyRef<'_, PyDfa>) -> PyResult<Self> {
        Ok(PyDfa {
            inner: self.inner.union(&other.inner).map_err(err)?,
        })
    }

    fn intersect(&self, other: PyRef<'_, PyDfa>) -> PyResult<Self> {
        Ok(PyDfa {
            inner: self.inner.intersect(&other.inner).map_err(err)?,
        })
    }

    fn equivalent(&self, other: PyRef<'_, PyDfa>) -> PyResult<bool> {
        self.inner.equivalent(&other.inner).map_err(err)
    }

    /// Size of the syntactic monoid.
    fn monoid_size(&self) -> usize {
        syntactic_morphism(&self.inner).morphism.monoid().size()
    }

    fn __repr__(&self) -> String {
        format!("Dfa(states={}, alphabet={:?})", self.inner.num_states(), self.alphabet())
    }
}

/// The base class C whose star-free closure is studied.
#[pyclass(name = "Base", frozen)]
struct PyBase {
    inner: BaseClass,
}

#[pymethods]
impl PyBase {
    #[staticmethod]
    fn triv(alphabet: &str) -> PyResult<Self> {
        Ok(PyBase {
            inner: BaseClass::triv(&Alphabet::parse(alphabet).map_err(err)?),
        })
    }

    /// All length-modulo languages.
    #[staticmethod]
    fn modulo() -> Self {
        PyBase {
            inner: BaseClass::mod_class(),
        }
    }

    /// Length modulo a fixed `m`, as a finite class.
    #[staticmethod]
    fn length_mod(alphabet: &str, m: usize) -> PyResult<Self> {
        Ok(PyBase {
            inner: BaseClass::length_mod(&Alphabet::parse(alphabet).map_err(err)?, m),
        })
    }

    /// A finite class from a morphism file's text.
    #[staticmethod]
    fn finite(text: &str) -> PyResult<Self> {
        let m = MonoidMorphism::parse(text).map_err(err)?;
        Ok(PyBase {
            inner: BaseClass::finite_from_morphism(&m),
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    fn __repr__(&self) -> String {
        format!("Base({})", self.inner.name())
    }
}

/// Outcome of a covering or separation question.
#[pyclass(name = "Verdict", frozen, get_all)]
struct PyVerdict {
    coverable: bool,
    bad_element: Option<Vec<String>>,
    derivation: Vec<String>,
    separator_hint: Option<String>,
    json: String,
}

#[pymethods]
impl PyVerdict {
    fn __bool__(&self) -> bool {
        self.coverable
    }

    fn __repr__(&self) -> String {
        match &self.bad_element {
            None => "Verdict(coverable)".into(),
            Some(t) => format!("Verdict(not coverable, bad element {{{}}})", t.join(", ")),
        }
    }
}

/// Whether `lang` lies in the star-free closure of `base`.
#[pyfunction]
fn member(lang: PyRef<'_, PyDfa>, base: PyRef<'_, PyBase>) -> PyResult<bool> {
    membership(&lang.inner, &base.inner).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (l1, l2s, base, budget = 24))]
fn cover(l1: PyRef<'_, PyDfa>, l2s: Vec<PyRef<'_, PyDfa>>, base: PyRef<'_, PyBase>, budget: usize) -> PyResult<PyVerdict> {
    let inst = CoverInstance {
        l1: l1.inner.clone(),
        l2s: l2s.iter().map(|d| d.inner.clone()).collect(),
        base: base.inner.clone(),
    };
    let opts = CoverOptions {
        budget,
        ..Default::default()
    };
    let v = decide_cover(&inst, &opts).map_err(err)?;
    Ok(PyVerdict {
        coverable: v.coverable,
        bad_element: v.bad_element.as_ref().map(|b| b.names.clone()),
        derivation: v.bad_element.as_ref().map(|b| b.derivation.clone()).unwrap_or_default(),
        separator_hint: v.separator_hint.clone(),
        json: serde_json::to_string(&v).expect("verdicts serialize"),
    })
}

#[pyfunction]
#[pyo3(signature = (l1, l2, base, budget = 24))]
fn separate(l1: PyRef<'_, PyDfa>, l2: PyRef<'_, PyDfa>, base: PyRef<'_, PyBase>, budget: usize) -> PyResult<PyVerdict> {
    cover(l1, vec![l2], base, budget)
}

#[pyfunction(name = "is_prefix_code")]
fn prefix_code(k: PyRef<'_, PyDfa>) -> PyResult<bool> {
    is_prefix_code(&k.inner).map_err(err)
}

/// Least synchronization delay up to `dmax`, or None.
#[pyfunction(name = "min_sync_delay")]
#[pyo3(signature = (k, dmax = 8))]
fn sync_delay(k: PyRef<'_, PyDfa>, dmax: usize) -> PyResult<Option<usize>> {
    min_sync_delay(&k.inner, dmax).map_err(err)
}

/// A bounded-delay expression for `lang`, built from its syntactic morphism.
#[pyfunction(name = "synthesize")]
#[pyo3(signature = (lang, base, dmax = 8))]
fn synth(lang: PyRef<'_, PyDfa>, base: PyRef<'_, PyBase>, dmax: usize) -> PyResult<String> {
    let rec = syntactic_morphism(&lang.inner);
    let opts = SynthOptions {
        dmax,
        ..Default::default()
    };
    let syn = synthesize(&rec.morphism, &base.inner, &opts).map_err(err)?;
    let e = syn.expression_for_set(&rec.accepting_elements());
    Ok(e.display(lang.inner.alphabet()))
}

/// Validates an expression and returns the language it denotes.
#[pyfunction]
#[pyo3(signature = (expr, alphabet, base = None, dmax = 8))]
fn check_sd(expr: &str, alphabet: &str, base: Option<PyRef<'_, PyBase>>, dmax: usize) -> PyResult<PyDfa> {
    let sigma = Alphabet::parse(alphabet).map_err(err)?;
    let e = parse_sd(expr, &sigma).map_err(err)?;
    let fb = match &base {
        Some(b) => Some(b.inner.require_finite().map_err(err)?),
        None => None,
    };
    Ok(PyDfa {
        inner: validate(&e, &sigma, fb, dmax).map_err(err)?,
    })
}

/// Runs the command-line interface; returns `(code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = starfree::cli::run(std::iter::once("starfree".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn starfree_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDfa>()?;
    m.add_class::<PyBase>()?;
    m.add_class::<PyVerdict>()?;
    m.add("StarfreeError", m.py().get_type::<StarfreeError>())?;
    m.add_function(wrap_pyfunction!(member, m)?)?;
    m.add_function(wrap_pyfunction!(cover, m)?)?;
    m.add_function(wrap_pyfunction!(separate, m)?)?;
    m.add_function(wrap_pyfunction!(prefix_code, m)?)?;
    m.add_function(wrap_pyfunction!(sync_delay, m)?)?;
    m.add_function(wrap_pyfunction!(synth, m)?)?;
    m.add_function(wrap_pyfunction!(check_sd, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
