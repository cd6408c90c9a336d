//! Python bindings: parse litmus tests, run them under a model
//! configuration, and check the reordering laws.

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use memmod_core::analysis::run_law_suite;
use memmod_core::ast::Model;
use memmod_core::litmus::{self, run_litmus, ExpectationResult, TextReport};
use memmod_core::reorder::{ModelConfig, OcMore};
use memmod_core::semantics::{enumerate_traces, Domain, ExplorationLimits};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A parsed litmus test.
#[pyclass(frozen, module = "memmod")]
struct Litmus {
    inner: litmus::Litmus,
}

#[pymethods]
impl Litmus {
    #[getter]
    fn name(&self) -> String {
        self.inner.file.name.clone()
    }

    /// `(kind, condition)` for each expectation, in file order.
    #[getter]
    fn expectations(&self) -> Vec<(String, String)> {
        self.inner.expectations.iter().map(|e| (e.kind.name().to_string(), e.text.clone())).collect()
    }

    /// Canonical source text; parses back to the same test.
    fn source(&self) -> String {
        litmus::print_litmus(&self.inner.file)
    }

    /// Explore the test and judge every expectation. Keyword arguments
    /// override the file's directives.
    #[pyo3(signature = (*, model=None, sfp=None, forwarding=None, guard_store_reorder=None,
        ocmore=None, optimize=None, incremental=None, max_unroll=None, max_configs=None))]
    #[allow(clippy::too_many_arguments)]
    fn run(
        &self,
        model: Option<&str>,
        sfp: Option<bool>,
        forwarding: Option<bool>,
        guard_store_reorder: Option<bool>,
        ocmore: Option<&str>,
        optimize: Option<bool>,
        incremental: Option<bool>,
        max_unroll: Option<usize>,
        max_configs: Option<usize>,
    ) -> PyResult<Report> {
        let mut cfg = self.inner.config();
        if let Some(m) = model {
            cfg.base = parse_model(m)?;
        }
        if let Some(o) = ocmore {
            cfg.ocmore = parse_ocmore(o)?;
        }
        for (opt, slot) in [
            (sfp, &mut cfg.sfp),
            (forwarding, &mut cfg.forwarding),
            (guard_store_reorder, &mut cfg.guard_store_reorder),
            (optimize, &mut cfg.optimize),
            (incremental, &mut cfg.incremental),
        ] {
            if let Some(v) = opt {
                *slot = v;
            }
        }
        let limits = limits(max_unroll, max_configs);
        Ok(Report { inner: run_litmus(&self.inner, &cfg, &limits) })
    }

    /// Every trace of the composed program, labels rendered as text.
    #[pyo3(signature = (*, max_unroll=None, max_configs=None))]
    fn traces(&self, max_unroll: Option<usize>, max_configs: Option<usize>) -> Vec<Vec<String>> {
        let dom = Domain::for_program(&self.inner.program);
        let ts = enumerate_traces(&self.inner.config(), &self.inner.program.composed(), &dom, &limits(max_unroll, max_configs));
        ts.traces.iter().map(|t| t.iter().map(|a| a.to_string()).collect()).collect()
    }

    fn __repr__(&self) -> String {
        format!("<Litmus {:?}>", self.inner.file.name)
    }
}

/// The outcome of running a litmus test.
#[pyclass(frozen, module = "memmod")]
struct Report {
    inner: litmus::Report,
}

#[pymethods]
impl Report {
    #[getter]
    fn name(&self) -> String {
        self.inner.name.clone()
    }

    /// `"pass"`, `"fail"` or `"inconclusive"`.
    #[getter]
    fn outcome(&self) -> &'static str {
        match self.inner.outcome {
            litmus::Outcome::Pass => "pass",
            litmus::Outcome::Fail => "fail",
            litmus::Outcome::Inconclusive => "inconclusive",
        }
    }

    #[getter]
    fn passed(&self) -> bool {
        self.inner.outcome == litmus::Outcome::Pass
    }

    #[getter]
    fn exit_code(&self) -> i32 {
        self.inner.exit_code()
    }

    #[getter]
    fn expectations(&self) -> Vec<Expectation> {
        self.inner.expectations.iter().cloned().map(|inner| Expectation { inner }).collect()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[pyo3(signature = (witnesses=false))]
    fn text(&self, witnesses: bool) -> String {
        TextReport { report: &self.inner, witnesses }.to_string()
    }

    fn __repr__(&self) -> String {
        format!("<Report {:?} {}>", self.inner.name, self.outcome())
    }
}

/// One judged expectation.
#[pyclass(frozen, module = "memmod")]
struct Expectation {
    inner: ExpectationResult,
}

#[pymethods]
impl Expectation {
    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.name()
    }

    #[getter]
    fn condition(&self) -> String {
        self.inner.condition.clone()
    }

    /// `"holds"`, `"fails"` or `"inconclusive_at_bound"`.
    #[getter]
    fn status(&self) -> &'static str {
        self.inner.status.name()
    }

    #[getter]
    fn trace(&self) -> Option<Vec<String>> {
        self.inner.trace.clone()
    }

    #[getter]
    fn final_state(&self) -> Option<Vec<(String, String)>> {
        self.inner.final_state.as_ref().map(|s| s.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect())
    }

    fn __repr__(&self) -> String {
        format!("<Expectation {} ({}): {}>", self.kind(), self.inner.condition, self.status())
    }
}

fn parse_model(s: &str) -> PyResult<Model> {
    match s {
        "c11" => Ok(Model::C11),
        "sc" => Ok(Model::Sc),
        "par" => Ok(Model::Par),
        _ => Err(PyValueError::new_err(format!("unknown model `{s}`; expected c11, sc or par"))),
    }
}

fn parse_ocmore(s: &str) -> PyResult<OcMore> {
    let mut cs = s.chars();
    match (cs.next().and_then(OcMore::from_letter), cs.next()) {
        (Some(o), None) => Ok(o),
        _ => Err(PyValueError::new_err(format!("expected one of a, b, c, d, e; got `{s}`"))),
    }
}

fn limits(max_unroll: Option<usize>, max_configs: Option<usize>) -> ExplorationLimits {
    let mut l = ExplorationLimits::from_env();
    if let Some(u) = max_unroll {
        l.max_unroll = u;
    }
    if let Some(c) = max_configs {
        l.max_configs = c;
    }
    l
}

/// Parse litmus source text.
#[pyfunction]
fn parse(src: &str) -> PyResult<Litmus> {
    litmus::parse_litmus(src).map(|inner| Litmus { inner }).map_err(value_err)
}

/// Read and parse a litmus file.
#[pyfunction]
fn load(path: std::path::PathBuf) -> PyResult<Litmus> {
    let src = std::fs::read_to_string(&path).map_err(|e| PyOSError::new_err(format!("{}: {e}", path.display())))?;
    let inner = litmus::parse_litmus(&src).map_err(|e| PyValueError::new_err(format!("{}: {e}", path.display())))?;
    Ok(Litmus { inner })
}

/// Run the law fixtures. Returns `(law, fixture, passed, detail)` rows.
#[pyfunction]
#[pyo3(signature = (law=None))]
fn laws(py: Python<'_>, law: Option<&str>) -> PyResult<Vec<(String, String, bool, String)>> {
    let limits = ExplorationLimits::from_env();
    let out = py.detach(|| run_law_suite(law, &limits)).map_err(value_err)?;
    Ok(out.into_iter().map(|o| (o.law, o.fixture, o.passed, o.detail)).collect())
}

/// Names of the configuration presets.
#[pyfunction]
fn presets() -> Vec<(&'static str, String)> {
    [("c11", ModelConfig::c11()), ("sc", ModelConfig::sc()), ("par", ModelConfig::par()), ("hardware", ModelConfig::hardware())]
        .into_iter()
        .map(|(n, c)| (n, litmus::describe_config(&c)))
        .collect()
}

#[pymodule]
pub fn memmod(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Litmus>()?;
    m.add_class::<Report>()?;
    m.add_class::<Expectation>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(load, m)?)?;
    m.add_function(wrap_pyfunction!(laws, m)?)?;
    m.add_function(wrap_pyfunction!(presets, m)?)?;
    Ok(())
}
