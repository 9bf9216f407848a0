//! Python bindings: planned architectures, conformance checking, diffing
//! and diagram rendering. Structured results cross the boundary as JSON
//! strings or plain dicts and lists.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use remedy_core::cli::pa_hash;
use remedy_core::constraints::{self, CheckOptions};
use remedy_core::diff::{self, DiffOptions};
use remedy_core::dsl::{self, has_errors};
use remedy_core::model::{self, ModelDocument};
use remedy_core::recovery::{self, ScanOptions};
use remedy_core::{render, DomainRuleMatrix};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix(config: Option<&str>) -> PyResult<DomainRuleMatrix> {
    match config {
        Some(text) => DomainRuleMatrix::from_config_json(text).map_err(value_err),
        None => Ok(DomainRuleMatrix::all_active()),
    }
}

/// A parsed planned architecture.
#[pyclass(frozen, module = "remedy")]
struct PlannedArchitecture {
    pa: dsl::PlannedArchitecture,
    hash: String,
}

impl PlannedArchitecture {
    fn require_valid(&self, m: &DomainRuleMatrix) -> PyResult<()> {
        let diags = dsl::validate_pa(&self.pa, m);
        if has_errors(&diags) {
            let lines: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
            return Err(PyValueError::new_err(lines.join("\n")));
        }
        Ok(())
    }

    fn view(&self) -> PyResult<model::PackageView> {
        model::to_package_view(&model::pa_to_model(&self.pa)).map_err(value_err)
    }
}

#[pymethods]
impl PlannedArchitecture {
    /// Parses DSL text; raises ValueError listing the syntax errors.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let pa = dsl::parse_pa(text).map_err(|diags| {
            let lines: Vec<String> = diags.iter().map(|d| d.to_string()).collect();
            PyValueError::new_err(lines.join("\n"))
        })?;
        Ok(PlannedArchitecture { pa, hash: pa_hash(text.as_bytes()) })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| PyIOError::new_err(format!("{path}: {e}")))?;
        Self::parse(&text)
    }

    #[getter]
    fn name(&self) -> &str {
        &self.pa.name
    }

    /// SHA-256 of the source text.
    #[getter]
    fn sha256(&self) -> &str {
        &self.hash
    }

    /// Declared ids in declaration order.
    fn instances(&self) -> Vec<String> {
        self.pa.instances().iter().map(|i| i.decl.id.clone()).collect()
    }

    fn kind_of(&self, id: &str) -> Option<String> {
        self.pa.kind_of(id).map(|k| k.to_string())
    }

    fn loops(&self) -> Vec<(String, bool)> {
        self.pa.loops().iter().map(|l| (l.id.clone(), l.domain_rules)).collect()
    }

    /// Rules as (source, modality, target) triples.
    fn rules(&self) -> Vec<(String, String, String)> {
        self.pa
            .rules
            .iter()
            .map(|r| (r.source.id.clone(), r.modality.as_str().to_string(), r.target.id.clone()))
            .collect()
    }

    /// Diagnostics as dicts with severity, code, line, column and message.
    #[pyo3(signature = (domain_config=None))]
    fn validate<'py>(&self, py: Python<'py>, domain_config: Option<&str>) -> PyResult<Vec<Bound<'py, pyo3::types::PyDict>>> {
        let diags = dsl::validate_pa(&self.pa, &matrix(domain_config)?);
        diags
            .iter()
            .map(|d| {
                let dict = pyo3::types::PyDict::new(py);
                dict.set_item("severity", if d.severity == dsl::Severity::Error { "error" } else { "warning" })?;
                dict.set_item("code", d.code.as_str())?;
                dict.set_item("line", d.span.line)?;
                dict.set_item("column", d.span.column)?;
                dict.set_item("message", &d.message)?;
                Ok(dict)
            })
            .collect()
    }

    /// Constraint set as JSON.
    #[pyo3(signature = (domain_config=None))]
    fn constraints(&self, domain_config: Option<&str>) -> PyResult<String> {
        let m = matrix(domain_config)?;
        self.require_valid(&m)?;
        serde_json::to_string_pretty(&constraints::generate_constraints(&self.pa, &m)).map_err(value_err)
    }

    /// Planned model as JSON.
    fn to_model_json(&self) -> String {
        model::model_to_json(&ModelDocument::new(model::pa_to_model(&self.pa), Some(self.hash.clone())))
    }

    /// Canonical DSL text.
    fn to_text(&self) -> String {
        self.pa.to_string()
    }

    /// Package diagram of the planned view.
    fn render(&self) -> PyResult<String> {
        Ok(render::render_view(&self.view()?))
    }

    fn __repr__(&self) -> String {
        format!("PlannedArchitecture({:?}, {} instances, {} rules)", self.pa.name, self.pa.instances().len(), self.pa.rules.len())
    }
}

/// Outcome of a conformance check.
#[pyclass(frozen, module = "remedy")]
struct ConformanceReport {
    report: constraints::ConformanceReport,
}

#[pymethods]
impl ConformanceReport {
    #[getter]
    fn conformant(&self) -> bool {
        self.report.is_conformant()
    }

    /// Per-category (pass, violation) counts.
    fn summary(&self) -> Vec<(String, usize, usize)> {
        constraints::Category::ALL
            .iter()
            .map(|c| {
                let t = self.report.summary.get(*c);
                (c.to_string(), t.pass, t.violation)
            })
            .collect()
    }

    /// Violations as (constraint id, category, detail) triples.
    fn violations(&self) -> Vec<(String, String, String)> {
        self.report
            .violations()
            .map(|f| (f.constraint_id.clone(), f.category.to_string(), f.detail.clone()))
            .collect()
    }

    fn to_json(&self) -> String {
        constraints::report_to_json(&self.report)
    }

    fn __len__(&self) -> usize {
        self.report.violation_count()
    }
}

/// A recovered current architecture.
#[pyclass(frozen, module = "remedy")]
struct CurrentArchitecture {
    model: model::ArchModel,
    pa_hash: String,
}

#[pymethods]
impl CurrentArchitecture {
    fn element_ids(&self) -> Vec<String> {
        self.model.elements().iter().map(|l| l.element.id.clone()).collect()
    }

    /// Relations as (from, to, kinds, indirect).
    fn relations(&self) -> Vec<(String, String, Vec<String>, bool)> {
        self.model
            .relations
            .iter()
            .map(|r| (r.from.clone(), r.to.clone(), r.kinds.iter().map(|k| k.as_str().to_string()).collect(), r.indirect))
            .collect()
    }

    fn to_json(&self) -> String {
        model::model_to_json(&ModelDocument::new(self.model.clone(), Some(self.pa_hash.clone())))
    }
}

/// Differences between the planned and current views.
#[pyclass(frozen, module = "remedy")]
struct DiffResult {
    diff: diff::DiffResult,
}

#[pymethods]
impl DiffResult {
    #[getter]
    fn empty(&self) -> bool {
        self.diff.is_empty()
    }

    #[getter]
    fn missing_elements(&self) -> Vec<String> {
        self.diff.missing_elements.clone()
    }

    #[getter]
    fn extra_elements(&self) -> Vec<String> {
        self.diff.extra_elements.clone()
    }

    #[getter]
    fn missing_dependencies(&self) -> Vec<(String, String)> {
        self.diff.missing_dependencies.iter().map(|d| (d.client.clone(), d.supplier.clone())).collect()
    }

    fn to_json(&self) -> String {
        diff::diff_to_json(&self.diff)
    }
}

fn load_inputs(pa: &PlannedArchitecture, facts: &str, mappings: &str) -> PyResult<(recovery::CodeFacts, recovery::MappingSet)> {
    let f = recovery::load_facts(facts).map_err(value_err)?;
    let m = recovery::load_mappings(mappings, &f, &pa.pa).map_err(value_err)?;
    Ok((f, m))
}

/// Builds the current architecture from a facts file and a mapping file.
#[pyfunction]
#[pyo3(signature = (pa, facts, mappings, lift=true))]
fn recover(pa: &PlannedArchitecture, facts: &str, mappings: &str, lift: bool) -> PyResult<CurrentArchitecture> {
    pa.require_valid(&DomainRuleMatrix::all_active())?;
    let (f, m) = load_inputs(pa, facts, mappings)?;
    let built = recovery::build_ca(&f, &m, &pa.pa).model;
    let model = if lift { recovery::lift_indirect(&built, &f, &m) } else { built };
    Ok(CurrentArchitecture { model, pa_hash: pa.hash.clone() })
}

/// Checks a recovered architecture against the planned one.
#[pyfunction]
#[pyo3(signature = (pa, ca, implicit_deny=true, domain_config=None))]
fn check(pa: &PlannedArchitecture, ca: &CurrentArchitecture, implicit_deny: bool, domain_config: Option<&str>) -> PyResult<ConformanceReport> {
    let m = matrix(domain_config)?;
    pa.require_valid(&m)?;
    let set = constraints::generate_constraints(&pa.pa, &m);
    let mut report = constraints::evaluate(&set, &ca.model, CheckOptions { implicit_deny }).map_err(value_err)?;
    report.pa_hash = Some(pa.hash.clone());
    Ok(ConformanceReport { report })
}

/// Compares the planned view with a recovered architecture.
#[pyfunction]
#[pyo3(signature = (pa, ca, ignore=Vec::new()))]
fn compare(pa: &PlannedArchitecture, ca: &CurrentArchitecture, ignore: Vec<String>) -> PyResult<DiffResult> {
    let options = DiffOptions::with_ignore(&ignore).map_err(value_err)?;
    let ca_view = model::to_package_view(&ca.model).map_err(value_err)?;
    let mut diff = diff::diff_views(&pa.view()?, &ca_view, &options);
    diff.pa_hash = Some(pa.hash.clone());
    Ok(DiffResult { diff })
}

/// Conformance diagram text.
#[pyfunction]
fn render_conformance(pa: &PlannedArchitecture, diff: &DiffResult, report: &ConformanceReport) -> PyResult<String> {
    render::render_conformance(&pa.view()?, &diff.diff, &report.report).map_err(value_err)
}

/// Scans a source tree; returns the facts JSON and the extraction log.
#[pyfunction]
#[pyo3(signature = (src, extensions=vec!["java".to_string()]))]
fn extract(src: &str, extensions: Vec<String>) -> (String, Vec<String>) {
    let out = recovery::scan_sources(std::path::Path::new(src), &ScanOptions { extensions });
    (recovery::facts_to_json(&out.facts), out.log)
}

/// The predefined domain rules as (number, source, modality, target).
#[pyfunction]
fn domain_rules() -> Vec<(usize, String, String, String)> {
    DomainRuleMatrix::all_active()
        .rules()
        .iter()
        .map(|r| (r.number, r.source.to_string(), r.modality.as_str().to_string(), r.target.to_string()))
        .collect()
}

#[pymodule]
fn remedy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PlannedArchitecture>()?;
    m.add_class::<ConformanceReport>()?;
    m.add_class::<CurrentArchitecture>()?;
    m.add_class::<DiffResult>()?;
    m.add_function(wrap_pyfunction!(recover, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add_function(wrap_pyfunction!(render_conformance, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(domain_rules, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
