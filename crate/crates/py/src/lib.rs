//! Python bindings: a `LieAlgebra` class wrapping an algebra document plus
//! its optional complex structure, and module-level functions mirroring the
//! CLI surface (check, decide, catalog access, the regression table, and
//! standalone report verification). All reports cross the boundary as JSON
//! strings with exact `"p/q"` coefficients.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use solvtame_core::catalog;
use solvtame_core::cxstruct::ComplexStructure;
use solvtame_core::decide as core_decide;
use solvtame_core::doc::AlgebraDocument;
use solvtame_core::report::{self, DecideMode};

fn val_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A Lie algebra given by exact structure constants, with an optional
/// invariant almost-complex structure.
#[pyclass]
struct LieAlgebra {
    doc: AlgebraDocument,
    algebra: solvtame_core::liecore::LieAlgebra,
    j: Option<ComplexStructure>,
}

impl LieAlgebra {
    fn from_doc(doc: AlgebraDocument) -> PyResult<Self> {
        let algebra = doc.to_algebra().map_err(val_err)?;
        let j = doc.to_complex_structure(&algebra).map_err(val_err)?;
        Ok(LieAlgebra { doc, algebra, j })
    }

    fn require_j(&self) -> PyResult<&ComplexStructure> {
        self.j
            .as_ref()
            .ok_or_else(|| PyValueError::new_err("this algebra document declares no J matrix"))
    }
}

#[pymethods]
impl LieAlgebra {
    /// Parse an algebra document (JSON text).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Self::from_doc(AlgebraDocument::parse(text).map_err(val_err)?)
    }

    /// Build a catalog entry, e.g. `from_catalog("ot", {"s": "2", "t": "1"})`.
    #[staticmethod]
    #[pyo3(signature = (id, params=None))]
    fn from_catalog(id: &str, params: Option<BTreeMap<String, String>>) -> PyResult<Self> {
        let entry = catalog::build_by_id(id, &params.unwrap_or_default()).map_err(val_err)?;
        Self::from_doc(AlgebraDocument::from_entry(&entry))
    }

    fn dimension(&self) -> usize {
        self.algebra.dim()
    }

    fn basis(&self) -> Vec<String> {
        self.algebra.names().to_vec()
    }

    fn check_jacobi(&self) -> bool {
        self.algebra.check_jacobi()
    }

    fn is_solvable(&self) -> bool {
        self.algebra.is_solvable()
    }

    fn is_nilpotent(&self) -> bool {
        self.algebra.is_nilpotent()
    }

    fn is_abelian(&self) -> bool {
        self.algebra.is_abelian()
    }

    fn is_unimodular(&self) -> bool {
        self.algebra.is_unimodular()
    }

    /// Type (I): every adjoint operator has purely imaginary spectrum.
    fn is_type_i(&self) -> bool {
        solvtame_core::weights::is_type_i(&self.algebra)
    }

    fn nilradical_dim(&self) -> PyResult<usize> {
        Ok(self.algebra.nilradical().map_err(val_err)?.dim())
    }

    fn derived_series_dims(&self) -> Vec<usize> {
        self.algebra.derived_series().iter().map(|s| s.dim()).collect()
    }

    fn lower_central_series_dims(&self) -> Vec<usize> {
        self.algebra.lower_central_series().iter().map(|s| s.dim()).collect()
    }

    fn has_j(&self) -> bool {
        self.j.is_some()
    }

    fn is_integrable(&self) -> PyResult<bool> {
        Ok(self.require_j()?.is_integrable())
    }

    fn is_abelian_j(&self) -> PyResult<bool> {
        Ok(self.require_j()?.is_abelian())
    }

    /// Dimension of the space of closed invariant 2-forms.
    fn closed_two_forms_dim(&self) -> usize {
        core_decide::closed_two_forms(&self.algebra).dim()
    }

    /// Dimension of the space of dd^c-closed real (1,1)-forms.
    fn ddc_closed_11_dim(&self) -> PyResult<usize> {
        let j = self.require_j()?;
        Ok(core_decide::ddc_closed_11_forms(&self.algebra, j).map_err(val_err)?.dim())
    }

    /// Verdict label: "exists", "not-exists" or "unknown".
    #[pyo3(signature = (seed=0))]
    fn decide_taming(&self, seed: u64) -> PyResult<String> {
        let j = self.require_j()?;
        Ok(core_decide::decide_taming(&self.algebra, j, seed).label().to_string())
    }

    #[pyo3(signature = (seed=0))]
    fn decide_skt(&self, seed: u64) -> PyResult<String> {
        let j = self.require_j()?;
        Ok(core_decide::decide_skt(&self.algebra, j, seed)
            .map_err(val_err)?
            .label()
            .to_string())
    }

    /// Full verdict report (JSON) for "taming" or "skt".
    #[pyo3(signature = (mode="taming", seed=0, tol=1e-9))]
    fn decide_report(&self, mode: &str, seed: u64, tol: f64) -> PyResult<String> {
        let mode = match mode {
            "taming" => DecideMode::Taming,
            "skt" => DecideMode::Skt,
            other => return Err(PyValueError::new_err(format!("unknown mode `{other}`"))),
        };
        let (report, _) = report::run_decide(&self.doc, mode, seed, tol).map_err(val_err)?;
        Ok(report.to_json())
    }

    /// Structure-facts report (JSON).
    fn check_report(&self) -> PyResult<String> {
        Ok(report::run_check(&self.doc).map_err(val_err)?.to_json())
    }

    /// The algebra document as canonical JSON.
    fn to_json(&self) -> String {
        self.doc.emit()
    }

    fn __repr__(&self) -> String {
        format!(
            "LieAlgebra(dim={}, solvable={}, nilpotent={}, j={})",
            self.algebra.dim(),
            self.algebra.is_solvable(),
            self.algebra.is_nilpotent(),
            self.j.is_some()
        )
    }
}

/// Catalog ids with one-line descriptions.
#[pyfunction]
fn catalog_list() -> Vec<(String, String)> {
    catalog::catalog_ids()
        .into_iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect()
}

/// Ids of the regression-roster entries, in table order.
#[pyfunction]
fn roster_ids() -> Vec<String> {
    catalog::default_entries().into_iter().map(|e| e.id).collect()
}

/// Emit a catalog entry as an algebra document (JSON).
#[pyfunction]
#[pyo3(signature = (id, params=None))]
fn catalog_emit(id: &str, params: Option<BTreeMap<String, String>>) -> PyResult<String> {
    let entry = catalog::build_by_id(id, &params.unwrap_or_default()).map_err(val_err)?;
    entry.validate().map_err(PyRuntimeError::new_err)?;
    Ok(AlgebraDocument::from_entry(&entry).emit())
}

/// Structure facts for an algebra document; returns the report JSON.
#[pyfunction]
fn check(text: &str) -> PyResult<String> {
    let doc = AlgebraDocument::parse(text).map_err(val_err)?;
    Ok(report::run_check(&doc).map_err(val_err)?.to_json())
}

/// Decide taming/SKT for a document; returns `(report_json, exit_code)`
/// with the CLI exit-code contract (0 exists, 1 not-exists, 2 unknown).
#[pyfunction]
#[pyo3(signature = (text, mode="taming", seed=0, tol=1e-9))]
fn decide(text: &str, mode: &str, seed: u64, tol: f64) -> PyResult<(String, i32)> {
    let doc = AlgebraDocument::parse(text).map_err(val_err)?;
    let mode = match mode {
        "taming" => DecideMode::Taming,
        "skt" => DecideMode::Skt,
        other => return Err(PyValueError::new_err(format!("unknown mode `{other}`"))),
    };
    let (report, code) = report::run_decide(&doc, mode, seed, tol).map_err(val_err)?;
    Ok((report.to_json(), code))
}

/// Re-verify every certificate in a report from its JSON alone; raises on
/// failure, returns a summary string on success.
#[pyfunction]
fn verify_report(text: &str) -> PyResult<String> {
    let summary = report::verify_report(text).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let mut parts = Vec::new();
    if let Some(t) = summary.taming {
        parts.push(format!("taming: {t}"));
    }
    if let Some(s) = summary.skt {
        parts.push(format!("skt: {s}"));
    }
    parts.push("digest: ok".to_string());
    Ok(parts.join("; "))
}

/// Run the expected-verdict regression table; returns the table as JSON.
#[pyfunction]
#[pyo3(signature = (only=None, seed=0, tol=1e-9))]
fn paper_table(only: Option<&str>, seed: u64, tol: f64) -> PyResult<String> {
    let table = report::paper_table(only, seed, tol);
    serde_json::to_string_pretty(&table).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn solvtame_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<LieAlgebra>()?;
    m.add_function(wrap_pyfunction!(catalog_list, m)?)?;
    m.add_function(wrap_pyfunction!(roster_ids, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_emit, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(decide, m)?)?;
    m.add_function(wrap_pyfunction!(verify_report, m)?)?;
    m.add_function(wrap_pyfunction!(paper_table, m)?)?;
    Ok(())
}
