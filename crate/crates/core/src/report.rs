//! Verdict reports: structure facts plus taming/SKT verdicts with their
//! certificates embedded verbatim, so that `verify` can re-check everything
//! from the JSON alone with exact arithmetic and no access to the solver.
//! Also the regression table over the catalog roster.

use serde::{Deserialize, Serialize};

use crate::catalog::{default_entries, CatalogEntry};
use crate::cxstruct::ComplexStructure;
use crate::decide::{
    closed_two_forms, ddc_closed_11_forms, decide_space_with, leading_principal_minors,
    omega_eval, taming_gram, FeasibilityVerdict, FormSpace, SpaceCondition,
};
use crate::doc::{fnv1a64_hex, AlgebraDocument, DocError};
use crate::exterior::Form;
use crate::liecore::LieAlgebra;
use crate::scalar::{parse_rat, rat_to_string, Rat};
use num_traits::{Signed, Zero};
use thiserror::Error;

pub const REPORT_SCHEMA: &str = "solvtame.report/1";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error("the document declares no J matrix, required for verdicts")]
    MissingJ,
    #[error("SKT verdict requires an integrable J")]
    NotIntegrable,
}

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("report parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error("verification failed: {0}")]
    Failed(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StructureFacts {
    pub jacobi_ok: bool,
    pub solvable: bool,
    pub nilpotent: bool,
    pub abelian: bool,
    pub unimodular: bool,
    pub derived_length: usize,
    pub lower_central_length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_i: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nilradical_dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub almost_abelian: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrable: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abelian_j: Option<bool>,
}

/// A 2-form as JSON: ascending index lists with exact coefficients.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FormJson {
    pub terms: Vec<(Vec<usize>, String)>,
}

impl FormJson {
    pub fn from_form(f: &Form<Rat>) -> Self {
        let terms = f
            .terms()
            .map(|(mask, c)| {
                let mut idx = Vec::new();
                let mut m = mask;
                while m != 0 {
                    idx.push(m.trailing_zeros() as usize);
                    m &= m - 1;
                }
                (idx, rat_to_string(c))
            })
            .collect();
        FormJson { terms }
    }

    pub fn to_form(&self, dim: usize, degree: usize) -> Result<Form<Rat>, VerifyError> {
        let mut f = Form::zero(dim, degree);
        for (idx, coeff) in &self.terms {
            if idx.len() != degree {
                return Err(VerifyError::Failed(format!(
                    "form term has {} indices, expected {degree}",
                    idx.len()
                )));
            }
            let c = parse_rat(coeff).map_err(VerifyError::Parse)?;
            let mut mask = 0u64;
            for &i in idx {
                if i >= dim {
                    return Err(VerifyError::Failed(format!("index {i} out of range")));
                }
                mask |= 1 << i;
            }
            if mask.count_ones() as usize != degree {
                return Err(VerifyError::Failed("repeated index in form term".into()));
            }
            f = f.add(&Form::monomial(dim, mask, c));
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessJson {
    /// Coordinates in the embedded space basis.
    pub coefficients: Vec<String>,
    /// The witness form itself.
    pub form: FormJson,
    /// Leading principal minors of the associated symmetric form.
    pub minors: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsJson {
    pub best_lambda_min: f64,
    pub restarts: usize,
    pub iterations_per_restart: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_residual: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictRecord {
    /// "exists" | "not-exists" | "unknown"
    pub verdict: String,
    /// "closed-2-forms" | "ddc-closed-11-forms"
    pub condition: String,
    pub space_dim: usize,
    /// The space basis, embedded verbatim for standalone re-verification.
    pub space_basis: Vec<FormJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluations: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<DiagnosticsJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema: String,
    pub digest: String,
    pub seed: u64,
    pub tol: f64,
    pub facts: StructureFacts,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taming: Option<VerdictRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skt: Option<VerdictRecord>,
    pub input: AlgebraDocument,
    pub timing_ms: u128,
}

impl VerdictReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// The report with the timing field zeroed, for byte-identical
    /// determinism comparisons.
    pub fn detimed_json(&self) -> String {
        let mut c = self.clone();
        c.timing_ms = 0;
        c.to_json()
    }
}

fn structure_facts(g: &LieAlgebra, j: Option<&ComplexStructure>) -> StructureFacts {
    let solvable = g.is_solvable();
    StructureFacts {
        jacobi_ok: true,
        solvable,
        nilpotent: g.is_nilpotent(),
        abelian: g.is_abelian(),
        unimodular: g.is_unimodular(),
        derived_length: g.derived_series().len().saturating_sub(1),
        lower_central_length: g.lower_central_series().len().saturating_sub(1),
        type_i: solvable.then(|| crate::weights::is_type_i(g)),
        nilradical_dim: if solvable {
            g.nilradical().ok().map(|n| n.dim())
        } else {
            None
        },
        almost_abelian: if solvable {
            g.nilradical()
                .ok()
                .map(|n| n.dim() + 1 == g.dim() && n.is_abelian(g))
        } else {
            None
        },
        integrable: j.map(|j| j.is_integrable()),
        abelian_j: j.map(|j| j.is_abelian()),
    }
}

fn record_from_verdict(space: &FormSpace, verdict: &FeasibilityVerdict) -> VerdictRecord {
    let condition = match space.condition {
        SpaceCondition::Closed => "closed-2-forms",
        SpaceCondition::DdcClosed11 => "ddc-closed-11-forms",
    };
    let mut rec = VerdictRecord {
        verdict: verdict.label().to_string(),
        condition: condition.to_string(),
        space_dim: space.dim(),
        space_basis: space.basis.iter().map(FormJson::from_form).collect(),
        witness: None,
        direction: None,
        evaluations: None,
        diagnostics: None,
    };
    match verdict {
        FeasibilityVerdict::Exists(c) => {
            rec.witness = Some(WitnessJson {
                coefficients: c.coefficients.iter().map(rat_to_string).collect(),
                form: FormJson::from_form(&c.witness),
                minors: c.minors.iter().map(rat_to_string).collect(),
            });
        }
        FeasibilityVerdict::NotExists(c) => {
            rec.direction = Some(c.direction.iter().map(rat_to_string).collect());
            rec.evaluations = Some(c.evaluations.iter().map(rat_to_string).collect());
        }
        FeasibilityVerdict::Unknown(d) => {
            rec.diagnostics = Some(DiagnosticsJson {
                best_lambda_min: d.best_lambda_min,
                restarts: d.restarts,
                iterations_per_restart: d.iterations_per_restart,
                dual_residual: d.dual_residual,
                note: d.note.clone(),
            });
        }
    }
    rec
}

/// Structure facts only (the `check` command).
pub fn run_check(doc: &AlgebraDocument) -> Result<VerdictReport, ReportError> {
    let start = std::time::Instant::now();
    let g = doc.to_algebra()?;
    let j = doc.to_complex_structure(&g)?;
    let canonical = doc.emit();
    Ok(VerdictReport {
        schema: REPORT_SCHEMA.to_string(),
        digest: fnv1a64_hex(canonical.as_bytes()),
        seed: 0,
        tol: 0.0,
        facts: structure_facts(&g, j.as_ref()),
        taming: None,
        skt: None,
        input: doc.clone(),
        timing_ms: start.elapsed().as_millis(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecideMode {
    Taming,
    Skt,
}

/// Run the feasibility engine (the `decide` command). Exit-code contract:
/// 0 = exists, 1 = not-exists, 2 = unknown; callers map errors above 2.
pub fn run_decide(
    doc: &AlgebraDocument,
    mode: DecideMode,
    seed: u64,
    tol: f64,
) -> Result<(VerdictReport, i32), ReportError> {
    let start = std::time::Instant::now();
    let g = doc.to_algebra()?;
    let j = doc.to_complex_structure(&g)?.ok_or(ReportError::MissingJ)?;
    let canonical = doc.emit();
    let mut report = VerdictReport {
        schema: REPORT_SCHEMA.to_string(),
        digest: fnv1a64_hex(canonical.as_bytes()),
        seed,
        tol,
        facts: structure_facts(&g, Some(&j)),
        taming: None,
        skt: None,
        input: doc.clone(),
        timing_ms: 0,
    };
    let verdict = match mode {
        DecideMode::Taming => {
            let space = closed_two_forms(&g);
            let v = decide_space_with(&g, &j, &space, seed, tol);
            report.taming = Some(record_from_verdict(&space, &v));
            v
        }
        DecideMode::Skt => {
            let space = ddc_closed_11_forms(&g, &j).map_err(|_| ReportError::NotIntegrable)?;
            let v = decide_space_with(&g, &j, &space, seed, tol);
            report.skt = Some(record_from_verdict(&space, &v));
            v
        }
    };
    report.timing_ms = start.elapsed().as_millis();
    let code = match verdict {
        FeasibilityVerdict::Exists(_) => 0,
        FeasibilityVerdict::NotExists(_) => 1,
        FeasibilityVerdict::Unknown(_) => 2,
    };
    Ok((report, code))
}

// ---------------------------------------------------------------------------
// Standalone re-verification
// ---------------------------------------------------------------------------

fn parse_vec(strings: &[String]) -> Result<Vec<Rat>, VerifyError> {
    strings
        .iter()
        .map(|s| parse_rat(s).map_err(VerifyError::Parse))
        .collect()
}

fn spaces_equal(a: &[Form<Rat>], b: &[Form<Rat>], dim: usize) -> bool {
    let masks = crate::exterior::monomials(dim, 2);
    let rows_a: Vec<Vec<Rat>> = a.iter().map(|f| f.coeff_vector(&masks)).collect();
    let rows_b: Vec<Vec<Rat>> = b.iter().map(|f| f.coeff_vector(&masks)).collect();
    let ea = crate::mat::echelon_basis(&rows_a, masks.len());
    let eb = crate::mat::echelon_basis(&rows_b, masks.len());
    ea == eb
}

fn verify_record(
    g: &LieAlgebra,
    j: &ComplexStructure,
    rec: &VerdictRecord,
) -> Result<String, VerifyError> {
    let n = g.dim();
    // 1. the embedded basis satisfies the defining condition exactly
    let basis: Vec<Form<Rat>> = rec
        .space_basis
        .iter()
        .map(|f| f.to_form(n, 2))
        .collect::<Result<_, _>>()?;
    let expected_space = match rec.condition.as_str() {
        "closed-2-forms" => closed_two_forms(g),
        "ddc-closed-11-forms" => crate::decide::ddc_closed_11_forms_unchecked(g, j),
        other => return Err(VerifyError::Failed(format!("unknown condition {other}"))),
    };
    for (idx, f) in basis.iter().enumerate() {
        let holds = match rec.condition.as_str() {
            "closed-2-forms" => g.ce_d(f).is_zero(),
            _ => {
                crate::cxstruct::apply_j_form(j, f) == *f
                    && crate::cxstruct::ddc(g, j, f).is_zero()
            }
        };
        if !holds {
            return Err(VerifyError::Failed(format!(
                "embedded basis element {idx} violates {}",
                rec.condition
            )));
        }
    }
    // 2. the embedded basis spans the whole solution space
    if !spaces_equal(&basis, &expected_space.basis, n) {
        return Err(VerifyError::Failed(
            "embedded basis does not span the full solution space".into(),
        ));
    }
    if rec.space_dim != basis.len() {
        return Err(VerifyError::Failed("space_dim does not match basis".into()));
    }
    // 3. the certificate itself
    match rec.verdict.as_str() {
        "not-exists" => {
            let dir = parse_vec(rec.direction.as_ref().ok_or_else(|| {
                VerifyError::Failed("not-exists record without direction".into())
            })?)?;
            if dir.len() != n || dir.iter().all(|c| Zero::is_zero(c)) {
                return Err(VerifyError::Failed("direction must be a nonzero vector".into()));
            }
            let jdir = j.apply_vec(&dir);
            for (idx, f) in basis.iter().enumerate() {
                if !Zero::is_zero(&omega_eval(f, &dir, &jdir)) {
                    return Err(VerifyError::Failed(format!(
                        "Omega_{idx}(X, JX) != 0: certificate unsound"
                    )));
                }
            }
            Ok(format!(
                "not-exists verified: {} basis evaluations vanish exactly",
                basis.len()
            ))
        }
        "exists" => {
            let w = rec.witness.as_ref().ok_or_else(|| {
                VerifyError::Failed("exists record without witness".into())
            })?;
            let coeffs = parse_vec(&w.coefficients)?;
            if coeffs.len() != basis.len() {
                return Err(VerifyError::Failed("witness coefficient arity mismatch".into()));
            }
            let mut witness = Form::zero(n, 2);
            for (c, f) in coeffs.iter().zip(&basis) {
                witness = witness.add(&f.scale(c));
            }
            let embedded = w.form.to_form(n, 2)?;
            if witness != embedded {
                return Err(VerifyError::Failed(
                    "witness form does not match its coefficients".into(),
                ));
            }
            let holds = match rec.condition.as_str() {
                "closed-2-forms" => g.ce_d(&witness).is_zero(),
                _ => {
                    crate::cxstruct::apply_j_form(j, &witness) == witness
                        && crate::cxstruct::ddc(g, j, &witness).is_zero()
                }
            };
            if !holds {
                return Err(VerifyError::Failed("witness violates the defining condition".into()));
            }
            let s = taming_gram(&witness, j);
            let minors = leading_principal_minors(&s);
            if !minors.iter().all(|m| m.is_positive()) {
                return Err(VerifyError::Failed("witness gram is not positive definite".into()));
            }
            let embedded_minors = parse_vec(&w.minors)?;
            if embedded_minors != minors {
                return Err(VerifyError::Failed("embedded minors do not match".into()));
            }
            Ok(format!("exists verified: {} minors all positive", minors.len()))
        }
        "unknown" => Ok("unknown verdict carries no certificate".into()),
        other => Err(VerifyError::Failed(format!("unknown verdict {other}"))),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub digest_ok: bool,
    pub taming: Option<String>,
    pub skt: Option<String>,
}

/// Re-verify every certificate in a report from its JSON alone.
pub fn verify_report(text: &str) -> Result<VerifySummary, VerifyError> {
    let report: VerdictReport =
        serde_json::from_str(text).map_err(|e| VerifyError::Parse(e.to_string()))?;
    let g = report.input.to_algebra()?;
    let j = report.input.to_complex_structure(&g)?;
    let digest_ok = fnv1a64_hex(report.input.emit().as_bytes()) == report.digest;
    if !digest_ok {
        return Err(VerifyError::Failed("digest does not match the embedded input".into()));
    }
    let require_j = || j.clone().ok_or_else(|| VerifyError::Failed("report input has no J".into()));
    let taming = match report.taming.as_ref() {
        Some(rec) => Some(verify_record(&g, &require_j()?, rec)?),
        None => None,
    };
    let skt = match report.skt.as_ref() {
        Some(rec) => Some(verify_record(&g, &require_j()?, rec)?),
        None => None,
    };
    Ok(VerifySummary { digest_ok, taming, skt })
}

// ---------------------------------------------------------------------------
// The regression table
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct PaperRow {
    pub id: String,
    pub expected_taming: Option<String>,
    pub got_taming: Option<String>,
    pub expected_skt: Option<String>,
    pub got_skt: Option<String>,
    pub unimodular_expected: Option<bool>,
    pub unimodular_got: bool,
    pub certificates_verified: bool,
    pub matched: bool,
    pub ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct PaperTable {
    pub rows: Vec<PaperRow>,
    pub all_match: bool,
}

fn expectation_label(e: Option<bool>) -> Option<String> {
    e.map(|b| if b { "exists".to_string() } else { "not-exists".to_string() })
}

/// Run the expected-verdict table over one entry.
pub fn run_entry(entry: &CatalogEntry, seed: u64, tol: f64) -> PaperRow {
    let start = std::time::Instant::now();
    let doc = AlgebraDocument::from_entry(entry);
    let expected_taming = expectation_label(entry.expected.taming);
    let expected_skt = expectation_label(entry.expected.skt);
    let mut got_taming = None;
    let mut got_skt = None;
    let mut certificates_verified = true;
    if entry.expected.taming.is_some() {
        match run_decide(&doc, DecideMode::Taming, seed, tol) {
            Ok((report, _)) => {
                got_taming = report.taming.as_ref().map(|r| r.verdict.clone());
                if verify_report(&report.to_json()).is_err() {
                    certificates_verified = false;
                }
            }
            Err(_) => certificates_verified = false,
        }
    }
    if entry.expected.skt.is_some() {
        match run_decide(&doc, DecideMode::Skt, seed, tol) {
            Ok((report, _)) => {
                got_skt = report.skt.as_ref().map(|r| r.verdict.clone());
                if verify_report(&report.to_json()).is_err() {
                    certificates_verified = false;
                }
            }
            Err(_) => certificates_verified = false,
        }
    }
    let unimodular_got = entry.algebra.is_unimodular();
    let entry_valid = entry.validate().is_ok();
    let matched = entry_valid
        && certificates_verified
        && got_taming == expected_taming
        && got_skt == expected_skt
        && entry.expected.unimodular.is_none_or(|u| u == unimodular_got);
    PaperRow {
        id: entry.id.clone(),
        expected_taming,
        got_taming,
        expected_skt,
        got_skt,
        unimodular_expected: entry.expected.unimodular,
        unimodular_got,
        certificates_verified,
        matched,
        ms: start.elapsed().as_millis(),
    }
}

/// The full regression table; `only` filters entry ids by substring.
pub fn paper_table(only: Option<&str>, seed: u64, tol: f64) -> PaperTable {
    let mut rows = Vec::new();
    for entry in default_entries() {
        if let Some(filter) = only {
            if !entry.id.contains(filter) {
                continue;
            }
        }
        rows.push(run_entry(&entry, seed, tol));
    }
    let all_match = rows.iter().all(|r| r.matched);
    PaperTable { rows, all_match }
}
