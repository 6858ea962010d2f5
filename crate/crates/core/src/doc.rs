//! The JSON interchange format for algebras: dimension, named basis,
//! brackets with exact `"p/q"` coefficients, an optional J matrix, and
//! optional declared subspaces. Rationals are strings so that no float ever
//! sneaks through parsing; emission is canonical and round-trips losslessly.

use serde::{Deserialize, Serialize};

use crate::cxstruct::{ComplexStructure, CxError};
use crate::liecore::{LieAlgebra, LieError, Subspace};
use crate::scalar::{parse_rat, rat_to_string, Rat};
use thiserror::Error;

pub const ALGEBRA_SCHEMA: &str = "solvtame.algebra/1";

#[derive(Debug, Error)]
pub enum DocError {
    #[error("JSON parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported schema `{0}` (expected {ALGEBRA_SCHEMA})")]
    Schema(String),
    #[error("basis has {0} names but dimension is {1}")]
    BasisMismatch(usize, usize),
    #[error("bad coefficient: {0}")]
    Coefficient(String),
    #[error("bracket index out of range: {0}")]
    IndexOutOfRange(usize),
    #[error("J matrix must be {0}x{0}")]
    BadJShape(usize),
    #[error("the document declares no J matrix")]
    MissingJ,
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cx(#[from] CxError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub k: usize,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketRow {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub schema: String,
    pub dimension: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketRow>,
    /// Row-major rational J matrix, if a complex structure is declared.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<String>>>,
    /// Declared nilpotent complement of the nilradical, as coefficient rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement: Option<Vec<Vec<String>>>,
    /// Declared semidirect splitting, as coefficient rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting_s: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting_h: Option<Vec<Vec<String>>>,
}

fn parse_coeff(s: &str) -> Result<Rat, DocError> {
    parse_rat(s).map_err(DocError::Coefficient)
}

fn parse_matrix(rows: &[Vec<String>], n: usize) -> Result<crate::mat::Mat<Rat>, DocError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(DocError::BadJShape(n));
    }
    let mut m = crate::mat::Mat::zero(n, n);
    for (r, row) in rows.iter().enumerate() {
        for (c, entry) in row.iter().enumerate() {
            m[(r, c)] = parse_coeff(entry)?;
        }
    }
    Ok(m)
}

fn parse_rows(rows: &[Vec<String>], n: usize) -> Result<Vec<Vec<Rat>>, DocError> {
    let mut out = Vec::new();
    for row in rows {
        if row.len() != n {
            return Err(DocError::BasisMismatch(row.len(), n));
        }
        out.push(row.iter().map(|s| parse_coeff(s)).collect::<Result<_, _>>()?);
    }
    Ok(out)
}

impl AlgebraDocument {
    pub fn parse(text: &str) -> Result<Self, DocError> {
        let doc: AlgebraDocument = serde_json::from_str(text).map_err(|e| DocError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if doc.schema != ALGEBRA_SCHEMA {
            return Err(DocError::Schema(doc.schema));
        }
        if doc.basis.len() != doc.dimension {
            return Err(DocError::BasisMismatch(doc.basis.len(), doc.dimension));
        }
        Ok(doc)
    }

    /// Canonical pretty JSON: brackets sorted by (i, j), terms by k,
    /// coefficients normalized.
    pub fn emit(&self) -> String {
        let mut doc = self.clone();
        doc.canonicalize();
        serde_json::to_string_pretty(&doc).expect("document serialization")
    }

    pub fn canonicalize(&mut self) {
        for row in &mut self.brackets {
            if row.i > row.j {
                std::mem::swap(&mut row.i, &mut row.j);
                for t in &mut row.terms {
                    if let Ok(c) = parse_rat(&t.coeff) {
                        t.coeff = rat_to_string(&(-c));
                    }
                }
            }
            row.terms.sort_by_key(|t| t.k);
            for t in &mut row.terms {
                if let Ok(c) = parse_rat(&t.coeff) {
                    t.coeff = rat_to_string(&c);
                }
            }
            row.terms.retain(|t| t.coeff != "0");
        }
        self.brackets.retain(|r| !r.terms.is_empty());
        self.brackets.sort_by_key(|r| (r.i, r.j));
        if let Some(j) = &mut self.j {
            for row in j {
                for e in row {
                    if let Ok(c) = parse_rat(e) {
                        *e = rat_to_string(&c);
                    }
                }
            }
        }
    }

    /// Validate and build the algebra (Jacobi included).
    pub fn to_algebra(&self) -> Result<LieAlgebra, DocError> {
        let n = self.dimension;
        let mut entries = Vec::new();
        for row in &self.brackets {
            if row.i >= n || row.j >= n {
                return Err(DocError::IndexOutOfRange(row.i.max(row.j)));
            }
            let mut terms = Vec::new();
            for t in &row.terms {
                if t.k >= n {
                    return Err(DocError::IndexOutOfRange(t.k));
                }
                terms.push((t.k, parse_coeff(&t.coeff)?));
            }
            entries.push((row.i, row.j, terms));
        }
        Ok(LieAlgebra::new(self.basis.clone(), entries)?)
    }

    pub fn to_complex_structure(&self, g: &LieAlgebra) -> Result<Option<ComplexStructure>, DocError> {
        match &self.j {
            None => Ok(None),
            Some(rows) => {
                let m = parse_matrix(rows, self.dimension)?;
                Ok(Some(ComplexStructure::new(g, m)?))
            }
        }
    }

    pub fn declared_complement(&self) -> Result<Option<Subspace>, DocError> {
        match &self.complement {
            None => Ok(None),
            Some(rows) => Ok(Some(Subspace::from_vectors(
                self.dimension,
                &parse_rows(rows, self.dimension)?,
            ))),
        }
    }

    pub fn declared_splitting(&self) -> Result<Option<(Subspace, Subspace)>, DocError> {
        match (&self.splitting_s, &self.splitting_h) {
            (Some(s), Some(h)) => Ok(Some((
                Subspace::from_vectors(self.dimension, &parse_rows(s, self.dimension)?),
                Subspace::from_vectors(self.dimension, &parse_rows(h, self.dimension)?),
            ))),
            _ => Ok(None),
        }
    }

    /// Document for an algebra (optionally with J and declared subspaces).
    pub fn from_algebra(
        g: &LieAlgebra,
        j: Option<&ComplexStructure>,
        complement: Option<&Subspace>,
        splitting: Option<&(Subspace, Subspace)>,
    ) -> Self {
        let n = g.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for jj in i + 1..n {
                let terms: Vec<Term> = g
                    .bracket_basis(i, jj)
                    .into_iter()
                    .map(|(k, c)| Term { k, coeff: rat_to_string(&c) })
                    .collect();
                if !terms.is_empty() {
                    brackets.push(BracketRow { i, j: jj, terms });
                }
            }
        }
        let jm = j.map(|cs| {
            (0..n)
                .map(|r| (0..n).map(|c| rat_to_string(&cs.matrix()[(r, c)])).collect())
                .collect()
        });
        let rows_of = |s: &Subspace| -> Vec<Vec<String>> {
            s.basis()
                .iter()
                .map(|v| v.iter().map(rat_to_string).collect())
                .collect()
        };
        AlgebraDocument {
            schema: ALGEBRA_SCHEMA.to_string(),
            dimension: n,
            basis: g.names().to_vec(),
            brackets,
            j: jm,
            complement: complement.map(rows_of),
            splitting_s: splitting.map(|(s, _)| rows_of(s)),
            splitting_h: splitting.map(|(_, h)| rows_of(h)),
        }
    }

    pub fn from_entry(e: &crate::catalog::CatalogEntry) -> Self {
        AlgebraDocument::from_algebra(
            &e.algebra,
            Some(&e.j),
            e.complement.as_ref(),
            e.splitting.as_ref(),
        )
    }
}

/// FNV-1a 64-bit hex digest, used to fingerprint canonical documents.
pub fn fnv1a64_hex(data: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in data {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}
