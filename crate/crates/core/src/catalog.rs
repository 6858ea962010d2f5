//! Constructors for the reference families: the OT solvable algebras, the
//! complex semidirect products with pseudo-Kahler forms, Yamada's algebra,
//! the abelian-J and almost-abelian examples, and affine algebras of
//! commutative associative algebras. Each entry bundles its complex
//! structure, any declared splittings, and the expected verdicts that the
//! regression table reproduces.

use std::collections::BTreeMap;

use crate::cxstruct::{ComplexStructure, CxError};
use crate::exterior::Form;
use crate::liecore::{LieAlgebra, LieError, Subspace};
use crate::scalar::{parse_rat, rat, ratio, Rat};
use num_traits::{One, Zero};
use thiserror::Error;

fn rzero() -> Rat {
    <Rat as Zero>::zero()
}

fn rone() -> Rat {
    <Rat as One>::one()
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("parameters violate unimodularity: column sums of b must equal 1")]
    NotUnimodular,
    #[error("parameter must be nonzero")]
    ZeroParameter,
    #[error("multiplication table is not associative")]
    NotAssociative,
    #[error("multiplication table is not commutative")]
    NotCommutative,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("unknown catalog id: {0}")]
    UnknownId(String),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cx(#[from] CxError),
}

/// Expected verdicts and structure facts, `None` when the sources do not
/// pin the answer.
#[derive(Debug, Clone, Default)]
pub struct Expectations {
    /// `Some(true)` = a taming form exists, `Some(false)` = none exists.
    pub taming: Option<bool>,
    pub skt: Option<bool>,
    pub unimodular: Option<bool>,
    pub integrable: bool,
    pub abelian_j: Option<bool>,
    pub type_i: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub description: String,
    pub params: Vec<(String, Rat)>,
    pub algebra: LieAlgebra,
    pub j: ComplexStructure,
    /// Declared nilpotent complement of the nilradical, when the family has one.
    pub complement: Option<Subspace>,
    /// Declared semidirect splitting (s, h), when the family has one.
    pub splitting: Option<(Subspace, Subspace)>,
    /// Named forms shipped with the entry (e.g. a pseudo-Kahler form).
    pub bundled_forms: Vec<(String, Form<Rat>)>,
    pub expected: Expectations,
}

impl CatalogEntry {
    /// Exact validation of everything the entry declares about itself.
    pub fn validate(&self) -> Result<(), String> {
        if !self.algebra.check_jacobi() {
            return Err(format!("{}: Jacobi fails", self.id));
        }
        if self.j.is_integrable() != self.expected.integrable {
            return Err(format!(
                "{}: integrability is {}, expected {}",
                self.id,
                self.j.is_integrable(),
                self.expected.integrable
            ));
        }
        if let Some(u) = self.expected.unimodular {
            if self.algebra.is_unimodular() != u {
                return Err(format!("{}: unimodularity mismatch", self.id));
            }
        }
        if let Some(a) = self.expected.abelian_j {
            if self.j.is_abelian() != a {
                return Err(format!("{}: abelian-J mismatch", self.id));
            }
        }
        if let Some(t) = self.expected.type_i {
            if crate::weights::is_type_i(&self.algebra) != t {
                return Err(format!("{}: type-(I) mismatch", self.id));
            }
        }
        if let Some(c) = &self.complement {
            let nil = self.algebra.nilradical().map_err(|e| format!("{}: {e}", self.id))?;
            if !c.is_subalgebra(&self.algebra)
                || !crate::liecore::subalgebra_is_nilpotent(&self.algebra, c)
                || c.sum(&nil).dim() != self.algebra.dim()
            {
                return Err(format!("{}: declared complement does not validate", self.id));
            }
        }
        if let Some((s, h)) = &self.splitting {
            if !h.is_ideal(&self.algebra)
                || !s.is_subalgebra(&self.algebra)
                || s.sum(h).dim() != self.algebra.dim()
                || s.intersect(h).dim() != 0
            {
                return Err(format!("{}: declared splitting does not validate", self.id));
            }
        }
        for (name, f) in &self.bundled_forms {
            if f.dim() != self.algebra.dim() {
                return Err(format!("{}: bundled form {name} has wrong dimension", self.id));
            }
        }
        Ok(())
    }
}

fn coord(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![rzero(); n];
    v[i] = rone();
    v
}

fn span(n: usize, indices: &[usize]) -> Subspace {
    Subspace::from_vectors(n, &indices.iter().map(|&i| coord(n, i)).collect::<Vec<_>>())
}

// ---------------------------------------------------------------------------
// OT algebras
// ---------------------------------------------------------------------------

/// The solvable algebra behind the type-(s,t) construction, with dual
/// structure equations
/// `d a_i = 0`, `d b_i = -a_i ^ b_i`,
/// `d g_{2k-1} = psi_k ^ g_{2k-1} + phi_k ^ g_{2k}`,
/// `d g_{2k}  = -phi_k ^ g_{2k-1} + psi_k ^ g_{2k}`,
/// where `psi_k = (1/2) sum_i b_ik a_i` and `phi_k = sum_i c_ik a_i`.
/// Unimodularity forces `sum_k b_ik = 1` for every i.
///
/// Basis order: A_1..A_s, B_1..B_s, G_1..G_2t. J comes from the (1,0)
/// coframe `a_i + sqrt(-1) b_i`, `g_{2k-1} + sqrt(-1) g_{2k}`.
pub fn build_ot(s: usize, t: usize, b: &[Vec<Rat>], c: &[Vec<Rat>]) -> Result<CatalogEntry, CatalogError> {
    if s < 1 || t < 1 {
        return Err(CatalogError::BadParameter("need s >= 1 and t >= 1".into()));
    }
    if b.len() != s || c.len() != s || b.iter().any(|r| r.len() != t) || c.iter().any(|r| r.len() != t) {
        return Err(CatalogError::BadParameter("b and c must be s x t".into()));
    }
    for i in 0..s {
        let sum: Rat = b[i].iter().cloned().sum();
        if sum != rone() {
            return Err(CatalogError::NotUnimodular);
        }
    }
    let n = 2 * s + 2 * t;
    let a_idx = |i: usize| i; // 0..s
    let b_idx = |i: usize| s + i; // s..2s
    let g_idx = |k: usize| 2 * s + k; // 2s..2s+2t, k = 0..2t
    let mut names = Vec::new();
    for i in 1..=s {
        names.push(format!("A{i}"));
    }
    for i in 1..=s {
        names.push(format!("B{i}"));
    }
    for k in 1..=2 * t {
        names.push(format!("G{k}"));
    }
    let mut entries = Vec::new();
    for i in 0..s {
        // [A_i, B_i] = B_i
        entries.push((a_idx(i), b_idx(i), vec![(b_idx(i), rone())]));
        for k in 0..t {
            let half_b = &b[i][k] * ratio(1, 2);
            // [A_i, G_{2k-1}] = -(b_ik/2) G_{2k-1} + c_ik G_{2k}
            entries.push((
                a_idx(i),
                g_idx(2 * k),
                vec![(g_idx(2 * k), -half_b.clone()), (g_idx(2 * k + 1), c[i][k].clone())],
            ));
            // [A_i, G_{2k}] = -c_ik G_{2k-1} - (b_ik/2) G_{2k}
            entries.push((
                a_idx(i),
                g_idx(2 * k + 1),
                vec![(g_idx(2 * k), -c[i][k].clone()), (g_idx(2 * k + 1), -half_b)],
            ));
        }
    }
    let algebra = LieAlgebra::new(names, entries)?;
    let mut pairs = Vec::new();
    for i in 0..s {
        pairs.push((a_idx(i), b_idx(i)));
    }
    for k in 0..t {
        pairs.push((g_idx(2 * k), g_idx(2 * k + 1)));
    }
    let j = ComplexStructure::from_pairs(&algebra, &pairs)?;
    // splitting: s-part = span{A_i, B_i} (an (r2)^s), h = span{G_*} (C^t)
    let s_part = span(n, &(0..2 * s).collect::<Vec<_>>());
    let h_part = span(n, &(2 * s..n).collect::<Vec<_>>());
    let mut params = vec![("s".to_string(), rat(s as i64)), ("t".to_string(), rat(t as i64))];
    for i in 0..s {
        for k in 0..t {
            params.push((format!("b{}{}", i + 1, k + 1), b[i][k].clone()));
            params.push((format!("c{}{}", i + 1, k + 1), c[i][k].clone()));
        }
    }
    let skt = if t == 1 {
        Some(s == 1)
    } else {
        None
    };
    Ok(CatalogEntry {
        id: format!("ot-{s}-{t}"),
        description: format!("type-({s},{t}) solvable algebra with its standard complex structure"),
        params,
        algebra,
        j,
        complement: None,
        splitting: Some((s_part, h_part)),
        bundled_forms: vec![],
        expected: Expectations {
            taming: Some(false),
            skt,
            unimodular: Some(true),
            integrable: true,
            abelian_j: Some(false),
            type_i: Some(false),
        },
    })
}

/// Default parameters: `b_ik = 1/t` (unimodular) and `c_ik = i + k`.
pub fn build_ot_default(s: usize, t: usize) -> Result<CatalogEntry, CatalogError> {
    let b = vec![vec![ratio(1, t as i64); t]; s];
    let c: Vec<Vec<Rat>> = (0..s)
        .map(|i| (0..t).map(|k| rat((i + k + 2) as i64)).collect())
        .collect();
    build_ot(s, t, &b, &c)
}

// ---------------------------------------------------------------------------
// Complex semidirect product with a pseudo-Kahler form
// ---------------------------------------------------------------------------

/// `C ⋉ C^{2m}` where the real direction of the first factor scales the
/// k-th complex coordinate pair by `(e^{a_k x}, e^{-a_k x})`. Ships the
/// closed pseudo-Kahler 2-form built from the complex coordinate pairing.
///
/// Basis order: U, V = JU, then for each k: P_{2k-1}, Q_{2k-1}, P_{2k},
/// Q_{2k} with J P = Q.
pub fn build_c_semidirect(m: usize, a: &[i64]) -> Result<CatalogEntry, CatalogError> {
    if m < 1 || a.len() != m {
        return Err(CatalogError::BadParameter("need m >= 1 and m weights".into()));
    }
    if a.iter().any(|&x| x == 0) {
        return Err(CatalogError::ZeroParameter);
    }
    let n = 2 + 4 * m;
    let p_idx = |k: usize| 2 + 2 * k; // k = 0..2m: P_{k+1}
    let q_idx = |k: usize| 2 + 2 * k + 1;
    let mut names = vec!["U".to_string(), "V".to_string()];
    for k in 1..=2 * m {
        names.push(format!("P{k}"));
        names.push(format!("Q{k}"));
    }
    let mut entries = Vec::new();
    for i in 0..m {
        let w = rat(a[i]);
        // [U, P_{2i-1}] = a_i P_{2i-1}, [U, Q_{2i-1}] = a_i Q_{2i-1}
        entries.push((0, p_idx(2 * i), vec![(p_idx(2 * i), w.clone())]));
        entries.push((0, q_idx(2 * i), vec![(q_idx(2 * i), w.clone())]));
        // [U, P_{2i}] = -a_i P_{2i}, [U, Q_{2i}] = -a_i Q_{2i}
        entries.push((0, p_idx(2 * i + 1), vec![(p_idx(2 * i + 1), -w.clone())]));
        entries.push((0, q_idx(2 * i + 1), vec![(q_idx(2 * i + 1), -w)]));
    }
    let algebra = LieAlgebra::new(names, entries)?;
    let mut pairs = vec![(0, 1)];
    for k in 0..2 * m {
        pairs.push((p_idx(k), q_idx(k)));
    }
    let j = ComplexStructure::from_pairs(&algebra, &pairs)?;
    // pseudo-Kahler form: 2 x^y + sum 2 (p_{2i-1}^p_{2i} + q_{2i-1}^q_{2i})
    let mut omega: Form<Rat> = Form::monomial(n, 0b11, rat(2));
    for i in 0..m {
        let pmask = (1u64 << p_idx(2 * i)) | (1u64 << p_idx(2 * i + 1));
        let qmask = (1u64 << q_idx(2 * i)) | (1u64 << q_idx(2 * i + 1));
        omega = omega.add(&Form::monomial(n, pmask, rat(2)));
        omega = omega.add(&Form::monomial(n, qmask, rat(2)));
    }
    let s_part = span(n, &[0, 1]);
    let h_part = span(n, &(2..n).collect::<Vec<_>>());
    Ok(CatalogEntry {
        id: format!("csd-{m}"),
        description: format!("C semidirect C^{} with its pseudo-Kahler form", 2 * m),
        params: a
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("a{}", i + 1), rat(*v)))
            .collect(),
        algebra,
        j,
        complement: None,
        splitting: Some((s_part, h_part)),
        bundled_forms: vec![("pseudo_kahler".to_string(), omega)],
        expected: Expectations {
            taming: Some(false),
            skt: Some(false),
            unimodular: Some(true),
            integrable: true,
            abelian_j: Some(false),
            type_i: Some(false),
        },
    })
}

// ---------------------------------------------------------------------------
// Yamada's 20-dimensional algebra
// ---------------------------------------------------------------------------

/// The 28-dimensional solvable algebra with pseudo-Kahler structures,
/// split as span{A_i, W_i} ⋉ span{X_j, Y_j, Z_j, X'_j, Y'_j, Z'_j}
/// (i = 1, 2 and j = 1..4).
pub fn build_yamada(t0: Rat) -> Result<CatalogEntry, CatalogError> {
    if t0.is_zero() {
        return Err(CatalogError::ZeroParameter);
    }
    // indices: A1 A2 W1 W2 | X1..X4 Y1..Y4 Z1..Z4 | X'1..X'4 Y'1..Y'4 Z'1..Z'4
    let names: Vec<String> = ["A1", "A2", "W1", "W2"]
        .iter()
        .map(|s| s.to_string())
        .chain((1..=4).map(|j| format!("X{j}")))
        .chain((1..=4).map(|j| format!("Y{j}")))
        .chain((1..=4).map(|j| format!("Z{j}")))
        .chain((1..=4).map(|j| format!("Xp{j}")))
        .chain((1..=4).map(|j| format!("Yp{j}")))
        .chain((1..=4).map(|j| format!("Zp{j}")))
        .collect();
    let a1 = 0;
    let a2 = 1;
    let w1 = 2;
    let x = |j: usize| 3 + j; // j = 1..4 -> 4..7
    let y = |j: usize| 7 + j;
    let z = |j: usize| 11 + j;
    let xp = |j: usize| 15 + j;
    let yp = |j: usize| 19 + j;
    let zp = |j: usize| 23 + j;
    // weights of ad_{A1} on X_j, Y_j, Z_j (and of ad_{A2} on the primes)
    let xw = [1i64, 1, -1, -1];
    let yw = [-2i64, -2, 2, 2];
    let zw = [-1i64, -1, 1, 1];
    let mut entries = vec![(a1, a2, vec![(w1, rone())])];
    for j in 1..=4 {
        entries.push((a1, x(j), vec![(x(j), &t0 * rat(xw[j - 1]))]));
        entries.push((a1, y(j), vec![(y(j), &t0 * rat(yw[j - 1]))]));
        entries.push((a1, z(j), vec![(z(j), &t0 * rat(zw[j - 1]))]));
        entries.push((a2, xp(j), vec![(xp(j), &t0 * rat(xw[j - 1]))]));
        entries.push((a2, yp(j), vec![(yp(j), &t0 * rat(yw[j - 1]))]));
        entries.push((a2, zp(j), vec![(zp(j), &t0 * rat(zw[j - 1]))]));
    }
    entries.push((x(1), y(1), vec![(z(1), rone())]));
    entries.push((x(3), y(3), vec![(z(3), rone())]));
    entries.push((x(2), y(1), vec![(z(2), rone())]));
    entries.push((x(4), y(3), vec![(z(4), rone())]));
    entries.push((xp(1), yp(1), vec![(zp(1), rone())]));
    entries.push((xp(3), yp(3), vec![(zp(3), rone())]));
    entries.push((xp(2), yp(1), vec![(zp(2), rone())]));
    entries.push((xp(4), yp(3), vec![(zp(4), rone())]));
    let algebra = LieAlgebra::new(names, entries)?;
    let mut pairs = vec![(a1, a2), (w1, 3)];
    for j in [1usize, 3] {
        pairs.push((x(j), x(j + 1)));
        pairs.push((y(j), y(j + 1)));
        pairs.push((z(j), z(j + 1)));
        pairs.push((xp(j), xp(j + 1)));
        pairs.push((yp(j), yp(j + 1)));
        pairs.push((zp(j), zp(j + 1)));
    }
    let j = ComplexStructure::from_pairs(&algebra, &pairs)?;
    let s_part = span(28, &[0, 1, 2, 3]);
    let h_part = span(28, &(4..28).collect::<Vec<_>>());
    Ok(CatalogEntry {
        id: "yamada".to_string(),
        description: "28-dimensional solvable algebra with pseudo-Kahler structures".to_string(),
        params: vec![("t0".to_string(), t0)],
        algebra,
        j,
        complement: None,
        splitting: Some((s_part, h_part)),
        bundled_forms: vec![],
        expected: Expectations {
            taming: None,
            skt: Some(false),
            unimodular: Some(true),
            integrable: true,
            abelian_j: Some(false),
            type_i: Some(false),
        },
    })
}

// ---------------------------------------------------------------------------
// Abelian-J and almost-abelian examples
// ---------------------------------------------------------------------------

/// The 6-dimensional unimodular algebra with abelian complex structure:
/// `[f1,e1] = [f2,e2] = e1`, `[f1,e2] = -[f2,e1] = e2`,
/// `[f1,e3] = [f2,e4] = -e3`, `[f1,e4] = -[f2,e3] = -e4`,
/// `J f1 = f2, J e1 = e2, J e3 = e4`.
/// Basis order: f1, f2, e1, e2, e3, e4.
pub fn build_s_minus_one_zero() -> Result<CatalogEntry, CatalogError> {
    let names = vec!["f1".into(), "f2".into(), "e1".into(), "e2".into(), "e3".into(), "e4".into()];
    let entries = vec![
        (0, 2, vec![(2, rat(1))]),  // [f1,e1] = e1
        (1, 3, vec![(2, rat(1))]),  // [f2,e2] = e1
        (0, 3, vec![(3, rat(1))]),  // [f1,e2] = e2
        (1, 2, vec![(3, rat(-1))]), // [f2,e1] = -e2
        (0, 4, vec![(4, rat(-1))]), // [f1,e3] = -e3
        (1, 5, vec![(4, rat(-1))]), // [f2,e4] = -e3
        (0, 5, vec![(5, rat(-1))]), // [f1,e4] = -e4
        (1, 4, vec![(5, rat(1))]),  // [f2,e3] = e4
    ];
    let algebra = LieAlgebra::new(names, entries)?;
    let j = ComplexStructure::from_pairs(&algebra, &[(0, 1), (2, 3), (4, 5)])?;
    let complement = span(6, &[0, 1]);
    Ok(CatalogEntry {
        id: "s-minus1-0".to_string(),
        description: "6-dim unimodular solvable algebra with its abelian complex structure".to_string(),
        params: vec![],
        algebra,
        j,
        complement: Some(complement),
        splitting: None,
        bundled_forms: vec![],
        expected: Expectations {
            taming: Some(false),
            skt: None,
            unimodular: Some(true),
            integrable: true,
            abelian_j: Some(true),
            type_i: Some(false),
        },
    })
}

/// The 4-dimensional Kahler model: rotation algebra plus a central line,
/// `[e1,e2] = -e3, [e1,e3] = e2`, with `J e1 = e4, J e2 = e3`. An invariant
/// taming form exists (found by the feasibility engine).
pub fn build_tau_tau_prime_30() -> Result<CatalogEntry, CatalogError> {
    let names = vec!["e1".into(), "e2".into(), "e3".into(), "e4".into()];
    let entries = vec![(0, 1, vec![(2, rat(-1))]), (0, 2, vec![(1, rat(1))])];
    let algebra = LieAlgebra::new(names, entries)?;
    let j = ComplexStructure::from_pairs(&algebra, &[(0, 3), (1, 2)])?;
    Ok(CatalogEntry {
        id: "tau-tau-prime-30".to_string(),
        description: "almost-abelian rotation algebra plus center; Kahler at the invariant level".to_string(),
        params: vec![],
        algebra,
        j,
        complement: None,
        splitting: None,
        bundled_forms: vec![],
        expected: Expectations {
            taming: Some(true),
            skt: Some(true),
            unimodular: Some(true),
            integrable: true,
            abelian_j: None,
            type_i: Some(true),
        },
    })
}

/// The 6-dimensional almost-abelian family with structure equations
/// `dx = d(Jx) = 0, dy = -x^Jx, d(Jy) = x^(a z + b Jz), dz = -x^y,
/// d(Jz) = -x^Jy`. Basis order: X, JX, Y, JY, Z, JZ. The named J (pairing
/// the basis) is integrable only at `a = b = 0`; the taming obstruction
/// `Omega(Z, JZ) = 0` holds for every rational `(a, b)`.
pub fn build_aa6(a: Rat, b: Rat) -> Result<CatalogEntry, CatalogError> {
    let names = vec!["x".into(), "Jx".into(), "y".into(), "Jy".into(), "z".into(), "Jz".into()];
    let entries = vec![
        (0, 1, vec![(2, rat(1))]),   // [X, JX] = Y
        (0, 2, vec![(4, rat(1))]),   // [X, Y] = Z
        (0, 3, vec![(5, rat(1))]),   // [X, JY] = JZ
        (0, 4, vec![(3, -a.clone())]), // [X, Z] = -a JY
        (0, 5, vec![(3, -b.clone())]), // [X, JZ] = -b JY
    ];
    let algebra = LieAlgebra::new(names, entries)?;
    let j = ComplexStructure::from_pairs(&algebra, &[(0, 1), (2, 3), (4, 5)])?;
    let integrable = a.is_zero() && b.is_zero();
    Ok(CatalogEntry {
        id: format!("aa6[a={},b={}]", crate::scalar::rat_to_string(&a), crate::scalar::rat_to_string(&b)),
        description: "6-dim almost-abelian family with the z^Jz degeneracy".to_string(),
        params: vec![("a".to_string(), a), ("b".to_string(), b)],
        algebra,
        j,
        complement: None,
        splitting: None,
        bundled_forms: vec![],
        expected: Expectations {
            taming: Some(false),
            skt: None,
            unimodular: Some(true),
            integrable,
            abelian_j: Some(false),
            type_i: None,
        },
    })
}

// ---------------------------------------------------------------------------
// Affine algebras of commutative associative algebras
// ---------------------------------------------------------------------------

/// A commutative associative algebra by its multiplication table:
/// `e_i * e_j = sum_k products[i][j][k] e_k`.
#[derive(Debug, Clone)]
pub struct AssocAlgebra {
    pub dim: usize,
    pub names: Vec<String>,
    pub products: Vec<Vec<Vec<Rat>>>,
}

impl AssocAlgebra {
    pub fn validate(&self) -> Result<(), CatalogError> {
        let d = self.dim;
        let mul = |u: &[Rat], v: &[Rat]| -> Vec<Rat> {
            let mut out = vec![rzero(); d];
            for i in 0..d {
                for j in 0..d {
                    if u[i].is_zero() || v[j].is_zero() {
                        continue;
                    }
                    let c = &u[i] * &v[j];
                    for k in 0..d {
                        out[k] += &c * &self.products[i][j][k];
                    }
                }
            }
            out
        };
        for i in 0..d {
            for j in 0..d {
                if self.products[i][j] != self.products[j][i] {
                    return Err(CatalogError::NotCommutative);
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let left = mul(&self.products[i][j], &coord(d, k));
                    let right = mul(&coord(d, i), &self.products[j][k]);
                    if left != right {
                        return Err(CatalogError::NotAssociative);
                    }
                }
            }
        }
        Ok(())
    }
}

/// `aff(A) = A + A` with `[(x,y),(x',y')] = (0, x y' - x' y)` and the
/// standard `J(X, Y) = (Y, -X)`. Basis order: X_1..X_m, Y_1..Y_m.
pub fn build_aff(a: &AssocAlgebra, id: &str) -> Result<CatalogEntry, CatalogError> {
    a.validate()?;
    let m = a.dim;
    let mut names = Vec::new();
    for nm in &a.names {
        names.push(format!("x_{nm}"));
    }
    for nm in &a.names {
        names.push(format!("y_{nm}"));
    }
    let mut entries = Vec::new();
    for i in 0..m {
        for j in 0..m {
            // [X_i, Y_j] = sum_k mu^k_ij Y_k
            let terms: Vec<(usize, Rat)> = (0..m)
                .filter(|&k| !a.products[i][j][k].is_zero())
                .map(|k| (m + k, a.products[i][j][k].clone()))
                .collect();
            if !terms.is_empty() {
                entries.push((i, m + j, terms));
            }
        }
    }
    let algebra = LieAlgebra::new(names, entries)?;
    // J Y_i = X_i, J X_i = -Y_i
    let pairs: Vec<(usize, usize)> = (0..m).map(|i| (m + i, i)).collect();
    let j = ComplexStructure::from_pairs(&algebra, &pairs)?;
    let unimodular = algebra.is_unimodular();
    Ok(CatalogEntry {
        id: id.to_string(),
        description: format!("affine algebra of a {m}-dim commutative associative algebra"),
        params: vec![],
        algebra,
        j,
        complement: None,
        splitting: None,
        bundled_forms: vec![],
        expected: Expectations {
            taming: None,
            skt: None,
            unimodular: Some(unimodular),
            integrable: true,
            abelian_j: Some(true),
            type_i: None,
        },
    })
}

/// aff(R): the unit line; not unimodular.
pub fn build_aff_r() -> Result<CatalogEntry, CatalogError> {
    let a = AssocAlgebra {
        dim: 1,
        names: vec!["1".into()],
        products: vec![vec![vec![rone()]]],
    };
    let mut e = build_aff(&a, "aff-r")?;
    e.expected.unimodular = Some(false);
    Ok(e)
}

/// aff(C): complex multiplication; not unimodular.
pub fn build_aff_c() -> Result<CatalogEntry, CatalogError> {
    let a = AssocAlgebra {
        dim: 2,
        names: vec!["1".into(), "i".into()],
        products: vec![
            vec![vec![rone(), rzero()], vec![rzero(), rone()]],
            vec![vec![rzero(), rone()], vec![-rone(), rzero()]],
        ],
    };
    let mut e = build_aff_cx_inner(a)?;
    e.expected.unimodular = Some(false);
    Ok(e)
}

fn build_aff_cx_inner(a: AssocAlgebra) -> Result<CatalogEntry, CatalogError> {
    build_aff(&a, "aff-c")
}

/// aff(R eps) with eps^2 = 0: everything brackets to zero.
pub fn build_aff_dual() -> Result<CatalogEntry, CatalogError> {
    let a = AssocAlgebra {
        dim: 1,
        names: vec!["eps".into()],
        products: vec![vec![vec![rzero()]]],
    };
    let mut e = build_aff(&a, "aff-dual")?;
    e.expected.unimodular = Some(true);
    e.expected.taming = Some(true); // abelian: the torus case
    Ok(e)
}

// ---------------------------------------------------------------------------
// Nilpotent sanity entries
// ---------------------------------------------------------------------------

/// Heisenberg + R with its integrable complex structure (J e1 = e2,
/// J e3 = e4): SKT but never tamed.
pub fn build_kt() -> Result<CatalogEntry, CatalogError> {
    let names = vec!["e1".into(), "e2".into(), "e3".into(), "e4".into()];
    let algebra = LieAlgebra::new(names, vec![(0, 1, vec![(2, rat(1))])])?;
    let j = ComplexStructure::from_pairs(&algebra, &[(0, 1), (2, 3)])?;
    Ok(CatalogEntry {
        id: "kt".to_string(),
        description: "Heisenberg + R with its invariant complex structure".to_string(),
        params: vec![],
        algebra,
        j,
        complement: None,
        splitting: None,
        bundled_forms: vec![],
        expected: Expectations {
            taming: Some(false),
            skt: Some(true),
            unimodular: Some(true),
            integrable: true,
            abelian_j: Some(true),
            type_i: Some(true),
        },
    })
}

/// The 2m-torus with the standard complex structure.
pub fn build_torus(m: usize) -> Result<CatalogEntry, CatalogError> {
    if m < 1 {
        return Err(CatalogError::BadParameter("need m >= 1".into()));
    }
    let algebra = LieAlgebra::abelian(2 * m);
    let pairs: Vec<(usize, usize)> = (0..m).map(|i| (2 * i, 2 * i + 1)).collect();
    let j = ComplexStructure::from_pairs(&algebra, &pairs)?;
    Ok(CatalogEntry {
        id: format!("torus-{}", 2 * m),
        description: format!("abelian R^{} with the standard complex structure", 2 * m),
        params: vec![("m".to_string(), rat(m as i64))],
        algebra,
        j,
        complement: None,
        splitting: None,
        bundled_forms: vec![],
        expected: Expectations {
            taming: Some(true),
            skt: Some(true),
            unimodular: Some(true),
            integrable: true,
            abelian_j: Some(true),
            type_i: Some(true),
        },
    })
}

// ---------------------------------------------------------------------------
// The regression roster
// ---------------------------------------------------------------------------

/// Every entry of the verdict-regression table, in a fixed order.
pub fn default_entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    out.push(build_torus(2).unwrap());
    out.push(build_kt().unwrap());
    out.push(build_ot_default(1, 1).unwrap());
    out.push(build_ot_default(2, 1).unwrap());
    out.push(build_ot_default(3, 1).unwrap());
    out.push(build_ot_default(1, 2).unwrap());
    out.push(build_ot_default(2, 2).unwrap());
    out.push(build_c_semidirect(1, &[1]).unwrap());
    out.push(build_c_semidirect(2, &[1, 2]).unwrap());
    out.push(build_yamada(rone()).unwrap());
    out.push(build_s_minus_one_zero().unwrap());
    out.push(build_tau_tau_prime_30().unwrap());
    for (a, b) in [(rat(0), rat(0)), (rat(1), rat(0)), (rat(0), rat(1)), (rat(1), rat(1)), (ratio(-1, 2), ratio(1, 3))] {
        out.push(build_aa6(a, b).unwrap());
    }
    out.push(build_aff_r().unwrap());
    out.push(build_aff_c().unwrap());
    out.push(build_aff_dual().unwrap());
    out
}

/// Build an entry by id with optional parameter overrides (used by the CLI).
pub fn build_by_id(id: &str, params: &BTreeMap<String, String>) -> Result<CatalogEntry, CatalogError> {
    let get_rat = |key: &str, default: Rat| -> Result<Rat, CatalogError> {
        match params.get(key) {
            None => Ok(default),
            Some(s) => parse_rat(s).map_err(CatalogError::BadParameter),
        }
    };
    let get_usize = |key: &str, default: usize| -> Result<usize, CatalogError> {
        match params.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse::<usize>()
                .map_err(|e| CatalogError::BadParameter(format!("{key}: {e}"))),
        }
    };
    match id {
        "ot" => {
            let s = get_usize("s", 1)?;
            let t = get_usize("t", 1)?;
            build_ot_default(s, t)
        }
        "csd" => {
            let m = get_usize("m", 1)?;
            let a: Vec<i64> = (0..m)
                .map(|i| {
                    params
                        .get(&format!("a{}", i + 1))
                        .map(|s| s.parse::<i64>())
                        .transpose()
                        .map_err(|e| CatalogError::BadParameter(format!("a{}: {e}", i + 1)))
                        .map(|v| v.unwrap_or(i as i64 + 1))
                })
                .collect::<Result<_, _>>()?;
            build_c_semidirect(m, &a)
        }
        "yamada" => build_yamada(get_rat("t0", rone())?),
        "s-minus1-0" => build_s_minus_one_zero(),
        "tau-tau-prime-30" => build_tau_tau_prime_30(),
        "aa6" => build_aa6(get_rat("a", rat(1))?, get_rat("b", rat(1))?),
        "aff-r" => build_aff_r(),
        "aff-c" => build_aff_c(),
        "aff-dual" => build_aff_dual(),
        "kt" => build_kt(),
        "torus" => build_torus(get_usize("m", 2)?),
        other => {
            // allow the canned roster ids too (e.g. "ot-2-1")
            default_entries()
                .into_iter()
                .find(|e| e.id == other)
                .ok_or_else(|| CatalogError::UnknownId(other.to_string()))
        }
    }
}

/// Ids accepted by `build_by_id`, with a one-line description each.
pub fn catalog_ids() -> Vec<(&'static str, &'static str)> {
    vec![
        ("ot", "type-(s,t) solvable algebra; params s, t"),
        ("csd", "C semidirect C^2m with pseudo-Kahler form; params m, a1..am"),
        ("yamada", "28-dim pseudo-Kahler solvable algebra; param t0"),
        ("s-minus1-0", "6-dim unimodular algebra with abelian J"),
        ("tau-tau-prime-30", "4-dim almost-abelian Kahler model"),
        ("aa6", "6-dim almost-abelian family; params a, b"),
        ("aff-r", "aff(R): non-unimodular affine algebra"),
        ("aff-c", "aff(C): non-unimodular affine algebra"),
        ("aff-dual", "aff(R eps), eps^2 = 0: abelian"),
        ("kt", "Heisenberg + R with invariant J"),
        ("torus", "abelian R^2m with standard J; param m"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cxstruct::{apply_j_form, dc, ddc};
    use crate::weights::is_type_i;

    #[test]
    fn all_entries_validate() {
        for e in default_entries() {
            e.validate().unwrap();
        }
    }

    #[test]
    fn ot_structure_facts() {
        let e = build_ot_default(1, 1).unwrap();
        assert_eq!(e.algebra.dim(), 4);
        assert!(e.algebra.is_solvable());
        assert!(!e.algebra.is_nilpotent());
        assert!(e.algebra.is_unimodular());
        let nil = e.algebra.nilradical().unwrap();
        assert_eq!(nil.dim(), 3);
        // the nilradical is spanned by the B and G directions
        assert!(nil.contains(&coord(4, 1)));
        assert!(nil.contains(&coord(4, 2)));
        assert!(nil.contains(&coord(4, 3)));
        assert!(!is_type_i(&e.algebra));

        // bad parameters: b column sums must be 1
        let b = vec![vec![rat(2)]];
        let c = vec![vec![rat(1)]];
        assert_eq!(build_ot(1, 1, &b, &c).unwrap_err(), CatalogError::NotUnimodular);
    }

    #[test]
    fn ot_twisted_derivative_formula() {
        // dJ(theta) - J(theta)^theta = -(sum a_i ^ b_i) - (sum b_i)^(sum a_j)
        for s in [1usize, 2, 3] {
            let e = build_ot_default(s, 1).unwrap();
            let n = e.algebra.dim();
            let mut theta: Form<Rat> = Form::zero(n, 1);
            for i in 0..s {
                theta = theta.add(&Form::basis(n, i));
            }
            let jtheta = apply_j_form(&e.j, &theta);
            // J alpha_i = beta_i
            let mut expect_j: Form<Rat> = Form::zero(n, 1);
            for i in 0..s {
                expect_j = expect_j.add(&Form::basis(n, s + i));
            }
            assert_eq!(jtheta, expect_j);
            let lhs = e.algebra.ce_d(&jtheta).sub(&jtheta.wedge(&theta).unwrap());
            let mut expect: Form<Rat> = Form::zero(n, 2);
            for i in 0..s {
                expect = expect.sub(&Form::basis(n, i).wedge(&Form::basis(n, s + i)).unwrap());
            }
            expect = expect.sub(&expect_j.wedge(&theta).unwrap());
            assert_eq!(lhs, expect, "s = {s}");
        }
    }

    #[test]
    fn ot_ddc_identity() {
        // dd^c(w ^ conj w) = (dJtheta - Jtheta^theta) ^ w ^ conj w for the
        // distinguished complex line
        for s in [1usize, 2] {
            let e = build_ot_default(s, 1).unwrap();
            let n = e.algebra.dim();
            let g1 = 2 * s;
            let g2 = 2 * s + 1;
            let w = Form::<Rat>::basis(n, g1)
                .complexify()
                .add(&Form::<Rat>::basis(n, g2).complexify().scale_i());
            let u = w.wedge(&w.conj()).unwrap();
            let lhs = ddc(&e.algebra, &e.j, &u);
            let mut theta: Form<Rat> = Form::zero(n, 1);
            for i in 0..s {
                theta = theta.add(&Form::basis(n, i));
            }
            let jtheta = apply_j_form(&e.j, &theta);
            let factor = e.algebra.ce_d(&jtheta).sub(&jtheta.wedge(&theta).unwrap());
            let rhs = factor.complexify().wedge(&u).unwrap();
            assert_eq!(lhs, rhs, "s = {s}");
        }
    }

    #[test]
    fn csd_pseudo_kahler_form() {
        let e = build_c_semidirect(1, &[1]).unwrap();
        let omega = &e.bundled_forms[0].1;
        assert!(e.algebra.ce_d(omega).is_zero(), "bundled form is closed");
        let s = crate::decide::taming_gram(omega, &e.j);
        assert!(crate::decide::is_indefinite(&s), "pseudo-Kahler, not Kahler");
        assert!(matches!(build_c_semidirect(1, &[0]), Err(CatalogError::ZeroParameter)));
    }

    #[test]
    fn yamada_facts() {
        let e = build_yamada(rone()).unwrap();
        assert_eq!(e.algebra.dim(), 28);
        assert!(e.algebra.check_jacobi());
        assert!(e.algebra.is_unimodular());
        assert!(e.j.is_integrable());
        let (s, h) = e.splitting.as_ref().unwrap();
        let rep = crate::decide::check_splitting_hypotheses(&e.algebra, s, h, &e.j).unwrap();
        assert!(rep.taming_hypotheses_hold());
        assert!(rep.skt_hypotheses_hold());
        assert!(matches!(build_yamada(rzero()), Err(CatalogError::ZeroParameter)));
    }

    #[test]
    fn s_minus_one_zero_facts() {
        let e = build_s_minus_one_zero().unwrap();
        assert!(e.j.is_abelian());
        assert!(e.j.is_integrable());
        assert!(e.algebra.is_unimodular());
        let nil = e.algebra.nilradical().unwrap();
        assert_eq!(nil.dim(), 4);
        // ad_c J = J ad_c for the declared complement
        let ok = crate::decide::check_complement_commutation(
            &e.algebra,
            e.complement.as_ref().unwrap(),
            &e.j,
        )
        .unwrap();
        assert!(ok);
    }

    #[test]
    fn aa6_z_direction_is_degenerate() {
        for (a, b) in [(rat(0), rat(0)), (rat(1), rat(0)), (rat(2), rat(3))] {
            let e = build_aa6(a, b).unwrap();
            let space = crate::decide::closed_two_forms(&e.algebra);
            let z = coord(6, 4);
            let jz = e.j.apply_vec(&z);
            for w in &space.basis {
                assert!(crate::decide::omega_eval(w, &z, &jz).is_zero());
            }
        }
    }

    #[test]
    fn aff_entries() {
        let r = build_aff_r().unwrap();
        assert!(!r.algebra.is_unimodular());
        assert!(r.j.is_abelian());
        // [(1,0),(0,1)] = (0,1)
        let br = r.algebra.bracket(&coord(2, 0), &coord(2, 1));
        assert_eq!(br, coord(2, 1));

        let c = build_aff_c().unwrap();
        assert!(!c.algebra.is_unimodular());
        assert!(c.j.is_abelian());

        let d = build_aff_dual().unwrap();
        assert!(d.algebra.is_abelian());

        // a non-associative table is rejected
        // u*u = v, u*v = u, v*v = 0: then (uu)v = 0 but u(uv) = v
        let bad = AssocAlgebra {
            dim: 2,
            names: vec!["u".into(), "v".into()],
            products: vec![
                vec![vec![rzero(), rone()], vec![rone(), rzero()]],
                vec![vec![rone(), rzero()], vec![rzero(), rzero()]],
            ],
        };
        assert!(matches!(build_aff(&bad, "bad"), Err(CatalogError::NotAssociative)));
    }

    #[test]
    fn ot_default_unimodular_up_to_four() {
        for s in 1..=4 {
            let e = build_ot_default(s, 1).unwrap();
            assert!(e.algebra.is_unimodular(), "s = {s}");
        }
    }

    #[test]
    fn ot_verdicts_stable_across_parameters() {
        // the structure-equation shape, not the parameter values, drives the
        // verdicts; spot-check alternative rational parameters
        let cases = vec![
            (1usize, 1usize, vec![vec![rat(1)]], vec![vec![ratio(5, 3)]]),
            (1, 1, vec![vec![rat(1)]], vec![vec![ratio(-7, 2)]]),
            (2, 1, vec![vec![rat(1)], vec![rat(1)]], vec![vec![ratio(1, 2)], vec![rat(4)]]),
        ];
        for (s, t, b, c) in cases {
            let e = build_ot(s, t, &b, &c).unwrap();
            e.validate().unwrap();
            let taming = crate::decide::decide_taming(&e.algebra, &e.j, 0);
            assert!(taming.not_exists(), "ot-{s}-{t} with custom params");
            let skt = crate::decide::decide_skt(&e.algebra, &e.j, 0).unwrap();
            if s == 1 {
                assert!(skt.exists(), "ot-1-1 custom params is SKT");
            } else {
                assert!(skt.not_exists(), "ot-{s}-1 custom params is not SKT");
            }
        }
    }

    #[test]
    fn s_minus_one_zero_two_step_solvable() {
        let e = build_s_minus_one_zero().unwrap();
        let series = e.algebra.derived_series();
        // g > g1 > 0: derived length 2
        assert_eq!(series.len(), 3);
        assert_eq!(series[1].dim(), 4);
        for i in 2..6 {
            assert!(series[1].contains(&coord(6, i)));
        }
        assert_eq!(series[2].dim(), 0);
    }

    #[test]
    fn tau_report_commuting_branch() {
        let e = build_tau_tau_prime_30().unwrap();
        // the invariant Kahler witness
        let omega: Form<Rat> = Form::monomial(4, 0b1001, rat(1))
            .add(&Form::monomial(4, 0b0110, rat(1)));
        assert!(e.algebra.ce_d(&omega).is_zero());
        let rep = crate::decide::almost_abelian_report(&e.algebra, &e.j, &omega).unwrap();
        assert_eq!(rep.nilradical_dim, 3);
        assert!(rep.jx_in_nilradical);
        assert!(rep.x_jx_commute, "[X, JX] = 0 branch");
        assert!(rep.h_ad_x_invariant);
    }

    #[test]
    fn aa6_frame_reproduced() {
        // the structural frame: Y = [X,JX] != 0, Z = [X,Y], JZ = [X,JY]
        let e = build_aa6(rat(0), rat(1)).unwrap();
        let g = &e.algebra;
        let x = coord(6, 0);
        let jx = e.j.apply_vec(&x);
        let y = g.bracket(&x, &jx);
        assert_eq!(y, coord(6, 2));
        let z = g.bracket(&x, &y);
        assert_eq!(z, coord(6, 4));
        let jy = e.j.apply_vec(&y);
        let jz_bracket = g.bracket(&x, &jy);
        assert_eq!(jz_bracket, e.j.apply_vec(&z), "JZ = [X, JY]");
        // the gram-based report sees the codim-1 abelian nilradical and a
        // spanning frame
        let space = crate::decide::closed_two_forms(g);
        let mut omega: Form<Rat> = Form::zero(6, 2);
        for w in &space.basis {
            omega = omega.add(w);
        }
        let rep = crate::decide::almost_abelian_report(g, &e.j, &omega).unwrap();
        assert_eq!(rep.nilradical_dim, 5);
        assert!(rep.jx_in_nilradical);
        assert!(!rep.x_jx_commute);
        let frame = rep.frame.expect("frame in the 6-dim non-commuting case");
        assert!(frame.spans);
    }

    #[test]
    fn abelian_obstruction_cross_checks() {
        // s(-1,0): identities hold exactly on every closed basis 2-form
        let e = build_s_minus_one_zero().unwrap();
        let space = crate::decide::closed_two_forms(&e.algebra);
        for w in &space.basis {
            let rep = crate::decide::abelian_obstruction_checks(&e.algebra, &e.j, w).unwrap();
            assert!(rep.all_hold());
            assert!(rep.v_abelian);
        }
        // aff(R) + aff(R) = aff(R x R) with its abelian J
        let a = AssocAlgebra {
            dim: 2,
            names: vec!["u".into(), "v".into()],
            products: vec![
                vec![vec![rone(), rzero()], vec![rzero(), rzero()]],
                vec![vec![rzero(), rzero()], vec![rzero(), rone()]],
            ],
        };
        let aff2 = build_aff(&a, "aff-rr").unwrap();
        assert!(aff2.j.is_abelian());
        let space = crate::decide::closed_two_forms(&aff2.algebra);
        for w in &space.basis {
            let rep =
                crate::decide::abelian_obstruction_checks(&aff2.algebra, &aff2.j, w).unwrap();
            assert!(rep.b_symmetric);
            assert!(rep.all_hold());
        }
    }

    #[test]
    fn dc_sign_pinned_on_functions() {
        // The convention must stay internally consistent: on the OT(1,1)
        // entry, d^c of a (1,0)-form w satisfies the twisted equation
        // conjugated the same way d does.
        let e = build_ot_default(1, 1).unwrap();
        let w = Form::<Rat>::basis(4, 2)
            .complexify()
            .add(&Form::<Rat>::basis(4, 3).complexify().scale_i());
        // w is (1,0): J w = -i w
        let jw = apply_j_form(&e.j, &w);
        assert_eq!(jw, w.scale(&crate::scalar::GaussRat::i()).neg());
        let _ = dc(&e.algebra, &e.j, &w);
    }
}
