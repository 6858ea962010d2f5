//! The feasibility engine: spaces of closed 2-forms and dd^c-closed
//! (1,1)-forms, taming/SKT existence verdicts with exact certificates, and
//! the hypothesis checkers for the splitting, complement-commutation and
//! almost-abelian settings.
//!
//! Verdict soundness is carried entirely by exact data:
//!
//! * `Exists` embeds a witness that satisfies the defining linear condition
//!   exactly together with its leading principal minors, all positive;
//! * `NotExists` embeds a direction `X != 0` with `Omega_b(X, JX) = 0`
//!   exactly for every basis element of the space — no element of the space
//!   can then satisfy the strict taming inequality at `X`.
//!
//! Floating point appears only inside the search (min-eigenvalue ascent and
//! the diagnostic dual), never inside a certificate.

use crate::cxstruct::{ddc, invariant_two_forms, ComplexStructure};
use crate::exterior::{monomials, Form, Multivector};
use crate::liecore::{subalgebra_is_nilpotent, subalgebra_is_solvable, LieAlgebra, Subspace};
use crate::mat::Mat;
use crate::scalar::{rationalize, Rat, Scalar};
use crate::weights::{adjoint_action, is_type_i_rep, weight_decomposition, WeightBasis};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

fn rzero() -> Rat {
    <Rat as Zero>::zero()
}

fn rone() -> Rat {
    <Rat as One>::one()
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DecideError {
    #[error("the complex structure is not integrable")]
    NotIntegrable,
    #[error("the declared subspaces do not span the algebra")]
    SpanFailure,
    #[error("the declared complement is not a nilpotent complement of the nilradical")]
    NotAComplement,
    #[error("the algebra is not almost-abelian")]
    NotAlmostAbelian,
    #[error("the complex structure is not abelian")]
    JNotAbelian,
    #[error("the 2-form is not closed")]
    OmegaNotClosed,
    #[error("lie error: {0}")]
    Lie(#[from] crate::liecore::LieError),
}

/// Which linear condition a form space was cut out by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceCondition {
    Closed,
    DdcClosed11,
}

/// A space of 2-forms in canonical echelon form, every element of which
/// satisfies the defining condition exactly.
#[derive(Debug, Clone)]
pub struct FormSpace {
    pub degree: usize,
    pub condition: SpaceCondition,
    pub basis: Vec<Form<Rat>>,
}

impl FormSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel of a linear map given by the images of the domain basis, using
/// only the monomial rows that actually occur (the images are sparse, so
/// the full target basis would be wastefully large).
fn kernel_of_images(images: &[Form<Rat>]) -> Vec<Vec<Rat>> {
    use std::collections::BTreeMap;
    let mut row_index: BTreeMap<u64, usize> = BTreeMap::new();
    for img in images {
        for (mask, _) in img.terms() {
            let next = row_index.len();
            row_index.entry(mask).or_insert(next);
        }
    }
    let mut m = Mat::zero(row_index.len().max(1), images.len());
    for (col, img) in images.iter().enumerate() {
        for (mask, c) in img.terms() {
            m[(row_index[&mask], col)] = c.clone();
        }
    }
    m.kernel()
}

/// Exact kernel of d on invariant 2-forms.
pub fn closed_two_forms(g: &LieAlgebra) -> FormSpace {
    let n = g.dim();
    let basis_masks = monomials(n, 2);
    let images: Vec<Form<Rat>> = basis_masks
        .iter()
        .map(|&mask| g.ce_d(&Form::monomial(n, mask, rone())))
        .collect();
    let kernel = kernel_of_images(&images);
    let basis = crate::mat::echelon_basis(&kernel, basis_masks.len())
        .into_iter()
        .map(|v| Form::from_coeff_vector(n, 2, &basis_masks, &v))
        .collect();
    FormSpace { degree: 2, condition: SpaceCondition::Closed, basis }
}

/// Exact kernel of dd^c on real (1,1)-forms. Requires integrable J.
pub fn ddc_closed_11_forms(g: &LieAlgebra, j: &ComplexStructure) -> Result<FormSpace, DecideError> {
    if !j.is_integrable() {
        return Err(DecideError::NotIntegrable);
    }
    Ok(ddc_closed_11_forms_unchecked(g, j))
}

/// Same computation without the integrability gate (used internally by
/// reports that want the space for diagnostics).
pub fn ddc_closed_11_forms_unchecked(g: &LieAlgebra, j: &ComplexStructure) -> FormSpace {
    let n = g.dim();
    let inv = invariant_two_forms(j);
    let images: Vec<Form<Rat>> = inv.iter().map(|w| ddc(g, j, w)).collect();
    let mut vectors = Vec::new();
    for coeffs in kernel_of_images(&images) {
        let mut f = Form::zero(n, 2);
        for (c, w) in coeffs.iter().zip(&inv) {
            f = f.add(&w.scale(c));
        }
        vectors.push(f);
    }
    // canonicalize in the full monomial coordinates
    let masks = monomials(n, 2);
    let rows: Vec<Vec<Rat>> = vectors.iter().map(|f| f.coeff_vector(&masks)).collect();
    let basis = crate::mat::echelon_basis(&rows, masks.len())
        .into_iter()
        .map(|v| Form::from_coeff_vector(n, 2, &masks, &v))
        .collect();
    FormSpace { degree: 2, condition: SpaceCondition::DdcClosed11, basis }
}

/// Skew matrix of a 2-form: `W_ab = Omega(e_a, e_b)`.
pub fn two_form_matrix(omega: &Form<Rat>) -> Mat<Rat> {
    let n = omega.dim();
    let mut w = Mat::zero(n, n);
    for (mask, c) in omega.terms() {
        let a = mask.trailing_zeros() as usize;
        let b = (63 - mask.leading_zeros()) as usize;
        w[(a, b)] = c.clone();
        w[(b, a)] = -c.clone();
    }
    w
}

/// The symmetric form `S(X, Y) = (Omega(X, JY) + Omega(Y, JX)) / 2`;
/// `Omega` tames J iff this matrix is positive definite.
pub fn taming_gram(omega: &Form<Rat>, j: &ComplexStructure) -> Mat<Rat> {
    let w = two_form_matrix(omega);
    let wj = w.mul(j.matrix());
    let half = crate::scalar::ratio(1, 2);
    wj.add(&wj.transpose()).scale(&half)
}

/// Leading principal minors `det S[..k, ..k]`, k = 1..n.
pub fn leading_principal_minors(s: &Mat<Rat>) -> Vec<Rat> {
    let n = s.rows();
    (1..=n)
        .map(|k| Mat::from_fn(k, k, |r, c| s[(r, c)].clone()).det())
        .collect()
}

pub fn is_positive_definite(s: &Mat<Rat>) -> bool {
    leading_principal_minors(s).iter().all(|m| m.is_positive())
}

/// Positive semidefiniteness via the sign-alternation of the characteristic
/// polynomial (the spectrum of a symmetric matrix is real, so all roots are
/// nonnegative iff the coefficients of det(xI - S) weakly alternate).
pub fn is_positive_semidefinite(s: &Mat<Rat>) -> bool {
    let p = s.char_poly();
    let n = s.rows();
    (0..=n).all(|k| {
        let c = p.coeff(k);
        let signed = if (n - k) % 2 == 0 { c } else { -c };
        !signed.is_negative()
    })
}

pub fn is_indefinite(s: &Mat<Rat>) -> bool {
    !is_positive_semidefinite(s) && !is_positive_semidefinite(&s.neg())
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ExistsCertificate {
    /// The witness form, exactly in the space.
    pub witness: Form<Rat>,
    /// Coordinates of the witness in the space's echelon basis.
    pub coefficients: Vec<Rat>,
    /// Leading principal minors of the associated symmetric form; all > 0.
    pub minors: Vec<Rat>,
}

#[derive(Debug, Clone)]
pub struct NotExistsCertificate {
    /// Nonzero direction X with `Omega_b(X, JX) = 0` for every basis element.
    pub direction: Vec<Rat>,
    /// The exact evaluations, one per basis element (all zero).
    pub evaluations: Vec<Rat>,
    /// Optional numeric dual PSD matrix, diagnostics only.
    pub dual_witness: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Default)]
pub struct Diagnostics {
    pub best_lambda_min: f64,
    pub restarts: usize,
    pub iterations_per_restart: usize,
    pub dual_residual: Option<f64>,
    pub dual_witness: Option<Vec<Vec<f64>>>,
    pub note: String,
}

#[derive(Debug, Clone)]
pub enum FeasibilityVerdict {
    Exists(ExistsCertificate),
    NotExists(NotExistsCertificate),
    Unknown(Diagnostics),
}

impl FeasibilityVerdict {
    pub fn exists(&self) -> bool {
        matches!(self, FeasibilityVerdict::Exists(_))
    }
    pub fn not_exists(&self) -> bool {
        matches!(self, FeasibilityVerdict::NotExists(_))
    }
    pub fn label(&self) -> &'static str {
        match self {
            FeasibilityVerdict::Exists(_) => "exists",
            FeasibilityVerdict::NotExists(_) => "not-exists",
            FeasibilityVerdict::Unknown(_) => "unknown",
        }
    }
}

/// Evaluate `Omega(x, y)` on coordinate vectors.
pub fn omega_eval(omega: &Form<Rat>, x: &[Rat], y: &[Rat]) -> Rat {
    let vx = Multivector::from_coords(x);
    let vy = Multivector::from_coords(y);
    omega.evaluate(&[&vx, &vy]).expect("degree-2 evaluation")
}

/// Decide whether some element of the space tames J: positive-definite
/// feasibility over the span of the associated symmetric forms. `seed`
/// drives the randomized restarts; `tol` is the clustering tolerance handed
/// to the floating weight regime (certificates stay exact either way).
pub fn decide_space_with(
    g: &LieAlgebra,
    j: &ComplexStructure,
    space: &FormSpace,
    seed: u64,
    tol: f64,
) -> FeasibilityVerdict {
    let n = g.dim();
    if space.basis.is_empty() {
        // nothing to tame with: any nonzero direction certifies vacuously
        let mut direction = vec![rzero(); n];
        direction[0] = rone();
        return FeasibilityVerdict::NotExists(NotExistsCertificate {
            direction,
            evaluations: vec![],
            dual_witness: None,
        });
    }
    let grams: Vec<Mat<Rat>> = space.basis.iter().map(|w| taming_gram(w, j)).collect();
    if let Some(cert) = not_exists_search(g, j, space, &grams, tol) {
        return FeasibilityVerdict::NotExists(cert);
    }
    if let Some(cert) = exists_exact_heuristics(space, &grams) {
        return FeasibilityVerdict::Exists(cert);
    }
    let (cert, diag) = exists_numeric_search(space, &grams, seed);
    if let Some(cert) = cert {
        return FeasibilityVerdict::Exists(cert);
    }
    FeasibilityVerdict::Unknown(diag)
}

pub fn decide_space(g: &LieAlgebra, j: &ComplexStructure, space: &FormSpace, seed: u64) -> FeasibilityVerdict {
    decide_space_with(g, j, space, seed, 1e-9)
}

pub fn decide_taming(g: &LieAlgebra, j: &ComplexStructure, seed: u64) -> FeasibilityVerdict {
    let space = closed_two_forms(g);
    decide_space(g, j, &space, seed)
}

pub fn decide_skt(g: &LieAlgebra, j: &ComplexStructure, seed: u64) -> Result<FeasibilityVerdict, DecideError> {
    let space = ddc_closed_11_forms(g, j)?;
    Ok(decide_space(g, j, &space, seed))
}

// ---------------------------------------------------------------------------
// NotExists: exact rank-one witness search
// ---------------------------------------------------------------------------

/// Clear denominators and common factors for a tidy certificate vector.
fn primitive_vector(v: &[Rat]) -> Vec<Rat> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let mut lcm = BigInt::from(1);
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::from(0);
    for i in &ints {
        gcd = gcd.gcd(i);
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|i| Rat::from_integer(i / &gcd)).collect()
}

fn not_exists_search(
    g: &LieAlgebra,
    j: &ComplexStructure,
    space: &FormSpace,
    grams: &[Mat<Rat>],
    tol: f64,
) -> Option<NotExistsCertificate> {
    let n = g.dim();
    let mut cheap: Vec<Vec<Rat>> = Vec::new();
    // coordinate vectors
    for i in 0..n {
        let mut v = vec![rzero(); n];
        v[i] = rone();
        cheap.push(v);
    }
    // pairwise sums and differences
    for i in 0..n {
        for k in i + 1..n {
            for sgn in [1i64, -1] {
                let mut v = vec![rzero(); n];
                v[i] = rone();
                v[k] = crate::scalar::rat(sgn);
                cheap.push(v);
            }
        }
    }
    // common radical of the stacked evaluation system
    let mut stacked = Mat::zero(grams.len() * n, n);
    for (b, s) in grams.iter().enumerate() {
        for r in 0..n {
            for c in 0..n {
                stacked[(b * n + r, c)] = s[(r, c)].clone();
            }
        }
    }
    cheap.extend(stacked.kernel());
    if let Some(cert) = scan_candidates(g, j, space, grams, cheap) {
        return Some(cert);
    }
    // weight-space vectors of the Fitting-null action (exact regime only);
    // computed lazily because the Jordan-Chevalley scan is not free
    let mut weighted: Vec<Vec<Rat>> = Vec::new();
    if g.is_solvable() && !g.is_nilpotent() {
        if let Ok(h) = g.fitting_null_subalgebra() {
            let mats = adjoint_action(g, &h);
            if !mats.is_empty() {
                if let Ok(dec) = weight_decomposition(&mats, tol) {
                    if dec.exact {
                        for sp in &dec.spaces {
                            if let WeightBasis::Exact(vectors) = &sp.basis {
                                for v in vectors {
                                    let re: Vec<Rat> = v.iter().map(|c| c.re.clone()).collect();
                                    let im: Vec<Rat> = v.iter().map(|c| c.im.clone()).collect();
                                    let sum: Vec<Rat> = re.iter().zip(&im).map(|(a, b)| a + b).collect();
                                    let dif: Vec<Rat> = re.iter().zip(&im).map(|(a, b)| a - b).collect();
                                    weighted.push(re);
                                    weighted.push(im);
                                    weighted.push(sum);
                                    weighted.push(dif);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    scan_candidates(g, j, space, grams, weighted)
}

fn scan_candidates(
    g: &LieAlgebra,
    j: &ComplexStructure,
    space: &FormSpace,
    grams: &[Mat<Rat>],
    candidates: Vec<Vec<Rat>>,
) -> Option<NotExistsCertificate> {
    let _ = g;
    for cand in candidates {
        if cand.iter().all(|c| Zero::is_zero(c)) {
            continue;
        }
        let cand = primitive_vector(&cand);
        let mut evals = Vec::with_capacity(grams.len());
        let mut all_zero = true;
        for s in grams {
            // q(X) = X^T S X
            let sx = s.mul_vec(&cand);
            let q: Rat = cand.iter().zip(&sx).map(|(a, b)| a * b).sum();
            if !Zero::is_zero(&q) {
                all_zero = false;
                break;
            }
            evals.push(q);
        }
        if all_zero {
            debug_assert_eq!(evals.len(), grams.len());
            // cross-check against the direct evaluation Omega_b(X, JX)
            let jx = j.apply_vec(&cand);
            for w in &space.basis {
                debug_assert!(Zero::is_zero(&omega_eval(w, &cand, &jx)));
            }
            return Some(NotExistsCertificate {
                direction: cand,
                evaluations: evals,
                dual_witness: None,
            });
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Exists: exact heuristics, then numeric ascent with exact verification
// ---------------------------------------------------------------------------

fn certificate_from_coefficients(space: &FormSpace, coeffs: &[Rat]) -> Option<ExistsCertificate> {
    let n = space.basis.first()?.dim();
    let mut witness = Form::zero(n, 2);
    for (c, w) in coeffs.iter().zip(&space.basis) {
        witness = witness.add(&w.scale(c));
    }
    Some(ExistsCertificate { witness, coefficients: coeffs.to_vec(), minors: vec![] })
}

fn verify_exists(space: &FormSpace, grams: &[Mat<Rat>], coeffs: &[Rat]) -> Option<ExistsCertificate> {
    let n = grams.first()?.rows();
    let mut s = Mat::zero(n, n);
    for (c, gmat) in coeffs.iter().zip(grams) {
        s = s.add(&gmat.scale(c));
    }
    let minors = leading_principal_minors(&s);
    if minors.iter().all(|m| m.is_positive()) {
        let mut cert = certificate_from_coefficients(space, coeffs)?;
        cert.minors = minors;
        Some(cert)
    } else {
        None
    }
}

fn exists_exact_heuristics(space: &FormSpace, grams: &[Mat<Rat>]) -> Option<ExistsCertificate> {
    let d = grams.len();
    // single basis elements and their negatives
    for b in 0..d {
        for sgn in [1i64, -1] {
            let mut coeffs = vec![rzero(); d];
            coeffs[b] = crate::scalar::rat(sgn);
            if let Some(c) = verify_exists(space, grams, &coeffs) {
                return Some(c);
            }
        }
    }
    // all-ones
    let ones = vec![rone(); d];
    if let Some(c) = verify_exists(space, grams, &ones) {
        return Some(c);
    }
    // least squares toward the identity: minimize || sum x_b S_b - I ||_F
    let n = grams[0].rows();
    let mut gram = Mat::zero(d, d);
    let mut target = vec![rzero(); d];
    for a in 0..d {
        for b in 0..d {
            let mut acc = rzero();
            for r in 0..n {
                for c in 0..n {
                    acc += &grams[a][(r, c)] * &grams[b][(r, c)];
                }
            }
            gram[(a, b)] = acc;
        }
        target[a] = grams[a].trace();
    }
    if let Some(x) = gram.solve(&target) {
        if let Some(c) = verify_exists(space, grams, &x) {
            return Some(c);
        }
    }
    None
}

/// Plain xorshift64*; deterministic across platforms and runs.
struct XorShift(u64);

impl XorShift {
    fn new(seed: u64) -> Self {
        XorShift(seed.wrapping_mul(2685821657736338717).max(1))
    }
    fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x.wrapping_mul(2685821657736338717)
    }
    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
    fn next_signed(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }
}

/// Jacobi eigenvalue iteration for a symmetric matrix; returns eigenvalues
/// ascending with their orthonormal eigenvectors as rows.
fn sym_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|jj| if i == jj { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for jj in i + 1..n {
                off += m[i][jj] * m[i][jj];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vpk = v[p][k];
                    let vqk = v[q][k];
                    v[p][k] = c * vpk - s * vqk;
                    v[q][k] = s * vpk + c * vqk;
                }
            }
        }
    }
    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n).map(|i| (m[i][i], v[i].clone())).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let vals = pairs.iter().map(|p| p.0).collect();
    let vecs = pairs.into_iter().map(|p| p.1).collect();
    (vals, vecs)
}

const RESTARTS: usize = 64;
const ITERATIONS: usize = 500;
const ROUNDING_DENOMS: [u64; 8] = [1, 2, 4, 6, 12, 100, 1000, 10000];

fn exists_numeric_search(
    space: &FormSpace,
    grams: &[Mat<Rat>],
    seed: u64,
) -> (Option<ExistsCertificate>, Diagnostics) {
    let d = grams.len();
    let n = grams[0].rows();
    let gf: Vec<Vec<Vec<f64>>> = grams
        .iter()
        .map(|s| {
            (0..n)
                .map(|r| (0..n).map(|c| s[(r, c)].approx().0).collect())
                .collect()
        })
        .collect();
    let traces: Vec<f64> = gf.iter().map(|s| (0..n).map(|i| s[i][i]).sum()).collect();
    let tnorm: f64 = traces.iter().map(|t| t * t).sum::<f64>().sqrt();
    let assemble = |x: &[f64]| -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; n]; n];
        for (xb, s) in x.iter().zip(&gf) {
            for r in 0..n {
                for c in 0..n {
                    a[r][c] += xb * s[r][c];
                }
            }
        }
        a
    };
    let mut rng = XorShift::new(seed.wrapping_add(0x5eed));
    let mut best_overall = f64::NEG_INFINITY;
    let mut best_x = vec![0.0; d];
    for _restart in 0..RESTARTS {
        let mut x: Vec<f64> = (0..d).map(|_| rng.next_signed()).collect();
        // normalize onto the unit-trace slice when possible
        let normalize = |x: &mut Vec<f64>| {
            if tnorm > 1e-12 {
                let t: f64 = x.iter().zip(&traces).map(|(a, b)| a * b).sum();
                if t.abs() > 1e-9 {
                    for xi in x.iter_mut() {
                        *xi /= t;
                    }
                    return;
                }
            }
            let norm: f64 = x.iter().map(|a| a * a).sum::<f64>().sqrt().max(1e-12);
            for xi in x.iter_mut() {
                *xi /= norm;
            }
        };
        normalize(&mut x);
        let mut best_local = f64::NEG_INFINITY;
        let mut best_local_x = x.clone();
        for it in 0..ITERATIONS {
            let a = assemble(&x);
            let (vals, vecs) = sym_eigen(&a);
            let lam = vals[0];
            if lam > best_local {
                best_local = lam;
                best_local_x = x.clone();
            }
            // subgradient of lambda_min
            let v = &vecs[0];
            let mut grad: Vec<f64> = gf
                .iter()
                .map(|s| {
                    let mut acc = 0.0;
                    for r in 0..n {
                        for c in 0..n {
                            acc += v[r] * s[r][c] * v[c];
                        }
                    }
                    acc
                })
                .collect();
            if tnorm > 1e-12 {
                let proj: f64 = grad.iter().zip(&traces).map(|(a, b)| a * b).sum::<f64>() / (tnorm * tnorm);
                for (gi, t) in grad.iter_mut().zip(&traces) {
                    *gi -= proj * t;
                }
            }
            let gnorm: f64 = grad.iter().map(|a| a * a).sum::<f64>().sqrt();
            if gnorm < 1e-14 {
                break;
            }
            let step = 0.5 / ((it + 1) as f64).sqrt();
            for (xi, gi) in x.iter_mut().zip(&grad) {
                *xi += step * gi / gnorm;
            }
            normalize(&mut x);
        }
        if best_local > best_overall {
            best_overall = best_local;
            best_x = best_local_x.clone();
        }
        // try exact rounding of the best iterate of this restart
        if best_local > 1e-10 {
            for den in ROUNDING_DENOMS {
                let coeffs: Vec<Rat> = best_local_x
                    .iter()
                    .map(|v| rationalize(*v, den).unwrap_or_else(rzero))
                    .collect();
                if coeffs.iter().all(|c| Zero::is_zero(c)) {
                    continue;
                }
                if let Some(cert) = verify_exists(space, grams, &coeffs) {
                    return (Some(cert), Diagnostics::default());
                }
            }
        }
    }
    // dual diagnostics by alternating projections
    let (dual, residual) = dual_psd_diagnostic(&gf, n);
    let diag = Diagnostics {
        best_lambda_min: best_overall,
        restarts: RESTARTS,
        iterations_per_restart: ITERATIONS,
        dual_residual: Some(residual),
        dual_witness: dual,
        note: format!(
            "primal ascent stalled at lambda_min ~ {best_overall:.3e}; x = {best_x:?}"
        ),
    };
    (None, diag)
}

/// Best-effort numeric dual certificate: a PSD matrix Y with trace 1 and
/// <Y, S_b> = 0 for all b. Such a Y proves that no element of the span is
/// positive definite; here it is only diagnostics, never a verdict.
fn dual_psd_diagnostic(gf: &[Vec<Vec<f64>>], n: usize) -> (Option<Vec<Vec<f64>>>, f64) {
    let mut y: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|jj| if i == jj { 1.0 / n as f64 } else { 0.0 }).collect())
        .collect();
    for _ in 0..300 {
        // project onto the affine constraints by one Gauss-Seidel pass
        for s in gf {
            let mut ip = 0.0;
            let mut ss = 0.0;
            for r in 0..n {
                for c in 0..n {
                    ip += y[r][c] * s[r][c];
                    ss += s[r][c] * s[r][c];
                }
            }
            if ss < 1e-300 {
                continue;
            }
            let f = ip / ss;
            for r in 0..n {
                for c in 0..n {
                    y[r][c] -= f * s[r][c];
                }
            }
        }
        // renormalize trace
        let tr: f64 = (0..n).map(|i| y[i][i]).sum();
        if tr.abs() > 1e-12 {
            for r in 0..n {
                for c in 0..n {
                    y[r][c] /= tr;
                }
            }
        }
        // PSD projection
        let (vals, vecs) = sym_eigen(&y);
        let mut yn = vec![vec![0.0; n]; n];
        for (lam, v) in vals.iter().zip(&vecs) {
            if *lam <= 0.0 {
                continue;
            }
            for r in 0..n {
                for c in 0..n {
                    yn[r][c] += lam * v[r] * v[c];
                }
            }
        }
        y = yn;
    }
    let mut residual: f64 = 0.0;
    for s in gf {
        let mut ip = 0.0;
        for r in 0..n {
            for c in 0..n {
                ip += y[r][c] * s[r][c];
            }
        }
        residual = residual.max(ip.abs());
    }
    let norm: f64 = y.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    if norm < 1e-9 {
        (None, residual)
    } else {
        (Some(y), residual)
    }
}

// ---------------------------------------------------------------------------
// Hypothesis checkers
// ---------------------------------------------------------------------------

/// Report of the five splitting-theorem conditions plus the SKT extras.
#[derive(Debug, Clone)]
pub struct SplittingReport {
    pub direct_sum: bool,
    pub h_ideal: bool,
    pub s_subalgebra: bool,
    pub s_solvable: bool,
    pub image_nilpotent: bool,
    pub phi_not_type_i: bool,
    pub j_preserves_h: bool,
    pub j_commutes_with_action: bool,
    pub skt_s_nilpotent: bool,
    pub skt_j_preserves_s: bool,
}

impl SplittingReport {
    /// Conditions 1-5 of the taming statement.
    pub fn taming_hypotheses_hold(&self) -> bool {
        self.direct_sum
            && self.h_ideal
            && self.s_subalgebra
            && self.s_solvable
            && self.image_nilpotent
            && self.phi_not_type_i
            && self.j_preserves_h
            && self.j_commutes_with_action
    }

    /// The additional hypotheses of the SKT statement.
    pub fn skt_hypotheses_hold(&self) -> bool {
        self.taming_hypotheses_hold() && self.skt_s_nilpotent && self.skt_j_preserves_s
    }
}

/// Closure of a set of matrices under commutators (a matrix Lie algebra),
/// returned as an echelon basis of vectorized matrices.
fn matrix_lie_closure(mats: &[Mat<Rat>]) -> Vec<Mat<Rat>> {
    if mats.is_empty() {
        return vec![];
    }
    let n = mats[0].rows();
    let vecize = |m: &Mat<Rat>| -> Vec<Rat> {
        let mut v = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                v.push(m[(r, c)].clone());
            }
        }
        v
    };
    let devec = |v: &[Rat]| -> Mat<Rat> { Mat::from_fn(n, n, |r, c| v[r * n + c].clone()) };
    let mut basis: Vec<Vec<Rat>> = crate::mat::echelon_basis(
        &mats.iter().map(|m| vecize(m)).collect::<Vec<_>>(),
        n * n,
    );
    loop {
        let current: Vec<Mat<Rat>> = basis.iter().map(|v| devec(v)).collect();
        let mut vectors = basis.clone();
        for a in &current {
            for b in &current {
                let br = a.commutator(b);
                if !br.is_zero() {
                    vectors.push(vecize(&br));
                }
            }
        }
        let next = crate::mat::echelon_basis(&vectors, n * n);
        if next.len() == basis.len() {
            return basis.iter().map(|v| devec(v)).collect();
        }
        basis = next;
    }
}

/// Is the matrix Lie algebra spanned by `mats` (already bracket-closed)
/// nilpotent?
fn matrix_algebra_is_nilpotent(closure: &[Mat<Rat>]) -> bool {
    if closure.is_empty() {
        return true;
    }
    let n = closure[0].rows();
    let vecize = |m: &Mat<Rat>| -> Vec<Rat> {
        let mut v = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                v.push(m[(r, c)].clone());
            }
        }
        v
    };
    let mut current: Vec<Mat<Rat>> = closure.to_vec();
    for _ in 0..=closure.len() {
        let mut vectors = Vec::new();
        for a in closure {
            for b in &current {
                let br = a.commutator(b);
                if !br.is_zero() {
                    vectors.push(vecize(&br));
                }
            }
        }
        let next_basis = crate::mat::echelon_basis(&vectors, n * n);
        if next_basis.is_empty() {
            return true;
        }
        let cur_basis = crate::mat::echelon_basis(
            &current.iter().map(|m| vecize(m)).collect::<Vec<_>>(),
            n * n,
        );
        if next_basis.len() == cur_basis.len() {
            return false;
        }
        current = next_basis
            .iter()
            .map(|v| Mat::from_fn(n, n, |r, c| v[r * n + c].clone()))
            .collect();
    }
    false
}

/// Check the splitting hypotheses for `g = s ⋉ h` with the given J.
pub fn check_splitting_hypotheses(
    g: &LieAlgebra,
    s: &Subspace,
    h: &Subspace,
    j: &ComplexStructure,
) -> Result<SplittingReport, DecideError> {
    let n = g.dim();
    if s.sum(h).dim() != n {
        return Err(DecideError::SpanFailure);
    }
    let direct_sum = s.intersect(h).dim() == 0;
    let h_ideal = h.is_ideal(g);
    let s_subalgebra = s.is_subalgebra(g);
    let s_solvable = subalgebra_is_solvable(g, s);
    // the action phi = ad restricted to h
    let phi = crate::weights::restricted_adjoint_action(g, s.basis(), h);
    let (image_nilpotent, phi_not_type_i) = match &phi {
        Some(mats) => {
            let closure = matrix_lie_closure(mats);
            (matrix_algebra_is_nilpotent(&closure), !is_type_i_rep(mats))
        }
        None => (false, false),
    };
    let j_preserves_h = h.is_invariant_under(j.matrix());
    let j_commutes_with_action = {
        let mut ok = true;
        'outer: for a in s.basis() {
            for b in h.basis() {
                let lhs = g.bracket(a, &j.apply_vec(b));
                let rhs = j.apply_vec(&g.bracket(a, b));
                if lhs != rhs {
                    ok = false;
                    break 'outer;
                }
            }
        }
        ok
    };
    let skt_s_nilpotent = subalgebra_is_nilpotent(g, s);
    let skt_j_preserves_s = s.is_invariant_under(j.matrix());
    Ok(SplittingReport {
        direct_sum,
        h_ideal,
        s_subalgebra,
        s_solvable,
        image_nilpotent,
        phi_not_type_i,
        j_preserves_h,
        j_commutes_with_action,
        skt_s_nilpotent,
        skt_j_preserves_s,
    })
}

/// Does `ad_C ∘ J = J ∘ ad_C` hold for every basis element of a declared
/// nilpotent complement `c` of the nilradical?
pub fn check_complement_commutation(
    g: &LieAlgebra,
    c: &Subspace,
    j: &ComplexStructure,
) -> Result<bool, DecideError> {
    let nil = g.nilradical()?;
    if c.sum(&nil).dim() != g.dim() || !c.is_subalgebra(g) || !subalgebra_is_nilpotent(g, c) {
        return Err(DecideError::NotAComplement);
    }
    for v in c.basis() {
        let ad = g.ad(v);
        if ad.mul(j.matrix()) != j.matrix().mul(&ad) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Facts about the almost-abelian shape relative to a reference 2-form.
#[derive(Debug, Clone)]
pub struct AlmostAbelianReport {
    pub nilradical_dim: usize,
    /// Gram-orthogonal direction to the nilradical (primitive integer form).
    pub x: Vec<Rat>,
    pub omega_degenerate_on_complement: bool,
    pub jx_in_nilradical: bool,
    /// `[X, JX]`.
    pub y: Vec<Rat>,
    pub x_jx_commute: bool,
    pub h_ad_x_invariant: bool,
    /// In the 6-dimensional case with `Y != 0`: the frame
    /// `{X, JX, Y, JY, Z = [X,Y], JZ = [X,JY]}` and whether it spans.
    pub frame: Option<AlmostAbelianFrame>,
}

#[derive(Debug, Clone)]
pub struct AlmostAbelianFrame {
    pub y: Vec<Rat>,
    pub jy: Vec<Rat>,
    pub z: Vec<Rat>,
    pub jz: Vec<Rat>,
    pub spans: bool,
    /// `[X, JY] == J [X, Y]` (the frame identity for the sixth vector).
    pub jz_is_bracket: bool,
}

pub fn almost_abelian_report(
    g: &LieAlgebra,
    j: &ComplexStructure,
    omega: &Form<Rat>,
) -> Result<AlmostAbelianReport, DecideError> {
    let nil = g.nilradical()?;
    let n = g.dim();
    if nil.dim() + 1 != n || !nil.is_abelian(g) {
        return Err(DecideError::NotAlmostAbelian);
    }
    let s = taming_gram(omega, j);
    // X spans the S-orthogonal complement of the nilradical
    let mut rows = Mat::zero(nil.dim(), n);
    for (r, b) in nil.basis().iter().enumerate() {
        let sb = s.mul_vec(b);
        for c in 0..n {
            rows[(r, c)] = sb[c].clone();
        }
    }
    let ortho = rows.kernel();
    let x = ortho
        .iter()
        .find(|v| !nil.contains(v))
        .cloned()
        .unwrap_or_else(|| ortho.first().cloned().unwrap_or_else(|| vec![rzero(); n]));
    let omega_degenerate_on_complement = ortho.len() != 1 || nil.contains(&x);
    let x = primitive_vector(&x);
    let jx = j.apply_vec(&x);
    let jx_in_nilradical = nil.contains(&jx);
    let y = g.bracket(&x, &jx);
    let x_jx_commute = y.iter().all(|c| Zero::is_zero(c));
    // h = S-orthogonal complement of span{X, JX}
    let mut rows = Mat::zero(2, n);
    let sx = s.mul_vec(&x);
    let sjx = s.mul_vec(&jx);
    for c in 0..n {
        rows[(0, c)] = sx[c].clone();
        rows[(1, c)] = sjx[c].clone();
    }
    let h = Subspace::from_vectors(n, &rows.kernel());
    let adx = g.ad(&x);
    let h_ad_x_invariant = h.is_invariant_under(&adx);
    let frame = if n == 6 && !x_jx_commute {
        let jy = j.apply_vec(&y);
        let z = g.bracket(&x, &y);
        let jz = j.apply_vec(&z);
        let bracket_jz = g.bracket(&x, &jy);
        let jz_is_bracket = jz == bracket_jz;
        let span = Subspace::from_vectors(
            n,
            &[x.clone(), jx.clone(), y.clone(), jy.clone(), z.clone(), jz.clone()],
        );
        Some(AlmostAbelianFrame { y: y.clone(), jy, z, jz, spans: span.dim() == 6, jz_is_bracket })
    } else {
        None
    };
    Ok(AlmostAbelianReport {
        nilradical_dim: nil.dim(),
        x,
        omega_degenerate_on_complement,
        jx_in_nilradical,
        y,
        x_jx_commute,
        h_ad_x_invariant,
        frame,
    })
}

/// The exact identities satisfied by a closed form under an abelian J,
/// with the reference vectors X ranging over a J-invariant complement of
/// `V = g^1 + J g^1` and the bilinear forms over V itself. Used as
/// cross-validation of Exists verdicts; all checks are vacuous when V is
/// the whole algebra.
#[derive(Debug, Clone)]
pub struct AbelianObstructionReport {
    pub v_dim: usize,
    pub v_abelian: bool,
    pub complement_dim: usize,
    pub b_symmetric: bool,
    pub b_prime_symmetric: bool,
    pub skew_identity: bool,
    pub bracket_pairing_zero: bool,
}

impl AbelianObstructionReport {
    pub fn all_hold(&self) -> bool {
        self.b_symmetric && self.b_prime_symmetric && self.skew_identity && self.bracket_pairing_zero
    }
}

pub fn abelian_obstruction_checks(
    g: &LieAlgebra,
    j: &ComplexStructure,
    omega: &Form<Rat>,
) -> Result<AbelianObstructionReport, DecideError> {
    if !j.is_abelian() {
        return Err(DecideError::JNotAbelian);
    }
    if !g.ce_d(omega).is_zero() {
        return Err(DecideError::OmegaNotClosed);
    }
    let n = g.dim();
    let g1 = g.derived_subalgebra();
    let jg1 = g1.map(j.matrix());
    let v = g1.sum(&jg1);
    let v_abelian = v.is_abelian(g);
    let vb = v.basis();
    // J-invariant complement of V, grown in (e_i, J e_i) pairs.
    let mut complement: Vec<Vec<Rat>> = Vec::new();
    let mut reach = v.clone();
    for i in 0..n {
        let mut e = vec![rzero(); n];
        e[i] = rone();
        if reach.contains(&e) {
            continue;
        }
        let je = j.apply_vec(&e);
        complement.push(e.clone());
        complement.push(je.clone());
        reach = reach.sum(&Subspace::from_vectors(n, &[e, je]));
        if reach.dim() == n {
            break;
        }
    }
    let eval = |x: &[Rat], y: &[Rat]| omega_eval(omega, x, y);
    let mut b_symmetric = true;
    let mut b_prime_symmetric = true;
    let mut skew_identity = true;
    let mut bracket_pairing_zero = true;
    for x in &complement {
        let x = x.clone();
        let jx = j.apply_vec(&x);
        for yv in vb {
            for zv in vb {
                let bx = eval(&g.bracket(&x, yv), zv);
                let bx_t = eval(&g.bracket(&x, zv), yv);
                if bx != bx_t {
                    b_symmetric = false;
                }
                let bpx = eval(&g.bracket(&jx, yv), zv);
                let bpx_t = eval(&g.bracket(&jx, zv), yv);
                if bpx != bpx_t {
                    b_prime_symmetric = false;
                }
                let lhs = eval(&g.bracket(&x, &j.apply_vec(yv)), &j.apply_vec(zv));
                if lhs != -bx.clone() {
                    skew_identity = false;
                }
            }
            let pairing = eval(&g.bracket(&x, yv), &g.bracket(&jx, yv));
            if !Zero::is_zero(&pairing) {
                bracket_pairing_zero = false;
            }
        }
    }
    Ok(AbelianObstructionReport {
        v_dim: v.dim(),
        v_abelian,
        complement_dim: complement.len(),
        b_symmetric,
        b_prime_symmetric,
        skew_identity,
        bracket_pairing_zero,
    })
}
