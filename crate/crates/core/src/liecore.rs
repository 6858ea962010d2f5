//! Lie algebras by structure constants: Jacobi validation, the invariant
//! (Chevalley-Eilenberg) differential, derived and lower central series,
//! nilradical, unimodularity, and the twisted-closed solver.
//!
//! Sign convention, fixed once: `d a (X, Y) = -a([X, Y])` on 1-forms, which
//! on basis covectors reads `d e^k = - sum_{i<j} c^k_ij e^i ^ e^j`. Higher
//! degrees extend as a graded antiderivation.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::exterior::{monomials, Form};
use crate::mat::{echelon_basis, in_span, Mat};
use crate::scalar::{Rat, Scalar};
use crate::weights::jordan_chevalley;
use num_traits::{One, Zero};
use thiserror::Error;

fn rzero() -> Rat {
    <Rat as Zero>::zero()
}

fn rone() -> Rat {
    <Rat as One>::one()
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),
    #[error("the algebra is not solvable")]
    NotSolvable,
    #[error("the algebra is not nilpotent")]
    NotNilpotent,
    #[error("theta is not closed")]
    ThetaNotClosed,
    #[error("theta is zero; the twisted solver needs a nonzero twist")]
    ThetaZero,
    #[error("structure constant index out of range: {0}")]
    IndexOutOfRange(usize),
    #[error("no regular element found while computing the nilradical")]
    NoRegularElement,
}

/// A finite-dimensional real Lie algebra described by exact rational
/// structure constants `[e_i, e_j] = sum_k c^k_ij e_k` for `i < j`.
pub struct LieAlgebra {
    dim: usize,
    names: Vec<String>,
    /// brackets[(i, j)] for i < j, sparse in the output index k.
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rat)>>,
    derived: OnceLock<Vec<Subspace>>,
    lower_central: OnceLock<Vec<Subspace>>,
    nilrad: OnceLock<Result<Subspace, LieError>>,
}

impl Clone for LieAlgebra {
    fn clone(&self) -> Self {
        LieAlgebra {
            dim: self.dim,
            names: self.names.clone(),
            brackets: self.brackets.clone(),
            derived: OnceLock::new(),
            lower_central: OnceLock::new(),
            nilrad: OnceLock::new(),
        }
    }
}

impl std::fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LieAlgebra")
            .field("dim", &self.dim)
            .field("names", &self.names)
            .field("brackets", &self.brackets)
            .finish()
    }
}

impl LieAlgebra {
    /// Build and validate: antisymmetry holds by construction (only `i < j`
    /// entries are accepted), the Jacobi identity is checked exhaustively.
    pub fn new(
        names: Vec<String>,
        entries: Vec<(usize, usize, Vec<(usize, Rat)>)>,
    ) -> Result<Self, LieError> {
        let g = Self::new_unchecked(names, entries)?;
        if let Some((i, j, k)) = g.jacobi_violation() {
            return Err(LieError::JacobiViolation(i, j, k));
        }
        Ok(g)
    }

    /// Build without the Jacobi check (used by tests that need a broken
    /// table to exercise `d . d != 0`).
    pub fn new_unchecked(
        names: Vec<String>,
        entries: Vec<(usize, usize, Vec<(usize, Rat)>)>,
    ) -> Result<Self, LieError> {
        let dim = names.len();
        assert!(dim <= 64, "dimension above 64 not supported");
        let mut brackets = BTreeMap::new();
        for (i, j, terms) in entries {
            if i >= dim || j >= dim {
                return Err(LieError::IndexOutOfRange(i.max(j)));
            }
            if i == j {
                continue;
            }
            let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
            let slot: &mut Vec<(usize, Rat)> = brackets.entry((a, b)).or_default();
            for (k, c) in terms {
                if k >= dim {
                    return Err(LieError::IndexOutOfRange(k));
                }
                let c = if flip { -c } else { c };
                match slot.iter_mut().find(|(kk, _)| *kk == k) {
                    Some((_, existing)) => *existing += c,
                    None => slot.push((k, c)),
                }
            }
            slot.retain(|(_, c)| !Zero::is_zero(c));
            slot.sort_by_key(|(k, _)| *k);
        }
        brackets.retain(|_, v| !v.is_empty());
        Ok(LieAlgebra {
            dim,
            names,
            brackets,
            derived: OnceLock::new(),
            lower_central: OnceLock::new(),
            nilrad: OnceLock::new(),
        })
    }

    /// Abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        let names = (1..=dim).map(|i| format!("e{i}")).collect();
        Self::new_unchecked(names, vec![]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// `[e_i, e_j]` as sparse (index, coefficient) pairs.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        if i == j {
            return vec![];
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        match self.brackets.get(&(a, b)) {
            None => vec![],
            Some(terms) => terms
                .iter()
                .map(|(k, c)| (*k, if flip { -c.clone() } else { c.clone() }))
                .collect(),
        }
    }

    /// Bracket of coordinate vectors over any scalar extension.
    pub fn bracket<K: Scalar>(&self, x: &[K], y: &[K]) -> Vec<K> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![K::zero(); self.dim];
        for ((i, j), terms) in &self.brackets {
            // coefficient x_i y_j - x_j y_i multiplies [e_i, e_j]
            let c = x[*i].mul(&y[*j]).sub(&x[*j].mul(&y[*i]));
            if c.is_zero() {
                continue;
            }
            for (k, s) in terms {
                let t = c.mul(&K::from_rat(s));
                out[*k] = out[*k].add(&t);
            }
        }
        out
    }

    /// The adjoint matrix of a coordinate vector, acting on coordinates.
    pub fn ad<K: Scalar>(&self, x: &[K]) -> Mat<K> {
        let n = self.dim;
        let mut m = Mat::zero(n, n);
        for j in 0..n {
            let mut ej = vec![K::zero(); n];
            ej[j] = K::one();
            let col = self.bracket(x, &ej);
            for (i, v) in col.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Mat<Rat> {
        let mut x = vec![rzero(); self.dim];
        x[i] = rone();
        self.ad(&x)
    }

    /// First basis triple violating Jacobi, if any.
    pub fn jacobi_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.dim;
        let basis: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut v = vec![rzero(); n];
                v[i] = rone();
                v
            })
            .collect();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let a = self.bracket(&basis[i], &self.bracket(&basis[j], &basis[k]));
                    let b = self.bracket(&basis[j], &self.bracket(&basis[k], &basis[i]));
                    let c = self.bracket(&basis[k], &self.bracket(&basis[i], &basis[j]));
                    let sum: Vec<Rat> = a
                        .iter()
                        .zip(&b)
                        .zip(&c)
                        .map(|((x, y), z)| x + y + z)
                        .collect();
                    if sum.iter().any(|x| !Zero::is_zero(x)) {
                        return Some((i, j, k));
                    }
                }
            }
        }
        None
    }

    /// `true` iff the Jacobi identity holds on all basis triples.
    pub fn check_jacobi(&self) -> bool {
        self.jacobi_violation().is_none()
    }

    /// Chevalley-Eilenberg differential of a form over any scalar extension.
    pub fn ce_d<K: Scalar>(&self, a: &Form<K>) -> Form<K> {
        assert_eq!(a.dim(), self.dim, "form dimension does not match the algebra");
        let mut out = Form::zero(self.dim, a.degree() + 1);
        for (mask, c) in a.terms() {
            let term = self.d_monomial::<K>(mask);
            out = out.add(&term.scale(c));
        }
        out
    }

    /// d of a single basis monomial, as a graded antiderivation.
    fn d_monomial<K: Scalar>(&self, mask: u64) -> Form<K> {
        let k = mask.count_ones() as usize;
        if k == 0 {
            return Form::zero(self.dim, 1);
        }
        // split off the lowest factor
        let i = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let d_ei = self.d_basis_covector::<K>(i);
        if rest == 0 {
            return d_ei;
        }
        let e_i = Form::<K>::basis(self.dim, i);
        let rest_form = Form::<K>::monomial(self.dim, rest, K::one());
        let d_rest = self.d_monomial::<K>(rest);
        // d(e^i ^ rest) = d(e^i) ^ rest - e^i ^ d(rest)
        let left = d_ei.wedge(&rest_form).unwrap();
        let right = e_i.wedge(&d_rest).unwrap();
        left.sub(&right)
    }

    /// `d e^k = - sum_{i<j} c^k_ij e^i ^ e^j`.
    fn d_basis_covector<K: Scalar>(&self, k: usize) -> Form<K> {
        let mut out = Form::zero(self.dim, 2);
        for ((i, j), terms) in &self.brackets {
            for (kk, c) in terms {
                if *kk == k {
                    let mono = Form::monomial(self.dim, (1 << i) | (1 << j), K::from_rat(&(-c.clone())));
                    out = out.add(&mono);
                }
            }
        }
        out
    }

    /// Matrix of `d` from degree-k monomials to degree-(k+1) monomials,
    /// both in increasing mask order.
    pub fn d_matrix(&self, k: usize) -> Mat<Rat> {
        let dom = monomials(self.dim, k);
        let cod = monomials(self.dim, k + 1);
        let mut m = Mat::zero(cod.len(), dom.len());
        for (col, mask) in dom.iter().enumerate() {
            let image: Form<Rat> = self.d_monomial(*mask);
            for (row_mask, c) in image.terms() {
                let row = cod.binary_search(&row_mask).unwrap();
                m[(row, col)] = c.clone();
            }
        }
        m
    }

    /// Derived series `g ⊇ [g,g] ⊇ [[g,g],[g,g]] ⊇ ...` until stabilization.
    pub fn derived_series(&self) -> &[Subspace] {
        self.derived.get_or_init(|| {
            let mut series = vec![Subspace::full(self.dim)];
            loop {
                let last = series.last().unwrap();
                let next = bracket_span(self, last, last);
                if next.dim() == last.dim() {
                    break;
                }
                series.push(next);
                if series.last().unwrap().dim() == 0 {
                    break;
                }
            }
            series
        })
    }

    /// Lower central series `g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ ...` until stabilization.
    pub fn lower_central_series(&self) -> &[Subspace] {
        self.lower_central.get_or_init(|| {
            let full = Subspace::full(self.dim);
            let mut series = vec![full.clone()];
            loop {
                let last = series.last().unwrap();
                let next = bracket_span(self, &full, last);
                if next.dim() == last.dim() {
                    break;
                }
                series.push(next);
                if series.last().unwrap().dim() == 0 {
                    break;
                }
            }
            series
        })
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().dim() == 0 || self.dim == 0
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().dim() == 0 || self.dim == 0
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// The derived subalgebra `[g, g]`.
    pub fn derived_subalgebra(&self) -> Subspace {
        let s = self.derived_series();
        if s.len() > 1 {
            s[1].clone()
        } else {
            Subspace::empty(self.dim)
        }
    }

    pub fn center(&self) -> Subspace {
        // X central iff ad(e_i) X = 0 for all i: stack the ad matrices.
        let n = self.dim;
        let mut stacked = Mat::zero(n * n, n);
        for i in 0..n {
            let ad = self.ad_basis(i);
            for r in 0..n {
                for c in 0..n {
                    stacked[(i * n + r, c)] = ad[(r, c)].clone();
                }
            }
        }
        Subspace::from_vectors(self.dim, &stacked.kernel())
    }

    /// `true` iff `trace(ad_X) = 0` for every basis element.
    pub fn is_unimodular(&self) -> bool {
        (0..self.dim).all(|i| Zero::is_zero(&self.ad_basis(i).trace()))
    }

    /// The maximal nilpotent ideal of a solvable algebra.
    ///
    /// Strategy: for solvable `g` the nilradical is exactly the set of
    /// ad-nilpotent elements, and `g = [g,g] + h` for the Fitting-null
    /// subalgebra `h = ker (ad_Z)_s` of any `Z`. Picking `Z` with `h`
    /// nilpotent makes `X -> (ad_X)_s` linear on `h`, so the ad-nilpotent
    /// part of `h` is the kernel of a stacked matrix. The result is
    /// re-verified exactly (ideal, nilpotent, contains `[g,g]`).
    pub fn nilradical(&self) -> Result<Subspace, LieError> {
        self.nilrad.get_or_init(|| self.compute_nilradical()).clone()
    }

    fn compute_nilradical(&self) -> Result<Subspace, LieError> {
        if !self.is_solvable() {
            return Err(LieError::NotSolvable);
        }
        if self.is_nilpotent() {
            return Ok(Subspace::full(self.dim));
        }
        let n = self.dim;
        let g1 = self.derived_subalgebra();
        let h = self.fitting_null_subalgebra()?;
        // Stack the semisimple parts of ad over h's basis; the kernel of
        // w -> (ad_w)_s inside h is exactly h ∩ nilradical.
        let hb = h.basis();
        let mut stacked = Mat::zero(n * n, hb.len());
        for (col, w) in hb.iter().enumerate() {
            let jc = jordan_chevalley(&self.ad(w));
            for r in 0..n {
                for c in 0..n {
                    stacked[(r * n + c, col)] = jc.s[(r, c)].clone();
                }
            }
        }
        let mut vectors: Vec<Vec<Rat>> = g1.basis().to_vec();
        for coeffs in stacked.kernel() {
            let mut v = vec![rzero(); n];
            for (c, w) in coeffs.iter().zip(hb) {
                for (vi, wi) in v.iter_mut().zip(w) {
                    *vi += c * wi;
                }
            }
            vectors.push(v);
        }
        let nil = Subspace::from_vectors(n, &vectors);
        // Exact re-verification of every claimed property.
        assert!(nil.is_ideal(self), "nilradical candidate is not an ideal");
        assert!(
            subalgebra_is_nilpotent(self, &nil),
            "nilradical candidate is not nilpotent"
        );
        for v in nil.basis() {
            assert!(self.ad(v).is_nilpotent(), "nilradical element with non-nilpotent ad");
        }
        for v in g1.basis() {
            assert!(nil.contains(v), "nilradical misses the derived subalgebra");
        }
        Ok(nil)
    }

    /// A nilpotent subalgebra `h = ker (ad_Z)_s` with `g = [g,g] + h`,
    /// found by scanning deterministic candidates for `Z`.
    pub fn fitting_null_subalgebra(&self) -> Result<Subspace, LieError> {
        let n = self.dim;
        let mut best: Option<Subspace> = None;
        let consider = |z: &[Rat], best: &mut Option<Subspace>| {
            let jc = jordan_chevalley(&self.ad(z));
            let h = Subspace::from_vectors(n, &jc.s.kernel());
            if !subalgebra_is_nilpotent(self, &h) {
                return;
            }
            if best.as_ref().is_none_or(|b| h.dim() < b.dim()) {
                *best = Some(h);
            }
        };
        for i in 0..n {
            let mut z = vec![rzero(); n];
            z[i] = rone();
            consider(&z, &mut best);
        }
        // Pseudo-random small-integer combinations; deterministic seed.
        let mut state: u64 = 0x9e3779b97f4a7c15;
        for _ in 0..200 {
            let z: Vec<Rat> = (0..n)
                .map(|_| {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    crate::scalar::rat((state % 7) as i64 - 3)
                })
                .collect();
            if z.iter().all(|c| Zero::is_zero(c)) {
                continue;
            }
            consider(&z, &mut best);
        }
        best.ok_or(LieError::NoRegularElement)
    }

    /// Solve `d eta = eta ^ theta` for 1-forms `eta` on a nilpotent algebra
    /// with `theta` closed and nonzero. Returns an echelonized basis of the
    /// solution space (which is `span{theta}` by the vanishing theorem for
    /// twisted cohomology of nilpotent algebras).
    pub fn solve_twisted_closed(&self, theta: &Form<Rat>) -> Result<Vec<Form<Rat>>, LieError> {
        assert_eq!(theta.degree(), 1);
        assert_eq!(theta.dim(), self.dim);
        if !self.is_nilpotent() {
            return Err(LieError::NotNilpotent);
        }
        if theta.is_zero() {
            return Err(LieError::ThetaZero);
        }
        if !self.ce_d(theta).is_zero() {
            return Err(LieError::ThetaNotClosed);
        }
        let cod = monomials(self.dim, 2);
        let mut m = Mat::zero(cod.len(), self.dim);
        for i in 0..self.dim {
            let ei = Form::<Rat>::basis(self.dim, i);
            let image = self.ce_d(&ei).sub(&ei.wedge(theta).unwrap());
            for (mask, c) in image.terms() {
                let row = cod.binary_search(&mask).unwrap();
                m[(row, i)] = c.clone();
            }
        }
        let sols = echelon_basis(&m.kernel(), self.dim);
        Ok(sols
            .into_iter()
            .map(|v| {
                let mut f = Form::zero(self.dim, 1);
                for (i, c) in v.iter().enumerate() {
                    if !Zero::is_zero(c) {
                        f = f.add(&Form::monomial(self.dim, 1 << i, c.clone()));
                    }
                }
                f
            })
            .collect())
    }
}

/// Span of all brackets `[a, b]` with `a` in `a_space`, `b` in `b_space`.
pub fn bracket_span(g: &LieAlgebra, a_space: &Subspace, b_space: &Subspace) -> Subspace {
    let mut vectors = Vec::new();
    for a in a_space.basis() {
        for b in b_space.basis() {
            let v = g.bracket(a, b);
            if v.iter().any(|x| !Scalar::is_zero(x)) {
                vectors.push(v);
            }
        }
    }
    Subspace::from_vectors(g.dim(), &vectors)
}

/// Lower central series of a subalgebra, computed inside the ambient algebra.
pub fn subalgebra_is_nilpotent(g: &LieAlgebra, s: &Subspace) -> bool {
    if !s.is_subalgebra(g) {
        return false;
    }
    let mut current = s.clone();
    loop {
        let next = bracket_span(g, s, &current);
        if next.dim() == current.dim() {
            return current.dim() == 0;
        }
        current = next;
        if current.dim() == 0 {
            return true;
        }
    }
}

pub fn subalgebra_is_solvable(g: &LieAlgebra, s: &Subspace) -> bool {
    if !s.is_subalgebra(g) {
        return false;
    }
    let mut current = s.clone();
    loop {
        let next = bracket_span(g, &current, &current);
        if next.dim() == current.dim() {
            return current.dim() == 0;
        }
        current = next;
        if current.dim() == 0 {
            return true;
        }
    }
}

/// A subspace of the algebra, held as a reduced echelon basis so that the
/// representation is canonical and equality is decidable.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rat>>,
}

impl Subspace {
    pub fn empty(ambient: usize) -> Self {
        Subspace { ambient, basis: vec![] }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| {
                let mut v = vec![rzero(); ambient];
                v[i] = rone();
                v
            })
            .collect();
        Subspace { ambient, basis }
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vec<Rat>]) -> Self {
        Subspace { ambient, basis: echelon_basis(vectors, ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rat>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        in_span(&self.basis, v)
    }

    pub fn contains_subspace(&self, o: &Subspace) -> bool {
        o.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, o: &Subspace) -> Subspace {
        assert_eq!(self.ambient, o.ambient);
        let mut vs = self.basis.clone();
        vs.extend(o.basis.iter().cloned());
        Subspace::from_vectors(self.ambient, &vs)
    }

    pub fn intersect(&self, o: &Subspace) -> Subspace {
        // Kernel trick: pairs (x, y) with  B_self^T x = B_o^T y.
        assert_eq!(self.ambient, o.ambient);
        let a = self.dim();
        let b = o.dim();
        if a == 0 || b == 0 {
            return Subspace::empty(self.ambient);
        }
        let mut m = Mat::zero(self.ambient, a + b);
        for (j, v) in self.basis.iter().enumerate() {
            for i in 0..self.ambient {
                m[(i, j)] = v[i].clone();
            }
        }
        for (j, v) in o.basis.iter().enumerate() {
            for i in 0..self.ambient {
                m[(i, a + j)] = -v[i].clone();
            }
        }
        let mut vectors = Vec::new();
        for k in m.kernel() {
            let mut v = vec![rzero(); self.ambient];
            for (j, c) in k[..a].iter().enumerate() {
                for i in 0..self.ambient {
                    v[i] += c * &self.basis[j][i];
                }
            }
            vectors.push(v);
        }
        Subspace::from_vectors(self.ambient, &vectors)
    }

    pub fn is_subalgebra(&self, g: &LieAlgebra) -> bool {
        for a in &self.basis {
            for b in &self.basis {
                if !self.contains(&g.bracket(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_ideal(&self, g: &LieAlgebra) -> bool {
        let n = g.dim();
        for i in 0..n {
            let mut ei = vec![rzero(); n];
            ei[i] = rone();
            for b in &self.basis {
                if !self.contains(&g.bracket(&ei, b)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_abelian(&self, g: &LieAlgebra) -> bool {
        for a in &self.basis {
            for b in &self.basis {
                if g.bracket(a, b).iter().any(|x| !Zero::is_zero(x)) {
                    return false;
                }
            }
        }
        true
    }

    /// Image under a linear map given by a matrix acting on coordinates.
    pub fn map(&self, m: &Mat<Rat>) -> Subspace {
        let vectors: Vec<Vec<Rat>> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::from_vectors(self.ambient, &vectors)
    }

    /// Is the subspace invariant under the matrix?
    pub fn is_invariant_under(&self, m: &Mat<Rat>) -> bool {
        self.basis.iter().all(|v| self.contains(&m.mul_vec(v)))
    }
}
