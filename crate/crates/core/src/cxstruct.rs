//! Invariant almost-complex structures: integrability (Nijenhuis tensor),
//! abelian-ness, the action of J on forms, bigrading of complexified forms,
//! and the conjugated differentials d^c and dd^c.
//!
//! Convention, fixed once and pinned by the structure-equation tests:
//! `(J a)(X_1, ..., X_k) = (-1)^k a(J X_1, ..., J X_k)`, which makes the
//! J-action multiplicative over wedge and gives `d^c = J^{-1} d J`.

use std::collections::BTreeMap;

use crate::exterior::{Form, Multivector};
use crate::liecore::LieAlgebra;
use crate::mat::Mat;
use crate::scalar::{GaussRat, Rat, Scalar};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CxError {
    #[error("J^2 is not -identity")]
    JSquaredNotMinusId,
    #[error("J matrix must be square of the algebra dimension (even)")]
    BadShape,
    #[error("the complex structure is not integrable")]
    NotIntegrable,
}

/// An almost-complex structure on the algebra, held as an exact rational
/// matrix with `J^2 = -id`. Integrability is computed once at construction.
#[derive(Clone, Debug)]
pub struct ComplexStructure {
    mat: Mat<Rat>,
    integrable: bool,
    abelian: bool,
}

impl ComplexStructure {
    pub fn new(g: &LieAlgebra, mat: Mat<Rat>) -> Result<Self, CxError> {
        let n = g.dim();
        if mat.rows() != n || mat.cols() != n || n % 2 != 0 {
            return Err(CxError::BadShape);
        }
        if mat.mul(&mat) != Mat::identity(n).neg() {
            return Err(CxError::JSquaredNotMinusId);
        }
        let integrable = nijenhuis_vanishes(g, &mat);
        let abelian = abelian_j_holds(g, &mat);
        Ok(ComplexStructure { mat, integrable, abelian })
    }

    /// Build from index pairs: each `(a, b)` declares `J e_a = e_b` (and so
    /// `J e_b = -e_a`). Every index must appear exactly once.
    pub fn from_pairs(g: &LieAlgebra, pairs: &[(usize, usize)]) -> Result<Self, CxError> {
        let n = g.dim();
        let mut m = Mat::zero(n, n);
        for &(a, b) in pairs {
            m[(b, a)] = <Rat as One>::one();
            m[(a, b)] = -<Rat as One>::one();
        }
        Self::new(g, m)
    }

    pub fn matrix(&self) -> &Mat<Rat> {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn is_integrable(&self) -> bool {
        self.integrable
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    /// Apply J to a coordinate vector over any scalar extension.
    pub fn apply_vec<K: Scalar>(&self, v: &[K]) -> Vec<K> {
        let n = self.dim();
        assert_eq!(v.len(), n);
        let mut out = vec![K::zero(); n];
        for i in 0..n {
            for j in 0..n {
                let c = &self.mat[(i, j)];
                if !Zero::is_zero(c) {
                    let t = v[j].mul(&K::from_rat(c));
                    out[i] = out[i].add(&t);
                }
            }
        }
        out
    }
}

fn basis_vectors(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|i| {
            let mut v = vec![<Rat as Zero>::zero(); n];
            v[i] = <Rat as One>::one();
            v
        })
        .collect()
}

/// `N(X, Y) = [JX, JY] - [X, Y] - J[JX, Y] - J[X, JY]`.
pub fn nijenhuis_vec(g: &LieAlgebra, j: &Mat<Rat>, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
    let jx = j.mul_vec(x);
    let jy = j.mul_vec(y);
    let mut out = g.bracket(&jx, &jy);
    let xy = g.bracket(x, y);
    let t1 = j.mul_vec(&g.bracket(&jx, y));
    let t2 = j.mul_vec(&g.bracket(x, &jy));
    for i in 0..out.len() {
        out[i] = &out[i] - &xy[i] - &t1[i] - &t2[i];
    }
    out
}

/// Nijenhuis tensor on two vectors, packaged as a degree-1 multivector.
pub fn nijenhuis(
    g: &LieAlgebra,
    j: &ComplexStructure,
    x: &Multivector<Rat>,
    y: &Multivector<Rat>,
) -> Multivector<Rat> {
    let v = nijenhuis_vec(g, j.matrix(), &x.coords(), &y.coords());
    Multivector::from_coords(&v)
}

fn nijenhuis_vanishes(g: &LieAlgebra, j: &Mat<Rat>) -> bool {
    let basis = basis_vectors(g.dim());
    for a in 0..g.dim() {
        for b in a + 1..g.dim() {
            if nijenhuis_vec(g, j, &basis[a], &basis[b]).iter().any(|c| !Zero::is_zero(c)) {
                return false;
            }
        }
    }
    true
}

pub fn is_integrable(_g: &LieAlgebra, j: &ComplexStructure) -> bool {
    j.is_integrable()
}

fn abelian_j_holds(g: &LieAlgebra, j: &Mat<Rat>) -> bool {
    let basis = basis_vectors(g.dim());
    for a in 0..g.dim() {
        for b in a + 1..g.dim() {
            let lhs = g.bracket(&j.mul_vec(&basis[a]), &j.mul_vec(&basis[b]));
            let rhs = g.bracket(&basis[a], &basis[b]);
            if lhs.iter().zip(&rhs).any(|(l, r)| l != r) {
                return false;
            }
        }
    }
    true
}

/// `[JX, JY] = [X, Y]` on all basis pairs.
pub fn is_abelian_j(_g: &LieAlgebra, j: &ComplexStructure) -> bool {
    j.is_abelian()
}

/// The J-action on forms: multiplicative over wedge, `(-1)^k`-involutive
/// in degree k.
pub fn apply_j_form<K: Scalar>(j: &ComplexStructure, a: &Form<K>) -> Form<K> {
    let n = a.dim();
    assert_eq!(n, j.dim());
    // J e^i = - sum_j J_{ij} e^j
    let j_on_covector: Vec<Form<K>> = (0..n)
        .map(|i| {
            let mut f = Form::zero(n, 1);
            for jj in 0..n {
                let c = &j.matrix()[(i, jj)];
                if !Zero::is_zero(c) {
                    f = f.add(&Form::monomial(n, 1 << jj, K::from_rat(&-c.clone())));
                }
            }
            f
        })
        .collect();
    let mut out = Form::zero(n, a.degree());
    for (mask, c) in a.terms() {
        let mut term = Form::one(n);
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            term = term.wedge(&j_on_covector[i]).unwrap();
            m &= m - 1;
        }
        out = out.add(&term.scale(c));
    }
    out
}

/// The conjugated differential `d^c = J d J^{-1}`, where `J^{-1} = (-1)^k J`
/// on k-forms; so `d^c a = (-1)^(deg a) J(d(J a))`. This orientation of the
/// conjugation is the one that reproduces the twisted structure-equation
/// identity `dd^c(w ^ conj w) = (dJθ - Jθ^θ) ^ w ^ conj w` with its stated
/// sign; the test suite pins it.
pub fn dc<K: Scalar>(g: &LieAlgebra, j: &ComplexStructure, a: &Form<K>) -> Form<K> {
    let ja = apply_j_form(j, a);
    let dja = g.ce_d(&ja);
    let out = apply_j_form(j, &dja);
    if a.degree() % 2 == 1 {
        out.neg()
    } else {
        out
    }
}

/// `dd^c a = d(d^c a)`.
pub fn ddc<K: Scalar>(g: &LieAlgebra, j: &ComplexStructure, a: &Form<K>) -> Form<K> {
    g.ce_d(&dc(g, j, a))
}

/// A complexified form split into its (p, q) components.
#[derive(Clone, Debug)]
pub struct BigradedForm {
    degree: usize,
    parts: BTreeMap<(usize, usize), Form<GaussRat>>,
}

impl BigradedForm {
    pub fn component(&self, p: usize, q: usize) -> Form<GaussRat> {
        self.parts
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| Form::zero(self.dim(), self.degree))
    }

    pub fn parts(&self) -> impl Iterator<Item = (&(usize, usize), &Form<GaussRat>)> {
        self.parts.iter()
    }

    pub fn total(&self) -> Form<GaussRat> {
        let mut acc = Form::zero(self.dim(), self.degree);
        for f in self.parts.values() {
            acc = acc.add(f);
        }
        acc
    }

    fn dim(&self) -> usize {
        self.parts.values().next().map_or(0, |f| f.dim())
    }
}

/// Decompose a complexified form by type. Linear; J need not be integrable.
pub fn bigrade(j: &ComplexStructure, a: &Form<GaussRat>) -> BigradedForm {
    let n = a.dim();
    assert_eq!(n, j.dim());
    let i_unit = GaussRat::i();
    let half = GaussRat::from_rat(crate::scalar::ratio(1, 2));
    // Projections of each basis covector.
    let mut p10: Vec<Form<GaussRat>> = Vec::with_capacity(n);
    let mut p01: Vec<Form<GaussRat>> = Vec::with_capacity(n);
    for idx in 0..n {
        let e: Form<GaussRat> = Form::basis(n, idx);
        let je = apply_j_form(j, &e);
        let plus = e.add(&je.scale(&i_unit)).scale(&half);
        let minus = e.sub(&je.scale(&i_unit)).scale(&half);
        p10.push(plus);
        p01.push(minus);
    }
    let mut parts: BTreeMap<(usize, usize), Form<GaussRat>> = BTreeMap::new();
    for (mask, c) in a.terms() {
        let mut idx = Vec::new();
        let mut m = mask;
        while m != 0 {
            idx.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        let k = idx.len();
        // expand the product of (p10 + p01) factors over subsets
        for subset in 0..(1u64 << k) {
            let mut term = Form::one(n);
            let mut p = 0;
            for (pos, &i) in idx.iter().enumerate() {
                let factor = if subset & (1 << pos) != 0 {
                    p += 1;
                    &p10[i]
                } else {
                    &p01[i]
                };
                term = term.wedge(factor).unwrap();
                if term.is_zero() {
                    break;
                }
            }
            if term.is_zero() {
                continue;
            }
            let term = term.scale(c);
            let entry = parts
                .entry((p, k - p))
                .or_insert_with(|| Form::zero(n, k));
            *entry = entry.add(&term);
        }
    }
    parts.retain(|_, f| !f.is_zero());
    BigradedForm { degree: a.degree(), parts }
}

/// Basis of real J-invariant 2-forms (the real (1,1)-forms):
/// `w` with `w(J., J.) = w`.
pub fn invariant_two_forms(j: &ComplexStructure) -> Vec<Form<Rat>> {
    let n = j.dim();
    let basis = crate::exterior::monomials(n, 2);
    let mut rows = Vec::new();
    // (J-action - id) w = 0, as linear conditions on the monomial coefficients
    let mut m = Mat::zero(basis.len(), basis.len());
    for (col, &mask) in basis.iter().enumerate() {
        let f: Form<Rat> = Form::monomial(n, mask, <Rat as One>::one());
        let jf = apply_j_form(j, &f);
        let diff = jf.sub(&f);
        for (rmask, c) in diff.terms() {
            let row = basis.binary_search(&rmask).unwrap();
            m[(row, col)] = c.clone();
        }
    }
    for v in m.kernel() {
        rows.push(Form::from_coeff_vector(n, 2, &basis, &v));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn heisenberg_r() -> LieAlgebra {
        // Heisenberg + R: [e1,e2] = e3, e4 central
        LieAlgebra::new(
            vec!["e1".into(), "e2".into(), "e3".into(), "e4".into()],
            vec![(0, 1, vec![(2, rat(1))])],
        )
        .unwrap()
    }

    #[test]
    fn j_squared_validation() {
        let g = LieAlgebra::abelian(2);
        let bad = Mat::from_rows(vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]]);
        assert_eq!(ComplexStructure::new(&g, bad).unwrap_err(), CxError::JSquaredNotMinusId);
        let j = ComplexStructure::from_pairs(&g, &[(0, 1)]).unwrap();
        assert!(j.is_integrable());
    }

    #[test]
    fn nijenhuis_nonintegrable_example() {
        let g = heisenberg_r();
        // J e1 = e3, J e2 = e4
        let j = ComplexStructure::from_pairs(&g, &[(0, 2), (1, 3)]).unwrap();
        assert!(!j.is_integrable());
        let x = Multivector::basis(4, 0);
        let y = Multivector::basis(4, 1);
        let n = nijenhuis(&g, &j, &x, &y);
        assert_eq!(n.coords(), vec![rat(0), rat(0), rat(-1), rat(0)]);
    }

    #[test]
    fn kodaira_thurston_j_is_integrable() {
        let g = heisenberg_r();
        // J e1 = e2, J e3 = e4
        let j = ComplexStructure::from_pairs(&g, &[(0, 1), (2, 3)]).unwrap();
        assert!(j.is_integrable());
    }

    #[test]
    fn abelian_j_cases() {
        // any J on an abelian algebra is abelian
        let g = LieAlgebra::abelian(4);
        let j = ComplexStructure::from_pairs(&g, &[(0, 1), (2, 3)]).unwrap();
        assert!(is_abelian_j(&g, &j));

        // complex 2-dim algebra [A,B]=B as real 4-dim, J = multiplication by i:
        // basis A, iA, B, iB with [A,B]=B, [A,iB]=iB, [iA,B]=iB, [iA,iB]=-B
        let g = LieAlgebra::new(
            vec!["A".into(), "iA".into(), "B".into(), "iB".into()],
            vec![
                (0, 2, vec![(2, rat(1))]),
                (0, 3, vec![(3, rat(1))]),
                (1, 2, vec![(3, rat(1))]),
                (1, 3, vec![(2, rat(-1))]),
            ],
        )
        .unwrap();
        let j = ComplexStructure::from_pairs(&g, &[(0, 1), (2, 3)]).unwrap();
        assert!(j.is_integrable());
        assert!(!is_abelian_j(&g, &j));
    }

    #[test]
    fn j_action_involutive_up_to_sign() {
        let g = LieAlgebra::abelian(4);
        let j = ComplexStructure::from_pairs(&g, &[(0, 1), (2, 3)]).unwrap();
        for k in 0..=4 {
            for &mask in crate::exterior::monomials(4, k).iter().take(3) {
                let f: Form<Rat> = Form::monomial(4, mask, rat(1));
                let jjf = apply_j_form(&j, &apply_j_form(&j, &f));
                let expect = if k % 2 == 0 { f.clone() } else { f.neg() };
                assert_eq!(jjf, expect, "degree {k}");
            }
        }
    }

    #[test]
    fn bigrade_standard_cases() {
        let g = LieAlgebra::abelian(2);
        let j = ComplexStructure::from_pairs(&g, &[(0, 1)]).unwrap();
        // e^{12} on R^2 is pure (1,1)
        let f: Form<Rat> = Form::monomial(2, 0b11, rat(1));
        let bg = bigrade(&j, &f.complexify());
        assert!(bg.component(2, 0).is_zero());
        assert!(bg.component(0, 2).is_zero());
        assert_eq!(bg.component(1, 1), f.complexify());

        // a (1,0)-form: w = e^1 + i J^t-image; here w = e^1 + i e^2
        let w = Form::<Rat>::basis(2, 0)
            .complexify()
            .add(&Form::<Rat>::basis(2, 1).complexify().scale_i());
        let bg = bigrade(&j, &w);
        assert_eq!(bg.component(1, 0), w);
        assert!(bg.component(0, 1).is_zero());
    }

    #[test]
    fn bigrade_mixed_four_dim() {
        let g = LieAlgebra::abelian(4);
        let j = ComplexStructure::from_pairs(&g, &[(0, 1), (2, 3)]).unwrap();
        let f: Form<Rat> = Form::monomial(4, 0b0101, rat(1)); // e^{13}
        let fc = f.complexify();
        let bg = bigrade(&j, &fc);
        // expansion through w1 = e1 + i e2, w2 = e3 + i e4:
        // e^{13} = 1/4 (w1 + conj w1) ^ (w2 + conj w2)
        let w1 = Form::<Rat>::basis(4, 0)
            .complexify()
            .add(&Form::<Rat>::basis(4, 1).complexify().scale_i());
        let w2 = Form::<Rat>::basis(4, 2)
            .complexify()
            .add(&Form::<Rat>::basis(4, 3).complexify().scale_i());
        let quarter = GaussRat::from_rat(crate::scalar::ratio(1, 4));
        let expect20 = w1.wedge(&w2).unwrap().scale(&quarter);
        assert_eq!(bg.component(2, 0), expect20);
        assert!(!bg.component(1, 1).is_zero());
        assert!(!bg.component(0, 2).is_zero());
        // components sum back and conjugation swaps (p,q)
        assert_eq!(bg.total(), fc);
        assert_eq!(bg.component(0, 2), bg.component(2, 0).conj());
    }

    #[test]
    fn dc_and_ddc_basics() {
        // abelian: everything closed, dc = 0 on everything
        let g = LieAlgebra::abelian(4);
        let j = ComplexStructure::from_pairs(&g, &[(0, 1), (2, 3)]).unwrap();
        let f: Form<Rat> = Form::monomial(4, 0b0011, rat(1));
        assert!(dc(&g, &j, &f).is_zero());
        assert!(ddc(&g, &j, &f).is_zero());

        // Kodaira-Thurston: omega = e^{12} + e^{34} is J-invariant for
        // J e1 = e2, J e3 = e4, and dd^c of any invariant 2-form vanishes
        // on a 4-dim unimodular algebra
        let g = heisenberg_r();
        let j = ComplexStructure::from_pairs(&g, &[(0, 1), (2, 3)]).unwrap();
        let omega: Form<Rat> = Form::monomial(4, 0b0011, rat(1))
            .add(&Form::monomial(4, 0b1100, rat(1)));
        let jw = apply_j_form(&j, &omega);
        assert_eq!(jw, omega, "omega is J-invariant");
        assert!(ddc(&g, &j, &omega).is_zero());
    }

    #[test]
    fn invariant_two_forms_dimension() {
        // For n = 2m, the real (1,1)-forms have dimension m^2
        let g = LieAlgebra::abelian(4);
        let j = ComplexStructure::from_pairs(&g, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(invariant_two_forms(&j).len(), 4);
        let g = LieAlgebra::abelian(6);
        let j = ComplexStructure::from_pairs(&g, &[(0, 1), (2, 3), (4, 5)]).unwrap();
        assert_eq!(invariant_two_forms(&j).len(), 9);
    }
}
