//! Exact exterior algebra over the dual of an n-dimensional space.
//!
//! Basis monomials are k-element subsets of `0..n`, encoded as bitmasks
//! (so n <= 64); the wedge sign comes from transposition counting on the
//! merged index sequence. Forms are sparse maps from masks to coefficients
//! with zeros pruned, so structural equality is semantic equality.

use std::collections::BTreeMap;

use crate::mat::Mat;
use crate::scalar::{GaussRat, Rat, Scalar};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("arity mismatch: form of degree {degree} applied to {given} vectors")]
    ArityMismatch { degree: usize, given: usize },
    #[error("expected a degree-1 multivector")]
    NotAVector,
    #[error("index {0} out of range for dimension {1}")]
    IndexOutOfRange(usize, usize),
}

/// Sign of `e^A wedge e^B` relative to the ascending monomial `e^(A|B)`,
/// or `None` when the index sets overlap.
pub fn merge_sign(a: u64, b: u64) -> Option<i32> {
    if a & b != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        inversions += (a >> (j + 1)).count_ones();
        bb &= bb - 1;
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// All k-subsets of `0..dim` as bitmasks, in increasing mask order.
pub fn monomials(dim: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if k > dim {
        return out;
    }
    if k == 0 {
        out.push(0);
        return out;
    }
    // Gosper's hack over dim-bit masks.
    let mut v: u64 = (1 << k) - 1;
    let limit: u64 = if dim == 64 { u64::MAX } else { (1 << dim) - 1 };
    while v <= limit {
        out.push(v);
        let t = v | (v - 1);
        if t == u64::MAX {
            break;
        }
        v = (t + 1) | (((!t & (t + 1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

/// Alternating form on the dual space: an element of degree `degree` in
/// the exterior algebra of dual basis covectors `e^0 .. e^(dim-1)`.
#[derive(Clone, PartialEq, Debug)]
pub struct Form<K: Scalar> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<u64, K>,
}

/// Element of the exterior algebra of the space itself. Same canonical
/// sparse representation as `Form`; degree-1 values are plain vectors.
#[derive(Clone, PartialEq, Debug)]
pub struct Multivector<K: Scalar> {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<u64, K>,
}

impl<K: Scalar> Form<K> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= 64, "dimension above 64 not supported");
        Form { dim, degree, coeffs: BTreeMap::new() }
    }

    /// The constant 1 viewed as a 0-form.
    pub fn one(dim: usize) -> Self {
        let mut f = Form::zero(dim, 0);
        f.coeffs.insert(0, K::one());
        f
    }

    /// Dual basis covector `e^i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut f = Form::zero(dim, 1);
        f.coeffs.insert(1 << i, K::one());
        f
    }

    /// Monomial `c * e^(i1) ^ ... ^ e^(ik)` for an ascending index mask.
    pub fn monomial(dim: usize, mask: u64, c: K) -> Self {
        assert!(dim == 64 || mask < (1u64 << dim));
        let mut f = Form::zero(dim, mask.count_ones() as usize);
        if !c.is_zero() {
            f.coeffs.insert(mask, c);
        }
        f
    }

    /// Monomial from explicit indices, with the sign of sorting them.
    /// Returns the zero form if an index repeats.
    pub fn monomial_from_indices(dim: usize, indices: &[usize], c: K) -> Self {
        let mut mask = 0u64;
        let mut sign = 1i32;
        for &i in indices {
            assert!(i < dim);
            let bit = 1u64 << i;
            if mask & bit != 0 {
                return Form::zero(dim, indices.len());
            }
            // count the already-placed indices larger than i
            let inversions = (mask >> (i + 1)).count_ones();
            if inversions % 2 == 1 {
                sign = -sign;
            }
            mask |= bit;
        }
        let coeff = if sign == 1 { c } else { c.neg() };
        Form::monomial(dim, mask, coeff)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, mask: u64) -> K {
        self.coeffs.get(&mask).cloned().unwrap_or_else(K::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &K)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn insert(&mut self, mask: u64, c: K) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&mask) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    self.coeffs.remove(&mask);
                }
            }
            None => {
                self.coeffs.insert(mask, c);
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        assert_eq!(self.degree, o.degree, "cannot add forms of different degree");
        let mut out = self.clone();
        for (m, c) in &o.coeffs {
            out.insert(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &K) -> Self {
        if s.is_zero() {
            return Form::zero(self.dim, self.degree);
        }
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, c.mul(s))).collect(),
        }
    }

    /// Exterior product. Degrees add; the result is the zero form in degree
    /// `deg a + deg b` when that exceeds the dimension.
    pub fn wedge(&self, o: &Self) -> Result<Self, ExteriorError> {
        if self.dim != o.dim {
            return Err(ExteriorError::DimensionMismatch(self.dim, o.dim));
        }
        let deg = self.degree + o.degree;
        let mut out = Form::zero(self.dim, deg);
        if deg > self.dim {
            return Ok(out);
        }
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &o.coeffs {
                if let Some(s) = merge_sign(*ma, *mb) {
                    let mut c = ca.mul(cb);
                    if s < 0 {
                        c = c.neg();
                    }
                    out.insert(ma | mb, c);
                }
            }
        }
        Ok(out)
    }

    /// Evaluate on degree-1 multivectors; multilinear and alternating.
    pub fn evaluate(&self, vectors: &[&Multivector<K>]) -> Result<K, ExteriorError> {
        if vectors.len() != self.degree {
            return Err(ExteriorError::ArityMismatch { degree: self.degree, given: vectors.len() });
        }
        for v in vectors {
            if v.degree != 1 {
                return Err(ExteriorError::NotAVector);
            }
            if v.dim != self.dim {
                return Err(ExteriorError::DimensionMismatch(self.dim, v.dim));
            }
        }
        if self.degree == 0 {
            return Ok(self.coeff(0));
        }
        let coords: Vec<Vec<K>> = vectors.iter().map(|v| v.coords()).collect();
        let k = self.degree;
        let mut acc = K::zero();
        for (mask, c) in &self.coeffs {
            // det of the k x k matrix [v_t(i_s)]
            let mut idx = Vec::with_capacity(k);
            let mut m = *mask;
            while m != 0 {
                idx.push(m.trailing_zeros() as usize);
                m &= m - 1;
            }
            let d = Mat::from_fn(k, k, |s, t| coords[t][idx[s]].clone()).det();
            acc = acc.add(&c.mul(&d));
        }
        Ok(acc)
    }

    /// Coefficients against an explicit monomial list (for kernel builds).
    pub fn coeff_vector(&self, basis: &[u64]) -> Vec<K> {
        basis.iter().map(|m| self.coeff(*m)).collect()
    }

    pub fn from_coeff_vector(dim: usize, degree: usize, basis: &[u64], v: &[K]) -> Self {
        let mut f = Form::zero(dim, degree);
        for (m, c) in basis.iter().zip(v) {
            f.insert(*m, c.clone());
        }
        f
    }

    /// Apply conjugation to every coefficient.
    pub fn conj(&self) -> Self {
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }
}

impl Form<Rat> {
    /// Extension of scalars to the Gaussian rationals.
    pub fn complexify(&self) -> Form<GaussRat> {
        Form {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, GaussRat::from_rat(c.clone()))).collect(),
        }
    }
}

impl Form<GaussRat> {
    pub fn real_part(&self) -> Form<Rat> {
        let mut f = Form::zero(self.dim, self.degree);
        for (m, c) in &self.coeffs {
            f.insert(*m, c.re.clone());
        }
        f
    }

    pub fn imag_part(&self) -> Form<Rat> {
        let mut f = Form::zero(self.dim, self.degree);
        for (m, c) in &self.coeffs {
            f.insert(*m, c.im.clone());
        }
        f
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.values().all(|c| c.is_real())
    }

    pub fn scale_i(&self) -> Form<GaussRat> {
        self.scale(&GaussRat::i())
    }
}

impl<K: Scalar> Multivector<K> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= 64);
        Multivector { dim, degree, coeffs: BTreeMap::new() }
    }

    /// Basis vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut v = Multivector::zero(dim, 1);
        v.coeffs.insert(1 << i, K::one());
        v
    }

    /// Degree-1 multivector from coordinates.
    pub fn from_coords(coords: &[K]) -> Self {
        let dim = coords.len();
        let mut v = Multivector::zero(dim, 1);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                v.coeffs.insert(1 << i, c.clone());
            }
        }
        v
    }

    /// Coordinates of a degree-1 multivector.
    pub fn coords(&self) -> Vec<K> {
        assert_eq!(self.degree, 1);
        let mut out = vec![K::zero(); self.dim];
        for (m, c) in &self.coeffs {
            out[m.trailing_zeros() as usize] = c.clone();
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.dim, o.dim);
        assert_eq!(self.degree, o.degree);
        let mut out = self.clone();
        for (m, c) in &o.coeffs {
            let cur = out.coeffs.get(m).cloned().unwrap_or_else(K::zero);
            let s = cur.add(c);
            if s.is_zero() {
                out.coeffs.remove(m);
            } else {
                out.coeffs.insert(*m, s);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        Multivector {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &K) -> Self {
        if s.is_zero() {
            return Multivector::zero(self.dim, self.degree);
        }
        Multivector {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, c.mul(s))).collect(),
        }
    }
}

impl Multivector<Rat> {
    pub fn complexify(&self) -> Multivector<GaussRat> {
        Multivector {
            dim: self.dim,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, GaussRat::from_rat(c.clone()))).collect(),
        }
    }
}

impl<K: Scalar> std::fmt::Display for Form<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mask, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut idx = Vec::new();
            let mut m = *mask;
            while m != 0 {
                idx.push((m.trailing_zeros() + 1).to_string());
                m &= m - 1;
            }
            if idx.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})e^{{{}}}", idx.join(","))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    type RForm = Form<Rat>;
    type RVec = Multivector<Rat>;

    fn e(dim: usize, i: usize) -> RForm {
        Form::basis(dim, i)
    }

    #[test]
    fn wedge_basics() {
        let n = 4;
        let e1 = e(n, 0);
        let e2 = e(n, 1);
        let e3 = e(n, 2);
        // repeated factor
        assert!(e1.wedge(&e1).unwrap().is_zero());
        // antisymmetry
        assert_eq!(e1.wedge(&e2).unwrap(), e2.wedge(&e1).unwrap().neg());
        // bilinearity
        let lhs = e1.add(&e2).wedge(&e3).unwrap();
        let rhs = e1.wedge(&e3).unwrap().add(&e2.wedge(&e3).unwrap());
        assert_eq!(lhs, rhs);
        // dimension mismatch is an error
        assert!(e(3, 0).wedge(&e(4, 0)).is_err());
    }

    #[test]
    fn wedge_overflow_degree_is_zero() {
        let n = 2;
        let w = e(n, 0).wedge(&e(n, 1)).unwrap();
        let z = w.wedge(&e(n, 0)).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.degree(), 3);
    }

    #[test]
    fn evaluate_dual_pairing() {
        let n = 3;
        let w = e(n, 0).wedge(&e(n, 1)).unwrap();
        let v1 = RVec::basis(n, 0);
        let v2 = RVec::basis(n, 1);
        assert_eq!(w.evaluate(&[&v1, &v2]).unwrap(), rat(1));
        assert_eq!(w.evaluate(&[&v2, &v1]).unwrap(), rat(-1));
        assert_eq!(w.evaluate(&[&v1, &v1]).unwrap(), rat(0));
        assert!(w.evaluate(&[&v1]).is_err());
    }

    #[test]
    fn complexify_embeds() {
        let n = 3;
        let f = e(n, 0).wedge(&e(n, 1)).unwrap().scale(&crate::scalar::ratio(1, 2));
        let fc = f.complexify();
        assert!(fc.is_real());
        assert_eq!(fc.conj(), fc);
        assert_eq!(fc.real_part(), f);
        assert!(fc.imag_part().is_zero());
    }

    // Independent oracle: the wedge of two multilinear alternating forms,
    // by the full shuffle-sum definition.
    fn shuffle_wedge_eval(a: &RForm, b: &RForm, vs: &[&RVec]) -> Rat {
        let k = a.degree();
        let l = b.degree();
        assert_eq!(vs.len(), k + l);
        let mut total = rat(0);
        let idx: Vec<usize> = (0..k + l).collect();
        // iterate over k-subsets of positions
        for mask in monomials(k + l, k) {
            let (mut left, mut right) = (Vec::new(), Vec::new());
            for &i in &idx {
                if mask & (1 << i) != 0 {
                    left.push(i);
                } else {
                    right.push(i);
                }
            }
            // permutation sign of (left, right)
            let mut sign = 1i64;
            let seq: Vec<usize> = left.iter().chain(right.iter()).cloned().collect();
            for i in 0..seq.len() {
                for j in i + 1..seq.len() {
                    if seq[i] > seq[j] {
                        sign = -sign;
                    }
                }
            }
            let av: Vec<&RVec> = left.iter().map(|&i| vs[i]).collect();
            let bv: Vec<&RVec> = right.iter().map(|&i| vs[i]).collect();
            let term = a.evaluate(&av).unwrap().mul(&b.evaluate(&bv).unwrap());
            total = total.add(&term.mul(&rat(sign)));
        }
        total
    }

    #[test]
    fn wedge_matches_shuffle_sum() {
        let n = 4;
        // a = e^1 ^ e^2 + 2 e^3 ^ e^4, b = e^1 + 3 e^3
        let a = e(n, 0)
            .wedge(&e(n, 1))
            .unwrap()
            .add(&e(n, 2).wedge(&e(n, 3)).unwrap().scale(&rat(2)));
        let b = e(n, 0).add(&e(n, 2).scale(&rat(3)));
        let w = a.wedge(&b).unwrap();
        let vs: Vec<RVec> = vec![
            RVec::from_coords(&[rat(1), rat(2), rat(0), rat(-1)]),
            RVec::from_coords(&[rat(0), rat(1), rat(1), rat(1)]),
            RVec::from_coords(&[rat(2), rat(0), rat(3), rat(0)]),
        ];
        let refs: Vec<&RVec> = vs.iter().collect();
        assert_eq!(w.evaluate(&refs).unwrap(), shuffle_wedge_eval(&a, &b, &refs));
    }

    #[test]
    fn monomial_from_indices_signs() {
        let n = 3;
        let f = Form::monomial_from_indices(n, &[2, 0], rat(1));
        let g = Form::monomial_from_indices(n, &[0, 2], rat(-1));
        assert_eq!(f, g);
        assert!(Form::<Rat>::monomial_from_indices(n, &[1, 1], rat(5)).is_zero());
    }
}
