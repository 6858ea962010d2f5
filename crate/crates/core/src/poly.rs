//! Dense univariate polynomials over an exact field.
//!
//! Supports the Euclidean toolkit (division, gcd, Bezout coefficients),
//! squarefree parts, evaluation at scalars and matrices, and Sturm-sequence
//! root counting over the rationals. Everything here is exact.

use crate::mat::Mat;
use crate::scalar::{Rat, Scalar};
use num_traits::{One, Signed, Zero};

/// Polynomial `c[0] + c[1] x + ... + c[d] x^d` with no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<K: Scalar> {
    coeffs: Vec<K>,
}

impl<K: Scalar> Poly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![K::one()] }
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![K::zero(), K::one()] }
    }

    pub fn constant(c: K) -> Self {
        Poly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `deg 0 = None`.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> K {
        self.coeffs.get(k).cloned().unwrap_or_else(K::zero)
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).add(&o.coeff(k)));
        }
        Poly::new(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).sub(&o.coeff(k)));
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Self {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn scale(&self, s: &K) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }

    /// Euclidean division. Panics on zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dl = d.leading().expect("division by zero polynomial");
        let dinv = dl.inv().expect("leading coefficient not invertible");
        let dd = d.degree().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Poly::zero(), self.clone());
        }
        let mut quo = vec![K::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k].mul(&dinv);
            if c.is_zero() {
                continue;
            }
            quo[k - dd] = c.clone();
            for j in 0..=dd {
                let t = d.coeff(j).mul(&c);
                rem[k - dd + j] = rem[k - dd + j].sub(&t);
            }
        }
        (Poly::new(quo), Poly::new(rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient not invertible")),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: returns `(g, u, v)` monic with `u*self + v*o = g`.
    pub fn egcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut u0, mut u1) = (Poly::one(), Poly::zero());
        let (mut v0, mut v1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let u = u0.sub(&q.mul(&u1));
            let v = v0.sub(&q.mul(&v1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
            v0 = v1;
            v1 = v;
        }
        if let Some(l) = r0.leading() {
            let li = l.inv().unwrap();
            (r0.scale(&li), u0.scale(&li), v0.scale(&li))
        } else {
            (Poly::zero(), Poly::zero(), Poly::zero())
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.mul(&K::from_int(k as i64)));
        }
        Poly::new(out)
    }

    /// `self / gcd(self, self')`, monic: same roots, all simple.
    pub fn squarefree_part(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.monic();
        }
        self.divrem(&g).0.monic()
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Evaluate at a square matrix by Horner's rule.
    pub fn eval_matrix(&self, m: &Mat<K>) -> Mat<K> {
        assert_eq!(m.rows(), m.cols());
        let n = m.rows();
        let mut acc = Mat::zero(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&Mat::scalar(n, c.clone()));
        }
        acc
    }
}

// Sign bookkeeping for Sturm sequences over the rationals.
fn sign(r: &Rat) -> i32 {
    if Zero::is_zero(r) {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Where to evaluate a Sturm chain.
#[derive(Clone, Copy, Debug)]
pub enum Endpoint<'a> {
    NegInf,
    PosInf,
    At(&'a Rat),
}

impl Poly<Rat> {
    /// Sturm chain of `self` (which should be squarefree for root counting).
    pub fn sturm_chain(&self) -> Vec<Poly<Rat>> {
        let mut chain = vec![self.clone(), self.derivative()];
        loop {
            let k = chain.len();
            if chain[k - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[k - 2].rem(&chain[k - 1]).neg();
            if r.is_zero() {
                break;
            }
            chain.push(r);
        }
        chain
    }

    fn sign_at(&self, e: Endpoint) -> i32 {
        match e {
            Endpoint::At(x) => sign(&self.eval(x)),
            Endpoint::PosInf => self.leading().map_or(0, sign),
            Endpoint::NegInf => {
                let d = match self.degree() {
                    None => return 0,
                    Some(d) => d,
                };
                let s = self.leading().map_or(0, sign);
                if d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }

    fn sign_changes(chain: &[Poly<Rat>], e: Endpoint) -> usize {
        let mut count = 0;
        let mut last = 0;
        for p in chain {
            let s = p.sign_at(e);
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    /// Number of distinct real roots in the open interval `(a, b)`.
    ///
    /// The count is taken on the squarefree part, so multiplicities are
    /// ignored. Roots landing exactly on a finite endpoint are divided out
    /// first, which keeps the half-open Sturm count unambiguous.
    pub fn count_real_roots(&self, a: Endpoint, b: Endpoint) -> usize {
        let mut sf = self.squarefree_part();
        for e in [a, b] {
            if let Endpoint::At(x) = e {
                while sf.degree().unwrap_or(0) > 0 && Zero::is_zero(&sf.eval(x)) {
                    let lin = Poly::new(vec![-x.clone(), <Rat as One>::one()]);
                    sf = sf.divrem(&lin).0;
                }
            }
        }
        if sf.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let chain = sf.sturm_chain();
        let va = Poly::sign_changes(&chain, a);
        let vb = Poly::sign_changes(&chain, b);
        va.saturating_sub(vb)
    }

    /// Count of distinct real roots on the whole line.
    pub fn count_real_roots_total(&self) -> usize {
        self.count_real_roots(Endpoint::NegInf, Endpoint::PosInf)
    }

    /// True iff every complex root of `self` is real.
    pub fn all_roots_real(&self) -> bool {
        let sf = self.squarefree_part();
        match sf.degree() {
            None | Some(0) => true,
            Some(d) => sf.count_real_roots_total() == d,
        }
    }

    /// True iff every root of `self` is purely imaginary (including zero).
    ///
    /// Writes `p = x^m g(x)` with `g(0) != 0`; all roots are on the imaginary
    /// axis iff `g` contains only even powers and `g(x) = r(x^2)` has all
    /// roots real and negative.
    pub fn all_roots_purely_imaginary(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        // Strip the root at zero.
        let mut c = self.coeffs.clone();
        let first_nonzero = c.iter().position(|x| !Zero::is_zero(x)).unwrap();
        c.drain(..first_nonzero);
        let g = Poly::new(c);
        if g.degree() == Some(0) {
            return true;
        }
        // Odd coefficients must vanish.
        for (k, ck) in g.coeffs.iter().enumerate() {
            if k % 2 == 1 && !Zero::is_zero(ck) {
                return false;
            }
        }
        let r = Poly::new(g.coeffs.iter().step_by(2).cloned().collect());
        let sf = r.squarefree_part();
        let d = match sf.degree() {
            None | Some(0) => return true,
            Some(d) => d,
        };
        // All roots of r real and strictly negative.
        let zero = <Rat as Zero>::zero();
        sf.count_real_roots(Endpoint::NegInf, Endpoint::At(&zero)) == d
    }
}
