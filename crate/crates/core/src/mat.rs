//! Dense matrices over an exact field: row reduction, kernels, inverses,
//! characteristic and minimal polynomials.
//!
//! Dimensions here stay small (the catalog algebras top out at 28), so
//! plain fraction arithmetic with full pivoting is fast enough and keeps
//! every result exact.

use crate::poly::Poly;
use crate::scalar::{GaussRat, Rat, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct Mat<K: Scalar> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

impl<K: Scalar> Mat<K> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![K::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Mat::scalar(n, K::one())
    }

    /// `c` times the identity.
    pub fn scalar(n: usize, c: K) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[K] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<K> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.neg()).collect() }
    }

    pub fn scale(&self, s: &K) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(s)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch in matrix product");
        let mut out: Mat<K> = Mat::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let t = a.mul(&o[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&t);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = K::zero();
                for (j, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc = acc.add(&self[(i, j)].mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> K {
        assert_eq!(self.rows, self.cols);
        let mut t = K::zero();
        for i in 0..self.rows {
            t = t.add(&self[(i, i)]);
        }
        t
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut acc = Mat::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_nilpotent(&self) -> bool {
        assert_eq!(self.rows, self.cols);
        self.pow(self.rows as u32).is_zero()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv().unwrap();
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].mul(&inv);
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let t = self[(r, j)].mul(&f);
                        self[(i, j)] = self[(i, j)].sub(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, each vector normalized so its first
    /// nonzero entry is 1.
    pub fn kernel(&self) -> Vec<Vec<K>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![K::zero(); self.cols];
            v[free] = K::one();
            for (c, &ps) in pivot_set.iter().enumerate() {
                if let Some(row) = ps {
                    v[c] = r[(row, free)].neg();
                }
            }
            out.push(v);
        }
        out
    }

    /// Solve `self * x = b`; `None` if inconsistent. Returns one solution.
    pub fn solve(&self, b: &[K]) -> Option<Vec<K>> {
        assert_eq!(self.rows, b.len());
        let mut aug = Mat::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let pivots = aug.rref_in_place();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![K::zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = aug[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                K::one()
            } else {
                K::zero()
            }
        });
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some(Mat::from_fn(n, n, |r, c| aug[(r, c + n)].clone()))
    }

    pub fn det(&self) -> K {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = K::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return K::zero();
            };
            if p != c {
                m.swap_rows(c, p);
                det = det.neg();
            }
            det = det.mul(&m[(c, c)]);
            let inv = m[(c, c)].inv().unwrap();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].mul(&inv);
                for j in c..n {
                    let t = m[(c, j)].mul(&f);
                    m[(i, j)] = m[(i, j)].sub(&t);
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(xI - A)` by the Faddeev-LeVerrier
    /// recurrence (exact; division only by integers).
    pub fn char_poly(&self) -> Poly<K> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![K::zero(); n + 1];
        coeffs[n] = K::one();
        let mut m = Mat::<K>::zero(n, n);
        for k in 1..=n {
            // M_k = A (M_{k-1} + c_{n-k+1} I)
            m = self.mul(&m.add(&Mat::scalar(n, coeffs[n - k + 1].clone())));
            let c = m.trace().mul(&K::from_int(k as i64).inv().unwrap()).neg();
            coeffs[n - k] = c;
        }
        Poly::new(coeffs)
    }

    /// Monic minimal polynomial, found as the first linear dependency among
    /// the vectorized powers `I, A, A^2, ...`.
    pub fn min_poly(&self) -> Poly<K> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut powers: Vec<Mat<K>> = vec![Mat::identity(n)];
        loop {
            let k = powers.len();
            // Rows of `sys` are the vectorized powers A^0 .. A^{k-1};
            // check whether A^k lies in their span.
            let next = powers.last().unwrap().mul(self);
            let mut sys = Mat::zero(n * n, k);
            for (j, p) in powers.iter().enumerate() {
                for (idx, v) in p.data.iter().enumerate() {
                    sys[(idx, j)] = v.clone();
                }
            }
            let target: Vec<K> = next.data.clone();
            if let Some(x) = sys.solve(&target) {
                // A^k = sum x_j A^j  =>  min poly = x^k - sum x_j x^j
                let mut cs = x.iter().map(|c| c.neg()).collect::<Vec<_>>();
                cs.push(K::one());
                return Poly::new(cs);
            }
            powers.push(next);
            assert!(powers.len() <= n + 1, "minimal polynomial search overflow");
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<K: Scalar> std::ops::Index<(usize, usize)> for Mat<K> {
    type Output = K;
    fn index(&self, (r, c): (usize, usize)) -> &K {
        &self.data[r * self.cols + c]
    }
}

impl<K: Scalar> std::ops::IndexMut<(usize, usize)> for Mat<K> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut K {
        &mut self.data[r * self.cols + c]
    }
}

/// Embed a rational matrix into the Gaussian rationals.
pub fn complexify_mat(m: &Mat<Rat>) -> Mat<GaussRat> {
    Mat::from_fn(m.rows(), m.cols(), |r, c| GaussRat::from_rat(m[(r, c)].clone()))
}

/// Reduced echelon basis spanning the same row space as `vectors`.
pub fn echelon_basis<K: Scalar>(vectors: &[Vec<K>], ambient: usize) -> Vec<Vec<K>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    assert!(vectors.iter().all(|v| v.len() == ambient));
    let m = Mat::from_rows(vectors.to_vec());
    let (r, pivots) = m.rref();
    (0..pivots.len()).map(|i| r.row(i).to_vec()).collect()
}

/// Does `v` lie in the span of the echelonized rows `basis`?
pub fn in_span<K: Scalar>(basis: &[Vec<K>], v: &[K]) -> bool {
    let mut v = v.to_vec();
    for b in basis {
        let pivot = b.iter().position(|x| !x.is_zero());
        if let Some(p) = pivot {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(b) {
                    *x = x.sub(&f.mul(y));
                }
            }
        }
    }
    v.iter().all(|x| x.is_zero())
}
