//! Jordan-Chevalley decompositions, weight-space decompositions of
//! nilpotent-image representations, type-(I) tests, and the constructive
//! obstruction-character search.
//!
//! The Jordan-Chevalley split is computed exactly over the rationals by
//! Newton iteration against the squarefree part of the characteristic
//! polynomial — no eigenvalues are extracted. Weight spaces are computed in
//! two regimes: exactly over the Gaussian rationals whenever the relevant
//! minimal polynomials split over Q(i) (they do for every catalog algebra),
//! and in clustered complex floating point otherwise. Downstream certificates
//! only ever consume the exact regime.

use crate::liecore::{LieAlgebra, Subspace};
use crate::mat::{complexify_mat, Mat};
use crate::poly::Poly;
use crate::scalar::{rationalize, GaussRat, Rat, Scalar};
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WeightsError {
    #[error("the action is not a nilpotent family: semisimple parts fail to commute with the action")]
    NotNilpotentImage,
    #[error("the representation is of type (I): every character is purely imaginary")]
    TypeIInput,
    #[error("character chain broke before satisfying the bracket condition")]
    CharacterChainBroken,
}

/// Exact commuting semisimple + nilpotent split `M = S + N`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanPair {
    pub s: Mat<Rat>,
    pub n: Mat<Rat>,
}

/// Jordan-Chevalley decomposition over the rationals.
///
/// Newton iteration `S <- S - f(S) v(S)` against the squarefree part `f` of
/// the characteristic polynomial, where `u f + v f' = 1`. Converges in at
/// most `ceil(log2 dim)` steps; every step is exact.
pub fn jordan_chevalley(m: &Mat<Rat>) -> JordanPair {
    assert_eq!(m.rows(), m.cols());
    let dim = m.rows();
    if dim == 0 {
        return JordanPair { s: m.clone(), n: m.clone() };
    }
    let f = m.char_poly().squarefree_part();
    let mut s = m.clone();
    let mut fs = f.eval_matrix(&s);
    if fs.is_zero() {
        let n = m.sub(&s);
        return JordanPair { s, n };
    }
    let (g, _u, v) = f.egcd(&f.derivative());
    assert_eq!(g.degree(), Some(0), "squarefree part not coprime with derivative");
    let mut steps = 0usize;
    while !fs.is_zero() {
        let correction = fs.mul(&v.eval_matrix(&s));
        s = s.sub(&correction);
        fs = f.eval_matrix(&s);
        steps += 1;
        assert!(steps <= dim.ilog2() as usize + 3, "Jordan-Chevalley iteration overflow");
    }
    JordanPair { s: s.clone(), n: m.sub(&s) }
}

impl JordanPair {
    /// Re-verify the defining invariants exactly.
    pub fn verify(&self, m: &Mat<Rat>) -> bool {
        if self.s.add(&self.n) != *m {
            return false;
        }
        if !self.s.commutator(&self.n).is_zero() {
            return false;
        }
        if !self.n.is_nilpotent() {
            return false;
        }
        let mp = self.s.min_poly();
        mp.gcd(&mp.derivative()).degree() == Some(0)
    }
}

// ---------------------------------------------------------------------------
// Complex floating point (fallback regime only)
// ---------------------------------------------------------------------------

/// Minimal complex double type for the numeric fallback.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    pub fn zero() -> Self {
        C64 { re: 0.0, im: 0.0 }
    }
    pub fn one() -> Self {
        C64 { re: 1.0, im: 0.0 }
    }
    pub fn add(self, o: Self) -> Self {
        C64::new(self.re + o.re, self.im + o.im)
    }
    pub fn sub(self, o: Self) -> Self {
        C64::new(self.re - o.re, self.im - o.im)
    }
    pub fn mul(self, o: Self) -> Self {
        C64::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
    pub fn div(self, o: Self) -> Self {
        let d = o.re * o.re + o.im * o.im;
        C64::new((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)
    }
    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Durand-Kerner root finding for a monic polynomial given by complex
/// coefficients `c[0] + c[1] x + ... + x^d`.
pub fn durand_kerner(coeffs: &[C64]) -> Vec<C64> {
    let d = coeffs.len();
    if d == 0 {
        return vec![];
    }
    // Horner with the implicit leading coefficient 1.
    let eval = |x: C64| {
        let mut val = C64::one();
        for k in (0..d).rev() {
            val = val.mul(x).add(coeffs[k]);
        }
        val
    };
    let mut roots: Vec<C64> = (0..d)
        .map(|k| {
            // standard spiral initialization
            let mut p = C64::one();
            let seed = C64::new(0.4, 0.9);
            for _ in 0..=k {
                p = p.mul(seed);
            }
            p
        })
        .collect();
    for _ in 0..500 {
        let mut max_delta: f64 = 0.0;
        for i in 0..d {
            let mut denom = C64::one();
            for j in 0..d {
                if i != j {
                    denom = denom.mul(roots[i].sub(roots[j]));
                }
            }
            if denom.abs() < 1e-300 {
                continue;
            }
            let delta = eval(roots[i]).div(denom);
            roots[i] = roots[i].sub(delta);
            max_delta = max_delta.max(delta.abs());
        }
        if max_delta < 1e-13 {
            break;
        }
    }
    roots
}

// ---------------------------------------------------------------------------
// Exact root extraction over Q(i)
// ---------------------------------------------------------------------------

/// Convergents of the continued fraction of `x`, smallest denominator first.
fn convergents(x: f64, max_den: u64) -> Vec<Rat> {
    let mut out = Vec::new();
    let mut den = 1u64;
    while den <= max_den {
        if let Some(r) = rationalize(x, den) {
            if out.last() != Some(&r) {
                out.push(r);
            }
        }
        den = den.saturating_mul(8);
    }
    out
}

/// All roots of a squarefree polynomial over Q(i), or `None` if it does not
/// split. Roots are guessed numerically and verified exactly; the polynomial
/// is deflated after each verified root.
pub fn roots_over_gauss(p: &Poly<GaussRat>) -> Option<Vec<GaussRat>> {
    let d = match p.degree() {
        None | Some(0) => return Some(vec![]),
        Some(d) => d,
    };
    let monic = p.monic();
    let coeffs: Vec<C64> = (0..d)
        .map(|k| {
            let (re, im) = monic.coeff(k).approx();
            C64::new(re, im)
        })
        .collect();
    let approx_roots = durand_kerner(&coeffs);
    let mut remaining = monic.clone();
    let mut found = Vec::new();
    'outer: for r in approx_roots {
        if remaining.degree() == Some(0) {
            break;
        }
        // Ring-search over convergent pairs, cheapest denominators first.
        let res = convergents(r.re, 1 << 24);
        let ims = convergents(r.im, 1 << 24);
        let kmax = res.len().max(ims.len());
        for k in 0..kmax {
            for (i, re_c) in res.iter().enumerate().take(k + 1) {
                for (j, im_c) in ims.iter().enumerate().take(k + 1) {
                    if i.max(j) != k {
                        continue;
                    }
                    let cand = GaussRat::new(re_c.clone(), im_c.clone());
                    if remaining.eval(&cand).is_zero() {
                        let lin = Poly::new(vec![cand.neg(), GaussRat::one()]);
                        remaining = remaining.divrem(&lin).0;
                        found.push(cand);
                        continue 'outer;
                    }
                }
            }
        }
        // this root did not rationalize: polynomial does not split over Q(i)
        return None;
    }
    if found.len() == d {
        Some(found)
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// Characters and weight decompositions
// ---------------------------------------------------------------------------

/// Values of a character on the basis of the acting space, exact when the
/// decomposition ran over the Gaussian rationals.
#[derive(Clone, Debug, PartialEq)]
pub enum CharValues {
    Exact(Vec<GaussRat>),
    Approx(Vec<(f64, f64)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub values: CharValues,
}

impl Character {
    pub fn len(&self) -> usize {
        match &self.values {
            CharValues::Exact(v) => v.len(),
            CharValues::Approx(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, CharValues::Exact(_))
    }

    pub fn approx(&self) -> Vec<(f64, f64)> {
        match &self.values {
            CharValues::Exact(v) => v.iter().map(|g| g.to_f64()).collect(),
            CharValues::Approx(v) => v.clone(),
        }
    }

    /// Does the real part of the character vanish identically?
    pub fn real_part_zero(&self, tol: f64) -> bool {
        match &self.values {
            CharValues::Exact(v) => v.iter().all(|g| Zero::is_zero(&g.re)),
            CharValues::Approx(v) => v.iter().all(|(re, _)| re.abs() <= tol),
        }
    }

    pub fn conj(&self) -> Character {
        Character {
            values: match &self.values {
                CharValues::Exact(v) => CharValues::Exact(v.iter().map(GaussRat::conj).collect()),
                CharValues::Approx(v) => CharValues::Approx(v.iter().map(|(r, i)| (*r, -*i)).collect()),
            },
        }
    }

    pub fn add(&self, o: &Character) -> Character {
        Character {
            values: match (&self.values, &o.values) {
                (CharValues::Exact(a), CharValues::Exact(b)) => {
                    CharValues::Exact(a.iter().zip(b).map(|(x, y)| x.add(y)).collect())
                }
                (a, b) => {
                    let (a, b) = (
                        match a {
                            CharValues::Exact(v) => v.iter().map(|g| g.to_f64()).collect::<Vec<_>>(),
                            CharValues::Approx(v) => v.clone(),
                        },
                        match b {
                            CharValues::Exact(v) => v.iter().map(|g| g.to_f64()).collect::<Vec<_>>(),
                            CharValues::Approx(v) => v.clone(),
                        },
                    );
                    CharValues::Approx(a.iter().zip(&b).map(|((r1, i1), (r2, i2))| (r1 + r2, i1 + i2)).collect())
                }
            },
        }
    }

    pub fn eq_within(&self, o: &Character, tol: f64) -> bool {
        match (&self.values, &o.values) {
            (CharValues::Exact(a), CharValues::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.approx(), o.approx());
                a.len() == b.len()
                    && a.iter()
                        .zip(&b)
                        .all(|((r1, i1), (r2, i2))| (r1 - r2).abs() <= tol && (i1 - i2).abs() <= tol)
            }
        }
    }

    /// Is the character real-valued (fixed by conjugation)?
    pub fn is_real(&self, tol: f64) -> bool {
        match &self.values {
            CharValues::Exact(v) => v.iter().all(|g| Zero::is_zero(&g.im)),
            CharValues::Approx(v) => v.iter().all(|(_, im)| im.abs() <= tol),
        }
    }

    /// Deterministic ordering key: componentwise (|Re|, |Im|).
    fn tiebreak_key(&self) -> Vec<(Rat, Rat)> {
        match &self.values {
            CharValues::Exact(v) => v.iter().map(|g| (g.re.abs(), g.im.abs())).collect(),
            CharValues::Approx(v) => v
                .iter()
                .map(|(r, i)| {
                    (
                        rationalize(r.abs(), 1 << 30).unwrap_or_else(|| <Rat as Zero>::zero()),
                        rationalize(i.abs(), 1 << 30).unwrap_or_else(|| <Rat as Zero>::zero()),
                    )
                })
                .collect(),
        }
    }
}

/// Basis of a weight space; exact vectors when the regime is exact.
#[derive(Clone, Debug)]
pub enum WeightBasis {
    Exact(Vec<Vec<GaussRat>>),
    Approx(Vec<Vec<(f64, f64)>>),
}

impl WeightBasis {
    pub fn dim(&self) -> usize {
        match self {
            WeightBasis::Exact(v) => v.len(),
            WeightBasis::Approx(v) => v.len(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightSpace {
    pub character: Character,
    pub basis: WeightBasis,
    /// A basis ordered along the common-kernel flag, so that every action
    /// matrix restricted to the space is upper triangular with the character
    /// value on the diagonal. Exact regime only.
    pub triangular_basis: Option<Vec<Vec<GaussRat>>>,
}

#[derive(Clone, Debug)]
pub struct WeightDecomposition {
    /// Dimension of the acting space (number of generator matrices).
    pub acting_dim: usize,
    pub ambient_dim: usize,
    pub exact: bool,
    pub spaces: Vec<WeightSpace>,
}

impl WeightDecomposition {
    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(|s| s.basis.dim()).sum()
    }

    /// Index of the space carrying the given character, if present.
    pub fn find_character(&self, c: &Character, tol: f64) -> Option<usize> {
        self.spaces.iter().position(|s| s.character.eq_within(c, tol))
    }
}

fn gauss_cmp(a: &GaussRat, b: &GaussRat) -> std::cmp::Ordering {
    a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))
}

/// Simultaneous eigenspace decomposition of the commuting semisimple parts
/// of `mats`: the weight decomposition of a nilpotent-image action.
///
/// Validates the nilpotent-image hypothesis exactly: the semisimple part of
/// every generator must commute with every generator. Splits exactly over
/// Q(i) when possible, otherwise falls back to clustered complex floating
/// point with tolerance `tol`.
pub fn weight_decomposition(mats: &[Mat<Rat>], tol: f64) -> Result<WeightDecomposition, WeightsError> {
    assert!(!mats.is_empty(), "empty action");
    let n = mats[0].rows();
    for m in mats {
        assert_eq!(m.rows(), n);
        assert_eq!(m.cols(), n);
    }
    let semis: Vec<Mat<Rat>> = mats.iter().map(|m| jordan_chevalley(m).s).collect();
    for s in &semis {
        for m in mats {
            if !s.commutator(m).is_zero() {
                return Err(WeightsError::NotNilpotentImage);
            }
        }
    }
    if let Some(dec) = try_exact_decomposition(mats, &semis) {
        return Ok(dec);
    }
    Ok(approx_decomposition(mats, &semis, tol))
}

fn try_exact_decomposition(mats: &[Mat<Rat>], semis: &[Mat<Rat>]) -> Option<WeightDecomposition> {
    let n = mats[0].rows();
    let full: Vec<Vec<GaussRat>> = (0..n)
        .map(|i| {
            let mut v = vec![GaussRat::zero(); n];
            v[i] = GaussRat::one();
            v
        })
        .collect();
    // (character prefix, subspace basis)
    let mut pieces: Vec<(Vec<GaussRat>, Vec<Vec<GaussRat>>)> = vec![(vec![], full)];
    for s in semis {
        let sc = complexify_mat(s);
        let mut next = Vec::new();
        for (prefix, basis) in pieces {
            let r = restrict(&sc, &basis)?;
            let mp = r.min_poly();
            let roots = roots_over_gauss(&mp)?;
            let mut roots = roots;
            roots.sort_by(gauss_cmp);
            let mut split_dim = 0;
            for root in roots {
                let shifted = r.sub(&Mat::scalar(r.rows(), root.clone()));
                let ker = shifted.kernel();
                if ker.is_empty() {
                    continue;
                }
                split_dim += ker.len();
                let vectors: Vec<Vec<GaussRat>> = ker
                    .iter()
                    .map(|coeffs| combine(&basis, coeffs, n))
                    .collect();
                let mut pfx = prefix.clone();
                pfx.push(root);
                next.push((pfx, crate::mat::echelon_basis(&vectors, n)));
            }
            if split_dim != basis.len() {
                // semisimple part failed to split on this piece
                return None;
            }
        }
        pieces = next;
    }
    let mut spaces = Vec::new();
    for (char_vals, basis) in pieces {
        let character = Character { values: CharValues::Exact(char_vals.clone()) };
        let triangular = triangular_flag_basis(mats, &char_vals, &basis, n);
        spaces.push(WeightSpace {
            character,
            basis: WeightBasis::Exact(basis),
            triangular_basis: triangular,
        });
    }
    let dec = WeightDecomposition {
        acting_dim: mats.len(),
        ambient_dim: n,
        exact: true,
        spaces,
    };
    debug_assert_eq!(dec.total_dim(), n);
    Some(dec)
}

/// Matrix of `m` restricted to the span of `basis`, in `basis` coordinates.
/// `None` if the span is not invariant.
fn restrict(m: &Mat<GaussRat>, basis: &[Vec<GaussRat>]) -> Option<Mat<GaussRat>> {
    let k = basis.len();
    let n = basis.first().map_or(0, |v| v.len());
    let mut bmat = Mat::zero(n, k);
    for (j, v) in basis.iter().enumerate() {
        for i in 0..n {
            bmat[(i, j)] = v[i].clone();
        }
    }
    let mut out = Mat::zero(k, k);
    for (j, v) in basis.iter().enumerate() {
        let img = m.mul_vec(v);
        let coords = bmat.solve(&img)?;
        for i in 0..k {
            out[(i, j)] = coords[i].clone();
        }
    }
    Some(out)
}

fn combine(basis: &[Vec<GaussRat>], coeffs: &[GaussRat], n: usize) -> Vec<GaussRat> {
    let mut v = vec![GaussRat::zero(); n];
    for (c, b) in coeffs.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi = vi.add(&c.mul(bi));
        }
    }
    v
}

/// Order a weight-space basis along the ascending common-kernel flag of the
/// shifted generators, so every generator acts upper-triangularly.
fn triangular_flag_basis(
    mats: &[Mat<Rat>],
    char_vals: &[GaussRat],
    basis: &[Vec<GaussRat>],
    ambient: usize,
) -> Option<Vec<Vec<GaussRat>>> {
    let k = basis.len();
    if k == 0 {
        return Some(vec![]);
    }
    // Restrict the shifted operators to the weight space.
    let mut shifted = Vec::new();
    for (m, alpha) in mats.iter().zip(char_vals) {
        let mc = complexify_mat(m).sub(&Mat::scalar(ambient, alpha.clone()));
        shifted.push(restrict(&mc, basis)?);
    }
    // Flag: U_1 = common kernel, U_{j+1} = preimage of U_j.
    let mut flag: Vec<Vec<Vec<GaussRat>>> = Vec::new(); // bases in restricted coords
    let mut current: Vec<Vec<GaussRat>> = Vec::new();
    for _ in 0..k + 1 {
        // common solution of T_i x in span(current)
        let cur_mat = if current.is_empty() {
            None
        } else {
            let mut b = Mat::zero(k, current.len());
            for (j, v) in current.iter().enumerate() {
                for i in 0..k {
                    b[(i, j)] = v[i].clone();
                }
            }
            Some(b)
        };
        // Solve stacked condition: for each generator, T x - B y_g = 0.
        let g = shifted.len();
        let cdim = current.len();
        let mut sys = Mat::zero(g * k, k + g * cdim);
        for (gi, t) in shifted.iter().enumerate() {
            for r in 0..k {
                for c in 0..k {
                    sys[(gi * k + r, c)] = t[(r, c)].clone();
                }
                if let Some(b) = &cur_mat {
                    for c in 0..cdim {
                        sys[(gi * k + r, k + gi * cdim + c)] = b[(r, c)].neg();
                    }
                }
            }
        }
        let ker = sys.kernel();
        let mut vectors: Vec<Vec<GaussRat>> = ker.into_iter().map(|v| v[..k].to_vec()).collect();
        vectors.retain(|v| v.iter().any(|x| !x.is_zero()));
        let next = crate::mat::echelon_basis(&vectors, k);
        if next.len() == current.len() {
            break;
        }
        flag.push(next.clone());
        current = next;
        if current.len() == k {
            break;
        }
    }
    if current.len() != k {
        return None;
    }
    // Assemble an adapted basis: vectors of U_1, then completions.
    let mut adapted: Vec<Vec<GaussRat>> = Vec::new();
    for layer in &flag {
        for v in layer {
            if !in_span_cx(&adapted, v) {
                adapted.push(v.clone());
            }
        }
    }
    // Map back to ambient coordinates.
    Some(adapted.iter().map(|c| combine(basis, c, ambient)).collect())
}

fn in_span_cx(basis: &[Vec<GaussRat>], v: &[GaussRat]) -> bool {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let b = crate::mat::echelon_basis(basis, v.len());
    crate::mat::in_span(&b, v)
}

fn approx_decomposition(mats: &[Mat<Rat>], semis: &[Mat<Rat>], tol: f64) -> WeightDecomposition {
    let n = mats[0].rows();
    // Generic combination separates the joint eigenspaces with probability 1;
    // fixed weights keep the run deterministic.
    let mut combo = Mat::<Rat>::zero(n, n);
    for (idx, s) in semis.iter().enumerate() {
        let w = crate::scalar::rat(2 * idx as i64 + 1);
        combo = combo.add(&s.scale(&w));
    }
    let cm: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let (re, im) = combo[(i, j)].approx();
                    C64::new(re, im)
                })
                .collect()
        })
        .collect();
    // char poly by complex Faddeev-LeVerrier
    let coeffs = char_poly_c64(&cm);
    let roots = durand_kerner(&coeffs);
    // cluster
    let mut clusters: Vec<C64> = Vec::new();
    for r in roots {
        if !clusters.iter().any(|c| c.sub(r).abs() <= tol * 10.0) {
            clusters.push(r);
        }
    }
    clusters.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    let mut spaces = Vec::new();
    for lam in clusters {
        let shifted: Vec<Vec<C64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut v = cm[i][j];
                        if i == j {
                            v = v.sub(lam);
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        let basis = numeric_kernel(&shifted, tol);
        if basis.is_empty() {
            continue;
        }
        // Character values via Rayleigh quotients against each generator.
        let v0 = &basis[0];
        let mut values = Vec::new();
        for s in semis {
            let sc: Vec<C64> = {
                let mut out = vec![C64::zero(); n];
                for i in 0..n {
                    for j in 0..n {
                        let (re, im) = s[(i, j)].approx();
                        out[i] = out[i].add(C64::new(re, im).mul(v0[j]));
                    }
                }
                out
            };
            let mut num = C64::zero();
            let mut den = 0.0;
            for i in 0..n {
                let conj = C64::new(v0[i].re, -v0[i].im);
                num = num.add(conj.mul(sc[i]));
                den += v0[i].abs() * v0[i].abs();
            }
            values.push((num.re / den, num.im / den));
        }
        spaces.push(WeightSpace {
            character: Character { values: CharValues::Approx(values) },
            basis: WeightBasis::Approx(basis.iter().map(|v| v.iter().map(|c| (c.re, c.im)).collect()).collect()),
            triangular_basis: None,
        });
    }
    WeightDecomposition { acting_dim: mats.len(), ambient_dim: n, exact: false, spaces }
}

fn char_poly_c64(m: &[Vec<C64>]) -> Vec<C64> {
    let n = m.len();
    let mut coeffs = vec![C64::zero(); n + 1];
    coeffs[n] = C64::one();
    let mut acc = vec![vec![C64::zero(); n]; n];
    for k in 1..=n {
        // acc = m * (acc + c_{n-k+1} I)
        let mut shifted = acc.clone();
        for i in 0..n {
            shifted[i][i] = shifted[i][i].add(coeffs[n - k + 1]);
        }
        let mut next = vec![vec![C64::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = C64::zero();
                for l in 0..n {
                    s = s.add(m[i][l].mul(shifted[l][j]));
                }
                next[i][j] = s;
            }
        }
        acc = next;
        let mut tr = C64::zero();
        for i in 0..n {
            tr = tr.add(acc[i][i]);
        }
        coeffs[n - k] = C64::new(-tr.re / k as f64, -tr.im / k as f64);
    }
    coeffs[..n].to_vec()
}

fn numeric_kernel(m: &[Vec<C64>], tol: f64) -> Vec<Vec<C64>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut a: Vec<Vec<C64>> = m.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        // partial pivot
        let mut best = r;
        for i in r..rows {
            if a[i][c].abs() > a[best][c].abs() {
                best = i;
            }
        }
        if r >= rows || a[best][c].abs() <= tol {
            continue;
        }
        a.swap(r, best);
        let inv = C64::one().div(a[r][c]);
        for j in 0..cols {
            a[r][j] = a[r][j].mul(inv);
        }
        for i in 0..rows {
            if i != r && a[i][c].abs() > 0.0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = a[i][j].sub(f.mul(a[r][j]));
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut out = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![C64::zero(); cols];
        v[free] = C64::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = C64::zero().sub(a[row][free]);
        }
        out.push(v);
    }
    out
}

// ---------------------------------------------------------------------------
// Type (I)
// ---------------------------------------------------------------------------

/// Are all eigenvalues of the matrix purely imaginary? Exact Sturm test.
pub fn matrix_spectrum_purely_imaginary(m: &Mat<Rat>) -> bool {
    m.char_poly().all_roots_purely_imaginary()
}

/// Type (I) test for a solvable algebra: every `ad_X` has purely imaginary
/// spectrum. By Lie's theorem the eigenvalue functionals are linear, so the
/// basis elements decide the question.
pub fn is_type_i(g: &LieAlgebra) -> bool {
    (0..g.dim()).all(|i| matrix_spectrum_purely_imaginary(&g.ad_basis(i)))
}

/// Type (I) test for a representation given by its generator matrices.
pub fn is_type_i_rep(mats: &[Mat<Rat>]) -> bool {
    mats.iter().all(matrix_spectrum_purely_imaginary)
}

// ---------------------------------------------------------------------------
// Obstruction characters (the constructive lemma)
// ---------------------------------------------------------------------------

/// Bracket of two complex subspaces inside the complexified algebra:
/// `true` iff it vanishes identically.
fn bracket_vanishes(g: &LieAlgebra, a: &WeightBasis, b: &WeightBasis, tol: f64) -> bool {
    match (a, b) {
        (WeightBasis::Exact(av), WeightBasis::Exact(bv)) => {
            for x in av {
                for y in bv {
                    if g.bracket(x, y).iter().any(|c| !c.is_zero()) {
                        return false;
                    }
                }
            }
            true
        }
        _ => {
            let to_cx = |w: &WeightBasis| -> Vec<Vec<GaussRat>> {
                match w {
                    WeightBasis::Exact(v) => v.clone(),
                    WeightBasis::Approx(v) => v
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|(re, im)| {
                                    GaussRat::new(
                                        rationalize(*re, 1 << 30).unwrap_or_else(|| <Rat as Zero>::zero()),
                                        rationalize(*im, 1 << 30).unwrap_or_else(|| <Rat as Zero>::zero()),
                                    )
                                })
                                .collect()
                        })
                        .collect(),
                }
            };
            for x in to_cx(a) {
                for y in to_cx(b) {
                    let br = g.bracket(&x, &y);
                    let norm: f64 = br
                        .iter()
                        .map(|c| {
                            let (re, im) = c.to_f64();
                            re.hypot(im)
                        })
                        .sum();
                    if norm > tol {
                        return false;
                    }
                }
            }
            true
        }
    }
}

/// Search for a character with nonzero real part, nonzero weight space, and
/// `[V_alpha, V_conj(alpha)] = 0`, by the doubling iteration of the
/// constructive lemma: start from the largest-key candidate; on failure pass
/// to `alpha + conj(alpha)` and then keep doubling inside the finite
/// character set.
pub fn find_obstruction_character(
    g: &LieAlgebra,
    decomp: &WeightDecomposition,
    tol: f64,
) -> Result<Character, WeightsError> {
    let mut candidates: Vec<usize> = (0..decomp.spaces.len())
        .filter(|&i| {
            let s = &decomp.spaces[i];
            !s.character.real_part_zero(tol) && s.basis.dim() > 0
        })
        .collect();
    if candidates.is_empty() {
        return Err(WeightsError::TypeIInput);
    }
    candidates.sort_by(|&a, &b| {
        decomp.spaces[b]
            .character
            .tiebreak_key()
            .cmp(&decomp.spaces[a].character.tiebreak_key())
    });
    let start = &decomp.spaces[candidates[0]];
    let alpha1 = start.character.clone();
    let conj_idx = decomp
        .find_character(&alpha1.conj(), tol)
        .ok_or(WeightsError::CharacterChainBroken)?;
    if bracket_vanishes(g, &start.basis, &decomp.spaces[conj_idx].basis, tol) {
        return Ok(alpha1);
    }
    // alpha_2 = alpha_1 + conj(alpha_1): real, then keep doubling.
    let mut current = alpha1.add(&alpha1.conj());
    for _ in 0..decomp.spaces.len() + 2 {
        let idx = decomp
            .find_character(&current, tol)
            .ok_or(WeightsError::CharacterChainBroken)?;
        let space = &decomp.spaces[idx];
        if space.basis.dim() == 0 {
            return Err(WeightsError::CharacterChainBroken);
        }
        if bracket_vanishes(g, &space.basis, &space.basis, tol) {
            return Ok(current);
        }
        current = current.add(&current.clone());
    }
    Err(WeightsError::CharacterChainBroken)
}

/// Matrices of the adjoint action of `actors`' basis on the whole algebra.
pub fn adjoint_action(g: &LieAlgebra, actors: &Subspace) -> Vec<Mat<Rat>> {
    actors.basis().iter().map(|v| g.ad(v)).collect()
}

/// Restrict the adjoint action of each actor to an invariant subspace,
/// in the subspace's echelon coordinates. `None` if not invariant.
pub fn restricted_adjoint_action(
    g: &LieAlgebra,
    actors: &[Vec<Rat>],
    space: &Subspace,
) -> Option<Vec<Mat<Rat>>> {
    let k = space.dim();
    let mut out = Vec::new();
    for a in actors {
        let mut m = Mat::zero(k, k);
        for (j, b) in space.basis().iter().enumerate() {
            let img = g.bracket(a, b);
            if !space.contains(&img) {
                return None;
            }
            let coords = coords_in(space, &img)?;
            for i in 0..k {
                m[(i, j)] = coords[i].clone();
            }
        }
        out.push(m);
    }
    Some(out)
}

/// Coordinates of `v` in the echelon basis of `space`.
pub fn coords_in(space: &Subspace, v: &[Rat]) -> Option<Vec<Rat>> {
    let k = space.dim();
    let n = space.ambient();
    let mut m = Mat::zero(n, k);
    for (j, b) in space.basis().iter().enumerate() {
        for i in 0..n {
            m[(i, j)] = b[i].clone();
        }
    }
    m.solve(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn m(rows: &[&[i64]]) -> Mat<Rat> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    #[test]
    fn jc_trivial_cases() {
        let nilp = m(&[&[0, 1], &[0, 0]]);
        let jc = jordan_chevalley(&nilp);
        assert!(jc.s.is_zero());
        assert_eq!(jc.n, nilp);
        assert!(jc.verify(&nilp));

        let diag = m(&[&[1, 0], &[0, 2]]);
        let jc = jordan_chevalley(&diag);
        assert_eq!(jc.s, diag);
        assert!(jc.n.is_zero());
    }

    #[test]
    fn jc_jordan_block() {
        let j = m(&[&[1, 1], &[0, 1]]);
        let jc = jordan_chevalley(&j);
        assert_eq!(jc.s, Mat::identity(2));
        assert_eq!(jc.n, m(&[&[0, 1], &[0, 0]]));
        assert!(jc.verify(&j));
    }

    #[test]
    fn jc_mixed_spectrum() {
        // block diag(rotation-with-shear, 3)
        let a = m(&[&[0, -1, 1], &[1, 0, 2], &[0, 0, 3]]);
        let jc = jordan_chevalley(&a);
        assert!(jc.verify(&a));
    }

    #[test]
    fn roots_gauss_simple() {
        // x^2 + 1 over Q(i): roots +-i
        let p = Poly::new(vec![GaussRat::one(), GaussRat::zero(), GaussRat::one()]);
        let mut roots = roots_over_gauss(&p).unwrap();
        roots.sort_by(gauss_cmp);
        assert_eq!(roots, vec![GaussRat::i().neg(), GaussRat::i()]);

        // x^2 - 2 does not split
        let q = Poly::new(vec![GaussRat::from_rat(rat(-2)), GaussRat::zero(), GaussRat::one()]);
        assert!(roots_over_gauss(&q).is_none());

        // (x - 1/2)(x - (1+i))
        let r1 = GaussRat::from_rat(ratio(1, 2));
        let r2 = GaussRat::new(rat(1), rat(1));
        let p = Poly::new(vec![r1.mul(&r2), r1.add(&r2).neg(), GaussRat::one()]);
        let mut roots = roots_over_gauss(&p).unwrap();
        roots.sort_by(gauss_cmp);
        assert_eq!(roots, vec![r1, r2]);
    }

    #[test]
    fn weight_decomposition_r2_action() {
        // ad_A on nilradical span{B} of r2: 1x1 matrix [1]
        let dec = weight_decomposition(&[m(&[&[1]])], 1e-9).unwrap();
        assert!(dec.exact);
        assert_eq!(dec.spaces.len(), 1);
        match &dec.spaces[0].character.values {
            CharValues::Exact(v) => assert_eq!(v, &vec![GaussRat::one()]),
            _ => panic!("expected exact"),
        }
    }

    #[test]
    fn weight_decomposition_rotation() {
        // rotation matrix: eigenvalues +-i over Q(i)
        let rot = m(&[&[0, -1], &[1, 0]]);
        let dec = weight_decomposition(&[rot], 1e-9).unwrap();
        assert!(dec.exact);
        assert_eq!(dec.spaces.len(), 2);
        assert_eq!(dec.total_dim(), 2);
        // characters closed under conjugation
        let c0 = &dec.spaces[0].character;
        assert!(dec.find_character(&c0.conj(), 1e-9).is_some());
    }

    #[test]
    fn weight_decomposition_rejects_non_nilpotent_family() {
        // sl2 triple e, f: semisimple parts do not commute with everything
        let e = m(&[&[0, 1], &[0, 0]]);
        let f = m(&[&[0, 0], &[1, 0]]);
        let h = m(&[&[1, 0], &[0, -1]]);
        let r = weight_decomposition(&[h, e, f], 1e-9);
        assert!(matches!(r, Err(WeightsError::NotNilpotentImage)));
    }

    #[test]
    fn type_i_tests() {
        // nilpotent: all ad nilpotent -> type (I)
        let heis = LieAlgebra::new(
            vec!["e1".into(), "e2".into(), "e3".into()],
            vec![(0, 1, vec![(2, rat(1))])],
        )
        .unwrap();
        assert!(is_type_i(&heis));

        // r2 has eigenvalue 1
        let r2 = LieAlgebra::new(
            vec!["A".into(), "B".into()],
            vec![(0, 1, vec![(1, rat(1))])],
        )
        .unwrap();
        assert!(!is_type_i(&r2));

        // rotation algebra: [e1,e2] = -e3, [e1,e3] = e2 (plus central e4)
        let tt = LieAlgebra::new(
            vec!["e1".into(), "e2".into(), "e3".into(), "e4".into()],
            vec![(0, 1, vec![(2, rat(-1))]), (0, 2, vec![(1, rat(1))])],
        )
        .unwrap();
        assert!(is_type_i(&tt));
    }

    #[test]
    fn obstruction_character_r2() {
        // g = r2, action of A on everything: characters {0, 1}
        let r2 = LieAlgebra::new(
            vec!["A".into(), "B".into()],
            vec![(0, 1, vec![(1, rat(1))])],
        )
        .unwrap();
        let actors = Subspace::from_vectors(2, &[vec![rat(1), rat(0)]]);
        let mats = adjoint_action(&r2, &actors);
        let dec = weight_decomposition(&mats, 1e-9).unwrap();
        let alpha = find_obstruction_character(&r2, &dec, 1e-9).unwrap();
        match &alpha.values {
            CharValues::Exact(v) => assert_eq!(v, &vec![GaussRat::one()]),
            _ => panic!("expected exact"),
        }
    }

    #[test]
    fn obstruction_character_type_i_errors() {
        let heis = LieAlgebra::new(
            vec!["e1".into(), "e2".into(), "e3".into()],
            vec![(0, 1, vec![(2, rat(1))])],
        )
        .unwrap();
        let actors = Subspace::from_vectors(3, &[vec![rat(1), rat(0), rat(0)]]);
        let mats = adjoint_action(&heis, &actors);
        let dec = weight_decomposition(&mats, 1e-9).unwrap();
        assert_eq!(
            find_obstruction_character(&heis, &dec, 1e-9),
            Err(WeightsError::TypeIInput)
        );
    }

    #[test]
    fn decomposition_invariants_on_block_action() {
        // the 6-dim abelian-J algebra's complement action: diag block and a
        // rotation block acting on R^4
        let d = m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]);
        let rot = m(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
        let mats = vec![d, rot];
        let dec = weight_decomposition(&mats, 1e-9).unwrap();
        assert!(dec.exact);
        assert_eq!(dec.total_dim(), 4);
        for sp in &dec.spaces {
            // conjugate character present with the conjugated space
            let ci = dec.find_character(&sp.character.conj(), 1e-9).unwrap();
            match (&sp.basis, &dec.spaces[ci].basis) {
                (WeightBasis::Exact(a), WeightBasis::Exact(b)) => {
                    let conj: Vec<Vec<GaussRat>> =
                        a.iter().map(|v| v.iter().map(GaussRat::conj).collect()).collect();
                    let ea = crate::mat::echelon_basis(&conj, 4);
                    let eb = crate::mat::echelon_basis(b, 4);
                    assert_eq!(ea, eb, "conj(V_alpha) = V_conj(alpha)");
                }
                _ => panic!("expected exact bases"),
            }
            // each weight space invariant under the full (non-semisimplified) action
            if let WeightBasis::Exact(vs) = &sp.basis {
                for mat in &mats {
                    let mc = complexify_mat(mat);
                    for v in vs {
                        let img = mc.mul_vec(v);
                        let basis = crate::mat::echelon_basis(vs, 4);
                        assert!(crate::mat::in_span(&basis, &img));
                    }
                }
            }
        }
    }

    #[test]
    fn triangular_basis_invariance() {
        // s(-1,0)-style block: ad_f1 on span{e1..e4}
        let d = m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, -1, 0], &[0, 0, 0, -1]]);
        let rot = m(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, -1], &[0, 0, 1, 0]]);
        let dec = weight_decomposition(&[d, rot], 1e-9).unwrap();
        assert!(dec.exact);
        assert_eq!(dec.total_dim(), 4);
        for sp in &dec.spaces {
            assert!(sp.triangular_basis.is_some());
        }
    }
}
