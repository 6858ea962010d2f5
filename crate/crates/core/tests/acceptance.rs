//! Acceptance suite: the exit criteria for the toolkit, one test per
//! criterion, each ending with an explicit pass line. Everything asserted
//! here is checked in exact arithmetic unless a tolerance is stated.

use solvtame_core::catalog::*;
use solvtame_core::cxstruct::{apply_j_form, bigrade, ddc, ComplexStructure};
use solvtame_core::decide::*;
use solvtame_core::exterior::{monomials, Form, Multivector};
use solvtame_core::liecore::LieAlgebra;
use solvtame_core::mat::Mat;
use solvtame_core::poly::Poly;
use solvtame_core::report::paper_table;
use solvtame_core::scalar::{rat, ratio, Rat, Scalar};
use solvtame_core::weights::*;

struct XorShift(u64);

impl XorShift {
    fn new(seed: u64) -> Self {
        XorShift(seed.max(1))
    }
    fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
    fn small_int(&mut self, bound: i64) -> i64 {
        (self.next() % (2 * bound as u64 + 1)) as i64 - bound
    }
    fn small_rat(&mut self) -> Rat {
        let p = self.small_int(4);
        let q = 1 + (self.next() % 3) as i64;
        ratio(p, q)
    }
}

/// The structure constants of a subalgebra in its own echelon basis.
fn subalgebra_as_algebra(g: &LieAlgebra, sub: &solvtame_core::liecore::Subspace) -> LieAlgebra {
    let k = sub.dim();
    let mut entries = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let br = g.bracket(&sub.basis()[i], &sub.basis()[j]);
            let coords = coords_in(sub, &br).expect("subalgebra closed under bracket");
            let terms: Vec<(usize, Rat)> = coords
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !Scalar::is_zero(c))
                .collect();
            if !terms.is_empty() {
                entries.push((i, j, terms));
            }
        }
    }
    let names = (0..k).map(|i| format!("n{}", i + 1)).collect();
    LieAlgebra::new(names, entries).expect("restricted bracket satisfies Jacobi")
}

fn row(table: &solvtame_core::report::PaperTable, id: &str) -> solvtame_core::report::PaperRow {
    table
        .rows
        .iter()
        .find(|r| r.id == id)
        .unwrap_or_else(|| panic!("missing table row {id}"))
        .clone()
}

#[test]
fn criterion_1_verdict_regression_table() {
    let table = paper_table(None, 0, 1e-9);
    for r in &table.rows {
        assert!(
            r.certificates_verified,
            "{}: certificate failed standalone re-verification",
            r.id
        );
        assert!(r.matched, "{}: verdict mismatch {r:?}", r.id);
    }
    // taming refuted on every OT configuration in scope
    for id in ["ot-1-1", "ot-2-1", "ot-1-2", "ot-2-2"] {
        assert_eq!(row(&table, id).got_taming.as_deref(), Some("not-exists"), "{id}");
    }
    // the 4-dimensional OT case is SKT, the higher ones are not
    assert_eq!(row(&table, "ot-1-1").got_skt.as_deref(), Some("exists"));
    for id in ["ot-2-1", "ot-3-1"] {
        assert_eq!(row(&table, id).got_skt.as_deref(), Some("not-exists"), "{id}");
    }
    // the pseudo-Kahler semidirect products admit neither structure
    for id in ["csd-1", "csd-2"] {
        let r = row(&table, id);
        assert_eq!(r.got_taming.as_deref(), Some("not-exists"), "{id}");
        assert_eq!(r.got_skt.as_deref(), Some("not-exists"), "{id}");
    }
    assert_eq!(row(&table, "yamada").got_skt.as_deref(), Some("not-exists"));
    assert_eq!(row(&table, "s-minus1-0").got_taming.as_deref(), Some("not-exists"));
    // the almost-abelian family is refuted at five rational parameter pairs
    let aa6_rows: Vec<_> = table.rows.iter().filter(|r| r.id.starts_with("aa6[")).collect();
    assert_eq!(aa6_rows.len(), 5);
    for r in &aa6_rows {
        assert_eq!(r.got_taming.as_deref(), Some("not-exists"), "{}", r.id);
    }
    assert_eq!(row(&table, "tau-tau-prime-30").got_taming.as_deref(), Some("exists"));
    // affine entries carry the non-unimodularity flags
    for id in ["aff-r", "aff-c"] {
        let r = row(&table, id);
        assert_eq!(r.unimodular_expected, Some(false), "{id}");
        assert!(!r.unimodular_got, "{id}");
    }
    assert!(table.all_match);
    println!("criterion 1 (verdict regression table, certificates re-verified): PASS");
}

#[test]
fn criterion_2_twisted_closed_solutions() {
    let heisenberg = LieAlgebra::new(
        vec!["e1".into(), "e2".into(), "e3".into()],
        vec![(0, 1, vec![(2, rat(1))])],
    )
    .unwrap();
    let filiform = LieAlgebra::new(
        vec!["e1".into(), "e2".into(), "e3".into(), "e4".into()],
        vec![(0, 1, vec![(2, rat(1))]), (0, 2, vec![(3, rat(1))])],
    )
    .unwrap();
    // 3-step check for the filiform algebra
    assert_eq!(filiform.lower_central_series().len(), 4);
    let ot_nil_1 = {
        let e = build_ot_default(1, 1).unwrap();
        let nil = e.algebra.nilradical().unwrap();
        subalgebra_as_algebra(&e.algebra, &nil)
    };
    let ot_nil_2 = {
        let e = build_ot_default(2, 1).unwrap();
        let nil = e.algebra.nilradical().unwrap();
        subalgebra_as_algebra(&e.algebra, &nil)
    };
    let mut rng = XorShift::new(0xfeed);
    for (name, g) in [
        ("heisenberg", heisenberg),
        ("filiform-4", filiform),
        ("ot-1-1 nilradical", ot_nil_1),
        ("ot-2-1 nilradical", ot_nil_2),
    ] {
        assert!(g.is_nilpotent(), "{name}");
        let n = g.dim();
        // closed 1-forms: kernel of d in degree 1
        let closed: Vec<Vec<Rat>> = {
            let mut images = Vec::new();
            for i in 0..n {
                images.push(g.ce_d(&Form::<Rat>::basis(n, i)));
            }
            let two = monomials(n, 2);
            let mut m = Mat::zero(two.len(), n);
            for (col, img) in images.iter().enumerate() {
                for (mask, c) in img.terms() {
                    let r = two.binary_search(&mask).unwrap();
                    m[(r, col)] = c.clone();
                }
            }
            m.kernel()
        };
        assert!(!closed.is_empty(), "{name}: no closed 1-forms");
        let mut tested = 0;
        while tested < 20 {
            let coeffs: Vec<Rat> = (0..closed.len()).map(|_| rng.small_rat()).collect();
            let mut theta = Form::zero(n, 1);
            for (c, v) in coeffs.iter().zip(&closed) {
                for (i, x) in v.iter().enumerate() {
                    let t = c * x;
                    if !Scalar::is_zero(&t) {
                        theta = theta.add(&Form::monomial(n, 1 << i, t));
                    }
                }
            }
            if theta.is_zero() {
                continue;
            }
            tested += 1;
            let sols = g.solve_twisted_closed(&theta).unwrap();
            assert_eq!(sols.len(), 1, "{name}: solution space not a line");
            // span{theta}: the solution is proportional to theta
            let s = &sols[0];
            let (mask0, c0) = s.terms().next().unwrap();
            let t0 = theta.coeff(mask0);
            assert!(!Scalar::is_zero(&t0), "{name}: pivot mismatch");
            let scale = t0.clone() * c0.inv().unwrap();
            assert_eq!(s.scale(&scale), theta, "{name}: solution is not span(theta)");
        }
    }
    println!("criterion 2 (twisted-closed solver returns span(theta), 20 random twists each): PASS");
}

/// Exhaustive oracle for the three obstruction-character conditions.
fn verify_obstruction(g: &LieAlgebra, dec: &WeightDecomposition, alpha: &Character) {
    assert!(!alpha.real_part_zero(1e-9), "Re(alpha) must not vanish");
    let idx = dec.find_character(alpha, 1e-9).expect("character present");
    assert!(dec.spaces[idx].basis.dim() > 0, "weight space must be nonzero");
    let conj_idx = dec.find_character(&alpha.conj(), 1e-9).expect("conjugate present");
    match (&dec.spaces[idx].basis, &dec.spaces[conj_idx].basis) {
        (WeightBasis::Exact(a), WeightBasis::Exact(b)) => {
            for x in a {
                for y in b {
                    assert!(
                        g.bracket(x, y).iter().all(|c| c.is_zero()),
                        "[V_alpha, V_conj_alpha] must vanish"
                    );
                }
            }
        }
        _ => {
            // float regime: tolerance check through rationalized vectors is
            // already inside the search; nothing exact to assert here
        }
    }
}

#[test]
fn criterion_3_obstruction_characters() {
    for e in default_entries() {
        if !e.algebra.is_solvable() {
            continue;
        }
        let h = e.algebra.fitting_null_subalgebra().unwrap();
        let mats = adjoint_action(&e.algebra, &h);
        let dec = weight_decomposition(&mats, 1e-9).unwrap();
        let res = find_obstruction_character(&e.algebra, &dec, 1e-9);
        if e.algebra.is_nilpotent() {
            assert!(
                matches!(res, Err(WeightsError::TypeIInput)),
                "{}: nilpotent input must be refused",
                e.id
            );
        } else if !is_type_i(&e.algebra) {
            let alpha = res.unwrap_or_else(|err| panic!("{}: {err}", e.id));
            verify_obstruction(&e.algebra, &dec, &alpha);
        } else {
            assert!(matches!(res, Err(WeightsError::TypeIInput)), "{}", e.id);
        }
    }
    // the doubling iteration: characters i, 1+i on a rotation block whose
    // bracket lands in the 2Re character line
    let g = LieAlgebra::new(
        vec!["C1".into(), "C2".into(), "v1".into(), "v2".into(), "w".into()],
        vec![
            (0, 2, vec![(3, rat(-1))]),
            (0, 3, vec![(2, rat(1))]),
            (1, 2, vec![(2, rat(1)), (3, rat(-1))]),
            (1, 3, vec![(2, rat(1)), (3, rat(1))]),
            (1, 4, vec![(4, rat(2))]),
            (2, 3, vec![(4, rat(1))]),
        ],
    )
    .unwrap();
    assert!(g.is_solvable() && !is_type_i(&g));
    let h = g.fitting_null_subalgebra().unwrap();
    assert_eq!(h.dim(), 2);
    let mats = adjoint_action(&g, &h);
    let dec = weight_decomposition(&mats, 1e-9).unwrap();
    assert!(dec.exact);
    let alpha = find_obstruction_character(&g, &dec, 1e-9).unwrap();
    verify_obstruction(&g, &dec, &alpha);
    // the starting character has nonzero imaginary part, so the returned one
    // must be its doubled real part: real-valued with value 2 somewhere
    assert!(alpha.is_real(0.0), "doubling must land on a real character");
    match &alpha.values {
        CharValues::Exact(v) => {
            assert!(v.iter().any(|c| c.re == rat(2)), "expected the 2 Re(alpha_1) character");
        }
        _ => panic!("expected the exact regime"),
    }
    println!("criterion 3 (constructive obstruction characters, three conditions verified): PASS");
}

#[test]
fn criterion_4_taming_implies_skt_mechanism() {
    for e in default_entries() {
        if !e.j.is_integrable() {
            continue;
        }
        let space = closed_two_forms(&e.algebra);
        for (i, w) in space.basis.iter().enumerate() {
            let part11 = bigrade(&e.j, &w.complexify()).component(1, 1);
            assert!(
                ddc(&e.algebra, &e.j, &part11).is_zero(),
                "{}: dd^c of the (1,1)-part of closed basis form {} is nonzero",
                e.id,
                i
            );
        }
    }
    println!("criterion 4 (dd^c of the (1,1)-part of every closed 2-form vanishes): PASS");
}

#[test]
fn criterion_5_twisted_derivative_formula() {
    for s in [1usize, 2, 3] {
        let e = build_ot_default(s, 1).unwrap();
        let n = e.algebra.dim();
        let mut theta: Form<Rat> = Form::zero(n, 1);
        for i in 0..s {
            theta = theta.add(&Form::basis(n, i));
        }
        let jtheta = apply_j_form(&e.j, &theta);
        let lhs = e.algebra.ce_d(&jtheta).sub(&jtheta.wedge(&theta).unwrap());
        // -(sum a_i ^ b_i) - (sum b_i) ^ (sum a_j)
        let mut expect: Form<Rat> = Form::zero(n, 2);
        for i in 0..s {
            expect = expect.sub(&Form::basis(n, i).wedge(&Form::basis(n, s + i)).unwrap());
        }
        let mut sum_b: Form<Rat> = Form::zero(n, 1);
        for i in 0..s {
            sum_b = sum_b.add(&Form::basis(n, s + i));
        }
        expect = expect.sub(&sum_b.wedge(&theta).unwrap());
        assert_eq!(lhs, expect, "s = {s}");
        // and the full degeneracy identity on the distinguished complex line
        let w = Form::<Rat>::basis(n, 2 * s)
            .complexify()
            .add(&Form::<Rat>::basis(n, 2 * s + 1).complexify().scale_i());
        let u = w.wedge(&w.conj()).unwrap();
        let identity_lhs = ddc(&e.algebra, &e.j, &u);
        let identity_rhs = lhs.complexify().wedge(&u).unwrap();
        assert_eq!(identity_lhs, identity_rhs, "s = {s}");
    }
    println!("criterion 5 (dJ(theta) - J(theta)^theta closed form matches exactly, s = 1, 2, 3): PASS");
}

/// Independent Koszul-evaluation differential: coefficient of e^S in d(a) is
/// the alternating sum over index pairs of a evaluated on the bracketed
/// frame, computed through `evaluate` and never through the recursive d.
fn d_oracle(g: &LieAlgebra, a: &Form<Rat>) -> Form<Rat> {
    let n = g.dim();
    let k = a.degree();
    let mut out = Form::zero(n, k + 1);
    for &mask in monomials(n, k + 1).iter() {
        let mut idx = Vec::new();
        let mut m = mask;
        while m != 0 {
            idx.push(m.trailing_zeros() as usize);
            m &= m - 1;
        }
        let mut total = rat(0);
        for p in 0..idx.len() {
            for q in p + 1..idx.len() {
                let br = g.bracket_basis(idx[p], idx[q]);
                if br.is_empty() {
                    continue;
                }
                let mut coords = vec![rat(0); n];
                for (t, c) in br {
                    coords[t] = c;
                }
                let mut vectors = vec![Multivector::from_coords(&coords)];
                for (r, &i) in idx.iter().enumerate() {
                    if r != p && r != q {
                        vectors.push(Multivector::basis(n, i));
                    }
                }
                let refs: Vec<&Multivector<Rat>> = vectors.iter().collect();
                let val = a.evaluate(&refs).unwrap();
                let sign = if (p + q) % 2 == 1 { rat(-1) } else { rat(1) };
                total = total + sign * val;
            }
        }
        if !Scalar::is_zero(&total) {
            out = out.add(&Form::monomial(n, mask, total));
        }
    }
    out
}

#[test]
fn criterion_6_kernel_oracle_equivalence() {
    for e in default_entries() {
        let n = e.algebra.dim();
        if n > 8 {
            continue;
        }
        // d agrees with the evaluation oracle on every 2-monomial
        let two = monomials(n, 2);
        for &mask in &two {
            let f: Form<Rat> = Form::monomial(n, mask, rat(1));
            assert_eq!(e.algebra.ce_d(&f), d_oracle(&e.algebra, &f), "{}", e.id);
        }
        // closed 2-forms: brute-force kernel over the full monomial basis
        let mut m = Mat::zero(monomials(n, 3).len(), two.len());
        let three = monomials(n, 3);
        for (col, &mask) in two.iter().enumerate() {
            let img = d_oracle(&e.algebra, &Form::monomial(n, mask, rat(1)));
            for (rmask, c) in img.terms() {
                m[(three.binary_search(&rmask).unwrap(), col)] = c.clone();
            }
        }
        let brute: Vec<Vec<Rat>> = m.kernel();
        let space = closed_two_forms(&e.algebra);
        let fast: Vec<Vec<Rat>> = space.basis.iter().map(|f| f.coeff_vector(&two)).collect();
        let eb = solvtame_core::mat::echelon_basis(&brute, two.len());
        let ef = solvtame_core::mat::echelon_basis(&fast, two.len());
        assert_eq!(eb, ef, "{}: closed-2-form space disagrees with the oracle", e.id);
        // dd^c-closed (1,1): brute force over the invariant-form basis with
        // the oracle differential inside dd^c
        if e.j.is_integrable() {
            let space = ddc_closed_11_forms(&e.algebra, &e.j).unwrap();
            for f in &space.basis {
                // J-invariance via direct evaluation
                let jf = apply_j_form(&e.j, f);
                assert_eq!(&jf, f, "{}", e.id);
                // dd^c via the oracle differential
                let ja = apply_j_form(&e.j, f);
                let dja = d_oracle(&e.algebra, &ja);
                let dc_f = apply_j_form(&e.j, &dja); // degree-2 input: no sign
                assert!(d_oracle(&e.algebra, &dc_f).is_zero(), "{}", e.id);
            }
            // dimension check by brute-force rank
            let inv = solvtame_core::cxstruct::invariant_two_forms(&e.j);
            let four = monomials(n, 4);
            let mut m = Mat::zero(four.len(), inv.len());
            for (col, w) in inv.iter().enumerate() {
                let ja = apply_j_form(&e.j, w);
                let dja = d_oracle(&e.algebra, &ja);
                let dcw = apply_j_form(&e.j, &dja);
                let img = d_oracle(&e.algebra, &dcw);
                for (rmask, c) in img.terms() {
                    m[(four.binary_search(&rmask).unwrap(), col)] = c.clone();
                }
            }
            assert_eq!(inv.len() - m.rank(), space.dim(), "{}", e.id);
        }
    }
    println!("criterion 6 (exact kernels match the brute-force evaluation oracle, dim <= 8): PASS");
}

#[test]
fn criterion_7_jordan_chevalley_invariants() {
    let mut rng = XorShift::new(0x7777);
    let mut checked = 0;
    while checked < 200 {
        let n = 1 + (rng.next() % 8) as usize;
        let m = Mat::from_rows(
            (0..n)
                .map(|_| (0..n).map(|_| rng.small_rat()).collect())
                .collect(),
        );
        let jc = jordan_chevalley(&m);
        // sum, commutation, nilpotency, squarefree minimal polynomial
        assert_eq!(jc.s.add(&jc.n), m);
        assert!(jc.s.commutator(&jc.n).is_zero());
        assert!(jc.n.is_nilpotent());
        let mp = jc.s.min_poly();
        assert_eq!(mp.gcd(&mp.derivative()).degree(), Some(0));
        assert!(jc.verify(&m));
        checked += 1;
    }
    println!("criterion 7 (200 random Jordan-Chevalley splits satisfy all invariants exactly): PASS");
}

fn conjugated(entry: &CatalogEntry, p: &Mat<Rat>) -> (LieAlgebra, ComplexStructure) {
    let n = entry.algebra.dim();
    let pinv = p.inverse().expect("conjugation matrix invertible");
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let br = entry.algebra.bracket(&p.col(i), &p.col(j));
            let v = pinv.mul_vec(&br);
            let terms: Vec<(usize, Rat)> = v
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !Scalar::is_zero(c))
                .collect();
            if !terms.is_empty() {
                entries.push((i, j, terms));
            }
        }
    }
    let g = LieAlgebra::new(entry.algebra.names().to_vec(), entries).expect("conjugated Jacobi");
    let j = ComplexStructure::new(&g, pinv.mul(entry.j.matrix()).mul(p)).expect("conjugated J");
    (g, j)
}

#[test]
fn criterion_8_basis_invariance_of_verdicts() {
    let mut rng = XorShift::new(0x8888);
    for entry in [build_s_minus_one_zero().unwrap(), build_ot_default(2, 1).unwrap()] {
        let n = entry.algebra.dim();
        let base_taming = decide_taming(&entry.algebra, &entry.j, 0).label().to_string();
        let base_skt = decide_skt(&entry.algebra, &entry.j, 0).unwrap().label().to_string();
        for trial in 0..10 {
            let p = loop {
                let cand = Mat::from_rows(
                    (0..n)
                        .map(|_| (0..n).map(|_| rat(rng.small_int(2))).collect())
                        .collect(),
                );
                if !Scalar::is_zero(&cand.det()) {
                    break cand;
                }
            };
            let (g, j) = conjugated(&entry, &p);
            assert_eq!(j.is_integrable(), entry.j.is_integrable());
            let taming = decide_taming(&g, &j, 0).label().to_string();
            assert_eq!(taming, base_taming, "{} trial {trial}: taming changed", entry.id);
            let skt = decide_skt(&g, &j, 0).unwrap().label().to_string();
            assert_eq!(skt, base_skt, "{} trial {trial}: skt changed", entry.id);
        }
    }
    println!("criterion 8 (verdicts invariant under 10 random rational conjugations): PASS");
}

#[test]
fn criterion_9_nilpotent_sanity() {
    let e = build_kt().unwrap();
    assert!(e.algebra.is_nilpotent());
    assert!(e.j.is_integrable());
    let verdict = decide_taming(&e.algebra, &e.j, 0);
    assert!(
        !verdict.exists(),
        "a non-abelian nilpotent algebra cannot carry an invariant taming form"
    );
    // and on this one the engine settles the question definitively
    assert!(verdict.not_exists());
    println!("criterion 9 (nilpotent Heisenberg + R refuses taming): PASS");
}

#[test]
fn consistency_taming_exists_implies_skt_exists() {
    for e in default_entries() {
        if !e.j.is_integrable() {
            continue;
        }
        let taming = decide_taming(&e.algebra, &e.j, 0);
        if taming.exists() {
            let skt = decide_skt(&e.algebra, &e.j, 0).unwrap();
            assert!(skt.exists(), "{}: taming witness without an SKT witness", e.id);
        }
    }
    println!("consistency (taming exists implies skt exists on the roster): PASS");
}

#[test]
fn twisted_poly_sanity() {
    // spot check used by criterion 2's construction: closed 1-forms of the
    // filiform algebra annihilate the derived subalgebra
    let filiform = LieAlgebra::new(
        vec!["e1".into(), "e2".into(), "e3".into(), "e4".into()],
        vec![(0, 1, vec![(2, rat(1))]), (0, 2, vec![(3, rat(1))])],
    )
    .unwrap();
    let d1 = filiform.derived_subalgebra();
    assert_eq!(d1.dim(), 2);
    let _ = Poly::<Rat>::x();
}
