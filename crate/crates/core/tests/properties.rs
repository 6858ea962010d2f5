//! Property tests for the algebraic substrate: exterior-algebra identities,
//! the graded Leibniz rule, d.d = 0 against Jacobi, and conjugation as an
//! algebra involution.

use proptest::prelude::*;

use solvtame_core::exterior::{monomials, Form, Multivector};
use solvtame_core::liecore::LieAlgebra;
use solvtame_core::scalar::{rat, ratio, GaussRat, Rat};

fn small_rat() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=3).prop_map(|(p, q)| ratio(p, q))
}

fn sparse_form(dim: usize, degree: usize) -> impl Strategy<Value = Form<Rat>> {
    let masks = monomials(dim, degree);
    let len = masks.len();
    proptest::collection::vec((0..len, small_rat()), 0..4).prop_map(move |terms| {
        let mut f = Form::zero(dim, degree);
        for (i, c) in terms {
            f = f.add(&Form::monomial(dim, masks[i], c));
        }
        f
    })
}

fn sparse_cx_form(dim: usize, degree: usize) -> impl Strategy<Value = Form<GaussRat>> {
    (sparse_form(dim, degree), sparse_form(dim, degree)).prop_map(|(re, im)| {
        re.complexify().add(&im.complexify().scale(&GaussRat::i()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_associative_dim12(
        a in sparse_form(12, 1),
        b in sparse_form(12, 2),
        c in sparse_form(12, 3),
    ) {
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn wedge_graded_commutative(
        a in sparse_form(7, 1),
        b in sparse_form(7, 2),
        c in sparse_form(7, 3),
    ) {
        // odd * even commutes up to +, odd * odd anticommutes
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        prop_assert_eq!(a.wedge(&c).unwrap(), c.wedge(&a).unwrap().neg());
        prop_assert_eq!(b.wedge(&c).unwrap(), c.wedge(&b).unwrap());
    }

    #[test]
    fn conj_is_algebra_involution(
        a in sparse_cx_form(6, 1),
        b in sparse_cx_form(6, 2),
    ) {
        let w = a.wedge(&b).unwrap();
        prop_assert_eq!(w.conj(), a.conj().wedge(&b.conj()).unwrap());
        prop_assert_eq!(w.conj().conj(), w);
    }

    #[test]
    fn evaluate_multilinear_alternating(
        f in sparse_form(5, 2),
        x in proptest::collection::vec(small_rat(), 5),
        y in proptest::collection::vec(small_rat(), 5),
        s in small_rat(),
    ) {
        let vx = Multivector::from_coords(&x);
        let vy = Multivector::from_coords(&y);
        let swap = f.evaluate(&[&vy, &vx]).unwrap();
        let orig = f.evaluate(&[&vx, &vy]).unwrap();
        prop_assert_eq!(swap, -orig.clone());
        // linear in the first slot
        let vxs = vx.scale(&s);
        prop_assert_eq!(f.evaluate(&[&vxs, &vy]).unwrap(), orig * s);
        prop_assert_eq!(f.evaluate(&[&vx, &vx]).unwrap(), rat(0));
    }

    #[test]
    fn leibniz_and_d_squared_on_nilpotent(
        a in sparse_form(4, 1),
        b in sparse_form(4, 2),
    ) {
        // 4-dim filiform: [e1,e2] = e3, [e1,e3] = e4
        let g = LieAlgebra::new(
            vec!["e1".into(), "e2".into(), "e3".into(), "e4".into()],
            vec![(0, 1, vec![(2, rat(1))]), (0, 2, vec![(3, rat(1))])],
        ).unwrap();
        let lhs = g.ce_d(&a.wedge(&b).unwrap());
        let rhs = g.ce_d(&a).wedge(&b).unwrap().sub(&a.wedge(&g.ce_d(&b)).unwrap());
        prop_assert_eq!(lhs, rhs);
        prop_assert!(g.ce_d(&g.ce_d(&a)).is_zero());
        prop_assert!(g.ce_d(&g.ce_d(&b)).is_zero());
    }
}
