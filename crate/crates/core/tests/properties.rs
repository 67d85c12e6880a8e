use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use nc_arakelov::arithbundles::{
    det_hom_ext, det_line, duality_residual, intersection, lambda, rr_residual, ArithBundle, ArithLineBundle,
    DetLine, OmegaChoice,
};
use nc_arakelov::exactlin::{hom_group, smith_normal_form, FgAbGroup, IntMatrix, Matrix};
use nc_arakelov::p1cohomology::{AutData, InvertibleObject, TwistSum};
use nc_arakelov::zorder::{dual_bimodule, Bimodule, OrderElement, ZOrder};
use nc_arakelov::Rational;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn int_matrix(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    IntMatrix::from_vec(rows, cols, entries.iter().map(|&v| BigInt::from(v)).collect())
}

fn invertible_element(order: &ZOrder, coords: &[i64]) -> Option<OrderElement<Rational>> {
    let a = OrderElement::<Rational>::from_ints(coords);
    (!order.norm(&a).is_zero()).then_some(a)
}

/// Product of elementary operations; always unimodular.
fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n == 0 {
        return u;
    }
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e.set(i, j, c.into());
        u = &e * &u;
    }
    u
}

fn corpus() -> Vec<Arc<ZOrder>> {
    ["Z", "Zi", "M2Z", "Lipschitz", "ZxZ", "DualNumbers"].iter().map(|n| Arc::new(ZOrder::builtin(n).unwrap())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn smith_form_is_a_normal_form(entries in prop::collection::vec(-9i64..=9, 12)) {
        let m = int_matrix(3, 4, &entries);
        let snf = smith_normal_form(&m);
        prop_assert_eq!(&(&snf.u * &m) * &snf.v, snf.s.clone());
        prop_assert!((&snf.u * &snf.u_inv).entries() == IntMatrix::identity(3).entries());
        prop_assert!((&snf.v * &snf.v_inv).entries() == IntMatrix::identity(4).entries());
        let d = snf.diagonal();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
        prop_assert_eq!(smith_normal_form(&snf.s).s, snf.s.clone());
    }

    #[test]
    fn group_invariants_ignore_the_presentation(
        rank in 0usize..3,
        torsion in prop::collection::vec(2i64..9, 0..3),
        ops in prop::collection::vec((0usize..6, 0usize..6, -3i64..=3), 0..8),
    ) {
        let g = FgAbGroup::from_invariants(rank, &torsion);
        let u = unimodular(g.generators(), &ops);
        let h = FgAbGroup::new(&u * g.relations());
        prop_assert!(g.same_invariants(&h));
        prop_assert!(hom_group(&FgAbGroup::free(1), &g).group().same_invariants(&g));
    }

    #[test]
    fn det_line_is_presentation_invariant(
        torsion in prop::collection::vec(2i64..9, 0..3),
        free in prop::collection::vec(-5i64..=5, 4),
        ops in prop::collection::vec((0usize..6, 0usize..6, -2i64..=2), 0..8),
    ) {
        let g = FgAbGroup::from_invariants(2, &torsion);
        let n = g.generators();
        let block = int_matrix(2, 2, &free);
        prop_assume!(!block.determinant().is_zero());
        let mut phi = Matrix::<Rational>::identity(n);
        for i in 0..2 {
            for j in 0..2 {
                phi.set(i, j, Rational::from_integer(block.get(i, j).clone()));
            }
        }
        let u = unimodular(n, &ops);
        let uq = Matrix::<Rational>::from_int(&u);
        let phi2 = &(&uq * &phi) * &uq.inverse().unwrap();
        let h = FgAbGroup::new(&u * g.relations());
        let a = det_line(&g, &phi).unwrap();
        let b = det_line(&h, &phi2).unwrap();
        prop_assert_eq!(a.q(), b.q());
        prop_assert_eq!(a.t().abs(), b.t().abs());
        let af = det_line(&g, &phi.to_f64()).unwrap();
        let bf = det_line(&h, &phi2.to_f64()).unwrap();
        prop_assert!((af.adeg() - bf.adeg()).abs() < 1e-12);
    }

    #[test]
    fn adeg_is_a_homomorphism(
        q1 in (1i64..50, 1i64..50), q2 in (1i64..50, 1i64..50),
        t1 in -20.0f64..20.0, t2 in -20.0f64..20.0, e in -3i64..=3,
    ) {
        prop_assume!(t1.abs() > 1e-3 && t2.abs() > 1e-3);
        let a = DetLine::new(q(q1.0, q1.1), t1).unwrap();
        let b = DetLine::new(q(q2.0, q2.1), t2).unwrap();
        prop_assert!((a.tensor(&b).adeg() - a.adeg() - b.adeg()).abs() < 1e-12);
        prop_assert!((a.inverse().adeg() + a.adeg()).abs() < 1e-12);
        prop_assert!((a.pow(e).adeg() - e as f64 * a.adeg()).abs() < 1e-11);
        prop_assert_eq!(a.tensor(&a.inverse()).adeg().abs() < 1e-12, true);
        let ax = DetLine::new(q(q1.0, q1.1), q(q2.0, q2.1)).unwrap();
        prop_assert_eq!(ax.tensor(&ax.inverse()).adeg(), 0.0);
    }

    #[test]
    fn regular_representations_are_representations(
        which in 0usize..6,
        a in prop::collection::vec(-5i64..=5, 4),
        b in prop::collection::vec(-5i64..=5, 4),
    ) {
        let order = &corpus()[which];
        let r = order.rank();
        let ea = OrderElement::<Rational>::from_ints(&a[..r]);
        let eb = OrderElement::<Rational>::from_ints(&b[..r]);
        let ab = OrderElement(order.mul(ea.coords(), eb.coords()));
        let (la, ra) = order.regular_representations(&ea);
        let (lb, rb) = order.regular_representations(&eb);
        let (lab, rab) = order.regular_representations(&ab);
        prop_assert_eq!(&la * &lb, lab);
        prop_assert_eq!(&rb * &ra, rab);
        prop_assert_eq!(&la * &rb, &rb * &la);
        if which < 4 {
            prop_assert_eq!(la.determinant(), ra.determinant());
        }
    }

    #[test]
    fn beta_scaling_shifts_the_degree(n in -4i64..=4, c in 2i64..9) {
        let z = Arc::new(ZOrder::integers());
        let w = OmegaChoice::<Rational>::identity(&z);
        let a = ArithBundle::structure(&z);
        let line = InvertibleObject::structure(&z, n);
        let base = ArithLineBundle::new(line.clone(), Matrix::scalar(1, q(3, 1))).unwrap();
        let scaled = ArithLineBundle::new(line, Matrix::scalar(1, q(3 * c, 1))).unwrap();
        let ranks = nc_arakelov::p1cohomology::hom_ext_qgr(base.line(), a.sheaf()).unwrap();
        let m = ranks.hom.real_dimension() as f64 - ranks.ext.real_dimension() as f64;
        let diff = lambda(&scaled, &a, &w).unwrap().adeg() - lambda(&base, &a, &w).unwrap().adeg();
        prop_assert!((diff - m * (c as f64).ln()).abs() < 1e-12, "diff {} m {}", diff, m);
    }

    #[test]
    fn induced_determinants_are_multiplicative(
        u1 in prop::collection::vec(-4i64..=4, 4), u2 in prop::collection::vec(-4i64..=4, 4),
        v1 in prop::collection::vec(-4i64..=4, 4), v2 in prop::collection::vec(-4i64..=4, 4),
        n in -2i64..=2, m in -2i64..=2,
    ) {
        let r = Arc::new(ZOrder::matrix_ring_2());
        let elems: Option<Vec<_>> = [&u1, &u2, &v1, &v2].iter().map(|c| invertible_element(&r, c)).collect();
        let Some(elems) = elems else { return Ok(()); };
        let reg = Bimodule::regular(&r);
        let act: Vec<Matrix<Rational>> = elems.iter().map(|e| reg.real_left_action(e)).collect();
        let e = TwistSum::structure(&r, m);
        let w = OmegaChoice::<Rational>::identity(&r);
        let bundle = |g: &Matrix<Rational>| ArithBundle::new(e.clone(), AutData::single(m, g.clone())).unwrap();
        let line = |b: &Matrix<Rational>| ArithLineBundle::new(InvertibleObject::structure(&r, n), b.clone()).unwrap();
        let first = det_hom_ext(&line(&act[0]), &bundle(&act[2]), &w).unwrap();
        let second = det_hom_ext(&line(&act[1]), &bundle(&act[3]), &w).unwrap();
        let both = det_hom_ext(&line(&(&act[0] * &act[1])), &bundle(&(&act[2] * &act[3])), &w).unwrap();
        prop_assert_eq!(both.0.t().clone(), first.0.t().clone() * second.0.t().clone());
        prop_assert_eq!(both.1.t().clone(), first.1.t().clone() * second.1.t().clone());
    }
}

#[test]
fn ext_of_structure_against_hom_into_omega() {
    for order in corpus() {
        let r = order.rank();
        let dual = dual_bimodule(&order);
        let alphas = [OrderElement::<Rational>::from_ints(&vec![1; r]), OrderElement::from_ints(&[2, 0, 1, 1][..r])];
        let a_line = ArithLineBundle::<Rational>::structure(&order);
        let a = ArithBundle::structure(&order);
        for c in alphas.iter().filter(|c| !order.norm(c).is_zero()) {
            let w = OmegaChoice::new(&order, dual.real_left_action(c)).unwrap();
            let (_, ext) = det_hom_ext(&a_line, &a, &w).unwrap();
            let (hom, _) = det_hom_ext(&a_line, &w.as_bundle(), &w).unwrap();
            assert_eq!(ext.inverse().adeg(), hom.adeg(), "{}", order.name());
        }
    }
}

#[test]
fn dual_of_dual_is_the_regular_bimodule() {
    for order in corpus() {
        let reg = Bimodule::regular(&order);
        let dd = reg.dual().unwrap().dual().unwrap();
        assert_eq!(dd.left_actions(), reg.left_actions());
        assert_eq!(dd.as_right().actions(), reg.as_right().actions());
    }
}

#[test]
fn intersections_ignore_basis_labels() {
    let r = Arc::new(ZOrder::matrix_ring_2());
    let perm = [2usize, 0, 3, 1];
    let p = Arc::new(r.permuted_basis(&perm));
    let u = [2i64, 1, 1, 3];
    let c = [1i64, 2, 0, 1];
    let mut up = [0i64; 4];
    let mut cp = [0i64; 4];
    for i in 0..4 {
        up[perm[i]] = u[i];
        cp[perm[i]] = c[i];
    }
    let setup = |order: &Arc<ZOrder>, u: &[i64], c: &[i64], n: i64| {
        let beta = Bimodule::regular(order).real_left_action(&OrderElement::<Rational>::from_ints(u));
        let alpha = dual_bimodule(order).real_left_action(&OrderElement::<Rational>::from_ints(c));
        let w = OmegaChoice::new(order, alpha).unwrap();
        let lb = ArithLineBundle::new(InvertibleObject::structure(order, n), beta).unwrap();
        (lb, w)
    };
    for n in -2..=2 {
        let (lb, w) = setup(&r, &u, &c, n);
        let (lbp, wp) = setup(&p, &up, &cp, n);
        let a = intersection(&lb, &lb.as_bundle(), &w).unwrap().1;
        let b = intersection(&lbp, &lbp.as_bundle(), &wp).unwrap().1;
        assert!((a - b).abs() < 1e-12, "n = {n}: {a} vs {b}");
        let a = intersection(&lb, &w.as_bundle(), &w).unwrap().1;
        let b = intersection(&lbp, &wp.as_bundle(), &wp).unwrap().1;
        assert!((a - b).abs() < 1e-12, "n = {n}: {a} vs {b}");
    }
}

#[test]
fn summand_order_does_not_change_lambda() {
    let z = Arc::new(ZOrder::integers());
    let parts = vec![
        (nc_arakelov::zorder::RightModule::regular(&z), 1),
        (nc_arakelov::zorder::RightModule::regular(&z), -3),
        (nc_arakelov::zorder::RightModule::regular(&z), 1),
    ];
    let e = TwistSum::new(&z, parts).unwrap();
    let blocks = [Matrix::scalar(1, q(2, 1)), Matrix::scalar(1, q(5, 1)), Matrix::scalar(1, q(-7, 3))];
    let eb = ArithBundle::new(e.clone(), AutData::from_summand_blocks(&e, &blocks).unwrap()).unwrap();
    let w = OmegaChoice::new(&z, Matrix::scalar(1, q(3, 1))).unwrap();
    for n in -2..=2 {
        let lb = ArithLineBundle::new(InvertibleObject::structure(&z, n), Matrix::scalar(1, q(4, 1))).unwrap();
        let base = lambda(&lb, &eb, &w).unwrap();
        for perm in [[1usize, 2, 0], [2, 1, 0], [0, 2, 1]] {
            let other = lambda(&lb, &eb.permuted(&perm), &w).unwrap();
            assert_eq!(base.q(), other.q());
            assert_eq!(base.t().abs(), other.t().abs());
        }
    }
}

#[test]
fn residuals_vanish_over_the_simple_corpus() {
    for name in ["Z", "Zi", "M2Z", "Lipschitz"] {
        let order = Arc::new(ZOrder::builtin(name).unwrap());
        let r = order.rank();
        let u = OrderElement::<Rational>::from_ints(&[2, 1, 1, 3][..r]);
        let c = OrderElement::<Rational>::from_ints(&[1, -4, 0, 1][..r]);
        let beta = Bimodule::regular(&order).real_left_action(&u);
        let w = OmegaChoice::new(&order, dual_bimodule(&order).real_left_action(&c)).unwrap();
        for n in -3..=3 {
            let lb = ArithLineBundle::new(InvertibleObject::structure(&order, n), beta.clone()).unwrap();
            assert_eq!(duality_residual(&lb, &w).unwrap(), 0.0, "{name} n = {n}");
            assert_eq!(rr_residual(&lb, &w).unwrap(), 0.0, "{name} n = {n}");
            let lbf = ArithLineBundle::new(InvertibleObject::structure(&order, n), beta.to_f64()).unwrap();
            let wf = OmegaChoice::new(&order, w.alpha().to_f64()).unwrap();
            assert!(duality_residual(&lbf, &wf).unwrap().abs() < 1e-8);
            assert!(rr_residual(&lbf, &wf).unwrap().abs() < 1e-8);
        }
    }
}
