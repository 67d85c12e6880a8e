use std::sync::Arc;

use nc_arakelov::exactlin::FgAbGroup;
use nc_arakelov::gradedengine::{cech_cohomology, cech_window_top, gamma_sections, torsion_submodule, GradedModule};
use nc_arakelov::p1cohomology::{twist_cohomology, TwistSum};
use nc_arakelov::zorder::{RightModule, ZOrder};
use nc_arakelov::Error;

fn z() -> Arc<ZOrder> {
    Arc::new(ZOrder::integers())
}

fn scalar(g: FgAbGroup) -> RightModule {
    RightModule::over_integers(&z(), g).unwrap()
}

fn free_z(shift: i64, top: i64) -> GradedModule {
    GradedModule::free(&RightModule::regular(&z()), shift, -6, top).unwrap()
}

#[test]
fn cech_of_free_module() {
    let m = free_z(0, 20);
    let (h0, h1) = cech_cohomology(&m, 3).unwrap();
    assert_eq!(h0.rank(), 4);
    assert!(h1.is_trivial());
    let m = free_z(-3, 30);
    let (h0, h1) = cech_cohomology(&m, 0).unwrap();
    assert!(h0.is_trivial());
    assert_eq!(h1.describe(), "Z^2");
}

#[test]
fn cech_of_torsion_coefficients() {
    let m = GradedModule::free(&scalar(FgAbGroup::cyclic(6)), 0, -2, 20).unwrap();
    let (h0, h1) = cech_cohomology(&m, 0).unwrap();
    assert_eq!(h0.describe(), "Z/6");
    assert!(h1.is_trivial());
}

#[test]
fn unstable_window_is_refused() {
    let m = free_z(0, 2);
    assert!(!m.is_stable());
    assert_eq!(cech_cohomology(&m, 0).unwrap_err(), Error::NotStable);
    let forced = free_z(0, 6).with_stable(true);
    assert!(matches!(cech_cohomology(&forced, 0), Err(Error::StabilizationNotDetected { .. })));
}

#[test]
fn truncation_and_shift() {
    let m = free_z(0, 10);
    let same = m.shift(0);
    assert_eq!(same.ranks(), m.ranks());
    assert_eq!(m.truncate(-20).unwrap().ranks(), m.ranks());
    let t = m.truncate(2).unwrap();
    let from_zero: Vec<usize> = t.ranks().into_iter().filter(|(d, _)| *d >= 0).map(|(_, r)| r).take(5).collect();
    assert_eq!(from_zero, vec![0, 0, 3, 4, 5]);
    assert_eq!(t.truncate(2).unwrap().ranks(), t.ranks());
    assert_eq!(m.shift(3).shift(-3).ranks(), m.ranks());
    assert!(matches!(m.truncate(11), Err(Error::WindowTooSmall(_))));
}

#[test]
fn shift_compatibility() {
    let m = free_z(-1, 30);
    for d in -2..=2 {
        let (a0, a1) = cech_cohomology(&m.shift(1), d).unwrap();
        let (b0, b1) = cech_cohomology(&m, d + 1).unwrap();
        assert!(a0.same_invariants(&b0) && a1.same_invariants(&b1), "d = {d}");
    }
}

#[test]
fn torsion_submodules() {
    let order = z();
    let junk = GradedModule::finite_length(&order, &[(0, scalar(FgAbGroup::cyclic(6)))], -1, 12).unwrap();
    let tau = torsion_submodule(&junk).unwrap();
    assert_eq!(tau.component(0).unwrap().describe(), "Z/6");

    let free = free_z(0, 12);
    let tau = torsion_submodule(&free).unwrap();
    assert!(tau.ranks().iter().all(|(_, r)| *r == 0));
    assert!((free.d_min()..=free.d_max()).all(|d| tau.component(d).unwrap().is_trivial()));

    let junk = GradedModule::finite_length(&order, &[(0, scalar(FgAbGroup::cyclic(6)))], -6, 12).unwrap();
    let sum = GradedModule::direct_sum(&[&free, &junk]).unwrap();
    let tau = torsion_submodule(&sum).unwrap();
    for d in sum.d_min()..=sum.d_max() {
        let expect = if d == 0 { "Z/6" } else { "0" };
        assert_eq!(tau.component(d).unwrap().describe(), expect, "degree {d}");
    }
    let again = torsion_submodule(&tau).unwrap();
    assert_eq!(again.component(0).unwrap().describe(), "Z/6");
}

#[test]
fn sections_agree_with_components_in_high_degree() {
    let order = z();
    let free = free_z(0, 24);
    for (d, g) in gamma_sections(&free, 0..=4).unwrap() {
        assert!(g.same_invariants(&free.component(d).unwrap()));
    }
    let junk = GradedModule::finite_length(&order, &[(1, scalar(FgAbGroup::cyclic(6)))], -6, 24).unwrap();
    let sum = GradedModule::direct_sum(&[&free, &junk]).unwrap();
    let sections = gamma_sections(&sum, 0..=4).unwrap();
    assert_eq!(sections[1].1.describe(), "Z^2");
    assert_eq!(sum.component(1).unwrap().describe(), "Z^2 + Z/6");
    assert!(sections[4].1.same_invariants(&sum.component(4).unwrap()));
    let zero = GradedModule::finite_length(&order, &[], -2, 20).unwrap();
    assert!(gamma_sections(&zero, -2..=2).unwrap().iter().all(|(_, g)| g.is_trivial()));
}

#[test]
fn oracle_matches_monomial_model() {
    let order = z();
    let corpus = [
        TwistSum::structure(&order, 0),
        TwistSum::single(scalar(FgAbGroup::cyclic(6)), 1),
        TwistSum::single(scalar(FgAbGroup::from_invariants(1, &[4])), -2),
    ];
    for e in &corpus {
        for d in -2..=2 {
            let pd = e.summands().iter().map(|(_, n)| -n).max().unwrap();
            let m = GradedModule::from_twist_sum(e, -8, cech_window_top(pd, d)).unwrap();
            let (h0, h1) = cech_cohomology(&m, d).unwrap();
            let shifted = TwistSum::new(&order, e.summands().iter().map(|(p, n)| (p.clone(), n + d)).collect()).unwrap();
            assert!(h0.same_invariants(twist_cohomology(&shifted, 0).group()), "{e:?} d={d}");
            assert!(h1.same_invariants(twist_cohomology(&shifted, 1).group()), "{e:?} d={d}");
        }
    }
}
