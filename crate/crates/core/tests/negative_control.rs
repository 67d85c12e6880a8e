use std::sync::Arc;

use nc_arakelov::arithbundles::{duality_residual, rr_residual, ArithLineBundle, OmegaChoice};
use nc_arakelov::exactlin::{FgAbGroup, IntMatrix, Matrix};
use nc_arakelov::p1cohomology::InvertibleObject;
use nc_arakelov::zorder::{dual_bimodule, Bimodule, OrderElement, RightModule, ZOrder};
use nc_arakelov::Rational;

fn mixed(order: &Arc<ZOrder>, left: usize, right: usize) -> Bimodule {
    let mut rv = [0, 0];
    rv[right] = 1;
    let m = RightModule::through_character(order, FgAbGroup::free(1), &rv).unwrap();
    let lv: Vec<IntMatrix> = (0..2).map(|i| IntMatrix::identity(1).scale(&((i == left) as i64).into())).collect();
    Bimodule::new(m, lv).unwrap()
}

#[test]
fn z_times_z_mixed_factor_breaks_duality() {
    let r = Arc::new(ZOrder::z_times_z());
    let j = mixed(&r, 0, 1);
    let k = mixed(&r, 1, 0);
    let l = InvertibleObject::new(j, 0, Some(k)).unwrap();
    let lb = ArithLineBundle::new(l, Matrix::<Rational>::identity(1)).unwrap();
    let a = OrderElement::<Rational>::from_ints(&[2, 1]);
    let w = OmegaChoice::new(&r, dual_bimodule(&r).real_left_action(&a)).unwrap();
    let res = duality_residual(&lb, &w).unwrap();
    assert!((res + 2f64.ln()).abs() < 1e-12, "duality residual {res}");
    assert!(rr_residual(&lb, &w).unwrap().abs() >= 0.1);
}

#[test]
fn gaussian_residuals_vanish() {
    let r = Arc::new(ZOrder::gaussian_integers());
    let beta = Bimodule::regular(&r).real_left_action(&OrderElement::<Rational>::from_ints(&[2, 3]));
    let alpha = dual_bimodule(&r).real_left_action(&OrderElement::<Rational>::from_ints(&[1, -4]));
    let w = OmegaChoice::new(&r, alpha).unwrap();
    for n in -3..=3 {
        let lb = ArithLineBundle::new(InvertibleObject::structure(&r, n), beta.clone()).unwrap();
        assert_eq!(duality_residual(&lb, &w).unwrap(), 0.0, "n = {n}");
        assert_eq!(rr_residual(&lb, &w).unwrap(), 0.0, "n = {n}");
    }
}
