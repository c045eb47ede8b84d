// One-variable hypergeometric integrals: a vanishing law and contour independence.

use levelzero::cycles::{random_periodic, theta};
use levelzero::exact::bases::mu;
use levelzero::exact::{ParamSet, Subset};
use levelzero::hyperint::{contour_for, hyper_i, hyper_i_many_on, ContourKind, ContourOptions, IntegralSetup, Tolerance};

pub fn run_example() {
    let ps = ParamSet::numeric_default(3, 1).expect("valid instance");
    let w = mu(&ps, &Subset::new(vec![1]), 1).expect("mu");

    let against_theta = hyper_i(&ps, &w, &theta(&ps), IntegralSetup::default()).expect("integral");
    let ratio = against_theta.value().norm() / against_theta.abs_integral;
    println!("I(w, Theta) / int|integrand| = {ratio:.2e}");
    assert!(ratio < 1e-8);

    let big_w = random_periodic(&ps, false, 3);
    let tol = Tolerance::default();
    let base = contour_for(&ps, ContourKind::Standard, ContourOptions::default()).expect("contour");
    let a = hyper_i_many_on(&ps, &[w.clone()], &[big_w.clone()], &base, tol).expect("integral")[0][0].value();
    let moved = ContourOptions { baseline: Some(base.baseline + 0.4), ..Default::default() };
    let other = contour_for(&ps, ContourKind::Standard, moved).expect("contour");
    let b = hyper_i_many_on(&ps, &[w], &[big_w], &other, tol).expect("integral")[0][0].value();
    println!("I(w, W) = {a:.10} on the default contour, {b:.10} on a moved one");
    assert!((a - b).norm() < 1e-9 * (1.0 + a.norm()));
}

#[allow(dead_code)]
fn main() {
    run_example();
}
