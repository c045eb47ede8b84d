use num_complex::Complex64 as C64;

use levelzero::cycles::{constant_one, random_periodic, theta, PeriodicFn};
use levelzero::exact::bases::{d_apply, mu, nu_fun, nu_tilde, w_tilde};
use levelzero::exact::{subsets, GaussianRational as Gq, Linear, MultiRatFun, ParamSet, Subset};
use levelzero::hyperint::{
    contour_for, hyper_i_many, hyper_i_many_on, hyper_i_tensor, phase_phi, ContourKind, ContourOptions, IntegralSetup,
    Tolerance,
};

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn jump_formula_for_singlet_total_differences() {
    for n in [2usize, 4] {
        let ps = ParamSet::numeric_default(n, n / 2).unwrap();
        let cycles: Vec<PeriodicFn> = (0..5).map(|s| random_periodic(&ps, false, 100 + s)).collect();
        let ws: Vec<MultiRatFun> = subsets(n, n / 2).iter().map(|m| nu_tilde(&ps, m).unwrap()).collect();
        let table = hyper_i_many(&ps, &ws, &cycles, IntegralSetup::default()).unwrap();
        let p = ps.p_c64();
        for row in &table {
            for (r, c) in row.iter().zip(&cycles) {
                let (minus, plus) = c.limits();
                let expect = p.powu(n as u32 / 2 + 1) * (minus - plus);
                assert!(rel(r.value(), expect) < 1e-6, "n={n}: {} vs {expect}", r.value());
            }
        }
    }
}

#[test]
fn tensor_quadrature_matches_determinant() {
    // at n = 4 both factors decaying would give zero, so the last one keeps its limits
    for (n, last_hat) in [(4usize, false), (5, true)] {
        let ps = ParamSet::numeric_default(n, 2).unwrap();
        let factors = vec![random_periodic(&ps, true, 7), random_periodic(&ps, last_hat, 8)];
        let subs = subsets(n, 2);
        let ws: Vec<MultiRatFun> = subs.iter().map(|m| w_tilde(&ps, m).unwrap()).collect();
        let direct = hyper_i_tensor(&ps, &ws, &factors, IntegralSetup::default()).unwrap();
        for (m, d) in subs.iter().zip(&direct) {
            let mus: Vec<MultiRatFun> = m.elems().iter().map(|&k| mu(&ps, m, k).unwrap()).collect();
            let t = hyper_i_many(&ps, &mus, &factors, IntegralSetup::default()).unwrap();
            let det = t[0][0].value() * t[1][1].value() - t[0][1].value() * t[1][0].value();
            assert!(rel(d.value, det) < 1e-6, "{m}: {} vs {det}", d.value);
        }
    }
}

#[test]
fn swapping_factors_flips_the_sign() {
    let ps = ParamSet::numeric_default(5, 2).unwrap();
    let a = random_periodic(&ps, true, 17);
    let b = random_periodic(&ps, true, 18);
    let ws: Vec<MultiRatFun> = subsets(5, 2).iter().take(3).map(|m| w_tilde(&ps, m).unwrap()).collect();
    let ab = hyper_i_tensor(&ps, &ws, &[a.clone(), b.clone()], IntegralSetup::default()).unwrap();
    let ba = hyper_i_tensor(&ps, &ws, &[b, a], IntegralSetup::default()).unwrap();
    for (x, y) in ab.iter().zip(&ba) {
        assert!(rel(-y.value, x.value) < 1e-10);
    }
}

fn inv_at(z: &Gq) -> MultiRatFun {
    MultiRatFun::inv_linear(&Linear::var_shift(1, 0, -z)).unwrap()
}

/// Six functions of one variable with simple poles at the points and enough decay.
fn decaying_functions() -> Vec<(ParamSet, MultiRatFun)> {
    let mut out = Vec::new();
    let ps3 = ParamSet::numeric_default(3, 1).unwrap();
    out.push((ps3.clone(), inv_at(&ps3.z[0])));
    out.push((ps3.clone(), mu(&ps3, &Subset::new(vec![1]), 1).unwrap()));
    let ps4 = ParamSet::numeric_default(4, 2).unwrap();
    out.push((ps4.clone(), MultiRatFun::one(1)));
    out.push((ps4.clone(), mu(&ps4, &Subset::new(vec![0, 2]), 2).unwrap()));
    let mixed = inv_at(&ps4.z[1]).mul(&inv_at(&ps4.z[3])).mul_linear(&Linear::var_shift(1, 0, Gq::int(1)));
    out.push((ps4, mixed));
    let skew = ParamSet::numeric_skewed(5, 2).unwrap();
    out.push((skew.clone(), mu(&skew, &Subset::new(vec![1, 4]), 4).unwrap()));
    out
}

#[test]
fn trivial_cycles_integrate_to_zero() {
    for (ps, w) in decaying_functions() {
        let table = hyper_i_many(&ps, &[w], &[constant_one(&ps), theta(&ps)], IntegralSetup::default()).unwrap();
        for r in &table[0] {
            assert!(r.value().norm() < 1e-8 * r.abs_integral, "n={}: {:?}", ps.n, r);
        }
    }
}

#[test]
fn total_differences_integrate_to_zero() {
    for (n, ell) in [(3usize, 1usize), (4, 2), (5, 2)] {
        let ps = ParamSet::numeric_default(n, ell).unwrap();
        let cycles: Vec<PeriodicFn> = (0..3).map(|s| random_periodic(&ps, true, 200 + s)).collect();
        let mut ws = Vec::new();
        for m in subsets(n, ell) {
            ws.push(d_apply(&ps, &nu_fun(&ps, &m)).unwrap());
        }
        for r in hyper_i_many(&ps, &ws, &cycles, IntegralSetup::default()).unwrap().iter().flatten() {
            assert!(r.value().norm() < 1e-8 * r.abs_integral, "n={n}: {r:?}");
        }
        // differences of functions with poles at the points need the contour one step lower
        let m = Subset::first(ell);
        let dmu = d_apply(&ps, &mu(&ps, &m, 0).unwrap()).unwrap();
        let setup = IntegralSetup::with_kind(ContourKind::TotalDifference);
        for r in &hyper_i_many(&ps, &[dmu], &cycles, setup).unwrap()[0] {
            assert!(r.value().norm() < 1e-8 * r.abs_integral, "n={n}: {r:?}");
        }
    }
}

#[test]
fn differences_with_small_remainder_integrate_to_zero() {
    // f with f − Df decaying fast enough, against cycles with nonzero limits
    for (n, ell) in [(3usize, 1usize), (4, 2)] {
        let ps = ParamSet::numeric_default(n, ell).unwrap();
        let cycles: Vec<PeriodicFn> = (0..3).map(|s| random_periodic(&ps, false, 300 + s)).collect();
        let mut fs = vec![MultiRatFun::one(1)];
        if ell >= 2 {
            fs.push(MultiRatFun::linear(&Linear::var_shift(1, 0, Gq::frac(1, 3))));
        }
        let three_h = &(&ps.hbar + &ps.hbar) + &ps.hbar;
        fs.push(inv_at(&(&ps.z[0] + &three_h)));
        let ws: Vec<MultiRatFun> = fs.iter().map(|f| d_apply(&ps, f).unwrap()).collect();
        let setup = IntegralSetup::with_kind(ContourKind::ShiftedDifference);
        for r in hyper_i_many(&ps, &ws, &cycles, setup).unwrap().iter().flatten() {
            assert!(r.value().norm() < 1e-8 * r.abs_integral, "n={n}: {r:?}");
        }
    }
}

#[test]
fn integrals_do_not_depend_on_the_contour() {
    for ps in [ParamSet::numeric_default(4, 1).unwrap(), ParamSet::numeric_skewed(4, 1).unwrap()] {
        let cycles = vec![random_periodic(&ps, false, 400), random_periodic(&ps, true, 401)];
        let ws: Vec<MultiRatFun> = (0..4).map(|k| mu(&ps, &Subset::new(vec![k]), k).unwrap()).collect();
        let base = contour_for(&ps, ContourKind::Standard, ContourOptions::default()).unwrap();
        let tol = Tolerance::default();
        let reference = hyper_i_many_on(&ps, &ws, &cycles, &base, tol).unwrap();
        // the lattices sit on multiples of |p|/2 here, so move by amounts off that grid
        let step = ps.p_c64().norm();
        for (shift, radius) in [(0.35 * step, 0.45), (-0.6 * step, 0.3), (1.15 * step, 0.4)] {
            let opts = ContourOptions { baseline: Some(base.baseline + shift), radius_factor: radius, ..Default::default() };
            let other = contour_for(&ps, ContourKind::Standard, opts).unwrap();
            let table = hyper_i_many_on(&ps, &ws, &cycles, &other, tol).unwrap();
            for (a, b) in reference.iter().flatten().zip(table.iter().flatten()) {
                let d = (a.value() - b.value()).norm();
                assert!(d < 1e-9 * (1.0 + a.value().norm()), "shift {shift}: {d:e}");
            }
        }
    }
}

#[test]
fn phase_decays_like_a_power() {
    for n in [2usize, 3, 4, 5] {
        let ps = ParamSet::numeric_default(n, 1).unwrap();
        let p = ps.p_c64();
        let dir = p / p.norm() * C64::new(0.0, 1.0);
        let mut last = f64::INFINITY;
        for r in [1e2, 1e3, 1e4] {
            let t = dir * r;
            let dev = (phase_phi(&ps, t).unwrap() * (t / p).powf(n as f64 / 2.0) - 1.0).norm();
            assert!(dev < last, "n={n} at {r}: {dev}");
            if r >= 1e3 {
                assert!(dev < 0.05, "n={n} at {r}: {dev}");
            }
            last = dev;
        }
    }
}
