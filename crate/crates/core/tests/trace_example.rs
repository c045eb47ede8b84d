use num_complex::Complex64 as C64;

use levelzero::cycles::{named_w, NamedW};
use levelzero::exact::ParamSet;
use levelzero::hyperint::{ContourOptions, IntegralSetup, Tolerance};
use levelzero::qkz::{assemble_psi, Method};
use levelzero::trace::{compare_trace_with_psi, omega_trace_all, TraceParams};

fn zeta(count: usize) -> Vec<C64> {
    (0..count).map(|k| C64::new(0.5 + 0.3 * k as f64, 0.25 - 0.1 * k as f64)).collect()
}

fn trace_params(n: usize, ell: usize, skewed: bool) -> TraceParams {
    let ps = if skewed { ParamSet::numeric_skewed(n, ell) } else { ParamSet::numeric_default(n, ell) }.unwrap();
    TraceParams::new(ps, zeta(n - 2 * ell)).unwrap()
}

/// Each pair (integration variable, extra point) contributes a factor −1/2 that the
/// printed constant does not carry, see the decisions ledger.
fn missing_factor(n: usize, ell: usize) -> C64 {
    C64::new(-0.5, 0.0).powu((ell * (n - 2 * ell)) as u32)
}

#[test]
fn trace_does_not_depend_on_the_contour() {
    for (n, ell) in [(3usize, 1usize), (5, 2)] {
        let tp = trace_params(n, ell, false);
        let base = omega_trace_all(&tp, ContourOptions::default(), Tolerance::default()).unwrap();
        for level in [-0.35, 0.3] {
            let opts = ContourOptions { baseline: Some(level), ..Default::default() };
            let moved = omega_trace_all(&tp, opts, Tolerance::default()).unwrap();
            let top = base.components.iter().map(|c| c.1.norm()).fold(0.0, f64::max);
            for (a, b) in base.components.iter().zip(&moved.components) {
                assert!((a.1 - b.1).norm() < 1e-8 * top, "n={n}, level {level}: {} vs {}", a.1, b.1);
            }
        }
    }
}

#[test]
fn trace_matches_psi_up_to_the_extra_point_factor() {
    for (n, skewed) in [(3usize, false), (3, true), (4, false), (5, true)] {
        let tp = trace_params(n, 1, skewed);
        let r = compare_trace_with_psi(&tp, IntegralSetup::default()).unwrap();
        let dev = r.deviation_with(missing_factor(n, 1));
        assert!(dev < 1e-10, "n={n}: {dev:e}");
        // the printed constant alone is off whenever there are extra points
        assert!(r.max_rel_deviation > 0.1, "n={n}: {:e}", r.max_rel_deviation);
    }
}

#[test]
fn trace_matches_psi_at_weight_two() {
    let tp = trace_params(5, 2, false);
    let omega = omega_trace_all(&tp, ContourOptions::default(), Tolerance::default()).unwrap();
    let factors = named_w(&tp.ps, NamedW::ExtraPoints, &tp.zeta).unwrap();
    let psi = assemble_psi(&tp.ps, &factors, Method::Det, IntegralSetup::default()).unwrap().psi;
    let f = missing_factor(5, 2);
    let top = omega.components.iter().map(|c| c.1.norm()).fold(0.0, f64::max);
    for (m, v) in &omega.components {
        assert!((v - f * psi.get(m)).norm() < 1e-8 * top, "{m:?}");
    }
}

#[test]
fn no_extra_points_gives_zero() {
    for (n, ell) in [(2usize, 1usize), (4, 2)] {
        let tp = trace_params(n, ell, false);
        let omega = omega_trace_all(&tp, ContourOptions::default(), Tolerance::default()).unwrap();
        let biggest = omega.components.iter().map(|c| c.1.norm()).fold(0.0, f64::max);
        assert!(biggest < 1e-8 * omega.scale, "n={n}: {biggest:e} vs {:e}", omega.scale);
        let factors = named_w(&tp.ps, NamedW::ExtraPoints, &[]).unwrap();
        let a = assemble_psi(&tp.ps, &factors, Method::Det, IntegralSetup::default()).unwrap();
        assert!(a.psi.sup_norm() < 1e-8 * a.scale);
    }
}

#[test]
fn weight_zero_is_the_prefactor_on_both_sides() {
    let tp = trace_params(2, 0, false);
    let r = compare_trace_with_psi(&tp, IntegralSetup::default()).unwrap();
    assert_eq!(r.components.len(), 1);
    assert!(r.deviation_with(C64::new(1.0, 0.0)) < 1e-14);
    assert!(r.max_rel_deviation < 1e-14);
}
