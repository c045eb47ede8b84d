//! Structural invariants as randomized properties.

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use levelzero::config::{parse_suites, RunConfig, Suite};
use levelzero::cycles::random_periodic;
use levelzero::exact::identities::{exchange_relation, residue_table};
use levelzero::exact::{subsets, GaussianRational as Gq, ParamSet, Subset, ZeroTest};
use levelzero::qkz::{sigma_plus, StateVector};

fn gq() -> impl Strategy<Value = Gq> {
    (-40i64..=40, 1i64..=9, -40i64..=40, 1i64..=9).prop_map(|(a, b, c, d)| Gq::complex_frac(a, b, c, d))
}

fn state(n: usize, coeffs: &[(f64, f64)]) -> StateVector {
    let mut v = StateVector::zeros(n);
    for (mask, &(re, im)) in coeffs.iter().enumerate().take(1 << n) {
        v.add_to(&Subset::from_mask(mask, n), C64::new(re, im));
    }
    v
}

fn dist(a: &StateVector, b: &StateVector) -> f64 {
    a.sub(b).sup_norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_rationals_form_a_field(a in gq(), b in gq(), c in gq()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
        let approx = (&a * &b).to_c64() - a.to_c64() * b.to_c64();
        prop_assert!(approx.norm() <= 1e-12 * (1.0 + (a.to_c64() * b.to_c64()).norm()));
    }

    #[test]
    fn subset_masks_round_trip(n in 1usize..10, mask in 0usize..512) {
        let mask = mask & ((1 << n) - 1);
        let s = Subset::from_mask(mask, n);
        prop_assert_eq!(s.mask(), mask);
        prop_assert_eq!(s.len(), mask.count_ones() as usize);
        prop_assert!(s.elems().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn r_matrix_is_unitary(x in (-5.0f64..5.0, -5.0f64..5.0), h in (0.1f64..2.0, -2.0f64..2.0), coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8)) {
        let (x, h) = (C64::new(x.0, x.1), C64::new(h.0, h.1));
        prop_assume!((x + h).norm() > 1e-2 && (h - x).norm() > 1e-2);
        let v = state(3, &coeffs);
        let mut w = v.clone();
        w.apply_r(0, 2, x, h).unwrap();
        w.apply_r(0, 2, -x, h).unwrap();
        prop_assert!(dist(&v, &w) < 1e-9 * (1.0 + v.sup_norm()));
    }

    #[test]
    fn r_matrix_satisfies_yang_baxter(x in (-5.0f64..5.0, -5.0f64..5.0), y in (-5.0f64..5.0, -5.0f64..5.0), h in (0.1f64..2.0, -2.0f64..2.0), coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8)) {
        let (x, y, h) = (C64::new(x.0, x.1), C64::new(y.0, y.1), C64::new(h.0, h.1));
        prop_assume!([x, y, x - y].iter().all(|&u| (u + h).norm() > 1e-2));
        let v = state(3, &coeffs);
        // operators act right to left: R12(x−y) R13(x) R23(y) = R23(y) R13(x) R12(x−y)
        let mut left = v.clone();
        left.apply_r(1, 2, y, h).unwrap();
        left.apply_r(0, 2, x, h).unwrap();
        left.apply_r(0, 1, x - y, h).unwrap();
        let mut right = v.clone();
        right.apply_r(0, 1, x - y, h).unwrap();
        right.apply_r(0, 2, x, h).unwrap();
        right.apply_r(1, 2, y, h).unwrap();
        prop_assert!(dist(&left, &right) < 1e-9 * (1.0 + v.sup_norm()));
    }

    #[test]
    fn r_matrix_commutes_with_sigma_plus(x in (-5.0f64..5.0, -5.0f64..5.0), coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 16)) {
        let (x, h) = (C64::new(x.0, x.1), C64::new(0.0, -0.5));
        prop_assume!((x + h).norm() > 1e-2);
        let v = state(4, &coeffs);
        let mut a = sigma_plus(&v);
        a.apply_r(1, 3, x, h).unwrap();
        let mut b = v.clone();
        b.apply_r(1, 3, x, h).unwrap();
        let b = sigma_plus(&b);
        prop_assert!(dist(&a, &b) < 1e-9 * (1.0 + v.sup_norm()));
    }

    #[test]
    fn periodic_functions_are_periodic(seed in 0u64..10_000, hat: bool, t in (-3.0f64..3.0, -1.0f64..1.0), shift in -3i32..=3) {
        let ps = ParamSet::numeric_default(4, 2).unwrap();
        let w = random_periodic(&ps, hat, seed);
        let t = C64::new(t.0, t.1);
        let a = w.eval(t).unwrap();
        let b = w.eval(t + w.period() * shift as f64).unwrap();
        prop_assert!((a - b).norm() < 1e-8 * (1.0 + a.norm()));
        prop_assert_eq!(w.in_hat_space(), hat);
        if hat {
            let (minus, plus) = w.limits();
            prop_assert!(minus.norm() < 1e-12 && plus.norm() < 1e-12);
        }
    }

    #[test]
    fn config_keys_round_trip(n in 2usize..7, seed: u64, probes in 20usize..100, tol_exp in 3i32..12, pick in prop::collection::vec(any::<bool>(), 5)) {
        let z: Vec<String> = (0..n).map(|k| format!("{k}/{}", k + 1)).collect();
        let chosen: Vec<&str> = Suite::ALL.iter().zip(&pick).filter(|p| *p.1).map(|p| p.0.name()).collect();
        let suite = if chosen.is_empty() { "all".to_string() } else { chosen.join(",") };
        let text = format!("n = {n}\nell = {}\nz = {}\nseed = {seed}\nprobes = {probes}\ntol = 1e-{tol_exp}\nsuite = {suite}\n", n / 2, z.join(", "));
        let cfg = RunConfig::parse(&text).unwrap();
        prop_assert_eq!(cfg.n, n);
        prop_assert_eq!(cfg.seed, seed);
        prop_assert_eq!(cfg.probes, probes);
        prop_assert_eq!(cfg.tol, format!("1e-{tol_exp}").parse::<f64>().unwrap());
        prop_assert_eq!(&cfg.suites, &parse_suites(&suite).unwrap());
        prop_assert_eq!(cfg.instance().unwrap().z.len(), n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn residue_table_holds_at_random_points(seed: u64, n in 2usize..4) {
        let ps = ParamSet::random(n, 1, seed).unwrap();
        prop_assert!(residue_table(&ps).unwrap().is_empty());
    }

    #[test]
    fn exchange_relation_holds_at_random_points(seed: u64, i in 0usize..2) {
        let ps = ParamSet::random(3, 1, seed).unwrap();
        for m in subsets(3, 1) {
            let v = exchange_relation(&ps, i, &m).unwrap().check(ZeroTest::Deterministic);
            prop_assert!(v.zero, "i = {}, M = {}", i, m);
        }
    }
}
