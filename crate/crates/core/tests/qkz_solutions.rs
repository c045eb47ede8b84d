use levelzero::cycles::{constant_one, random_periodic, theta, PeriodicFn};
use levelzero::exact::{ParamSet, Subset};
use levelzero::hyperint::IntegralSetup;
use levelzero::qkz::{
    assemble_psi, assemble_singlet, check_qkz, singular_defect, Method, SingletForm, StateVector,
};

fn rel_diff(a: &StateVector, b: &StateVector) -> f64 {
    a.sub(b).sup_norm() / b.sup_norm()
}

fn det_builder(factors: Vec<PeriodicFn>) -> impl Fn(&ParamSet) -> Result<StateVector, levelzero::qkz::QkzError> {
    move |q: &ParamSet| Ok(assemble_psi(q, &factors, Method::Det, IntegralSetup::default())?.psi)
}

#[test]
fn qkz_residual_small_cases() {
    // two sites form a singlet, so the cycle needs nonzero limits
    for (n, ell, hat) in [(2usize, 1usize, false), (3, 1, true), (4, 1, true)] {
        let ps = ParamSet::numeric_default(n, ell).unwrap();
        let factors = vec![random_periodic(&ps, hat, 21)];
        let build = det_builder(factors);
        for j in 0..n {
            let r = check_qkz(&ps, j, &build).unwrap();
            assert!(r.residual < 1e-6, "(n, ℓ) = ({n}, {ell}): {r:?}");
        }
    }
}

#[test]
fn qkz_residual_singlet_weight_two() {
    let ps = ParamSet::numeric_default(4, 2).unwrap();
    let factors = vec![random_periodic(&ps, true, 31), random_periodic(&ps, false, 32)];
    let build = det_builder(factors);
    for j in 0..4 {
        let r = check_qkz(&ps, j, &build).unwrap();
        assert!(r.residual < 1e-6, "{r:?}");
    }
}

#[test]
fn solutions_are_singular_vectors() {
    for (n, ell, hats) in [(3usize, 1usize, vec![true]), (4, 2, vec![true, false]), (5, 2, vec![true, true])] {
        let ps = ParamSet::numeric_default(n, ell).unwrap();
        let factors: Vec<_> = hats.iter().enumerate().map(|(i, &h)| random_periodic(&ps, h, 40 + i as u64)).collect();
        let a = assemble_psi(&ps, &factors, Method::Det, IntegralSetup::default()).unwrap();
        let d = singular_defect(&a.psi, a.psi.sup_norm());
        assert!(d < 1e-8, "n={n}: {d:e}");
    }
}

#[test]
fn cycles_from_the_trivial_class_give_zero() {
    let ps = ParamSet::numeric_default(5, 2).unwrap();
    for first in [constant_one(&ps), theta(&ps)] {
        let factors = vec![first, random_periodic(&ps, false, 50)];
        let a = assemble_psi(&ps, &factors, Method::Det, IntegralSetup::default()).unwrap();
        assert!(a.psi.sup_norm() < 1e-8 * a.scale, "{:e} vs scale {:e}", a.psi.sup_norm(), a.scale);
    }
}

#[test]
fn closed_cycles_give_zero_at_half_filling() {
    let ps = ParamSet::numeric_default(4, 2).unwrap();
    let factors = vec![random_periodic(&ps, true, 60), random_periodic(&ps, true, 61)];
    let a = assemble_psi(&ps, &factors, Method::Det, IntegralSetup::default()).unwrap();
    assert!(a.psi.sup_norm() < 1e-8 * a.scale, "{:e} vs scale {:e}", a.psi.sup_norm(), a.scale);
}

#[test]
fn singlet_closed_forms_agree() {
    let ps = ParamSet::numeric_default(4, 2).unwrap();
    let factors = vec![random_periodic(&ps, true, 70), random_periodic(&ps, false, 71)];
    let setup = IntegralSetup::default();
    let residue = assemble_singlet(&ps, &factors, SingletForm::Residue, setup).unwrap().psi;
    let poly = assemble_singlet(&ps, &factors, SingletForm::Polynomial, setup).unwrap().psi;
    assert!(rel_diff(&poly, &residue) < 1e-8, "{:e}", rel_diff(&poly, &residue));
    let full = assemble_psi(&ps, &factors, Method::Det, setup).unwrap().psi;
    assert!(rel_diff(&full, &residue) < 1e-6, "{:e}", rel_diff(&full, &residue));
}

#[test]
fn singlet_two_sites_matches_direct_integral() {
    let ps = ParamSet::numeric_default(2, 1).unwrap();
    let factors = vec![random_periodic(&ps, false, 80)];
    let setup = IntegralSetup::default();
    let closed = assemble_singlet(&ps, &factors, SingletForm::Residue, setup).unwrap().psi;
    for m in [Method::Plain, Method::Det] {
        let direct = assemble_psi(&ps, &factors, m, setup).unwrap().psi;
        assert!(rel_diff(&direct, &closed) < 1e-6, "{m:?}: {:e}", rel_diff(&direct, &closed));
    }
    // a cycle with vanishing limits has no jump
    let zero = assemble_singlet(&ps, &[random_periodic(&ps, true, 81)], SingletForm::Residue, setup).unwrap();
    assert_eq!(zero.psi.sup_norm(), 0.0);
}

#[test]
fn assembly_routes_agree() {
    let ps = ParamSet::numeric_default(5, 2).unwrap();
    let factors = vec![random_periodic(&ps, true, 90), random_periodic(&ps, true, 91)];
    let setup = IntegralSetup::default();
    let det = assemble_psi(&ps, &factors, Method::Det, setup).unwrap().psi;
    for m in [Method::Plain, Method::Tilde, Method::DetQ] {
        let other = assemble_psi(&ps, &factors, m, setup).unwrap().psi;
        assert!(rel_diff(&other, &det) < 1e-6, "{m:?}: {:e}", rel_diff(&other, &det));
    }
    assert!(det.in_weight(2, 0.0));
}

#[test]
fn weight_zero_solution_is_invariant() {
    let ps = ParamSet::numeric_default(3, 0).unwrap();
    let build = det_builder(vec![]);
    for j in 0..3 {
        assert_eq!(check_qkz(&ps, j, &build).unwrap().residual, 0.0);
    }
    let top = StateVector::basis(3, &Subset::empty());
    assert_eq!(singular_defect(&top, 1.0), 0.0);
    let not_singular = StateVector::basis(3, &Subset::new(vec![0]));
    assert!(singular_defect(&not_singular, 1.0) > 0.5);
}
