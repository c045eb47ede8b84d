//! The qKZ difference equation, singular vectors and the assembly routes.

use crate::config::{RunConfig, Suite};
use crate::cycles::{constant_one, random_periodic, theta, PeriodicFn};
use crate::exact::ParamSet;
use crate::hyperint::IntegralSetup;
use crate::qkz::{assemble_psi, assemble_singlet, check_qkz, singular_defect, Method, QkzError, SingletForm, StateVector};

use super::{err, rel_diff, CheckSpec, Outcome};

/// Decaying factors except possibly the last, which keeps its limits when `last_hat` is false.
fn factors(ps: &ParamSet, last_hat: bool, seed: u64) -> Vec<PeriodicFn> {
    (0..ps.ell).map(|a| random_periodic(ps, a + 1 < ps.ell || last_hat, seed + a as u64)).collect()
}

fn max_residual(ps: &ParamSet, fs: Vec<PeriodicFn>) -> Result<f64, String> {
    let build = move |q: &ParamSet| -> Result<StateVector, QkzError> { Ok(assemble_psi(q, &fs, Method::Det, IntegralSetup::default())?.psi) };
    let mut worst: f64 = 0.0;
    for j in 0..ps.n {
        worst = worst.max(check_qkz(ps, j, &build).map_err(err)?.residual);
    }
    Ok(worst)
}

pub(super) fn checks(cfg: &RunConfig, instance: &ParamSet) -> Vec<CheckSpec> {
    let seed = cfg.seed.wrapping_mul(1000);
    let tol = cfg.tol;
    let s = Suite::Qkz;
    let mut out = Vec::new();

    for (n, ell, last_hat) in [(2usize, 1usize, false), (3, 1, true), (4, 2, false)] {
        out.push(CheckSpec::new(s, format!("qkz.residual.n{n}_l{ell}"), "qKZ difference equation for ψ_W", move || {
            let ps = ParamSet::numeric_default(n, ell).map_err(err)?;
            Ok(Outcome::numeric(max_residual(&ps, factors(&ps, last_hat, seed + 10 * n as u64))?, 1e-6))
        }));
    }

    let inst = instance.clone();
    out.push(CheckSpec::new(s, "qkz.residual.config", "qKZ difference equation for ψ_W", move || {
        let last_hat = 2 * inst.ell < inst.n;
        Ok(Outcome::numeric(max_residual(&inst, factors(&inst, last_hat, seed + 90))?, tol))
    }));

    out.push(CheckSpec::new(s, "qkz.singular_vectors", "assembled solutions are annihilated by Σ⁺", move || {
        let mut worst: f64 = 0.0;
        for (n, ell, last_hat) in [(3usize, 1usize, true), (4, 2, false), (5, 2, true)] {
            let ps = ParamSet::numeric_default(n, ell).map_err(err)?;
            let a = assemble_psi(&ps, &factors(&ps, last_hat, seed + 40), Method::Det, IntegralSetup::default()).map_err(err)?;
            worst = worst.max(singular_defect(&a.psi, a.psi.sup_norm()));
        }
        Ok(Outcome::numeric(worst, 1e-8))
    }));

    out.push(CheckSpec::new(s, "qkz.trivial_class_zero", "a factor from the constant/Θ class gives ψ_W = 0", move || {
        let ps = ParamSet::numeric_default(5, 2).map_err(err)?;
        let mut worst: f64 = 0.0;
        for first in [constant_one(&ps), theta(&ps)] {
            let fs = vec![first, random_periodic(&ps, false, seed + 50)];
            let a = assemble_psi(&ps, &fs, Method::Det, IntegralSetup::default()).map_err(err)?;
            worst = worst.max(a.psi.sup_norm() / a.scale);
        }
        Ok(Outcome::numeric(worst, 1e-8))
    }));

    out.push(CheckSpec::new(s, "qkz.singlet_degeneracy", "decaying cycles give ψ_W = 0 at n = 2ℓ", move || {
        let ps = ParamSet::numeric_default(4, 2).map_err(err)?;
        let a = assemble_psi(&ps, &factors(&ps, true, seed + 60), Method::Det, IntegralSetup::default()).map_err(err)?;
        Ok(Outcome::numeric(a.psi.sup_norm() / a.scale, 1e-8))
    }));

    out.push(CheckSpec::new(s, "qkz.singlet_forms", "residue and polynomial closed forms of the singlet solution agree", move || {
        let ps = ParamSet::numeric_default(4, 2).map_err(err)?;
        let fs = factors(&ps, false, seed + 70);
        let setup = IntegralSetup::default();
        let residue = assemble_singlet(&ps, &fs, SingletForm::Residue, setup).map_err(err)?.psi;
        let poly = assemble_singlet(&ps, &fs, SingletForm::Polynomial, setup).map_err(err)?.psi;
        Ok(Outcome::numeric(rel_diff(&poly, &residue), 1e-8))
    }));

    for (method, id, anchor) in [
        (Method::Plain, "qkz.routes.tensor", "direct multiple integral against the determinant route"),
        (Method::Tilde, "qkz.routes.residue_basis", "dual-function expansion against the determinant route"),
        (Method::DetQ, "qkz.routes.polynomial", "Q-polynomial determinant against the determinant route"),
    ] {
        out.push(CheckSpec::new(s, id, anchor, move || {
            let ps = ParamSet::numeric_default(5, 2).map_err(err)?;
            let fs = factors(&ps, true, seed + 90);
            let setup = IntegralSetup::default();
            let det = assemble_psi(&ps, &fs, Method::Det, setup).map_err(err)?.psi;
            let other = assemble_psi(&ps, &fs, method, setup).map_err(err)?.psi;
            Ok(Outcome::numeric(rel_diff(&other, &det), 1e-6))
        }));
    }

    out
}
