//! The classical side: calibration of the open contour, vanishing over closed
//! cycles, the factor-four relation and the KZ differential equation.

use num_complex::Complex64 as C64;

use crate::config::{RunConfig, Suite};
use crate::exact::{subsets, GaussianRational as Gq, ParamSet};
use crate::kz::{basis_cycle, calibration_integral, check_kz, classical_limit, gamma_inf, psi_s, psi_sv, BranchPath, KzError};
use crate::qkz::StateVector;

use super::{err, CheckSpec, Outcome};

fn cycles(ps: &ParamSet, count: usize) -> Result<Vec<BranchPath>, String> {
    let z = ps.z_c64();
    (0..count).map(|k| basis_cycle(&z, k, 0.3).map_err(err)).collect()
}

pub(super) fn checks(_cfg: &RunConfig) -> Vec<CheckSpec> {
    let s = Suite::Kz;
    let mut out = Vec::new();

    out.push(CheckSpec::new(s, "kz.calibration", "open-contour integral of φ_cl ν̃^cl equals 4", || {
        let mut worst: f64 = 0.0;
        for n in [2usize, 4] {
            let ps = ParamSet::numeric_default(n, n / 2).map_err(err)?;
            for k in [0, n - 1] {
                let g = gamma_inf(&ps, k).map_err(err)?;
                for m in subsets(n, n / 2) {
                    let v = calibration_integral(&ps, &g, &m).map_err(err)?;
                    worst = worst.max((v - 4.0).norm() / 4.0);
                }
            }
        }
        Ok(Outcome::numeric(worst, 1e-6))
    }));

    out.push(CheckSpec::new(s, "kz.closed_cycles_zero", "closed cycles alone give the zero solution at n = 2ℓ", || {
        let ps = ParamSet::numeric_default(4, 2).map_err(err)?;
        let a = psi_sv(&ps, &cycles(&ps, 2)?).map_err(err)?;
        Ok(Outcome::numeric(a.psi.sup_norm() / a.scale, 1e-8))
    }));

    out.push(CheckSpec::new(s, "kz.factor_four", "open-contour solution is four times the short formula", || {
        let mut worst: f64 = 0.0;
        for n in [2usize, 4] {
            let ps = ParamSet::numeric_default(n, n / 2).map_err(err)?;
            let cs = cycles(&ps, n / 2 - 1)?;
            let short = psi_s(&ps, &cs).map_err(err)?.psi;
            for k in [0, n - 1] {
                let mut contours = cs.clone();
                contours.push(gamma_inf(&ps, k).map_err(err)?);
                let long = psi_sv(&ps, &contours).map_err(err)?.psi;
                worst = worst.max(long.sub(&short.scaled(C64::new(4.0, 0.0))).sup_norm() / long.sup_norm());
            }
        }
        Ok(Outcome::numeric(worst, 1e-6))
    }));

    for (ell, short) in [(1usize, false), (2, false), (2, true)] {
        let id = match (ell, short) {
            (1, _) => "kz.residual.n4_l1",
            (_, false) => "kz.residual.n4_l2",
            _ => "kz.residual.n4_l2_short",
        };
        out.push(CheckSpec::new(s, id, "KZ differential equation by central differences", move || {
            let ps = ParamSet::numeric_default(4, ell).map_err(err)?;
            let build = move |q: &ParamSet| -> Result<StateVector, KzError> {
                let z = q.z_c64();
                let mut cs = vec![basis_cycle(&z, 0, 0.3)?];
                if short {
                    return Ok(psi_s(q, &cs)?.psi);
                }
                if ell == 2 {
                    cs.push(gamma_inf(q, 0)?);
                }
                Ok(psi_sv(q, &cs)?.psi)
            };
            let step = Gq::frac(1, 10_000);
            let mut worst: f64 = 0.0;
            for j in 0..4 {
                worst = worst.max(check_kz(&ps, j, &step, &build).map_err(err)?.residual);
            }
            Ok(Outcome::numeric(worst, 1e-5))
        }));
    }

    out.push(CheckSpec::new(s, "kz.classical_limit", "ħ → 0 limit of the quantum weight functions", || {
        let ps = ParamSet::numeric_default(4, 2).map_err(err)?;
        let mut worst_order = f64::INFINITY;
        for m in subsets(4, 2) {
            worst_order = worst_order.min(classical_limit(&ps, &m, &[3, 4, 5, 6]).map_err(err)?.min_order());
        }
        // residual: how far the observed order falls short of one
        Ok(Outcome::numeric((1.0 - worst_order).max(0.0), 0.1).with_note(format!("observed order {worst_order:.3}")))
    }));

    out
}
