//! Vanishing laws and closed forms of the one-variable hypergeometric integrals.

use num_complex::Complex64 as C64;

use crate::config::{RunConfig, Suite};
use crate::cycles::{constant_one, random_periodic, theta, PeriodicFn};
use crate::exact::bases::{d_apply, mu, nu_fun, nu_tilde};
use crate::exact::{subsets, GaussianRational as Gq, Linear, MultiRatFun, ParamSet, Subset};
use crate::hyperint::{contour_for, hyper_i_many, hyper_i_many_on, phase_phi, ContourKind, ContourOptions, IntegralSetup, QuadResult, Tolerance};

use super::{err, CheckSpec, Outcome};

fn inv_at(z: &Gq) -> Result<MultiRatFun, String> {
    MultiRatFun::inv_linear(&Linear::var_shift(1, 0, -z)).map_err(err)
}

/// Six decaying functions with simple poles at the points, on three instances.
fn decaying_functions() -> Result<Vec<(ParamSet, MultiRatFun)>, String> {
    let mut out = Vec::new();
    let ps3 = ParamSet::numeric_default(3, 1).map_err(err)?;
    out.push((ps3.clone(), inv_at(&ps3.z[0])?));
    out.push((ps3.clone(), mu(&ps3, &Subset::new(vec![1]), 1).map_err(err)?));
    let ps4 = ParamSet::numeric_default(4, 2).map_err(err)?;
    out.push((ps4.clone(), MultiRatFun::one(1)));
    out.push((ps4.clone(), mu(&ps4, &Subset::new(vec![0, 2]), 2).map_err(err)?));
    let mixed = inv_at(&ps4.z[1])?.mul(&inv_at(&ps4.z[3])?).mul_linear(&Linear::var_shift(1, 0, Gq::int(1)));
    out.push((ps4, mixed));
    let skew = ParamSet::numeric_skewed(5, 2).map_err(err)?;
    out.push((skew.clone(), mu(&skew, &Subset::new(vec![1, 4]), 4).map_err(err)?));
    Ok(out)
}

/// Largest `|I| / ∫|integrand|` over a table of integrals that should vanish.
fn worst_cancellation<'a>(rs: impl IntoIterator<Item = &'a QuadResult>) -> f64 {
    rs.into_iter().map(|r| r.value().norm() / r.abs_integral.max(1e-300)).fold(0.0, f64::max)
}

fn cycles(ps: &ParamSet, hat: bool, seed: u64, count: u64) -> Vec<PeriodicFn> {
    (0..count).map(|s| random_periodic(ps, hat, seed + s)).collect()
}

pub(super) fn checks(cfg: &RunConfig) -> Vec<CheckSpec> {
    let seed = cfg.seed.wrapping_mul(1000);
    let s = Suite::Analytic;
    let mut out = Vec::new();

    out.push(CheckSpec::new(s, "analytic.trivial_cycles", "integrals against the constant and Θ cycles vanish", move || {
        let mut worst: f64 = 0.0;
        for (ps, w) in decaying_functions()? {
            let table = hyper_i_many(&ps, &[w], &[constant_one(&ps), theta(&ps)], IntegralSetup::default()).map_err(err)?;
            worst = worst.max(worst_cancellation(&table[0]));
        }
        Ok(Outcome::numeric(worst, 1e-8))
    }));

    out.push(CheckSpec::new(s, "analytic.total_differences", "total differences integrate to zero against decaying cycles", move || {
        let mut worst: f64 = 0.0;
        for (n, ell) in [(3usize, 1usize), (4, 2), (5, 2)] {
            let ps = ParamSet::numeric_default(n, ell).map_err(err)?;
            let cs = cycles(&ps, true, seed + 200, 3);
            let ws = subsets(n, ell).iter().map(|m| d_apply(&ps, &nu_fun(&ps, m))).collect::<Result<Vec<_>, _>>().map_err(err)?;
            worst = worst.max(worst_cancellation(hyper_i_many(&ps, &ws, &cs, IntegralSetup::default()).map_err(err)?.iter().flatten()));
            let dmu = d_apply(&ps, &mu(&ps, &Subset::first(ell), 0).map_err(err)?).map_err(err)?;
            let setup = IntegralSetup::with_kind(ContourKind::TotalDifference);
            worst = worst.max(worst_cancellation(&hyper_i_many(&ps, &[dmu], &cs, setup).map_err(err)?[0]));
        }
        Ok(Outcome::numeric(worst, 1e-8))
    }));

    out.push(CheckSpec::new(s, "analytic.small_remainder", "differences with a fast-decaying remainder integrate to zero", move || {
        let mut worst: f64 = 0.0;
        for (n, ell) in [(3usize, 1usize), (4, 2)] {
            let ps = ParamSet::numeric_default(n, ell).map_err(err)?;
            let cs = cycles(&ps, false, seed + 300, 3);
            let mut fs = vec![MultiRatFun::one(1)];
            if ell >= 2 {
                fs.push(MultiRatFun::linear(&Linear::var_shift(1, 0, Gq::frac(1, 3))));
            }
            let three_h = &(&ps.hbar + &ps.hbar) + &ps.hbar;
            fs.push(inv_at(&(&ps.z[0] + &three_h))?);
            let ws = fs.iter().map(|f| d_apply(&ps, f)).collect::<Result<Vec<_>, _>>().map_err(err)?;
            let setup = IntegralSetup::with_kind(ContourKind::ShiftedDifference);
            worst = worst.max(worst_cancellation(hyper_i_many(&ps, &ws, &cs, setup).map_err(err)?.iter().flatten()));
        }
        Ok(Outcome::numeric(worst, 1e-8))
    }));

    out.push(CheckSpec::new(s, "analytic.contour_choice", "integrals do not depend on the separating contour", move || {
        let mut worst: f64 = 0.0;
        for ps in [ParamSet::numeric_default(4, 1).map_err(err)?, ParamSet::numeric_skewed(4, 1).map_err(err)?] {
            let cs = vec![random_periodic(&ps, false, seed + 400), random_periodic(&ps, true, seed + 401)];
            let ws = (0..4).map(|k| mu(&ps, &Subset::new(vec![k]), k)).collect::<Result<Vec<_>, _>>().map_err(err)?;
            let base = contour_for(&ps, ContourKind::Standard, ContourOptions::default()).map_err(err)?;
            let tol = Tolerance::default();
            let reference = hyper_i_many_on(&ps, &ws, &cs, &base, tol).map_err(err)?;
            let step = ps.p_c64().norm();
            for (shift, radius) in [(0.35 * step, 0.45), (-0.6 * step, 0.3), (1.15 * step, 0.4)] {
                let opts = ContourOptions { baseline: Some(base.baseline + shift), radius_factor: radius, ..Default::default() };
                let other = contour_for(&ps, ContourKind::Standard, opts).map_err(err)?;
                let table = hyper_i_many_on(&ps, &ws, &cs, &other, tol).map_err(err)?;
                for (a, b) in reference.iter().flatten().zip(table.iter().flatten()) {
                    worst = worst.max((a.value() - b.value()).norm() / (1.0 + a.value().norm()));
                }
            }
        }
        Ok(Outcome::numeric(worst, 1e-9))
    }));

    out.push(CheckSpec::new(s, "analytic.jump_formula", "singlet ν̃_M integrates to p^(ℓ+1) times the jump of W", move || {
        let mut worst: f64 = 0.0;
        for n in [2usize, 4] {
            let ps = ParamSet::numeric_default(n, n / 2).map_err(err)?;
            let cs = cycles(&ps, false, seed + 100, 5);
            let ws = subsets(n, n / 2).iter().map(|m| nu_tilde(&ps, m)).collect::<Result<Vec<_>, _>>().map_err(err)?;
            let table = hyper_i_many(&ps, &ws, &cs, IntegralSetup::default()).map_err(err)?;
            let p = ps.p_c64();
            for row in &table {
                for (r, c) in row.iter().zip(&cs) {
                    let (minus, plus) = c.limits();
                    let expect = p.powu(n as u32 / 2 + 1) * (minus - plus);
                    worst = worst.max((r.value() - expect).norm() / expect.norm());
                }
            }
        }
        Ok(Outcome::numeric(worst, 1e-6))
    }));

    out.push(CheckSpec::new(s, "analytic.phase_asymptotics", "power-law decay of the phase function", move || {
        let mut worst: f64 = 0.0;
        let mut monotone = true;
        for n in [2usize, 3, 4, 5] {
            let ps = ParamSet::numeric_default(n, 1).map_err(err)?;
            let p = ps.p_c64();
            let dir = p / p.norm() * C64::new(0.0, 1.0);
            let mut last = f64::INFINITY;
            for r in [1e2, 1e3, 1e4] {
                let t = dir * r;
                let dev = (phase_phi(&ps, t).map_err(err)? * (t / p).powf(n as f64 / 2.0) - 1.0).norm();
                monotone &= dev < last;
                if r == 1e3 {
                    worst = worst.max(dev);
                }
                last = dev;
            }
        }
        let o = Outcome::numeric(if monotone { worst } else { f64::INFINITY }, 0.05);
        Ok(if monotone { o } else { o.with_note("deviation does not decrease with |t|") })
    }));

    out
}
