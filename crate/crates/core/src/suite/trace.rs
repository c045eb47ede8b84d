//! Trace integrals against the solutions built from the matching periodic function.

use num_complex::Complex64 as C64;

use crate::config::{RunConfig, Suite};
use crate::exact::ParamSet;
use crate::hyperint::{ContourOptions, IntegralSetup, Tolerance};
use crate::trace::{compare_trace_with_psi, omega_trace_all, TraceParams};

use super::{err, CheckSpec, Outcome};

fn params(n: usize, ell: usize) -> Result<TraceParams, String> {
    let ps = ParamSet::numeric_default(n, ell).map_err(err)?;
    let zeta = (0..n - 2 * ell).map(|k| C64::new(0.5 + 0.3 * k as f64, 0.25 - 0.1 * k as f64)).collect();
    TraceParams::new(ps, zeta).map_err(err)
}

pub(super) fn checks(_cfg: &RunConfig) -> Vec<CheckSpec> {
    let s = Suite::Trace;
    let mut out = Vec::new();

    out.push(CheckSpec::new(s, "trace.identity.printed_constant", "trace equals ψ_W for the example cycle, constant as printed", || {
        let r = compare_trace_with_psi(&params(3, 1)?, IntegralSetup::default()).map_err(err)?;
        Ok(Outcome::numeric(r.max_rel_deviation, 1e-4).with_note(format!("trace/ψ_W ratio {:.6}{:+.6}i", r.ratio.re, r.ratio.im)))
    }));

    out.push(CheckSpec::new(s, "trace.identity.shape", "trace equals ψ_W for the example cycle up to (−1/2)^(ℓ(n−2ℓ))", || {
        let mut worst: f64 = 0.0;
        for n in [3usize, 4, 5] {
            let r = compare_trace_with_psi(&params(n, 1)?, IntegralSetup::default()).map_err(err)?;
            worst = worst.max(r.deviation_with(C64::new(-0.5, 0.0).powu((n - 2) as u32)));
        }
        Ok(Outcome::numeric(worst, 1e-4))
    }));

    out.push(CheckSpec::new(s, "trace.contour_choice", "trace integral does not depend on the separating contour", || {
        let tp = params(3, 1)?;
        let base = omega_trace_all(&tp, ContourOptions::default(), Tolerance::default()).map_err(err)?;
        let top = base.components.iter().map(|c| c.1.norm()).fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for level in [-0.35, 0.3] {
            let opts = ContourOptions { baseline: Some(level), ..Default::default() };
            let moved = omega_trace_all(&tp, opts, Tolerance::default()).map_err(err)?;
            for (a, b) in base.components.iter().zip(&moved.components) {
                worst = worst.max((a.1 - b.1).norm() / top);
            }
        }
        Ok(Outcome::numeric(worst, 1e-8))
    }));

    out.push(CheckSpec::new(s, "trace.no_extra_points", "trace vanishes when n = 2ℓ", || {
        let tp = params(2, 1)?;
        let o = omega_trace_all(&tp, ContourOptions::default(), Tolerance::default()).map_err(err)?;
        let biggest = o.components.iter().map(|c| c.1.norm()).fold(0.0, f64::max);
        Ok(Outcome::numeric(biggest / o.scale, 1e-8))
    }));

    out
}
