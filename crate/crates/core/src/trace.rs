//! Trace integrals of products of vertex operators in the sector without
//! auxiliary integration variables, and their comparison with the solutions
//! `ψ_W` built from the matching periodic functions.

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::cycles::{named_w, NamedW};
use crate::exact::{subsets, ParamSet, Subset};
use crate::hyperint::gamma::{log_gamma, log_sin};
use crate::hyperint::{build_contour, Contour, ContourOptions, HyperError, IntegralSetup, Tolerance};
use crate::qkz::{assemble_psi, Method, QkzError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TraceError {
    #[error("{0} integration variables requested, at most 2 are supported")]
    ArityTooLarge(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Hyper(#[from] HyperError),
    #[error(transparent)]
    Qkz(#[from] QkzError),
}

/// Points `β` (the `z` of the parameter set), the extra points `ζ` and the period.
#[derive(Clone, Debug)]
pub struct TraceParams {
    pub ps: ParamSet,
    pub zeta: Vec<C64>,
    pub period: C64,
}

impl TraceParams {
    /// The period is tied to the step `p`; `ζ` must have `n − 2ℓ` entries.
    pub fn new(ps: ParamSet, zeta: Vec<C64>) -> Result<Self, TraceError> {
        if ps.n < 2 * ps.ell || zeta.len() != ps.n - 2 * ps.ell {
            return Err(TraceError::PreconditionViolated(format!(
                "weight matching needs n − 2ℓ = #ζ, got n = {}, ℓ = {}, #ζ = {}",
                ps.n,
                ps.ell,
                zeta.len()
            )));
        }
        let period = ps.p_c64();
        if period.im >= 0.0 {
            return Err(TraceError::PreconditionViolated("the step p needs a negative imaginary part".into()));
        }
        Ok(TraceParams { ps, zeta, period })
    }

    fn beta(&self) -> Vec<C64> {
        self.ps.z_c64()
    }
}

/// `P_M(v; β) = ∏_a ∏_{j>m_a}(v_a − β_j) ∏_{j<m_a}(v_a − β_j − ħ)`.
pub fn smirnov_poly_p(ps: &ParamSet, m: &Subset, v: &[C64]) -> Result<C64, TraceError> {
    if m.len() != v.len() {
        return Err(TraceError::PreconditionViolated(format!("{} variables for a subset of size {}", v.len(), m.len())));
    }
    let beta = ps.z_c64();
    let h = ps.hbar_c64();
    let mut acc = C64::new(1.0, 0.0);
    for (&ma, &va) in m.elems().iter().zip(v) {
        for (j, bj) in beta.iter().enumerate() {
            if j > ma {
                acc *= va - bj;
            } else if j < ma {
                acc *= va - bj - h;
            }
        }
    }
    Ok(acc)
}

/// `ln` of the one-variable part `∏_j Γ((β_j−v)/γ) Γ((v−β_j−ħ)/γ) · ∏_i sin(π(v−ζ_i−ħ)/γ)`.
fn ln_single(tp: &TraceParams, v: C64) -> Result<C64, HyperError> {
    let g = tp.period;
    let h = tp.ps.hbar_c64();
    let mut acc = C64::new(0.0, 0.0);
    for bj in tp.beta() {
        acc += log_gamma((bj - v) / g)? + log_gamma((v - bj - h) / g)?;
    }
    for zi in &tp.zeta {
        acc += log_sin(PI * (v - zi - h) / g);
    }
    Ok(acc)
}

/// `sin(π(v₁−v₂)/γ) / (Γ((v₁−v₂−ħ)/γ) Γ(1+(v₂−v₁−ħ)/γ))`.
fn pair_factor(tp: &TraceParams, v1: C64, v2: C64) -> Result<C64, HyperError> {
    let g = tp.period;
    let h = tp.ps.hbar_c64();
    let d = v1 - v2;
    let mut ln = log_sin(PI * d / g);
    for x in [(d - h) / g, 1.0 + (-d - h) / g] {
        match log_gamma(x) {
            Ok(lg) => ln -= lg,
            // 1/Γ vanishes at the poles of Γ
            Err(HyperError::PoleOfGamma) => return Ok(C64::new(0.0, 0.0)),
            Err(e) => return Err(e),
        }
    }
    Ok(ln.exp())
}

/// The phase prefactor `∏_j e^{iπℓβ_j/γ} ∏_i e^{−iπℓζ_i/γ}`.
pub fn trace_prefactor(tp: &TraceParams) -> C64 {
    let ell = tp.ps.ell as f64;
    let i = C64::new(0.0, 1.0);
    let mut arg = C64::new(0.0, 0.0);
    for bj in tp.beta() {
        arg += i * PI * ell * bj / tp.period;
    }
    for zi in &tp.zeta {
        arg -= i * PI * ell * zi / tp.period;
    }
    arg.exp()
}

/// Contour separating `β_j + ħ − γ·k` (above) from `β_j + γ·k` (below), `k ≥ 0`.
pub fn trace_contour(tp: &TraceParams, opts: ContourOptions) -> Result<Contour, TraceError> {
    let h = tp.ps.hbar_c64();
    let g = tp.period;
    let mut above = Vec::new();
    let mut below = Vec::new();
    for bj in tp.beta() {
        for k in 0..8 {
            above.push(bj + h - g * k as f64);
            below.push(bj + g * k as f64);
        }
    }
    Ok(build_contour(&above, &below, opts)?)
}

/// Components `Ω_M` in the order of [`subsets`], with `scale` the largest
/// `∫|integrand|` (prefactor included) for judging cancellations.
#[derive(Clone, Debug)]
pub struct OmegaTable {
    pub components: Vec<(Subset, C64)>,
    pub scale: f64,
}

/// All components `Ω_M`, `#M = ℓ`.
pub fn omega_trace_all(tp: &TraceParams, opts: ContourOptions, tol: Tolerance) -> Result<OmegaTable, TraceError> {
    let ell = tp.ps.ell;
    let n = tp.ps.n;
    let ms = subsets(n, ell);
    let pre = trace_prefactor(tp);
    match ell {
        0 => Ok(OmegaTable { components: ms.into_iter().map(|m| (m, pre)).collect(), scale: pre.norm() }),
        1 => {
            let contour = trace_contour(tp, opts)?;
            let f = |v: C64| -> Result<Vec<C64>, HyperError> {
                let single = ln_single(tp, v)?.exp();
                ms.iter()
                    .map(|m| {
                        let poly = smirnov_poly_p(&tp.ps, m, &[v]).map_err(|e| HyperError::PreconditionViolated(e.to_string()))?;
                        Ok(single * poly)
                    })
                    .collect()
            };
            let q = contour.integrate(ms.len(), &f, tol)?;
            let scale = q.abs.iter().fold(0.0, |a: f64, &b| a.max(b)) * pre.norm();
            Ok(OmegaTable { components: ms.iter().cloned().zip(q.value.iter().map(|v| pre * v)).collect(), scale })
        }
        2 => {
            let contour = trace_contour(tp, opts)?;
            // one rule resolving the one-variable part against every power the
            // polynomial can carry; the double integral is the product rule
            let probe = |v: C64| -> Result<Vec<C64>, HyperError> {
                let single = ln_single(tp, v)?.exp();
                Ok((0..=n + 2).map(|k| single * v.powu(k as u32)).collect())
            };
            let rule = contour.rule(n + 3, &probe, tol)?;
            let singles: Vec<C64> = rule.nodes.iter().map(|&v| ln_single(tp, v).map(|x| x.exp())).collect::<Result<_, _>>()?;
            let len = rule.len();
            let rows: Vec<(Vec<C64>, Vec<f64>)> = (0..len)
                .into_par_iter()
                .map(|a| -> Result<(Vec<C64>, Vec<f64>), TraceError> {
                    let mut acc = vec![C64::new(0.0, 0.0); ms.len()];
                    let mut abs = vec![0.0; ms.len()];
                    let va = rule.nodes[a];
                    for b in 0..len {
                        let vb = rule.nodes[b];
                        let w = rule.weights[a] * rule.weights[b] * singles[a] * singles[b];
                        if w == C64::new(0.0, 0.0) {
                            continue;
                        }
                        let pair = pair_factor(tp, va, vb)?;
                        for (k, m) in ms.iter().enumerate() {
                            let term = w * pair * smirnov_poly_p(&tp.ps, m, &[va, vb])?;
                            acc[k] += term;
                            abs[k] += term.norm();
                        }
                    }
                    Ok((acc, abs))
                })
                .collect::<Result<_, _>>()?;
            // summed in node order so the result does not depend on scheduling
            let mut total = vec![C64::new(0.0, 0.0); ms.len()];
            let mut scale: f64 = 0.0;
            let mut abs_total = vec![0.0; ms.len()];
            for (row, abs) in rows {
                for k in 0..ms.len() {
                    total[k] += row[k];
                    abs_total[k] += abs[k];
                }
            }
            for a in abs_total {
                scale = scale.max(a * pre.norm());
            }
            Ok(OmegaTable { components: ms.into_iter().zip(total.into_iter().map(|v| pre * v)).collect(), scale })
        }
        k => Err(TraceError::ArityTooLarge(k)),
    }
}

/// One component `Ω_M`.
pub fn omega_trace(tp: &TraceParams, m: &Subset, opts: ContourOptions, tol: Tolerance) -> Result<C64, TraceError> {
    if m.len() != tp.ps.ell {
        return Err(TraceError::PreconditionViolated(format!("#M = {} but ℓ = {}", m.len(), tp.ps.ell)));
    }
    let all = omega_trace_all(tp, opts, tol)?.components;
    Ok(all.into_iter().find(|(s, _)| s == m).map(|(_, v)| v).unwrap_or_default())
}

/// Componentwise comparison of the trace with the assembled solution.
#[derive(Clone, Debug)]
pub struct TraceComparison {
    pub components: Vec<(Subset, C64, C64)>,
    pub max_rel_deviation: f64,
    /// Least-squares ratio trace/assembled, useful to diagnose a constant offset.
    pub ratio: C64,
}

/// Compare `Ω_M` with the components of `ψ_W` for the example periodic function
/// built from `ζ`, constant included.
pub fn compare_trace_with_psi(tp: &TraceParams, setup: IntegralSetup) -> Result<TraceComparison, TraceError> {
    if tp.ps.ell > 1 {
        return Err(TraceError::ArityTooLarge(tp.ps.ell));
    }
    let omega = omega_trace_all(tp, setup.contour, setup.tol)?.components;
    let factors = named_w(&tp.ps, NamedW::ExtraPoints, &tp.zeta).map_err(|e| TraceError::Hyper(e.into()))?;
    let psi = assemble_psi(&tp.ps, &factors, Method::Plain, setup)?.psi;
    let components: Vec<(Subset, C64, C64)> = omega.into_iter().map(|(m, o)| {
        let a = psi.get(&m);
        (m, o, a)
    }).collect();
    let scale = components.iter().map(|c| c.2.norm()).fold(0.0, f64::max);
    let max_rel_deviation = if scale == 0.0 {
        components.iter().map(|c| c.1.norm()).fold(0.0, f64::max)
    } else {
        components.iter().map(|c| (c.1 - c.2).norm()).fold(0.0, f64::max) / scale
    };
    let num: C64 = components.iter().map(|c| c.1 * c.2.conj()).sum();
    let den: f64 = components.iter().map(|c| c.2.norm_sqr()).sum();
    let ratio = if den > 0.0 { num / den } else { C64::new(0.0, 0.0) };
    Ok(TraceComparison { components, max_rel_deviation, ratio })
}

impl TraceComparison {
    /// Largest `|Ω_M − factor·ψ_M|` relative to the largest `|factor·ψ_M|`.
    pub fn deviation_with(&self, factor: C64) -> f64 {
        let scale = self.components.iter().map(|c| (factor * c.2).norm()).fold(0.0, f64::max);
        self.components.iter().map(|c| (c.1 - factor * c.2).norm()).fold(0.0, f64::max) / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_special_cases() {
        let ps = ParamSet::numeric_default(3, 1).unwrap();
        let v = C64::new(0.3, 0.7);
        let h = ps.hbar_c64();
        let z = ps.z_c64();
        let last = smirnov_poly_p(&ps, &Subset::new(vec![2]), &[v]).unwrap();
        assert!((last - (v - z[0] - h) * (v - z[1] - h)).norm() < 1e-14);
        let middle = smirnov_poly_p(&ps, &Subset::new(vec![1]), &[v]).unwrap();
        assert!((middle - (v - z[2]) * (v - z[0] - h)).norm() < 1e-14);
        let ps0 = ParamSet::numeric_default(3, 0).unwrap();
        assert_eq!(smirnov_poly_p(&ps0, &Subset::empty(), &[]).unwrap(), C64::new(1.0, 0.0));
    }

    #[test]
    fn weight_mismatch_is_rejected() {
        let ps = ParamSet::numeric_default(3, 1).unwrap();
        assert!(TraceParams::new(ps, vec![]).is_err());
    }

    #[test]
    fn weight_zero_is_the_prefactor() {
        let ps = ParamSet::numeric_default(2, 0).unwrap();
        let tp = TraceParams::new(ps, vec![C64::new(0.5, 0.0), C64::new(1.5, 0.0)]).unwrap();
        let all = omega_trace_all(&tp, ContourOptions::default(), Tolerance::default()).unwrap().components;
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].1, trace_prefactor(&tp));
    }

    #[test]
    fn pair_factor_is_finite() {
        let ps = ParamSet::numeric_default(4, 2).unwrap();
        let tp = TraceParams::new(ps, vec![]).unwrap();
        let v = pair_factor(&tp, C64::new(0.2, 0.1), C64::new(0.7, -0.3)).unwrap();
        assert!(v.is_finite());
    }
}
