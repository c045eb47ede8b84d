//! Hypergeometric integrals `∫ φ w W dt` over contours separating two pole
//! lattices, together with the Gamma-function and quadrature machinery.

pub mod contour;
pub mod gamma;
pub mod quad;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::cycles::{CycleError, PeriodicFn};
use crate::exact::{ExactError, MultiRatFun, ParamSet};
use crate::qpoly::ExactPoly;

pub use contour::{build_contour, Contour, ContourOptions, Loop, Side};
pub use quad::{C64Ser, QuadResult, Rule, Tolerance, VectorQuad};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HyperError {
    #[error("argument is a pole of the Gamma function")]
    PoleOfGamma,
    #[error("integrand is not finite on the contour")]
    NonFiniteValue,
    #[error("quadrature did not converge (error estimate {error:e})")]
    NoConvergence { error: f64 },
    #[error("point {re}{im:+}i is required on both sides of the contour")]
    Unseparable { re: f64, im: f64 },
    #[error("no horizontal gap between the lattices")]
    BandOverflow,
    #[error("point {re}{im:+}i is too close to the contour")]
    ClearanceTooSmall { re: f64, im: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("{0} integration variables requested, at most 2 are supported")]
    ArityTooLarge(usize),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// The phase function `φ(t) = ∏_j Γ((t−z_j−ħ)/p) / Γ((t−z_j)/p)`, evaluated in log space.
#[derive(Clone, Debug)]
pub struct Phase {
    z: Vec<C64>,
    p: C64,
    delta: C64,
}

impl Phase {
    pub fn new(ps: &ParamSet) -> Result<Self, HyperError> {
        let p = ps.p_c64();
        if p.im >= 0.0 {
            return Err(HyperError::PreconditionViolated("the step p needs a negative imaginary part".into()));
        }
        Ok(Phase { z: ps.z_c64(), p, delta: -ps.hbar_c64() / p })
    }

    /// `ln φ(t)` up to multiples of `2πi`.
    pub fn ln(&self, t: C64) -> Result<C64, HyperError> {
        let mut acc = C64::new(0.0, 0.0);
        for zj in &self.z {
            acc += gamma::log_gamma_ratio((t - zj) / self.p, self.delta)?;
        }
        Ok(acc)
    }

    pub fn eval(&self, t: C64) -> Result<C64, HyperError> {
        Ok(self.ln(t)?.exp())
    }
}

/// `φ(t)` for one parameter set.
pub fn phase_phi(ps: &ParamSet, t: C64) -> Result<C64, HyperError> {
    Phase::new(ps)?.eval(t)
}

/// Which lattices a contour separates: the upper lattice `z_j + ħ + p·k, k ≤ upper`
/// stays above and the lower lattice `z_j − p·k, k ≤ lower` stays below.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum ContourKind {
    /// Levels (1, 1), the default contour.
    Standard,
    /// Levels (0, 0), enough for convergence and for the vanishing on `Q`.
    Weak,
    /// Levels (0, 1), for total differences against decaying cycles.
    TotalDifference,
    /// Levels (1, 0), for total differences of functions with a pole one step up.
    ShiftedDifference,
    /// Levels (0, −1), for polynomial integrands.
    Polynomial,
}

impl ContourKind {
    pub fn levels(self) -> (i64, i64) {
        match self {
            ContourKind::Standard => (1, 1),
            ContourKind::Weak => (0, 0),
            ContourKind::TotalDifference => (0, 1),
            ContourKind::ShiftedDifference => (1, 0),
            ContourKind::Polynomial => (0, -1),
        }
    }
}

fn lattice_depth(level: i64) -> i64 {
    6 + level.abs()
}

/// Window of the upper lattice `z_j + ħ + p·k`, `level − depth ≤ k ≤ level`.
pub fn upper_lattice(ps: &ParamSet, level: i64) -> Vec<C64> {
    let (h, p) = (ps.hbar_c64(), ps.p_c64());
    let mut out = Vec::new();
    for zj in ps.z_c64() {
        for k in (level - lattice_depth(level))..=level {
            out.push(zj + h + p * k as f64);
        }
    }
    out
}

/// Window of the lower lattice `z_j − p·k`, `level − depth ≤ k ≤ level`.
pub fn lower_lattice(ps: &ParamSet, level: i64) -> Vec<C64> {
    let p = ps.p_c64();
    let mut out = Vec::new();
    for zj in ps.z_c64() {
        for k in (level - lattice_depth(level))..=level {
            out.push(zj - p * k as f64);
        }
    }
    out
}

/// A contour of the given kind for the points of `ps`.
pub fn contour_for(ps: &ParamSet, kind: ContourKind, opts: ContourOptions) -> Result<Contour, HyperError> {
    if ps.p_c64().im >= 0.0 {
        return Err(HyperError::PreconditionViolated("the step p needs a negative imaginary part".into()));
    }
    let (up, down) = kind.levels();
    build_contour(&upper_lattice(ps, up), &lower_lattice(ps, down), opts)
}

/// Everything an integral needs besides its integrand.
#[derive(Clone, Copy, Debug)]
pub struct IntegralSetup {
    pub kind: ContourKind,
    pub contour: ContourOptions,
    pub tol: Tolerance,
}

impl Default for IntegralSetup {
    fn default() -> Self {
        IntegralSetup { kind: ContourKind::Standard, contour: ContourOptions::default(), tol: Tolerance::default() }
    }
}

impl IntegralSetup {
    pub fn with_kind(kind: ContourKind) -> Self {
        IntegralSetup { kind, ..Default::default() }
    }
}

/// Convergence condition: `w` must grow at most like `t^{ℓ−2}` unless `W` decays at both ends.
fn check_growth(ps: &ParamSet, w: &MultiRatFun, big_w: &PeriodicFn) -> Result<(), HyperError> {
    if big_w.in_hat_space() {
        return Ok(());
    }
    if let Some(d) = w.degree_in(0) {
        if d > ps.ell as i64 - 2 {
            return Err(HyperError::PreconditionViolated(format!(
                "integrand grows like t^{d} against a cycle with nonzero limits (weight {})",
                ps.ell
            )));
        }
    }
    Ok(())
}

fn check_univariate(w: &MultiRatFun) -> Result<(), HyperError> {
    if w.arity() != 1 {
        return Err(HyperError::PreconditionViolated(format!("expected a function of one variable, got arity {}", w.arity())));
    }
    Ok(())
}

/// `I(w, W) = ∫_C φ w W dt`.
pub fn hyper_i(ps: &ParamSet, w: &MultiRatFun, big_w: &PeriodicFn, setup: IntegralSetup) -> Result<QuadResult, HyperError> {
    let table = hyper_i_many(ps, std::slice::from_ref(w), std::slice::from_ref(big_w), setup)?;
    Ok(table[0][0].clone())
}

/// The table `I(w_i, W_j)` from one vector-valued quadrature.
pub fn hyper_i_many(
    ps: &ParamSet,
    ws: &[MultiRatFun],
    cycles: &[PeriodicFn],
    setup: IntegralSetup,
) -> Result<Vec<Vec<QuadResult>>, HyperError> {
    for w in ws {
        check_univariate(w)?;
        for c in cycles {
            check_growth(ps, w, c)?;
        }
    }
    let contour = contour_for(ps, setup.kind, setup.contour)?;
    hyper_i_many_on(ps, ws, cycles, &contour, setup.tol)
}

/// [`hyper_i_many`] on a given contour.
pub fn hyper_i_many_on(
    ps: &ParamSet,
    ws: &[MultiRatFun],
    cycles: &[PeriodicFn],
    contour: &Contour,
    tol: Tolerance,
) -> Result<Vec<Vec<QuadResult>>, HyperError> {
    let phase = Phase::new(ps)?;
    let numeric: Vec<_> = ws.iter().map(MultiRatFun::to_numeric).collect();
    let f = |t: C64| -> Result<Vec<C64>, HyperError> {
        let ph = phase.eval(t)?;
        let cyc: Vec<C64> = cycles.iter().map(|c| c.eval(t)).collect::<Result<_, _>>()?;
        let mut out = Vec::with_capacity(ws.len() * cycles.len());
        for w in &numeric {
            let pw = ph * w.eval1(t);
            out.extend(cyc.iter().map(|c| pw * c));
        }
        Ok(out)
    };
    let q = contour.integrate(ws.len() * cycles.len(), &f, tol)?;
    Ok((0..ws.len()).map(|i| (0..cycles.len()).map(|j| q.result(i * cycles.len() + j)).collect()).collect())
}

/// `I(Q, W)` for polynomials `Q` over the contour for polynomial integrands;
/// the cycles have to decay at both ends.
pub fn hyper_i_poly_many(
    ps: &ParamSet,
    polys: &[ExactPoly],
    cycles: &[PeriodicFn],
    opts: ContourOptions,
    tol: Tolerance,
) -> Result<Vec<Vec<QuadResult>>, HyperError> {
    for c in cycles {
        if !c.in_hat_space() {
            return Err(HyperError::PreconditionViolated("polynomial integrands need cycles with vanishing limits".into()));
        }
    }
    let contour = contour_for(ps, ContourKind::Polynomial, opts)?;
    let phase = Phase::new(ps)?;
    let f = |t: C64| -> Result<Vec<C64>, HyperError> {
        let ph = phase.eval(t)?;
        let cyc: Vec<C64> = cycles.iter().map(|c| c.eval(t)).collect::<Result<_, _>>()?;
        let mut out = Vec::with_capacity(polys.len() * cycles.len());
        for q in polys {
            let pq = ph * q.eval_c64(t);
            out.extend(cyc.iter().map(|c| pq * c));
        }
        Ok(out)
    };
    let q = contour.integrate(polys.len() * cycles.len(), &f, tol)?;
    Ok((0..polys.len()).map(|i| (0..cycles.len()).map(|j| q.result(i * cycles.len() + j)).collect()).collect())
}

/// `I(Q, W)` for one polynomial.
pub fn hyper_i_poly(ps: &ParamSet, q: &ExactPoly, big_w: &PeriodicFn, opts: ContourOptions) -> Result<QuadResult, HyperError> {
    if q.is_zero() {
        return Ok(QuadResult {
            value: C64Ser(C64::new(0.0, 0.0)),
            error_estimate: 0.0,
            evaluations: 0,
            tail_bound: 0.0,
            abs_integral: 0.0,
        });
    }
    let table = hyper_i_poly_many(ps, std::slice::from_ref(q), std::slice::from_ref(big_w), opts, Tolerance::default())?;
    Ok(table[0][0].clone())
}

/// `∫_{C^ℓ} w(t_1,…,t_ℓ) ∏_a φ(t_a) W_a(t_a) dt_a` for each `w` in `ws`, by an
/// iterated rule over the same contour in every variable (`ℓ ≤ 2`).
///
/// The one-dimensional rule is refined until it resolves `φ W_a` times every
/// simple fraction `1/(t−z_j)` and every power `t^k` up to the growth of `ws`,
/// which spans all one-variable slices of the integrands.
pub fn hyper_i_tensor(
    ps: &ParamSet,
    ws: &[MultiRatFun],
    factors: &[PeriodicFn],
    setup: IntegralSetup,
) -> Result<Vec<TensorValue>, HyperError> {
    let ell = factors.len();
    if ell > 2 {
        return Err(HyperError::ArityTooLarge(ell));
    }
    for w in ws {
        if w.arity() != ell {
            return Err(HyperError::PreconditionViolated(format!("integrand arity {} for {} cycles", w.arity(), ell)));
        }
    }
    if ell == 0 {
        return ws
            .iter()
            .map(|w| {
                let v = w.constant_value()?.to_c64();
                Ok(TensorValue { value: v, abs_integral: v.norm() })
            })
            .collect();
    }
    let mut top_degree = -1i64;
    for w in ws {
        for a in 0..ell {
            let d = w.degree_in(a).unwrap_or(-1);
            top_degree = top_degree.max(d);
            if d > ps.ell as i64 - 2 && !factors[a].in_hat_space() {
                return Err(HyperError::PreconditionViolated(format!("integrand grows like t^{d} in variable {}", a + 1)));
            }
        }
    }
    let contour = contour_for(ps, setup.kind, setup.contour)?;
    let phase = Phase::new(ps)?;
    let z = ps.z_c64();
    let probe = |t: C64| -> Result<Vec<C64>, HyperError> {
        let ph = phase.eval(t)?;
        let mut out = Vec::new();
        for c in factors {
            let base = ph * c.eval(t)?;
            for zj in &z {
                out.push(base / (t - zj));
            }
            // powers only up to the actual growth: t^0 alone need not be integrable
            let mut pw = base;
            for _ in 0..=top_degree {
                out.push(pw);
                pw *= t;
            }
        }
        Ok(out)
    };
    let dim = factors.len() * (z.len() + (top_degree + 1) as usize);
    let rule = contour.rule(dim, &probe, setup.tol)?;
    // weighted values of φ W_a at the nodes
    let weighted: Vec<Vec<C64>> = factors
        .iter()
        .map(|c| {
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&t, &wt)| Ok(phase.eval(t)? * c.eval(t)? * wt))
                .collect::<Result<Vec<_>, HyperError>>()
        })
        .collect::<Result<_, _>>()?;
    let numeric: Vec<_> = ws.iter().map(MultiRatFun::to_numeric).collect();
    let zero = TensorValue { value: C64::new(0.0, 0.0), abs_integral: 0.0 };
    let mut out = vec![zero; ws.len()];
    if ell == 1 {
        for (o, w) in out.iter_mut().zip(&numeric) {
            for (&t, &a) in rule.nodes.iter().zip(&weighted[0]) {
                let v = w.eval1(t) * a;
                o.value += v;
                o.abs_integral += v.norm();
            }
        }
    } else {
        // rows of the double sum in parallel, then a fixed-order reduction
        let rows: Vec<Vec<(C64, f64)>> = (0..rule.len())
            .into_par_iter()
            .map(|i| {
                let t1 = rule.nodes[i];
                let a1 = weighted[0][i];
                numeric
                    .iter()
                    .map(|w| {
                        let mut inner = C64::new(0.0, 0.0);
                        let mut abs = 0.0;
                        for (&t2, &a2) in rule.nodes.iter().zip(&weighted[1]) {
                            let v = w.eval(&[t1, t2]) * a2;
                            inner += v;
                            abs += v.norm();
                        }
                        (inner * a1, abs * a1.norm())
                    })
                    .collect()
            })
            .collect();
        for row in rows {
            for (o, (v, a)) in out.iter_mut().zip(row) {
                o.value += v;
                o.abs_integral += a;
            }
        }
    }
    if out.iter().any(|v| !v.value.re.is_finite() || !v.value.im.is_finite()) {
        return Err(HyperError::NonFiniteValue);
    }
    Ok(out)
}

/// Value of a multiple integral with the matching `∫|f|` scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TensorValue {
    pub value: C64,
    pub abs_integral: f64,
}
