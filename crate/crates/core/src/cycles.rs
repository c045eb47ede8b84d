//! Periodic functions of `t` with period `p` ("deformed cycles").
//!
//! Every function here has the shape `P(x) / ∏_j (1 − x·e^{−2πi z_j/p})` with
//! `x = e^{2πi t/p}` and `deg P ≤ n`. Three internal representations are kept
//! because the expanded coefficients of `P` span many orders of magnitude once
//! the points are spread out; evaluation always works with the exponentials
//! `e^{2πi(t−z_j)/p}` directly.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact::ParamSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CycleError {
    #[error("{got} coefficients given, at most {max} allowed")]
    DegreeTooHigh { got: usize, max: usize },
    #[error("evaluation point lies on the pole lattice")]
    PoleHit,
    #[error("invalid combination: {0}")]
    BadCombination(String),
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    /// `P(x) = Σ c_k x^k`
    Coeffs(Vec<C64>),
    /// `W = at_minus + Σ_j r_j / (1 − e_j)`, with `at_plus = at_minus + Σ r_j` kept exactly.
    Partial { at_minus: C64, at_plus: C64, residues: Vec<C64> },
    /// `P(x) = scale · x^power · ∏_k (1 + e^{2πi(t−s_k)/p})`
    Product { scale: C64, power: usize, shifts: Vec<C64> },
}

/// A `p`-periodic function with poles on `z_j + pℤ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicFn {
    p: C64,
    z: Vec<C64>,
    repr: Repr,
}

/// `exp(2πi·u/p)` split into (value, inverse) with overflow guarded on both sides.
fn phase_pair(u: C64, p: C64) -> (C64, C64) {
    let arg = C64::new(0.0, 2.0 * PI) * u / p;
    if arg.re > 0.0 {
        let inv = (-arg).exp();
        let val = if arg.re > 700.0 { C64::new(f64::INFINITY, 0.0) } else { arg.exp() };
        (val, inv)
    } else {
        let val = arg.exp();
        let inv = if arg.re < -700.0 { C64::new(f64::INFINITY, 0.0) } else { (-arg).exp() };
        (val, inv)
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

impl PeriodicFn {
    /// From the coefficients `c_0..c_k` of `P`, `k ≤ n`.
    pub fn from_coeffs(ps: &ParamSet, coeffs: Vec<C64>) -> Result<Self, CycleError> {
        if coeffs.len() > ps.n + 1 {
            return Err(CycleError::DegreeTooHigh { got: coeffs.len(), max: ps.n + 1 });
        }
        let mut coeffs = coeffs;
        coeffs.resize(ps.n + 1, C64::new(0.0, 0.0));
        Ok(PeriodicFn { p: ps.p_c64(), z: ps.z_c64(), repr: Repr::Coeffs(coeffs) })
    }

    /// `at_minus + Σ_j r_j/(1 − e^{2πi(t−z_j)/p})`; the limit at `+∞` is `at_minus + Σ r_j`.
    pub fn from_partial(ps: &ParamSet, at_minus: C64, residues: Vec<C64>) -> Result<Self, CycleError> {
        if residues.len() != ps.n {
            return Err(CycleError::BadCombination(format!("{} residues for {} points", residues.len(), ps.n)));
        }
        let at_plus = at_minus + residues.iter().sum::<C64>();
        Ok(PeriodicFn { p: ps.p_c64(), z: ps.z_c64(), repr: Repr::Partial { at_minus, at_plus, residues } })
    }

    /// Element of the subspace with vanishing limits: `Σ r_j/(1−e_j)` with `Σ r_j = 0` exactly.
    pub fn from_balanced_residues(ps: &ParamSet, residues: Vec<C64>) -> Result<Self, CycleError> {
        if residues.len() != ps.n {
            return Err(CycleError::BadCombination(format!("{} residues for {} points", residues.len(), ps.n)));
        }
        let total: C64 = residues.iter().sum();
        if total.norm() > 1e-12 * residues.iter().map(|r| r.norm()).sum::<f64>().max(1e-300) {
            return Err(CycleError::BadCombination("residues do not sum to zero".into()));
        }
        let zero = C64::new(0.0, 0.0);
        Ok(PeriodicFn { p: ps.p_c64(), z: ps.z_c64(), repr: Repr::Partial { at_minus: zero, at_plus: zero, residues } })
    }

    /// `scale · x^power · ∏_k (1 + e^{2πi(t−s_k)/p}) / ∏_j (1 − e^{2πi(t−z_j)/p})`
    pub fn from_product(ps: &ParamSet, scale: C64, power: usize, shifts: Vec<C64>) -> Result<Self, CycleError> {
        if power + shifts.len() > ps.n {
            return Err(CycleError::DegreeTooHigh { got: power + shifts.len() + 1, max: ps.n + 1 });
        }
        Ok(PeriodicFn { p: ps.p_c64(), z: ps.z_c64(), repr: Repr::Product { scale, power, shifts } })
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn period(&self) -> C64 {
        self.p
    }

    /// `a_j = e^{−2πi z_j/p}`
    fn a(&self) -> Vec<C64> {
        self.z.iter().map(|&zj| phase_pair(-zj, self.p).0).collect()
    }

    /// Coefficients `c_0..c_n` of `P`.
    pub fn coeffs(&self) -> Vec<C64> {
        let n = self.n();
        let a = self.a();
        // polynomial helpers on coefficient vectors
        let mul_lin = |poly: &[C64], k0: C64, k1: C64| -> Vec<C64> {
            let mut out = vec![C64::new(0.0, 0.0); poly.len() + 1];
            for (i, &ci) in poly.iter().enumerate() {
                out[i] += ci * k0;
                out[i + 1] += ci * k1;
            }
            out
        };
        let mut out = match &self.repr {
            Repr::Coeffs(cs) => cs.clone(),
            Repr::Partial { at_minus, residues, .. } => {
                let mut full = vec![c(1.0)];
                for &aj in &a {
                    full = mul_lin(&full, c(1.0), -aj);
                }
                let mut acc: Vec<C64> = full.iter().map(|&x| x * at_minus).collect();
                for (j, &rj) in residues.iter().enumerate() {
                    let mut part = vec![c(1.0)];
                    for (k, &ak) in a.iter().enumerate() {
                        if k != j {
                            part = mul_lin(&part, c(1.0), -ak);
                        }
                    }
                    for (i, v) in part.iter().enumerate() {
                        acc[i] += rj * v;
                    }
                }
                acc
            }
            Repr::Product { scale, power, shifts } => {
                let mut poly = vec![C64::new(0.0, 0.0); *power];
                poly.push(*scale);
                for &s in shifts {
                    poly = mul_lin(&poly, c(1.0), phase_pair(-s, self.p).0);
                }
                poly
            }
        };
        out.resize(n + 1, C64::new(0.0, 0.0));
        out
    }

    /// Value at `t`.
    pub fn eval(&self, t: C64) -> Result<C64, CycleError> {
        let p = self.p;
        let pairs: Vec<(C64, C64)> = self.z.iter().map(|&zj| phase_pair(t - zj, p)).collect();
        for (e, _) in &pairs {
            if (C64::new(1.0, 0.0) - e).norm() < 1e-300 {
                return Err(CycleError::PoleHit);
            }
        }
        let v = match &self.repr {
            Repr::Partial { at_minus, at_plus, residues } => {
                let small = pairs.iter().all(|(e, _)| e.norm() <= 1.0);
                if small {
                    // near +∞: 1/(1−e) = 1 + e/(1−e)
                    let mut acc = *at_plus;
                    for ((e, _), r) in pairs.iter().zip(residues) {
                        acc += r * e / (c(1.0) - e);
                    }
                    acc
                } else {
                    let mut acc = *at_minus;
                    for ((e, inv), r) in pairs.iter().zip(residues) {
                        acc += if e.norm() <= 1.0 { r / (c(1.0) - e) } else { r * inv / (inv - c(1.0)) };
                    }
                    acc
                }
            }
            Repr::Product { scale, power, shifts } => {
                // pair every numerator factor with one denominator factor
                let mut acc = *scale;
                let mut j = 0;
                for &s in shifts {
                    let (e, einv) = pairs[j];
                    acc *= if e.norm() <= 1.0 {
                        (c(1.0) + phase_pair(t - s, p).0) / (c(1.0) - e)
                    } else {
                        // (1+f)/(1−e) = (einv + f·einv)/(einv − 1), f·einv = e^{2πi(z_j−s)/p}
                        let ratio = phase_pair(self.z[j] - s, p).0;
                        (einv + ratio) / (einv - c(1.0))
                    };
                    j += 1;
                }
                for _ in 0..*power {
                    let (e, einv) = pairs[j];
                    // x/(1−e) = e^{2πi z_j/p} · e/(1−e)
                    let zphase = phase_pair(self.z[j], p).0;
                    acc *= zphase * if e.norm() <= 1.0 { e / (c(1.0) - e) } else { c(1.0) / (einv - c(1.0)) };
                    j += 1;
                }
                while j < pairs.len() {
                    let (e, einv) = pairs[j];
                    acc *= if e.norm() <= 1.0 { c(1.0) / (c(1.0) - e) } else { einv / (einv - c(1.0)) };
                    j += 1;
                }
                acc
            }
            Repr::Coeffs(cs) => {
                let (x, xinv) = phase_pair(t, p);
                if x.norm() <= 1.0 {
                    let num = cs.iter().rev().fold(C64::new(0.0, 0.0), |acc, &ck| acc * x + ck);
                    let mut den = c(1.0);
                    for (e, _) in &pairs {
                        den *= c(1.0) - e;
                    }
                    num / den
                } else {
                    // divide numerator and denominator by x^n
                    let num = cs.iter().fold(C64::new(0.0, 0.0), |acc, &ck| acc * xinv + ck);
                    let mut den = c(1.0);
                    for (k, (_, einv)) in pairs.iter().enumerate() {
                        // (1 − x a_k)/x = xinv − a_k, written as a_k (einv − 1)
                        let ak = phase_pair(-self.z[k], p).0;
                        den *= ak * (einv - c(1.0));
                    }
                    num / den
                }
            }
        };
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(CycleError::PoleHit);
        }
        Ok(v)
    }

    /// `(W(−∞), W(+∞))` along the real direction; requires `Im p < 0`.
    pub fn limits(&self) -> (C64, C64) {
        match &self.repr {
            Repr::Partial { at_minus, at_plus, .. } => (*at_minus, *at_plus),
            Repr::Product { scale, power, shifts } => {
                let plus = if *power == 0 { *scale } else { C64::new(0.0, 0.0) };
                let minus = if power + shifts.len() == self.n() {
                    // each pair tends to −e^{2πi(z_j−s_k)/p}, each x/(1−e_j) to −e^{2πi z_j/p}
                    let mut acc = *scale;
                    let mut j = 0;
                    for &s in shifts {
                        acc *= -phase_pair(self.z[j] - s, self.p).0;
                        j += 1;
                    }
                    while j < self.n() {
                        acc *= -phase_pair(self.z[j], self.p).0;
                        j += 1;
                    }
                    acc
                } else {
                    C64::new(0.0, 0.0)
                };
                (minus, plus)
            }
            Repr::Coeffs(cs) => {
                let n = self.n();
                let mut minus = cs[n];
                for &zj in &self.z {
                    minus *= -phase_pair(zj, self.p).0;
                }
                (minus, cs[0])
            }
        }
    }

    /// Whether both limits vanish (relative to the size of the function).
    pub fn in_hat_space(&self) -> bool {
        let (m, p) = self.limits();
        let scale = match &self.repr {
            Repr::Partial { residues, .. } => residues.iter().map(|r| r.norm()).fold(0.0, f64::max),
            Repr::Product { scale, .. } => scale.norm(),
            Repr::Coeffs(cs) => cs.iter().map(|r| r.norm()).fold(0.0, f64::max),
        };
        let tol = 1e-12 * scale.max(1e-300);
        m.norm() <= tol && p.norm() <= tol
    }

    /// The same function viewed with `z_j` replaced by `z_j + p` (a no-op on values).
    pub fn with_points(&self, ps: &ParamSet) -> PeriodicFn {
        PeriodicFn { p: self.p, z: ps.z_c64(), repr: self.repr.clone() }
    }
}

/// `W ≡ 1`
pub fn constant_one(ps: &ParamSet) -> PeriodicFn {
    PeriodicFn::from_partial(ps, c(1.0), vec![C64::new(0.0, 0.0); ps.n]).expect("sizes agree")
}

/// `Θ(t) = ∏_j (1+e^{2πi(t−z_j)/p})/(1−e^{2πi(t−z_j)/p})`
pub fn theta(ps: &ParamSet) -> PeriodicFn {
    PeriodicFn::from_product(ps, c(1.0), 0, ps.z_c64()).expect("degree n")
}

/// Random element with the given limits at `−∞`/`+∞` pattern: `hat = true` gives
/// vanishing limits, otherwise a generic element of the full space.
pub fn random_periodic(ps: &ParamSet, hat: bool, seed: u64) -> PeriodicFn {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    let mut residues: Vec<C64> = (0..ps.n).map(|_| draw()).collect();
    if hat {
        let mean = residues.iter().sum::<C64>() / ps.n as f64;
        for r in residues.iter_mut() {
            *r -= mean;
        }
        // make the sum exactly zero
        let total: C64 = residues[..ps.n - 1].iter().sum();
        residues[ps.n - 1] = -total;
        PeriodicFn::from_balanced_residues(ps, residues).expect("balanced")
    } else {
        let at_minus = draw();
        PeriodicFn::from_partial(ps, at_minus, residues).expect("sizes agree")
    }
}

/// Named periodic functions built from the point data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedW {
    /// Product of factors of the trace example, `ζ` points passed separately.
    ExtraPoints,
    /// The `ℓ−1` decaying factors `x^{2a−1}/∏(1−e_j)` of the current form factors.
    WSigmaPlus,
    /// As [`NamedW::WSigmaPlus`] with `x^{2a+1}`.
    WSigmaMinus,
    /// `W_σ` for `σ = +` followed by a jump factor in slot `ℓ`.
    WTildeSigma,
    /// A single factor with `2^ℓ p (W(+∞) − W(−∞)) = 1`.
    UnitJump,
}

/// Constant `(−1)^{ℓ(ℓ−1)/2} 2^{ℓ(n−ℓ+1)} (πiγ)^{ℓ(2n−ℓ+1)/2}` of the trace example.
pub fn extra_points_constant(n: usize, ell: usize, gamma: C64) -> C64 {
    let sign = if (ell * (ell.saturating_sub(1)) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    let two = 2f64.powi((ell * (n - ell + 1)) as i32);
    let base = C64::new(0.0, PI) * gamma;
    // the exponent ℓ(2n−ℓ+1)/2 is an integer
    let e = ell * (2 * n - ell + 1) / 2;
    c(sign * two) * base.powu(e as u32)
}

/// The tensor factors of a named periodic function; `zeta` is only used by `ExtraPoints`.
pub fn named_w(ps: &ParamSet, name: NamedW, zeta: &[C64]) -> Result<Vec<PeriodicFn>, CycleError> {
    let ell = ps.ell;
    let n = ps.n;
    let p = ps.p_c64();
    match name {
        NamedW::ExtraPoints => {
            if n < 2 * ell || zeta.len() != n - 2 * ell {
                return Err(CycleError::BadCombination(format!(
                    "need n−2ℓ = {} extra points, got {}",
                    n as i64 - 2 * ell as i64,
                    zeta.len()
                )));
            }
            let c1 = extra_points_constant(n, ell, p);
            (1..=ell)
                .map(|a| {
                    let scale = if a == 1 { c1 } else { c(1.0) };
                    PeriodicFn::from_product(ps, scale, 2 * a - 1, zeta.to_vec())
                })
                .collect()
        }
        NamedW::WSigmaPlus | NamedW::WSigmaMinus => {
            let plus = name == NamedW::WSigmaPlus;
            (1..ell)
                .map(|a| {
                    let power = if plus { 2 * a - 1 } else { 2 * a + 1 };
                    PeriodicFn::from_product(ps, c(1.0), power, vec![])
                })
                .collect()
        }
        NamedW::WTildeSigma => {
            let mut out = named_w(ps, NamedW::WSigmaPlus, zeta)?;
            out.extend(named_w(ps, NamedW::UnitJump, zeta)?);
            Ok(out)
        }
        NamedW::UnitJump => {
            // constant numerator: W(+∞) = s, W(−∞) = 0
            let s = c(1.0) / (c(2f64.powi(ell as i32)) * p);
            Ok(vec![PeriodicFn::from_product(ps, s, 0, vec![])?])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(n: usize) -> ParamSet {
        ParamSet::numeric_default(n, n / 2).unwrap()
    }

    #[test]
    fn constant_one_is_one() {
        let ps = ps(3);
        let w = constant_one(&ps);
        for t in [C64::new(0.3, 0.1), C64::new(-7.0, -0.4), C64::new(12.0, 0.2)] {
            assert!((w.eval(t).unwrap() - 1.0).norm() < 1e-12);
        }
        assert_eq!(w.limits(), (c(1.0), c(1.0)));
        let cs = w.coeffs();
        let direct = PeriodicFn::from_coeffs(&ps, cs).unwrap();
        assert!((direct.eval(C64::new(0.37, -0.2)).unwrap() - 1.0).norm() < 1e-9);
    }

    #[test]
    fn theta_single_point_coefficients() {
        let ps = ParamSet::numeric_default(1, 0).unwrap();
        let th = theta(&ps);
        let cs = th.coeffs();
        assert!((cs[0] - 1.0).norm() < 1e-15);
        assert!((cs[1] - 1.0).norm() < 1e-15); // z₁ = 0
        assert!(!th.in_hat_space());
    }

    #[test]
    fn monomial_x_is_in_hat_space() {
        let ps = ps(2);
        let w = PeriodicFn::from_coeffs(&ps, vec![c(0.0), c(1.0)]).unwrap();
        assert!(w.in_hat_space());
        let one = PeriodicFn::from_coeffs(&ps, vec![c(1.0)]).unwrap();
        assert_eq!(one.limits().1, c(1.0));
        assert!(!one.in_hat_space());
    }

    #[test]
    fn too_many_coefficients() {
        let ps = ps(2);
        assert!(matches!(
            PeriodicFn::from_coeffs(&ps, vec![c(1.0); 4]),
            Err(CycleError::DegreeTooHigh { .. })
        ));
    }

    #[test]
    fn representations_agree() {
        let ps = ps(4);
        let t = C64::new(0.41, -0.23);
        for w in [theta(&ps), random_periodic(&ps, false, 3), random_periodic(&ps, true, 4)] {
            let v = w.eval(t).unwrap();
            let again = PeriodicFn::from_coeffs(&ps, w.coeffs()).unwrap().eval(t).unwrap();
            assert!((v - again).norm() < 1e-8 * (1.0 + v.norm()), "{v} vs {again}");
        }
    }

    #[test]
    fn unit_jump_normalization() {
        let ps = ps(4);
        let w = &named_w(&ps, NamedW::UnitJump, &[]).unwrap()[0];
        let (m, p) = w.limits();
        let val = c(2f64.powi(ps.ell as i32)) * ps.p_c64() * (p - m);
        assert!((val - 1.0).norm() < 1e-14);
    }
}
