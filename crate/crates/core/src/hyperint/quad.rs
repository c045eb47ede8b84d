//! Adaptive Gauss–Kronrod on real parameter intervals and the periodic
//! trapezoid rule on circles, both for vector-valued integrands.

use num_complex::Complex64 as C64;

use super::HyperError;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15-point Kronrod rule on `[−1, 1]` as `(node, weight)` pairs, ascending.
pub fn kronrod15() -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = XGK.iter().zip(WGK.iter()).map(|(&x, &w)| (-x, w)).collect();
    out.extend(XGK[..7].iter().zip(WGK[..7].iter()).rev().map(|(&x, &w)| (x, w)));
    out
}

/// Outcome of one (component of a) contour integral.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct QuadResult {
    pub value: C64Ser,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// Error estimate attributed to the two unbounded ends.
    pub tail_bound: f64,
    /// `∫|f||dt|`, the scale used for relative statements.
    pub abs_integral: f64,
}

/// Complex number with a plain `[re, im]` serialization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C64Ser(pub C64);

impl serde::Serialize for C64Ser {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl QuadResult {
    pub fn value(&self) -> C64 {
        self.value.0
    }
}

/// A piece of the path parametrized by a real interval: `u ↦ (t(u), t'(u))`.
pub trait PathPiece: Sync {
    fn range(&self) -> (f64, f64);
    fn point(&self, u: f64) -> (C64, C64);
    fn is_tail(&self) -> bool {
        false
    }
    /// Initial number of equal subintervals.
    fn seeds(&self) -> usize {
        4
    }
}

struct Interval {
    piece: usize,
    a: f64,
    b: f64,
    value: Vec<C64>,
    abs: Vec<f64>,
    err: Vec<f64>,
}

fn gk15<F>(piece: &dyn PathPiece, a: f64, b: f64, dim: usize, f: &F) -> Result<(Vec<C64>, Vec<f64>, Vec<f64>), HyperError>
where
    F: Fn(C64) -> Result<Vec<C64>, HyperError>,
{
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kron = vec![C64::new(0.0, 0.0); dim];
    let mut gauss = vec![C64::new(0.0, 0.0); dim];
    let mut abs = vec![0.0; dim];
    let mut eval_at = |u: f64, wk: f64, wg: Option<f64>| -> Result<(), HyperError> {
        let (t, dt) = piece.point(u);
        let vals = f(t)?;
        for k in 0..dim {
            let v = vals[k] * dt;
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(HyperError::NonFiniteValue);
            }
            kron[k] += v * wk;
            abs[k] += v.norm() * wk;
            if let Some(g) = wg {
                gauss[k] += v * g;
            }
        }
        Ok(())
    };
    for i in 0..7 {
        let x = XGK[i] * half;
        // Gauss nodes are the odd-indexed Kronrod nodes
        let wg = if i % 2 == 1 { Some(WG[i / 2]) } else { None };
        eval_at(mid - x, WGK[i], wg)?;
        eval_at(mid + x, WGK[i], wg)?;
    }
    eval_at(mid, WGK[7], Some(WG[3]))?;
    let mut err = vec![0.0; dim];
    for k in 0..dim {
        kron[k] *= half;
        gauss[k] *= half;
        abs[k] *= half.abs();
        err[k] = (kron[k] - gauss[k]).norm();
    }
    Ok((kron, abs, err))
}

/// Vector result of an adaptive integration over several pieces.
#[derive(Clone, Debug)]
pub struct VectorQuad {
    pub value: Vec<C64>,
    pub error: Vec<f64>,
    pub abs: Vec<f64>,
    pub tail_error: Vec<f64>,
    pub evaluations: usize,
}

impl VectorQuad {
    pub fn zeros(dim: usize) -> Self {
        VectorQuad {
            value: vec![C64::new(0.0, 0.0); dim],
            error: vec![0.0; dim],
            abs: vec![0.0; dim],
            tail_error: vec![0.0; dim],
            evaluations: 0,
        }
    }

    pub fn absorb(&mut self, other: &VectorQuad) {
        for k in 0..self.value.len() {
            self.value[k] += other.value[k];
            self.error[k] += other.error[k];
            self.abs[k] += other.abs[k];
            self.tail_error[k] += other.tail_error[k];
        }
        self.evaluations += other.evaluations;
    }

    pub fn result(&self, k: usize) -> QuadResult {
        QuadResult {
            value: C64Ser(self.value[k]),
            error_estimate: self.error[k],
            evaluations: self.evaluations,
            tail_bound: self.tail_error[k],
            abs_integral: self.abs[k],
        }
    }
}

/// Tolerances: each component stops once its error is below
/// `max(abs_tol, rel_tol · ∫|f_k|)`.
#[derive(Clone, Copy, Debug)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-11, abs: 1e-300, max_intervals: 4000 }
    }
}

/// Nodes and complex weights (`dt` included) of a rule along a path.
#[derive(Clone, Debug, Default)]
pub struct Rule {
    pub nodes: Vec<C64>,
    pub weights: Vec<C64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Append another rule, with its weights multiplied by `sign`.
    pub fn append(&mut self, other: Rule, sign: f64) {
        self.nodes.extend(other.nodes);
        self.weights.extend(other.weights.into_iter().map(|w| w * sign));
    }

    pub fn apply(&self, values: &[C64]) -> C64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

fn refine<F>(pieces: &[&dyn PathPiece], dim: usize, f: &F, tol: Tolerance) -> Result<(Vec<Interval>, usize), HyperError>
where
    F: Fn(C64) -> Result<Vec<C64>, HyperError>,
{
    let mut ivs: Vec<Interval> = Vec::new();
    for (pi, piece) in pieces.iter().enumerate() {
        let (lo, hi) = piece.range();
        let m = piece.seeds().max(1);
        for s in 0..m {
            let a = lo + (hi - lo) * s as f64 / m as f64;
            let b = lo + (hi - lo) * (s + 1) as f64 / m as f64;
            let (value, abs, err) = gk15(*piece, a, b, dim, f)?;
            ivs.push(Interval { piece: pi, a, b, value, abs, err });
        }
    }
    let mut evaluations = 15 * ivs.len();
    loop {
        let mut total_abs = vec![0.0; dim];
        let mut total_err = vec![0.0; dim];
        for iv in &ivs {
            for k in 0..dim {
                total_abs[k] += iv.abs[k];
                total_err[k] += iv.err[k];
            }
        }
        let target: Vec<f64> = (0..dim).map(|k| tol.abs.max(tol.rel * total_abs[k])).collect();
        let done = (0..dim).all(|k| total_err[k] <= target[k]);
        if done {
            break;
        }
        if ivs.len() >= tol.max_intervals {
            let worst = (0..dim).map(|k| total_err[k] / target[k].max(1e-300)).fold(0.0, f64::max);
            // accept near misses, the caller sees the error estimate
            if worst > 1e3 {
                return Err(HyperError::NoConvergence { error: total_err.iter().cloned().fold(0.0, f64::max) });
            }
            break;
        }
        // split the interval with the largest normalized error
        let (idx, _) = ivs
            .iter()
            .enumerate()
            .map(|(i, iv)| {
                let score = (0..dim).map(|k| iv.err[k] / target[k].max(1e-300)).fold(0.0, f64::max);
                (i, score)
            })
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let iv = ivs.swap_remove(idx);
        let mid = 0.5 * (iv.a + iv.b);
        let piece = pieces[iv.piece];
        let (v1, a1, e1) = gk15(piece, iv.a, mid, dim, f)?;
        let (v2, a2, e2) = gk15(piece, mid, iv.b, dim, f)?;
        evaluations += 30;
        ivs.push(Interval { piece: iv.piece, a: iv.a, b: mid, value: v1, abs: a1, err: e1 });
        ivs.push(Interval { piece: iv.piece, a: mid, b: iv.b, value: v2, abs: a2, err: e2 });
    }
    // fixed order so that sums do not depend on the refinement history
    ivs.sort_by(|x, y| (x.piece, x.a).partial_cmp(&(y.piece, y.a)).unwrap());
    Ok((ivs, evaluations))
}

/// Globally adaptive GK7/15 over all pieces at once.
pub fn adaptive<F>(pieces: &[&dyn PathPiece], dim: usize, f: &F, tol: Tolerance) -> Result<VectorQuad, HyperError>
where
    F: Fn(C64) -> Result<Vec<C64>, HyperError>,
{
    let (ivs, evaluations) = refine(pieces, dim, f, tol)?;
    let mut out = VectorQuad::zeros(dim);
    out.evaluations = evaluations;
    for iv in &ivs {
        let tail = pieces[iv.piece].is_tail();
        for k in 0..dim {
            out.value[k] += iv.value[k];
            out.error[k] += iv.err[k];
            out.abs[k] += iv.abs[k];
            if tail {
                out.tail_error[k] += iv.err[k];
            }
        }
    }
    Ok(out)
}

/// The Kronrod nodes of the intervals that resolve `f`, as a reusable rule.
pub fn adaptive_rule<F>(pieces: &[&dyn PathPiece], dim: usize, f: &F, tol: Tolerance) -> Result<Rule, HyperError>
where
    F: Fn(C64) -> Result<Vec<C64>, HyperError>,
{
    let (ivs, _) = refine(pieces, dim, f, tol)?;
    let mut rule = Rule::default();
    for iv in &ivs {
        let piece = pieces[iv.piece];
        let mid = 0.5 * (iv.a + iv.b);
        let half = 0.5 * (iv.b - iv.a);
        for i in 0..8 {
            let offsets: &[f64] = if i == 7 { &[0.0] } else { &[-1.0, 1.0] };
            for &sgn in offsets {
                let (t, dt) = piece.point(mid + sgn * XGK[i] * half);
                rule.nodes.push(t);
                rule.weights.push(dt * WGK[i] * half);
            }
        }
    }
    Ok(rule)
}

/// `∮ f dt` over the circle `|t−center| = radius`, counterclockwise, by the
/// trapezoid rule with doubling until two successive sums agree.
pub fn circle<F>(center: C64, radius: f64, dim: usize, f: &F, tol: Tolerance) -> Result<VectorQuad, HyperError>
where
    F: Fn(C64) -> Result<Vec<C64>, HyperError>,
{
    circle_impl(center, radius, dim, f, tol).map(|(q, _)| q)
}

/// The converged trapezoid rule of [`circle`] as a reusable rule.
pub fn circle_rule<F>(center: C64, radius: f64, dim: usize, f: &F, tol: Tolerance) -> Result<Rule, HyperError>
where
    F: Fn(C64) -> Result<Vec<C64>, HyperError>,
{
    let (_, n) = circle_impl(center, radius, dim, f, tol)?;
    let h = std::f64::consts::TAU / n as f64;
    let mut rule = Rule::default();
    for i in 0..n {
        let e = C64::from_polar(1.0, i as f64 * h);
        rule.nodes.push(center + radius * e);
        rule.weights.push(C64::new(0.0, radius) * e * h);
    }
    Ok(rule)
}

fn circle_impl<F>(center: C64, radius: f64, dim: usize, f: &F, tol: Tolerance) -> Result<(VectorQuad, usize), HyperError>
where
    F: Fn(C64) -> Result<Vec<C64>, HyperError>,
{
    let sum = |n: usize, offset: f64| -> Result<(Vec<C64>, Vec<f64>), HyperError> {
        let mut acc = vec![C64::new(0.0, 0.0); dim];
        let mut abs = vec![0.0; dim];
        let h = std::f64::consts::TAU / n as f64;
        for i in 0..n {
            let theta = (i as f64 + offset) * h;
            let e = C64::from_polar(1.0, theta);
            let t = center + radius * e;
            let dt = C64::new(0.0, radius) * e * h;
            let vals = f(t)?;
            for k in 0..dim {
                let v = vals[k] * dt;
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(HyperError::NonFiniteValue);
                }
                acc[k] += v;
                abs[k] += v.norm();
            }
        }
        Ok((acc, abs))
    };
    let mut n = 32;
    let (mut prev, _) = sum(n, 0.0)?;
    let mut evaluations = n;
    loop {
        // the midpoints complete the rule with 2n nodes
        let (mid, abs) = sum(n, 0.5)?;
        evaluations += n;
        let cur: Vec<C64> = prev.iter().zip(&mid).map(|(a, b)| 0.5 * (a + b)).collect();
        let err: Vec<f64> = cur.iter().zip(&prev).map(|(a, b)| (a - b).norm()).collect();
        let ok = (0..dim).all(|k| err[k] <= tol.abs.max(tol.rel * abs[k]));
        n *= 2;
        if ok || n > 8192 {
            if !ok {
                return Err(HyperError::NoConvergence { error: err.iter().cloned().fold(0.0, f64::max) });
            }
            return Ok((VectorQuad { value: cur, error: err, abs, tail_error: vec![0.0; dim], evaluations }, n));
        }
        prev = cur;
    }
}

/// Straight segment from `from` to `to`.
pub struct Segment {
    pub from: C64,
    pub to: C64,
    pub seeds: usize,
}

impl PathPiece for Segment {
    fn range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
    fn point(&self, u: f64) -> (C64, C64) {
        (self.from + (self.to - self.from) * u, self.to - self.from)
    }
    fn seeds(&self) -> usize {
        self.seeds
    }
}

/// Horizontal ray `Im t = level` beyond `Re t = ±start`, mapped to `s ∈ (0, 1]`
/// by `t = ±start/s² + i·level`; the ray is always oriented towards `+∞`.
pub struct Tail {
    pub start: f64,
    pub level: f64,
    pub right: bool,
}

impl PathPiece for Tail {
    fn range(&self) -> (f64, f64) {
        (0.0, 1.0)
    }
    fn point(&self, s: f64) -> (C64, C64) {
        let sign = if self.right { 1.0 } else { -1.0 };
        let t = C64::new(sign * self.start / (s * s), self.level);
        // right: ∫_X^∞ dt = ∫_0^1 (2X/s³) ds; left: ∫_{−∞}^{−X} dt = ∫_0^1 (2X/s³) ds
        (t, C64::new(2.0 * self.start / (s * s * s), 0.0))
    }
    fn is_tail(&self) -> bool {
        true
    }
    fn seeds(&self) -> usize {
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_rule_integrates_polynomials() {
        let r = kronrod15();
        assert_eq!(r.len(), 15);
        let total: f64 = r.iter().map(|(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
        let x20: f64 = r.iter().map(|(x, w)| w * x.powi(20)).sum();
        assert!((x20 - 2.0 / 21.0).abs() < 1e-14);
    }

    fn lorentz(t: C64) -> Result<Vec<C64>, HyperError> {
        Ok(vec![1.0 / (t * t + 1.0)])
    }

    #[test]
    fn real_line_lorentzian() {
        let mid = Segment { from: C64::new(-3.0, 0.0), to: C64::new(3.0, 0.0), seeds: 4 };
        let r = Tail { start: 3.0, level: 0.0, right: true };
        let l = Tail { start: 3.0, level: 0.0, right: false };
        let q = adaptive(&[&mid, &r, &l], 1, &lorentz, Tolerance { rel: 1e-12, ..Default::default() }).unwrap();
        assert!((q.value[0] - std::f64::consts::PI).norm() < 1e-10, "{}", q.value[0]);
    }

    #[test]
    fn odd_decaying_integrand_vanishes() {
        let f = |t: C64| Ok(vec![t / (t * t * t * t + 1.0)]);
        let mid = Segment { from: C64::new(-2.0, 0.0), to: C64::new(2.0, 0.0), seeds: 4 };
        let r = Tail { start: 2.0, level: 0.0, right: true };
        let l = Tail { start: 2.0, level: 0.0, right: false };
        let q = adaptive(&[&mid, &r, &l], 1, &f, Tolerance::default()).unwrap();
        assert!(q.value[0].norm() < 1e-12);
    }

    #[test]
    fn circle_gives_residue() {
        let f = |t: C64| Ok(vec![1.0 / (t - 0.5) + t * t]);
        let q = circle(C64::new(0.5, 0.0), 0.3, 1, &f, Tolerance::default()).unwrap();
        assert!((q.value[0] - C64::new(0.0, std::f64::consts::TAU)).norm() < 1e-12);
    }
}
