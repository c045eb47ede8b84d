//! Paths on the curve `y² = ∏(t − z_m)`: pieces in the `t`-plane plus a starting
//! branch, with `y` continued step by step along the nodes of a quadrature rule.

use num_complex::Complex64 as C64;

use crate::hyperint::quad::kronrod15;
use crate::exact::NumericRat;

use super::KzError;

/// One piece of a path, in travel order.
#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    Line { from: C64, to: C64 },
    /// `center + e^{iα}(a cos θ + i b sin θ)` for `θ` from `0` to `±2π`.
    Ellipse { center: C64, semi_major: f64, semi_minor: f64, angle: f64, counterclockwise: bool },
    /// Horizontal ray from infinity to `anchor` (`inbound`) or from `anchor` to infinity.
    Ray { anchor: C64, rightward: bool, inbound: bool },
}

impl Piece {
    fn length_hint(&self) -> f64 {
        match self {
            Piece::Line { from, to } => (to - from).norm(),
            Piece::Ellipse { semi_major, semi_minor, .. } => std::f64::consts::PI * (semi_major + semi_minor),
            Piece::Ray { .. } => 1.0,
        }
    }

    /// Point and derivative at parameter `u ∈ [0, 1]`.
    fn point(&self, u: f64) -> (C64, C64) {
        match *self {
            Piece::Line { from, to } => (from + (to - from) * u, to - from),
            Piece::Ellipse { center, semi_major, semi_minor, angle, counterclockwise } => {
                let dir = if counterclockwise { 1.0 } else { -1.0 };
                let th = dir * 2.0 * std::f64::consts::PI * u;
                let rot = C64::from_polar(1.0, angle);
                let pt = C64::new(semi_major * th.cos(), semi_minor * th.sin());
                let d = C64::new(-semi_major * th.sin(), semi_minor * th.cos()) * (dir * 2.0 * std::f64::consts::PI);
                (center + rot * pt, rot * d)
            }
            Piece::Ray { anchor, rightward, inbound } => {
                // s = 1 at the anchor, s → 0 at infinity: t = anchor ± x0 (1 − s)/s
                let s = if inbound { u } else { 1.0 - u };
                let x0 = anchor.re.abs().max(1.0);
                let sign = if rightward { 1.0 } else { -1.0 };
                let t = anchor + sign * x0 * (1.0 - s) / s;
                let dt_ds = -sign * x0 / (s * s);
                let dt_du = if inbound { dt_ds } else { -dt_ds };
                (t, C64::new(dt_du, 0.0))
            }
        }
    }

    fn is_ray(&self) -> bool {
        matches!(self, Piece::Ray { .. })
    }

    /// Smallest distance from `pt` to a dense sample of the piece (rays excluded).
    fn distance_to(&self, pt: C64) -> f64 {
        if self.is_ray() {
            return f64::INFINITY;
        }
        (0..=400).map(|k| (self.point(k as f64 / 400.0).0 - pt).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Branch of `y` where the path starts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StartBranch {
    /// `y = sign · t^{n/2}(1 + o(1))` at the infinite start (`n` even).
    AtInfinity(f64),
    /// Explicit value of `y` at the first point.
    Value(C64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchPath {
    pub pieces: Vec<Piece>,
    pub start: StartBranch,
}

/// Nodes of a path rule with `dt`-weights and `φ_cl = 1/y` at every node.
#[derive(Clone, Debug)]
pub struct PathRule {
    pub nodes: Vec<C64>,
    pub weights: Vec<C64>,
    pub phase: Vec<C64>,
    /// `y` at the first point of a path with a finite start; the sign at infinity otherwise.
    pub start_value: C64,
    /// `y` at the last point of a path with a finite end; the sign `s` of `y ≈ s·t^{n/2}` otherwise.
    pub end_value: C64,
}

impl PathRule {
    /// `(∫ φ f dt, ∫ |φ f| |dt|)`
    pub fn integrate(&self, f: &NumericRat) -> (C64, f64) {
        let mut v = C64::new(0.0, 0.0);
        let mut a = 0.0;
        for ((t, w), ph) in self.nodes.iter().zip(&self.weights).zip(&self.phase) {
            let term = w * ph * f.eval1(*t);
            v += term;
            a += term.norm();
        }
        (v, a)
    }
}

fn poly_at(z: &[C64], t: C64) -> C64 {
    z.iter().map(|zm| t - zm).product()
}

/// `s·t^{n/2}·∏ √(1 − z_m/t)`, continuous for `|t| > 2 max|z_m|`.
fn far_value(z: &[C64], t: C64, sign: f64) -> C64 {
    let half = z.len() / 2;
    let mut y = t.powu(half as u32) * sign;
    for zm in z {
        y *= (1.0 - zm / t).sqrt();
    }
    y
}

/// The root of `y² = P(t)` reached from `prev` at `from` by walking the chord to `to`.
fn continue_value(z: &[C64], from: C64, prev: C64, to: C64, depth: u32) -> Result<C64, KzError> {
    let r = poly_at(z, to).sqrt();
    let cand = if (r - prev).norm() <= (r + prev).norm() { r } else { -r };
    if (cand - prev).norm() <= 0.3 * prev.norm() {
        return Ok(cand);
    }
    if depth >= 24 {
        return Err(KzError::BranchJumpDetected { re: to.re, im: to.im });
    }
    let mid = 0.5 * (from + to);
    let ym = continue_value(z, from, prev, mid, depth + 1)?;
    continue_value(z, mid, ym, to, depth + 1)
}

impl BranchPath {
    pub fn new(pieces: Vec<Piece>, start: StartBranch) -> Self {
        BranchPath { pieces, start }
    }

    /// Fails when the path passes closer than `clearance` to a branch point.
    pub fn check_clearance(&self, z: &[C64], clearance: f64) -> Result<(), KzError> {
        for zm in z {
            for p in &self.pieces {
                if p.distance_to(*zm) < clearance {
                    return Err(KzError::TooCloseToBranchPoint { re: zm.re, im: zm.im });
                }
            }
        }
        Ok(())
    }

    /// A composite 15-point rule with `density` panels per unit length on finite
    /// pieces and `ray_panels` panels on each ray, with `φ_cl` continued along it.
    pub fn rule(&self, z: &[C64], density: f64, ray_panels: usize) -> Result<PathRule, KzError> {
        let base = kronrod15();
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut on_ray = Vec::new();
        for piece in &self.pieces {
            let panels = if piece.is_ray() { ray_panels } else { ((piece.length_hint() * density).ceil() as usize).max(2) };
            for k in 0..panels {
                let (a, b) = (k as f64 / panels as f64, (k + 1) as f64 / panels as f64);
                for &(x, w) in &base {
                    let u = 0.5 * (a + b) + 0.5 * (b - a) * x;
                    let (t, dt) = piece.point(u);
                    nodes.push(t);
                    weights.push(dt * (0.5 * (b - a) * w));
                    on_ray.push(piece.is_ray());
                }
            }
        }
        if nodes.is_empty() {
            return Err(KzError::PreconditionViolated("empty path".into()));
        }
        let mut ys = Vec::with_capacity(nodes.len());
        let mut sign = match self.start {
            StartBranch::AtInfinity(s) => {
                if z.len() % 2 != 0 {
                    return Err(KzError::PreconditionViolated("a start at infinity needs an even number of points".into()));
                }
                s
            }
            StartBranch::Value(_) => 1.0,
        };
        let first = &self.pieces[0];
        let mut prev: Option<(C64, C64)> = None;
        let start_value = match self.start {
            StartBranch::Value(v) => {
                if first.is_ray() {
                    return Err(KzError::PreconditionViolated("a path starting at infinity needs a sign, not a value".into()));
                }
                let t0 = first.point(0.0).0;
                let r = poly_at(z, t0).sqrt();
                let y0 = if (r - v).norm() <= (r + v).norm() { r } else { -r };
                prev = Some((t0, y0));
                y0
            }
            StartBranch::AtInfinity(s) => {
                if !first.is_ray() {
                    return Err(KzError::PreconditionViolated("a start at infinity needs a leading ray".into()));
                }
                C64::new(s, 0.0)
            }
        };
        for (i, &t) in nodes.iter().enumerate() {
            let y = if on_ray[i] {
                let y = far_value(z, t, sign);
                if let Some((pt, py)) = prev {
                    if i == 0 || !on_ray[i - 1] {
                        // entering a ray: fix its sign by continuation to this node
                        let cont = continue_value(z, pt, py, t, 0)?;
                        let far = far_value(z, t, 1.0);
                        sign = if (cont - far).norm() < (cont + far).norm() { 1.0 } else { -1.0 };
                        far_value(z, t, sign)
                    } else {
                        y
                    }
                } else {
                    y
                }
            } else {
                let (pt, py) = prev.expect("finite starts seed the continuation");
                continue_value(z, pt, py, t, 0)?
            };
            ys.push(y);
            prev = Some((t, y));
        }
        // the last point of the path itself
        let last = self.pieces.last().expect("nonempty");
        let end_value = if last.is_ray() {
            C64::new(sign, 0.0)
        } else {
            let (t_end, _) = last.point(1.0);
            let (pt, py) = prev.expect("nonempty");
            continue_value(z, pt, py, t_end, 0)?
        };
        let phase = ys.iter().map(|y| 1.0 / y).collect();
        Ok(PathRule { nodes, weights, phase, start_value, end_value })
    }

    /// `∫ φ_cl f dt` for each `f`, doubling the panel counts until two rules agree.
    pub fn integrals(&self, z: &[C64], fs: &[NumericRat], rel_tol: f64) -> Result<Vec<(C64, f64)>, KzError> {
        let min_gap = min_gap(z);
        let mut density = 4.0 / min_gap.min(1.0);
        let mut ray_panels = 4;
        let mut prev: Option<Vec<(C64, f64)>> = None;
        for _ in 0..9 {
            let rule = self.rule(z, density, ray_panels)?;
            let cur: Vec<(C64, f64)> = fs.iter().map(|f| rule.integrate(f)).collect();
            if let Some(p) = &prev {
                let worst = p
                    .iter()
                    .zip(&cur)
                    .map(|((a, _), (b, s))| (a - b).norm() / s.max(1e-300))
                    .fold(0.0, f64::max);
                if worst < rel_tol {
                    return Ok(cur);
                }
            }
            prev = Some(cur);
            density *= 2.0;
            ray_panels *= 2;
        }
        let rule = self.rule(z, density, ray_panels)?;
        let cur: Vec<(C64, f64)> = fs.iter().map(|f| rule.integrate(f)).collect();
        let worst = prev
            .expect("ran at least once")
            .iter()
            .zip(&cur)
            .map(|((a, _), (b, s))| (a - b).norm() / s.max(1e-300))
            .fold(0.0, f64::max);
        Err(KzError::NoConvergence { error: worst })
    }
}

/// Smallest distance between two of the points.
pub fn min_gap(z: &[C64]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            g = g.min((z[i] - z[j]).norm());
        }
    }
    if g.is_finite() {
        g
    } else {
        1.0
    }
}
