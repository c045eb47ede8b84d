//! Contours separating two point sets: a horizontal baseline plus small closed
//! loops around the points the baseline leaves on the wrong side.

use num_complex::Complex64 as C64;

use super::quad::{adaptive, adaptive_rule, circle, circle_rule, PathPiece, Rule, Segment, Tail, Tolerance, VectorQuad};
use super::HyperError;

/// A closed circle added to the baseline.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Loop {
    pub center: [f64; 2],
    pub radius: f64,
    /// Counterclockwise loops move a point from below to above the path.
    pub counterclockwise: bool,
}

impl Loop {
    pub fn center(&self) -> C64 {
        C64::new(self.center[0], self.center[1])
    }

    fn encloses(&self, pt: C64) -> bool {
        (pt - self.center()).norm() < self.radius
    }
}

/// Baseline `Im t = baseline` from `−∞` to `+∞` plus loops; quadrature splits the
/// baseline at `±half_width` into a central segment and two tails.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Contour {
    pub baseline: f64,
    pub loops: Vec<Loop>,
    pub half_width: f64,
    pub center_re: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

/// Knobs for [`build_contour`].
#[derive(Clone, Copy, Debug)]
pub struct ContourOptions {
    /// Force the baseline level instead of choosing the one with most clearance.
    pub baseline: Option<f64>,
    pub min_clearance: f64,
    /// Loop radius as a fraction of the distance to the nearest other point.
    pub radius_factor: f64,
    pub max_radius: f64,
}

impl Default for ContourOptions {
    fn default() -> Self {
        ContourOptions { baseline: None, min_clearance: 0.05, radius_factor: 0.45, max_radius: 0.5 }
    }
}

impl Contour {
    /// Which side of the path a point is on.
    pub fn side_of(&self, pt: C64) -> Side {
        let mut above = pt.im > self.baseline;
        for l in &self.loops {
            if l.encloses(pt) {
                above = l.counterclockwise;
            }
        }
        if above {
            Side::Above
        } else {
            Side::Below
        }
    }

    /// Smallest distance from a point to the baseline or to any loop circle.
    pub fn clearance(&self, pt: C64) -> f64 {
        let mut d = (pt.im - self.baseline).abs();
        for l in &self.loops {
            d = d.min(((pt - l.center()).norm() - l.radius).abs());
        }
        d
    }

    /// `∫ f dt` along the contour for a vector-valued integrand.
    pub fn integrate<F>(&self, dim: usize, f: &F, tol: Tolerance) -> Result<VectorQuad, HyperError>
    where
        F: Fn(C64) -> Result<Vec<C64>, HyperError> + Sync,
    {
        let (mid, right, left) = self.pieces();
        let pieces: [&dyn PathPiece; 3] = [&mid, &right, &left];
        let mut total = adaptive(&pieces, dim, f, tol)?;
        for l in &self.loops {
            let mut q = circle(l.center(), l.radius, dim, f, tol)?;
            if !l.counterclockwise {
                for v in q.value.iter_mut() {
                    *v = -*v;
                }
            }
            total.absorb(&q);
        }
        Ok(total)
    }

    /// A quadrature rule along the whole contour that resolves every component of `probe`.
    pub fn rule<F>(&self, dim: usize, probe: &F, tol: Tolerance) -> Result<Rule, HyperError>
    where
        F: Fn(C64) -> Result<Vec<C64>, HyperError> + Sync,
    {
        let (mid, right, left) = self.pieces();
        let pieces: [&dyn PathPiece; 3] = [&mid, &right, &left];
        let mut rule = adaptive_rule(&pieces, dim, probe, tol)?;
        for l in &self.loops {
            let sign = if l.counterclockwise { 1.0 } else { -1.0 };
            rule.append(circle_rule(l.center(), l.radius, dim, probe, tol)?, sign);
        }
        Ok(rule)
    }

    fn pieces(&self) -> (Segment, ShiftedTail, ShiftedTail) {
        let x0 = self.half_width;
        let c = self.baseline;
        let seeds = ((2.0 * x0) / 0.5).ceil() as usize;
        let mid = Segment { from: C64::new(self.center_re - x0, c), to: C64::new(self.center_re + x0, c), seeds };
        let right = ShiftedTail { inner: Tail { start: x0, level: c, right: true }, shift: self.center_re };
        let left = ShiftedTail { inner: Tail { start: x0, level: c, right: false }, shift: self.center_re };
        (mid, right, left)
    }

    /// The same contour moved vertically; loops keep their centers.
    pub fn with_baseline(&self, level: f64) -> Contour {
        Contour { baseline: level, ..self.clone() }
    }
}

struct ShiftedTail {
    inner: Tail,
    shift: f64,
}

impl PathPiece for ShiftedTail {
    fn range(&self) -> (f64, f64) {
        self.inner.range()
    }
    fn point(&self, u: f64) -> (C64, C64) {
        let (t, dt) = self.inner.point(u);
        (t + self.shift, dt)
    }
    fn is_tail(&self) -> bool {
        true
    }
    fn seeds(&self) -> usize {
        self.inner.seeds()
    }
}

fn misplaced(c: f64, above: &[C64], below: &[C64]) -> (Vec<C64>, Vec<C64>) {
    let a: Vec<C64> = above.iter().copied().filter(|p| p.im < c).collect();
    let b: Vec<C64> = below.iter().copied().filter(|p| p.im > c).collect();
    (a, b)
}

/// Build a contour with `above` points above it and `below` points below it.
///
/// The point lists are finite windows of the lattices; they have to contain every
/// lattice point whose imaginary part lies within a few steps of the baseline.
pub fn build_contour(above: &[C64], below: &[C64], opts: ContourOptions) -> Result<Contour, HyperError> {
    for a in above {
        for b in below {
            if (a - b).norm() < 1e-12 {
                return Err(HyperError::Unseparable { re: a.re, im: a.im });
            }
        }
    }
    let all: Vec<C64> = above.iter().chain(below).copied().collect();
    if all.is_empty() {
        return Ok(Contour { baseline: opts.baseline.unwrap_or(0.0), loops: vec![], half_width: 4.0, center_re: 0.0 });
    }
    let baseline = match opts.baseline {
        Some(c) => c,
        None => {
            let mut ims: Vec<f64> = all.iter().map(|p| p.im).collect();
            ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
            ims.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            let mut best: Option<(usize, f64, f64)> = None;
            for w in ims.windows(2) {
                let gap = w[1] - w[0];
                if gap < 2.0 * opts.min_clearance {
                    continue;
                }
                let c = 0.5 * (w[0] + w[1]);
                let (ma, mb) = misplaced(c, above, below);
                let count = ma.len() + mb.len();
                let better = match best {
                    None => true,
                    Some((bc, bg, _)) => count < bc || (count == bc && gap > bg + 1e-12),
                };
                if better {
                    best = Some((count, gap, c));
                }
            }
            match best {
                Some((_, _, c)) => c,
                None => return Err(HyperError::BandOverflow),
            }
        }
    };
    let (ma, mb) = misplaced(baseline, above, below);
    let mut loops = Vec::new();
    for (pt, ccw) in ma.iter().map(|p| (*p, true)).chain(mb.iter().map(|p| (*p, false))) {
        let nearest = all
            .iter()
            .filter(|q| (*q - pt).norm() > 1e-12)
            .map(|q| (q - pt).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = (opts.radius_factor * nearest).min(opts.max_radius);
        loops.push(Loop { center: [pt.re, pt.im], radius, counterclockwise: ccw });
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in &all {
        if (p.im - baseline).abs() < 4.0 {
            lo = lo.min(p.re);
            hi = hi.max(p.re);
        }
    }
    for l in &loops {
        lo = lo.min(l.center[0] - l.radius);
        hi = hi.max(l.center[0] + l.radius);
    }
    if !lo.is_finite() {
        lo = -1.0;
        hi = 1.0;
    }
    let center_re = 0.5 * (lo + hi);
    let half_width = 0.5 * (hi - lo) + 3.0;
    let contour = Contour { baseline, loops, half_width, center_re };
    // verify the side predicates and the clearance of every listed point
    for (pts, want) in [(above, Side::Above), (below, Side::Below)] {
        for &pt in pts {
            if contour.side_of(pt) != want {
                return Err(HyperError::Unseparable { re: pt.re, im: pt.im });
            }
            if contour.clearance(pt) < opts.min_clearance {
                return Err(HyperError::ClearanceTooSmall { re: pt.re, im: pt.im });
            }
        }
    }
    Ok(contour)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_offending_points_gives_straight_line() {
        let above = [C64::new(0.0, 1.0)];
        let below = [C64::new(0.0, -1.0)];
        let c = build_contour(&above, &below, ContourOptions::default()).unwrap();
        assert!(c.loops.is_empty());
        assert!(c.baseline.abs() < 1e-12);
    }

    #[test]
    fn interleaved_points_get_loops() {
        let above = [C64::new(0.0, -0.5), C64::new(0.0, 0.5)];
        let below = [C64::new(0.0, 0.0), C64::new(0.0, -1.0)];
        let c = build_contour(&above, &below, ContourOptions::default()).unwrap();
        assert_eq!(c.loops.len(), 1);
        for p in above {
            assert_eq!(c.side_of(p), Side::Above);
        }
        for p in below {
            assert_eq!(c.side_of(p), Side::Below);
        }
    }

    #[test]
    fn coincident_constraints_fail() {
        let p = [C64::new(0.0, 0.0)];
        assert!(matches!(build_contour(&p, &p, ContourOptions::default()), Err(HyperError::Unseparable { .. })));
    }

    #[test]
    fn indented_contour_keeps_cauchy_value() {
        // 1/(t²+1) with i above and −i below; a high baseline needs a loop around i
        let f = |t: C64| Ok(vec![1.0 / (t * t + 1.0)]);
        let tol = Tolerance { rel: 1e-12, ..Default::default() };
        let plain = build_contour(&[C64::new(0.0, 1.0)], &[C64::new(0.0, -1.0)], ContourOptions::default()).unwrap();
        let v = plain.integrate(1, &f, tol).unwrap().value[0];
        assert!((v - std::f64::consts::PI).norm() < 1e-10);
        let opts = ContourOptions { baseline: Some(1.5), ..Default::default() };
        let looped = build_contour(&[C64::new(0.0, 1.0)], &[C64::new(0.0, -1.0)], opts).unwrap();
        assert_eq!(looped.loops.len(), 1);
        let v2 = looped.integrate(1, &f, tol).unwrap().value[0];
        assert!((v2 - std::f64::consts::PI).norm() < 1e-10);
    }
}
