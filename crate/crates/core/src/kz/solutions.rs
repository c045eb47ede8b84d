//! Classical solutions over cycles and the open contour, and the KZ check.

use num_complex::Complex64 as C64;

use crate::exact::bases::{mu, nu_tilde, res_at, w_fun};
use crate::exact::{subsets, GaussianRational as Gq, ParamSet, Subset};
use crate::qkz::assemble::{det, permanent, Assembled};
use crate::qkz::StateVector;

use super::path::{min_gap, BranchPath, Piece, StartBranch};
use super::KzError;

const PATH_TOL: f64 = 1e-12;

/// The cycle around `z_{2k}` and `z_{2k+1}` (0-based), counterclockwise, starting on
/// the principal root just beyond `z_{2k+1}`.
pub fn basis_cycle(z: &[C64], k: usize, radius_factor: f64) -> Result<BranchPath, KzError> {
    if 2 * k + 1 >= z.len() {
        return Err(KzError::PreconditionViolated(format!("no pair {k} among {} points", z.len())));
    }
    let (a, b) = (z[2 * k], z[2 * k + 1]);
    let d = (b - a).norm();
    let r = radius_factor * min_gap(z);
    let e = Piece::Ellipse {
        center: 0.5 * (a + b),
        semi_major: 0.5 * d + r,
        semi_minor: 0.5 * r + 0.15 * d,
        angle: (b - a).arg(),
        counterclockwise: true,
    };
    let t0 = 0.5 * (a + b) + C64::from_polar(0.5 * d + r, (b - a).arg());
    let y0: C64 = z.iter().map(|zm| t0 - zm).product::<C64>().sqrt();
    let path = BranchPath::new(vec![e], StartBranch::Value(y0));
    path.check_clearance(z, 0.1 * min_gap(z))?;
    Ok(path)
}

/// A contour from `+∞` to `−∞` above all points, dipping below `z_k` only, with
/// `y ≈ sign·t^{n/2}` at the start.
pub fn gamma_inf_with_sign(z: &[C64], k: usize, sign: f64) -> Result<BranchPath, KzError> {
    if z.len() % 2 != 0 {
        return Err(KzError::PreconditionViolated("the open contour needs an even number of points".into()));
    }
    if k >= z.len() {
        return Err(KzError::PreconditionViolated(format!("no point {k}")));
    }
    let top = z.iter().map(|p| p.im).fold(f64::NEG_INFINITY, f64::max) + 1.0;
    let reach = z.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let x = 2.0 * reach + 2.0;
    let r = 0.3 * min_gap(z);
    let (right, left) = (C64::new(x, top), C64::new(-x, top));
    let zk = z[k];
    let corners = [
        C64::new(zk.re + r, top),
        C64::new(zk.re + r, zk.im - r),
        C64::new(zk.re - r, zk.im - r),
        C64::new(zk.re - r, top),
    ];
    let mut pieces = vec![Piece::Ray { anchor: right, rightward: true, inbound: true }];
    let mut from = right;
    for &c in corners.iter().chain(std::iter::once(&left)) {
        pieces.push(Piece::Line { from, to: c });
        from = c;
    }
    pieces.push(Piece::Ray { anchor: left, rightward: false, inbound: false });
    let path = BranchPath::new(pieces, StartBranch::AtInfinity(sign));
    path.check_clearance(z, 0.1 * min_gap(z))?;
    Ok(path)
}

/// `∫ φ_cl ν̃^cl_M dt` along a path.
pub fn calibration_integral(ps: &ParamSet, path: &BranchPath, m_set: &Subset) -> Result<C64, KzError> {
    let cl = ps.classical();
    let f = nu_tilde(&cl, m_set)?.to_numeric();
    Ok(path.integrals(&ps.z_c64(), &[f], PATH_TOL)?[0].0)
}

/// The open contour detouring below `z_k`, with the starting sign fixed so that the
/// calibration integral over `ν̃^cl` of the first subset is `+4`.
pub fn gamma_inf(ps: &ParamSet, k: usize) -> Result<BranchPath, KzError> {
    if ps.n != 2 * ps.ell {
        return Err(KzError::PreconditionViolated(format!("needs n = 2ℓ, got n = {}, ℓ = {}", ps.n, ps.ell)));
    }
    let z = ps.z_c64();
    let path = gamma_inf_with_sign(&z, k, 1.0)?;
    let v = calibration_integral(ps, &path, &Subset::first(ps.ell))?;
    if (v - 4.0).norm() < 1e-6 * 4.0 {
        Ok(path)
    } else if (v + 4.0).norm() < 1e-6 * 4.0 {
        gamma_inf_with_sign(&z, k, -1.0)
    } else {
        Err(KzError::CalibrationFailed { re: v.re, im: v.im })
    }
}

/// `det[∫_{γ_b} φ_cl μ^{(m_a)cl}]` for the first `rows` elements of every subset,
/// with the matching permanent of absolute integrals.
fn determinants(ps: &ParamSet, contours: &[BranchPath], rows: usize) -> Result<Vec<(C64, f64)>, KzError> {
    let cl = ps.classical();
    let z = ps.z_c64();
    let subs = subsets(ps.n, ps.ell);
    let mut fs = Vec::new();
    for m_set in &subs {
        for &m in &m_set.elems()[..rows] {
            fs.push(mu(&cl, m_set, m)?.to_numeric());
        }
    }
    let columns: Vec<Vec<(C64, f64)>> = contours.iter().map(|c| c.integrals(&z, &fs, PATH_TOL)).collect::<Result<_, _>>()?;
    Ok((0..subs.len())
        .map(|i| {
            let vals = (0..rows).map(|a| columns.iter().map(|col| col[i * rows + a].0).collect()).collect();
            let abs: Vec<Vec<f64>> = (0..rows).map(|a| columns.iter().map(|col| col[i * rows + a].1).collect()).collect();
            (det(vals), permanent(&abs))
        })
        .collect())
}

/// `ψ_{γ_1…γ_ℓ} = Σ_M v_M ∫ w^cl_M ∏ φ_cl(t_a) dt_a`, through the diagonal basis change
/// `w^cl_M = w̃^cl_M Res w^cl_M(ẑ_M)` and the determinant of one-variable integrals.
pub fn psi_sv(ps: &ParamSet, contours: &[BranchPath]) -> Result<Assembled, KzError> {
    if contours.len() != ps.ell {
        return Err(KzError::PreconditionViolated(format!("expected {} contours, got {}", ps.ell, contours.len())));
    }
    let cl = ps.classical();
    let subs = subsets(ps.n, ps.ell);
    let dets = determinants(ps, contours, ps.ell)?;
    let mut psi = StateVector::zeros(ps.n);
    let mut scale = 0.0;
    for (m_set, (d, a)) in subs.iter().zip(dets) {
        let coef = res_at(&w_fun(&cl, m_set)?, &cl, m_set)?.to_c64();
        psi.add_to(m_set, coef * d);
        scale += coef.norm() * a;
    }
    Ok(Assembled { psi, scale })
}

/// `ψ^S_{γ_1…γ_{ℓ−1}}` for `n = 2ℓ`:
/// `Σ_M ∏_{a<b}(z_{m_a}−z_{m_b}) ∏_{k∉M}(z_{m_ℓ}−z_k)^{−1} det_{ℓ−1}[∫_{γ_b} φ_cl μ^{(m_a)cl}] v_M`.
pub fn psi_s(ps: &ParamSet, cycles: &[BranchPath]) -> Result<Assembled, KzError> {
    let ell = ps.ell;
    if ps.n != 2 * ell || ell == 0 {
        return Err(KzError::PreconditionViolated(format!("needs n = 2ℓ ≥ 2, got n = {}, ℓ = {ell}", ps.n)));
    }
    if cycles.len() != ell - 1 {
        return Err(KzError::PreconditionViolated(format!("expected {} cycles, got {}", ell - 1, cycles.len())));
    }
    let subs = subsets(ps.n, ell);
    let dets = determinants(ps, cycles, ell - 1)?;
    let mut psi = StateVector::zeros(ps.n);
    let mut scale = 0.0;
    for (m_set, (d, a)) in subs.iter().zip(dets) {
        let e = m_set.elems();
        let mut f = Gq::one();
        for i in 0..ell {
            for j in i + 1..ell {
                f = &f * &(&ps.z[e[i]] - &ps.z[e[j]]);
            }
        }
        let last = &ps.z[e[ell - 1]];
        for k in m_set.complement(ps.n) {
            f = &f * &(last - &ps.z[k]).inv().ok_or(crate::exact::ExactError::DivisionByZero)?;
        }
        let coef = f.to_c64();
        psi.add_to(m_set, coef * d);
        scale += coef.norm() * a;
    }
    Ok(Assembled { psi, scale })
}

/// One KZ check `2 ∂ψ/∂z_j = Σ_{k≠j} (P_{jk} − 1)/(z_j − z_k) ψ` by central differences.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct KzResidual {
    pub site: usize,
    /// Sup norm of the difference over the larger of `‖ψ‖` and the right side.
    pub residual: f64,
}

pub fn check_kz<F>(ps: &ParamSet, j: usize, step: &Gq, build: F) -> Result<KzResidual, KzError>
where
    F: Fn(&ParamSet) -> Result<StateVector, KzError>,
{
    if j >= ps.n {
        return Err(KzError::PreconditionViolated(format!("site {j} out of range for n = {}", ps.n)));
    }
    let psi = build(ps)?;
    let plus = build(&ps.shifted(j, step))?;
    let minus = build(&ps.shifted(j, &-step))?;
    let h = step.to_c64();
    let lhs = plus.sub(&minus).scaled(2.0 / (2.0 * h));
    let z = ps.z_c64();
    let mut rhs = StateVector::zeros(ps.n);
    for k in (0..ps.n).filter(|&k| k != j) {
        let mut swapped = psi.clone();
        swapped.apply_swap(j, k);
        rhs.axpy(1.0 / (z[j] - z[k]), &swapped.sub(&psi));
    }
    let scale = rhs.sup_norm().max(psi.sup_norm());
    let diff = lhs.sub(&rhs).sup_norm();
    Ok(KzResidual { site: j, residual: if scale > 0.0 { diff / scale } else { diff } })
}

/// Distances between the deformed functions and their classical limits at
/// `ħ = −i·10^{−k}`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ClassicalLimit {
    pub exponents: Vec<u32>,
    /// `max |ħ^{−1} ν̃_M − ν̃^cl_M|` over the sample points.
    pub nu_errors: Vec<f64>,
    /// `max |μ_M^{(m)} − μ_M^{(m)cl}|` over the sample points and `m ∈ M`.
    pub mu_errors: Vec<f64>,
}

impl ClassicalLimit {
    /// Smallest observed order `log10(e_k / e_{k+1})` over both sequences.
    pub fn min_order(&self) -> f64 {
        let order = |e: &[f64]| e.windows(2).map(|w| (w[0] / w[1]).log10()).fold(f64::INFINITY, f64::min);
        order(&self.nu_errors).min(order(&self.mu_errors))
    }
}

pub fn classical_limit(ps: &ParamSet, m_set: &Subset, exponents: &[u32]) -> Result<ClassicalLimit, KzError> {
    let cl = ps.classical();
    let samples = [Gq::complex_frac(1, 3, 1, 7), Gq::complex_frac(5, 2, -1, 5), Gq::complex_frac(-7, 4, 2, 3)];
    let nu_cl = nu_tilde(&cl, m_set)?;
    let mu_cl: Vec<_> = m_set.elems().iter().map(|&m| mu(&cl, m_set, m)).collect::<Result<_, _>>()?;
    let mut nu_errors = Vec::new();
    let mut mu_errors = Vec::new();
    for &k in exponents {
        let hbar = Gq::complex_frac(0, 1, -1, 10i64.pow(k));
        let q = ParamSet::new(ps.n, ps.ell, ps.z.clone(), hbar.clone())?;
        let inv_h = hbar.inv().expect("nonzero");
        let nu_q = nu_tilde(&q, m_set)?;
        let mut e_nu: f64 = 0.0;
        let mut e_mu: f64 = 0.0;
        for t in &samples {
            let a = &nu_q.eval(std::slice::from_ref(t))? * &inv_h;
            let b = nu_cl.eval(std::slice::from_ref(t))?;
            e_nu = e_nu.max((&a - &b).to_c64().norm());
            for (i, &m) in m_set.elems().iter().enumerate() {
                let a = mu(&q, m_set, m)?.eval(std::slice::from_ref(t))?;
                let b = mu_cl[i].eval(std::slice::from_ref(t))?;
                e_mu = e_mu.max((&a - &b).to_c64().norm());
            }
        }
        nu_errors.push(e_nu);
        mu_errors.push(e_mu);
    }
    Ok(ClassicalLimit { exponents: exponents.to_vec(), nu_errors, mu_errors })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calibration_is_four_for_every_subset() {
        for n in [2usize, 4] {
            let ps = ParamSet::numeric_default(n, n / 2).unwrap();
            let g = gamma_inf(&ps, 0).unwrap();
            for m in subsets(n, n / 2) {
                let v = calibration_integral(&ps, &g, &m).unwrap();
                assert!((v - 4.0).norm() < 1e-6, "n={n}, {m}: {v}");
            }
        }
    }

    #[test]
    fn straight_contour_gives_zero() {
        let ps = ParamSet::numeric_default(4, 2).unwrap();
        let z = ps.z_c64();
        let top = 1.0;
        let x = 2.0 * 3.0 + 2.0;
        let (right, left) = (C64::new(x, top), C64::new(-x, top));
        let straight = BranchPath::new(
            vec![
                Piece::Ray { anchor: right, rightward: true, inbound: true },
                Piece::Line { from: right, to: left },
                Piece::Ray { anchor: left, rightward: false, inbound: false },
            ],
            StartBranch::AtInfinity(1.0),
        );
        let v = calibration_integral(&ps, &straight, &Subset::first(2)).unwrap();
        assert!(v.norm() < 1e-8, "{v}");
        let _ = z;
    }

    #[test]
    fn two_site_cycle_solution_vanishes() {
        let ps = ParamSet::numeric_default(2, 1).unwrap();
        let g = basis_cycle(&ps.z_c64(), 0, 0.3).unwrap();
        let a = psi_sv(&ps, &[g]).unwrap();
        assert!(a.psi.sup_norm() < 1e-8 * a.scale);
        assert!(a.scale > 0.1);
    }

    #[test]
    fn limits_converge_linearly() {
        let ps = ParamSet::numeric_default(4, 2).unwrap();
        let lim = classical_limit(&ps, &Subset::new(vec![0, 2]), &[3, 4, 5, 6]).unwrap();
        assert!(lim.min_order() > 0.9, "{lim:?}");
    }
}
