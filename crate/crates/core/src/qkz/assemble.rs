//! Hypergeometric solutions `ψ_W` assembled in several equivalent ways, and the
//! numerical checks run on them.

use num_complex::Complex64 as C64;

use crate::cycles::PeriodicFn;
use crate::exact::bases::{mu, w_fun, w_tilde};
use crate::exact::{subsets, GaussianRational as Gq, ParamSet, Subset};
use crate::hyperint::{hyper_i_many, hyper_i_poly_many, hyper_i_tensor, IntegralSetup, QuadResult};
use crate::qpoly::{q_poly, q_poly_singlet};

use super::basis::{basis_vectors, Family};
use super::state::{apply_k, sigma_plus, StateVector};
use super::QkzError;

/// Route from the integrals to the vector `ψ_W`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Method {
    /// `Σ_M I^{⊗ℓ}(w_M, W) v_M`
    Plain,
    /// `Σ_M I^{⊗ℓ}(w̃_M, W) ṽ_M`
    Tilde,
    /// `Σ_M det[I(μ_M^{(m_a)}, W_b)] ṽ_M`
    Det,
    /// `(−ħ)^{−ℓ} Σ_M ∏ 1/(z_m−z_k−ħ) det[I(Q_M^{(a)}, W_b)] v^S_M`; decaying cycles only.
    DetQ,
}

/// The two closed forms of `ψ_W` for `2ℓ = n`, where only the last factor may have nonzero limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SingletForm {
    /// Through the residue basis and `μ` integrals of size `ℓ−1`.
    Residue,
    /// Through the symmetric basis and `Q` integrals of size `ℓ−1`.
    Polynomial,
}

/// An assembled vector with the size of the sum it came from.
#[derive(Clone, Debug)]
pub struct Assembled {
    pub psi: StateVector,
    /// Sum of the absolute values of all terms, for relative vanishing statements.
    pub scale: f64,
}

fn check_factors(ps: &ParamSet, factors: &[PeriodicFn]) -> Result<(), QkzError> {
    if factors.len() != ps.ell {
        return Err(QkzError::FactorCount { expected: ps.ell, got: factors.len() });
    }
    Ok(())
}

fn inv(x: &Gq) -> Result<Gq, QkzError> {
    x.inv().ok_or(QkzError::Exact(crate::exact::ExactError::DivisionByZero))
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det(mut m: Vec<Vec<C64>>) -> C64 {
    let k = m.len();
    let mut acc = C64::new(1.0, 0.0);
    for col in 0..k {
        let piv = (col..k).max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm())).unwrap();
        if m[piv][col].norm() == 0.0 {
            return C64::new(0.0, 0.0);
        }
        if piv != col {
            m.swap(piv, col);
            acc = -acc;
        }
        acc *= m[col][col];
        for r in col + 1..k {
            let f = m[r][col] / m[col][col];
            for c in col..k {
                let v = m[col][c];
                m[r][c] -= f * v;
            }
        }
    }
    acc
}

/// Permanent of a small nonnegative matrix by expansion along the first row.
pub fn permanent(m: &[Vec<f64>]) -> f64 {
    fn rec(m: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
        if row == m.len() {
            return 1.0;
        }
        let mut s = 0.0;
        for c in 0..m.len() {
            if !used[c] {
                used[c] = true;
                s += m[row][c] * rec(m, row + 1, used);
                used[c] = false;
            }
        }
        s
    }
    rec(m, 0, &mut vec![false; m.len()])
}

fn coeff_sup(row: &[Gq]) -> f64 {
    row.iter().map(|c| c.to_c64().norm()).fold(0.0, f64::max)
}

/// Adds `coef · u` to `psi`, where `u` has exact coefficients `row` on `subs`.
fn accumulate(psi: &mut StateVector, subs: &[Subset], row: &[Gq], coef: C64) {
    for (s, c) in subs.iter().zip(row) {
        if !c.is_zero() {
            psi.add_to(s, coef * c.to_c64());
        }
    }
}

fn values(table: &[Vec<QuadResult>], rows: std::ops::Range<usize>, cols: usize) -> (Vec<Vec<C64>>, Vec<Vec<f64>>) {
    let v = table[rows.clone()].iter().map(|r| r[..cols].iter().map(QuadResult::value).collect()).collect();
    let a = table[rows].iter().map(|r| r[..cols].iter().map(|q| q.abs_integral).collect()).collect();
    (v, a)
}

/// `∏_{k∉M, m∈M} 1/(z_m−z_k−ħ)`
fn cross_factor(ps: &ParamSet, m_set: &Subset) -> Result<Gq, QkzError> {
    let h = &ps.hbar;
    let mut f = Gq::one();
    for k in m_set.complement(ps.n) {
        for &m in m_set.elems() {
            f = &f * &inv(&(&(&ps.z[m] - &ps.z[k]) - h))?;
        }
    }
    Ok(f)
}

/// `ψ_W` for the tensor product `W = W_1 ⊗ … ⊗ W_ℓ`.
pub fn assemble_psi(ps: &ParamSet, factors: &[PeriodicFn], method: Method, setup: IntegralSetup) -> Result<Assembled, QkzError> {
    check_factors(ps, factors)?;
    let ell = ps.ell;
    let subs = subsets(ps.n, ell);
    let mut psi = StateVector::zeros(ps.n);
    if ell == 0 {
        psi.add_to(&Subset::empty(), C64::new(1.0, 0.0));
        return Ok(Assembled { psi, scale: 1.0 });
    }
    let mut scale = 0.0;
    match method {
        Method::Plain | Method::Tilde => {
            let (ws, family) = if method == Method::Plain {
                (subs.iter().map(|m| w_fun(ps, m)).collect::<Result<Vec<_>, _>>()?, Family::Tensor)
            } else {
                (subs.iter().map(|m| w_tilde(ps, m)).collect::<Result<Vec<_>, _>>()?, Family::Residue)
            };
            let basis = basis_vectors(ps, family)?;
            let vals = hyper_i_tensor(ps, &ws, factors, setup)?;
            for (i, v) in vals.iter().enumerate() {
                accumulate(&mut psi, &subs, &basis.coeffs[i], v.value);
                scale += v.abs_integral * coeff_sup(&basis.coeffs[i]);
            }
        }
        Method::Det => {
            let basis = basis_vectors(ps, Family::Residue)?;
            let mut mus = Vec::with_capacity(subs.len() * ell);
            for m_set in &subs {
                for &m in m_set.elems() {
                    mus.push(mu(ps, m_set, m)?);
                }
            }
            let table = hyper_i_many(ps, &mus, factors, setup)?;
            for (i, _) in subs.iter().enumerate() {
                let (v, a) = values(&table, i * ell..(i + 1) * ell, ell);
                accumulate(&mut psi, &subs, &basis.coeffs[i], det(v));
                scale += permanent(&a) * coeff_sup(&basis.coeffs[i]);
            }
        }
        Method::DetQ => {
            let basis = basis_vectors(ps, Family::Symmetric)?;
            let mut polys = Vec::with_capacity(subs.len() * ell);
            for m_set in &subs {
                for a in 1..=ell {
                    polys.push(q_poly(ps, m_set, a)?);
                }
            }
            let table = hyper_i_poly_many(ps, &polys, factors, setup.contour, setup.tol)?;
            let pre = inv(&(-&ps.hbar).pow(ell as u32))?;
            for (i, m_set) in subs.iter().enumerate() {
                let c = (&pre * &cross_factor(ps, m_set)?).to_c64();
                let (v, a) = values(&table, i * ell..(i + 1) * ell, ell);
                accumulate(&mut psi, &subs, &basis.coeffs[i], c * det(v));
                scale += c.norm() * permanent(&a) * coeff_sup(&basis.coeffs[i]);
            }
        }
    }
    Ok(Assembled { psi, scale })
}

/// `ψ_W` for `2ℓ = n` from integrals of size `ℓ−1`; the first `ℓ−1` factors must
/// decay at both ends.
pub fn assemble_singlet(ps: &ParamSet, factors: &[PeriodicFn], form: SingletForm, setup: IntegralSetup) -> Result<Assembled, QkzError> {
    check_factors(ps, factors)?;
    let ell = ps.ell;
    if ell == 0 || 2 * ell != ps.n {
        return Err(QkzError::PreconditionViolated(format!("needs n = 2ℓ ≥ 2, got n = {}, ℓ = {ell}", ps.n)));
    }
    if factors[..ell - 1].iter().any(|w| !w.in_hat_space()) {
        return Err(QkzError::PreconditionViolated("the first ℓ−1 factors must vanish at both ends".into()));
    }
    let (lo, hi) = factors[ell - 1].limits();
    let jump = hi - lo;
    let head = &factors[..ell - 1];
    let subs = subsets(ps.n, ell);
    let p = &ps.p;
    let h = &ps.hbar;
    let mut psi = StateVector::zeros(ps.n);
    let mut scale = 0.0;
    match form {
        SingletForm::Residue => {
            let basis = basis_vectors(ps, Family::Residue)?;
            let mut mus = Vec::new();
            for m_set in &subs {
                for &m in &m_set.elems()[..ell - 1] {
                    mus.push(mu(ps, m_set, m)?);
                }
            }
            let table = if head.is_empty() { vec![] } else { hyper_i_many(ps, &mus, head, setup)? };
            let lead = p.pow(ell as u32 + 1).to_c64() * jump;
            for (i, m_set) in subs.iter().enumerate() {
                let e = m_set.elems();
                let last = &ps.z[e[ell - 1]];
                let mut f = Gq::one();
                for &ma in &e[..ell - 1] {
                    f = &f * &(last - &ps.z[ma]);
                }
                for zk in &ps.z {
                    f = &f * &inv(&(&(last - zk) - h))?;
                }
                let c = lead * f.to_c64();
                let (v, a) = values(&table, i * (ell - 1)..(i + 1) * (ell - 1), ell - 1);
                accumulate(&mut psi, &subs, &basis.coeffs[i], c * det(v));
                scale += c.norm() * permanent(&a) * coeff_sup(&basis.coeffs[i]);
            }
        }
        SingletForm::Polynomial => {
            let basis = basis_vectors(ps, Family::Symmetric)?;
            let mut polys = Vec::new();
            for m_set in &subs {
                for a in 1..ell {
                    polys.push(q_poly_singlet(ps, m_set, a)?);
                }
            }
            let table =
                if head.is_empty() { vec![] } else { hyper_i_poly_many(ps, &polys, head, setup.contour, setup.tol)? };
            let lead = (&Gq::int(1 << ell) * p).to_c64() * jump;
            for (i, m_set) in subs.iter().enumerate() {
                let mut f = Gq::one();
                for k in m_set.complement(ps.n) {
                    for &m in m_set.elems() {
                        f = &f * &inv(&(&(&ps.z[k] - &ps.z[m]) + h))?;
                    }
                }
                let c = lead * f.to_c64();
                let (v, a) = values(&table, i * (ell - 1)..(i + 1) * (ell - 1), ell - 1);
                accumulate(&mut psi, &subs, &basis.coeffs[i], c * det(v));
                scale += c.norm() * permanent(&a) * coeff_sup(&basis.coeffs[i]);
            }
        }
    }
    Ok(Assembled { psi, scale })
}

/// Outcome of one qKZ check `ψ(…, z_j + p, …) = K_j ψ(z)`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct QkzResidual {
    /// 0-based site.
    pub site: usize,
    /// `‖ψ(shifted) − K_j ψ‖ / ‖ψ‖` in the sup norm.
    pub residual: f64,
    pub norm: f64,
}

/// Runs the qKZ check at site `j`; `build` produces `ψ` for a given point set and
/// is called at `z` and at `z` with `z_j` moved by `p`.
pub fn check_qkz<F>(ps: &ParamSet, j: usize, build: F) -> Result<QkzResidual, QkzError>
where
    F: Fn(&ParamSet) -> Result<StateVector, QkzError>,
{
    if j >= ps.n {
        return Err(QkzError::PreconditionViolated(format!("site {j} out of range for n = {}", ps.n)));
    }
    let base = build(ps)?;
    let moved = build(&ps.shifted(j, &ps.p))?;
    let k = apply_k(&ps.z_c64(), ps.hbar_c64(), j, &base)?;
    let norm = base.sup_norm();
    let residual = if norm == 0.0 { moved.sup_norm() } else { moved.sub(&k).sup_norm() / norm };
    Ok(QkzResidual { site: j, residual, norm })
}

/// `‖Σ⁺ψ‖` relative to the given scale.
pub fn singular_defect(psi: &StateVector, scale: f64) -> f64 {
    let d = sigma_plus(psi).sup_norm();
    if scale > 0.0 {
        d / scale
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{constant_one, random_periodic};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn constant_cycle_gives_zero() {
        let ps = ParamSet::numeric_default(3, 1).unwrap();
        let a = assemble_psi(&ps, &[constant_one(&ps)], Method::Det, IntegralSetup::default()).unwrap();
        assert!(a.psi.sup_norm() < 1e-9 * a.scale);
    }

    #[test]
    fn determinant_and_permanent() {
        let m = vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(3.0, 0.0), c(4.0, 1.0)]];
        assert!((det(m) - c(-2.0, 1.0)).norm() < 1e-14);
        assert_eq!(permanent(&[vec![1.0, 2.0], vec![3.0, 4.0]]), 10.0);
        assert_eq!(permanent(&[]), 1.0);
        assert_eq!(det(vec![]), c(1.0, 0.0));
    }

    #[test]
    fn weight_zero_is_the_top_vector() {
        let ps = ParamSet::numeric_default(3, 0).unwrap();
        let a = assemble_psi(&ps, &[], Method::Det, IntegralSetup::default()).unwrap();
        assert_eq!(a.psi.get(&Subset::empty()), c(1.0, 0.0));
    }

    #[test]
    fn wrong_factor_count_is_rejected() {
        let ps = ParamSet::numeric_default(3, 1).unwrap();
        let r = assemble_psi(&ps, &[], Method::Det, IntegralSetup::default());
        assert!(matches!(r, Err(QkzError::FactorCount { expected: 1, got: 0 })));
    }

    #[test]
    fn routes_agree_at_weight_one() {
        let ps = ParamSet::numeric_default(3, 1).unwrap();
        let w = vec![random_periodic(&ps, false, 3)];
        let setup = IntegralSetup::default();
        let d = assemble_psi(&ps, &w, Method::Det, setup).unwrap().psi;
        for m in [Method::Plain, Method::Tilde] {
            let o = assemble_psi(&ps, &w, m, setup).unwrap().psi;
            assert!(o.sub(&d).sup_norm() < 1e-8 * d.sup_norm(), "{m:?}");
        }
        assert!(d.in_weight(1, 1e-300));
    }

    #[test]
    fn qkz_three_sites() {
        let ps = ParamSet::numeric_default(3, 1).unwrap();
        let w = vec![random_periodic(&ps, false, 8)];
        for j in 0..3 {
            let r = check_qkz(&ps, j, |q| Ok(assemble_psi(q, &w, Method::Det, IntegralSetup::default())?.psi)).unwrap();
            assert!(r.residual < 1e-8, "{r:?}");
        }
    }
}
