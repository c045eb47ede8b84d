//! Exact identities between the weight functions, each returned as a combination that must vanish.

use super::bases::*;
use super::gq::GaussianRational as Gq;
use super::params::ParamSet;
use super::poly::Linear;
use super::ratfun::{Combination, MultiRatFun};
use super::subset::{subsets, Subset};
use super::ExactError;

fn require_size(m_set: &Subset, k: usize) -> Result<(), ExactError> {
    if m_set.len() != k {
        return Err(ExactError::SubsetSize { expected: k, got: m_set.len() });
    }
    Ok(())
}

fn require_singlet(ps: &ParamSet) -> Result<(), ExactError> {
    if 2 * ps.ell != ps.n {
        return Err(ExactError::BadWeight { n: ps.n, ell: ps.ell });
    }
    Ok(())
}

/// One mismatch in the residue table.
#[derive(Clone, Debug, PartialEq)]
pub struct ResTableEntry {
    pub row: Subset,
    pub col: Subset,
    pub what: &'static str,
    pub value: Gq,
}

/// Residues of `w`, `w̃` and their classical versions at all points `ẑ_N`;
/// returns every entry that violates the expected pattern.
pub fn residue_table(ps: &ParamSet) -> Result<Vec<ResTableEntry>, ExactError> {
    ps.check_resonance()?;
    let cl = ps.classical();
    let subs = subsets(ps.n, ps.ell);
    let mut bad = Vec::new();
    for m in &subs {
        let w = w_fun(ps, m)?;
        let wt = w_tilde(ps, m)?;
        let wcl = w_fun(&cl, m)?;
        let wtcl = w_tilde(&cl, m)?;
        for nn in &subs {
            let diag = m == nn;
            let mut push = |what, value: Gq, ok: bool| {
                if !ok {
                    bad.push(ResTableEntry { row: m.clone(), col: nn.clone(), what, value });
                }
            };
            let r = res_at(&w, ps, nn)?;
            if diag {
                let rg = res_at(&g_fun(ps, m)?, ps, nn)?;
                let ok = r == rg && !r.is_zero();
                push("w_diag", r, ok);
            } else if !nn.precedes(m) {
                let ok = r.is_zero();
                push("w", r, ok);
            }
            let rt = res_at(&wt, ps, nn)?;
            let ok = if diag { rt.is_one() } else { rt.is_zero() };
            push("w_tilde", rt, ok);
            let rc = res_at(&wcl, &cl, nn)?;
            if diag {
                let rg = res_at(&g_fun(&cl, m)?, &cl, nn)?;
                let ok = rc == rg;
                push("w_cl_diag", rc, ok);
            } else {
                let ok = rc.is_zero();
                push("w_cl", rc, ok);
            }
            let rtc = res_at(&wtcl, &cl, nn)?;
            let ok = if diag { rtc.is_one() } else { rtc.is_zero() };
            push("w_tilde_cl", rtc, ok);
        }
    }
    Ok(bad)
}

/// `w_M − Σ_N w̃_N·Res w_M(ẑ_N)`
pub fn w_from_w_tilde(ps: &ParamSet, m_set: &Subset) -> Result<Combination, ExactError> {
    ps.check_resonance()?;
    let w = w_fun(ps, m_set)?;
    let mut c = Combination::new().plus(w.clone());
    for nn in subsets(ps.n, m_set.len()) {
        let r = res_at(&w, ps, &nn)?;
        if !r.is_zero() {
            c.push(-r, w_tilde(ps, &nn)?);
        }
    }
    Ok(c)
}

/// `w_{M_ext} − ∏_{a<b}(z_a−z_b−ħ)(z_a−z_b+ħ)/(z_a−z_b)·w̃_{M_ext}`
pub fn extremal_prefactor(ps: &ParamSet) -> Result<Combination, ExactError> {
    let ext = Subset::first(ps.ell);
    let h = ps.h();
    let mut pref = Gq::one();
    for a in 0..ps.ell {
        for b in a + 1..ps.ell {
            let d = &ps.z[a] - &ps.z[b];
            pref = &pref * &(&(&(&d - &h) * &(&d + &h)) / &d);
        }
    }
    let mut c = Combination::new().plus(w_fun(ps, &ext)?);
    c.push(-pref, w_tilde(ps, &ext)?);
    Ok(c)
}

/// Difference of the two sides of the sum rule over `k ∉ M` for `#M = ℓ−1`.
pub fn sum_rule(ps: &ParamSet, m_set: &Subset, classical: bool) -> Result<Combination, ExactError> {
    require_size(m_set, ps.ell.saturating_sub(1))?;
    let k = ps.ell;
    let q = if classical { ps.classical() } else { ps.clone() };
    let h = q.h();
    let mut lhs = MultiRatFun::zero(k);
    for j in m_set.complement(ps.n) {
        lhs = lhs.add(&w_fun(&q, &m_set.with(j))?);
    }
    if !classical {
        lhs = lhs.scale(&h);
    }
    let rest: Vec<usize> = (1..k).collect();
    let g = g_vars(&q, m_set, k, &rest)?;
    let bracket = if classical {
        let mut s = MultiRatFun::zero(k);
        for zm in &ps.z {
            s = s.add(&MultiRatFun::inv_linear(&t_minus(k, 0, zm))?);
        }
        for a in 1..k {
            s = s.sub(&MultiRatFun::inv_linear(&Linear::diff(k, 0, a, Gq::zero()))?.scale(&Gq::int(2)));
        }
        for a in 1..k {
            s = s.mul_linear(&Linear::diff(k, 0, a, Gq::zero()));
        }
        s
    } else {
        let mut first = MultiRatFun::one(k);
        let mut second = MultiRatFun::one(k);
        for a in 1..k {
            first = first.mul_linear(&Linear::diff(k, 0, a, -&h));
            second = second.mul_linear(&Linear::diff(k, 0, a, h.clone()));
        }
        for zm in &ps.z {
            second = second
                .mul_linear(&t_minus(k, 0, &(zm + &h)))
                .div_linear(&t_minus(k, 0, zm))?;
        }
        first.sub(&second)
    };
    let rhs = asym(&bracket.mul(&g));
    Ok(Combination::new().plus(lhs).minus(rhs))
}

/// `ν̃_M − Dν_M`
pub fn nu_tilde_is_total_difference(ps: &ParamSet, m_set: &Subset) -> Result<Combination, ExactError> {
    require_singlet(ps)?;
    let nu = nu_fun(ps, m_set);
    Ok(Combination::new().plus(nu_tilde(ps, m_set)?).minus(d_apply(ps, &nu)?))
}

/// `ν̃^cl − (−2(ν^cl)' + ν^cl·Σ_j 1/(t−z_j))`, the total-derivative form divided by the phase.
pub fn nu_tilde_cl_is_total_derivative(ps: &ParamSet, m_set: &Subset) -> Result<Combination, ExactError> {
    require_singlet(ps)?;
    let cl = ps.classical();
    let nu = nu_fun(&cl, m_set);
    let mut s = MultiRatFun::zero(1);
    for zj in &ps.z {
        s = s.add(&MultiRatFun::inv_linear(&t_minus(1, 0, zj))?);
    }
    let rhs = nu.derivative(0).scale(&Gq::int(-2)).add(&nu.mul(&s));
    Ok(Combination::new().plus(nu_tilde(&cl, m_set)?).minus(rhs))
}

/// `ν̃_M − Σ_{m∈M} μ_M^{(m)}·res ν̃_M(z_m)` (quantum or classical).
pub fn nu_tilde_partial_fractions(ps: &ParamSet, m_set: &Subset, classical: bool) -> Result<Combination, ExactError> {
    require_singlet(ps)?;
    let q = if classical { ps.classical() } else { ps.clone() };
    let nt = nu_tilde(&q, m_set)?;
    let mut c = Combination::new().plus(nt.clone());
    for &m in m_set.elems() {
        let r = nt.residue(0, &ps.z[m])?.constant_value()?;
        c.push(-r, mu(&q, m_set, m)?);
    }
    Ok(c)
}

/// `w̃_M − Asym(μ^{(m_1)}(t_1)…μ^{(m_{ℓ−1})}(t_{ℓ−1}) ν̃_M(t_ℓ)) / res ν̃_M(z_{m_ℓ})`
pub fn w_tilde_via_nu(ps: &ParamSet, m_set: &Subset, classical: bool) -> Result<Combination, ExactError> {
    require_singlet(ps)?;
    require_size(m_set, ps.ell)?;
    let q = if classical { ps.classical() } else { ps.clone() };
    let k = ps.ell;
    let nt = nu_tilde(&q, m_set)?;
    let last = m_set.elems()[k - 1];
    let r = nt.residue(0, &ps.z[last])?.constant_value()?;
    let mut prod = MultiRatFun::one(k);
    for (a, &ma) in m_set.elems()[..k - 1].iter().enumerate() {
        prod = prod.mul(&mu_var(&q, m_set, ma, k, a)?);
    }
    let images: Vec<Linear> = vec![Linear::var(k, k - 1)];
    prod = prod.mul(&nt.compose(&images, k)?);
    let rhs = asym(&prod).scale(&r.inv().ok_or(ExactError::DivisionByZero)?);
    Ok(Combination::new().plus(w_tilde(&q, m_set)?).minus(rhs))
}

/// Two-site R-matrix entry `⟨a b| R(x) |c d⟩` for signs encoded as `true` = minus.
pub fn r_entry(x: &Gq, h: &Gq, out: (bool, bool), inp: (bool, bool)) -> Gq {
    let den = (x + h).inv().expect("R-matrix pole");
    if inp.0 == inp.1 {
        if out == inp { Gq::one() } else { Gq::zero() }
    } else if out == inp {
        x * &den
    } else if out == (inp.1, inp.0) {
        h * &den
    } else {
        Gq::zero()
    }
}

/// Exchange relation for the weight functions at sites `i, i+1` (0-based `i`):
/// one combination per subset `M` of the current weight.
pub fn exchange_relation(ps: &ParamSet, i: usize, m_set: &Subset) -> Result<Combination, ExactError> {
    let swapped = ps.swap_points(i);
    // labels with the two signs exchanged, evaluated at exchanged points
    let lhs = w_fun(&swapped, &m_set.swap_sites(i))?;
    let x = &ps.z[i] - &ps.z[i + 1];
    let eps = (m_set.contains(i), m_set.contains(i + 1));
    let mut c = Combination::new().plus(lhs);
    for out in [(false, false), (false, true), (true, false), (true, true)] {
        if out.0 as u8 + out.1 as u8 != eps.0 as u8 + eps.1 as u8 {
            continue;
        }
        let coeff = r_entry(&x, &ps.h(), eps, out);
        if coeff.is_zero() {
            continue;
        }
        let mut elems: Vec<usize> = m_set.elems().iter().copied().filter(|&e| e != i && e != i + 1).collect();
        if out.0 {
            elems.push(i);
        }
        if out.1 {
            elems.push(i + 1);
        }
        c.push(-coeff, w_fun(ps, &Subset::new(elems))?);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ZeroTest;

    #[test]
    fn sum_rule_single_site() {
        let ps = ParamSet::new(1, 0, vec![Gq::frac(1, 3)], Gq::frac(2, 7)).unwrap();
        let ps = ParamSet { ell: 1, ..ps };
        let c = sum_rule(&ps, &Subset::empty(), false).unwrap();
        assert!(c.check(ZeroTest::Deterministic).zero);
    }

    #[test]
    fn exchange_mixed_two_sites() {
        let ps = ParamSet::random(2, 1, 5).unwrap();
        for m in subsets(2, 1) {
            assert!(exchange_relation(&ps, 0, &m).unwrap().check(ZeroTest::Deterministic).zero);
        }
    }
}
