//! The weight functions `μ`, `g_M`, `w_M`, `w̃_M`, the singlet functions `ν_M`, `ν̃_M`,
//! the total difference operator and membership tests for the spaces they live in.

use itertools::Itertools;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gq::GaussianRational as Gq;
use super::params::ParamSet;
use super::poly::Linear;
use super::ratfun::MultiRatFun;
use super::subset::{subsets, Subset};
use super::ExactError;

/// `t_var − c`
pub fn t_minus(arity: usize, var: usize, c: &Gq) -> Linear {
    Linear::var_shift(arity, var, -c)
}

/// Sign of a permutation given as images of `0..len`.
pub fn perm_sign(perm: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All permutations of `0..k` with signs, in lexicographic order.
pub fn signed_perms(k: usize) -> Vec<(Vec<usize>, i64)> {
    (0..k).permutations(k).map(|p| {
        let s = perm_sign(&p);
        (p, s)
    }).collect()
}

/// `μ_M^{(m)}` placed in variable `var` of an `arity`-variable function.
pub fn mu_var(ps: &ParamSet, m_set: &Subset, m: usize, arity: usize, var: usize) -> Result<MultiRatFun, ExactError> {
    if !m_set.contains(m) {
        return Err(ExactError::NotInSubset(m + 1));
    }
    let h = ps.h();
    let mut f = MultiRatFun::inv_linear(&t_minus(arity, var, &ps.z[m]))?;
    for &l in m_set.elems() {
        if l == m {
            continue;
        }
        let c = &(&ps.z[m] - &ps.z[l]) - &h;
        let inv = c.inv().ok_or(ExactError::ResonantPoints(m.min(l) + 1, m.max(l) + 1))?;
        f = f.mul_linear(&t_minus(arity, var, &(&ps.z[l] + &h))).scale(&inv);
    }
    Ok(f)
}

/// `μ_M^{(m)}(t)`
pub fn mu(ps: &ParamSet, m_set: &Subset, m: usize) -> Result<MultiRatFun, ExactError> {
    mu_var(ps, m_set, m, 1, 0)
}

/// `g_M` in the variables `vars` of an `arity`-variable function.
pub fn g_vars(ps: &ParamSet, m_set: &Subset, arity: usize, vars: &[usize]) -> Result<MultiRatFun, ExactError> {
    assert_eq!(vars.len(), m_set.len());
    let h = ps.h();
    let mut f = MultiRatFun::one(arity);
    for (a, &ma) in m_set.elems().iter().enumerate() {
        let v = vars[a];
        f = f.div_linear(&t_minus(arity, v, &ps.z[ma]))?;
        if h.is_zero() {
            continue;
        }
        for l in 0..ma {
            f = f
                .mul_linear(&t_minus(arity, v, &(&ps.z[l] + &h)))
                .div_linear(&t_minus(arity, v, &ps.z[l]))?;
        }
    }
    for a in 0..vars.len() {
        for b in a + 1..vars.len() {
            f = f.mul_linear(&Linear::diff(arity, vars[a], vars[b], -&h));
        }
    }
    Ok(f)
}

pub fn g_fun(ps: &ParamSet, m_set: &Subset) -> Result<MultiRatFun, ExactError> {
    let k = m_set.len();
    g_vars(ps, m_set, k, &(0..k).collect::<Vec<_>>())
}

/// `Σ_σ sgn σ · f(t_{σ1}, …, t_{σℓ})`
pub fn asym(f: &MultiRatFun) -> MultiRatFun {
    let k = f.arity();
    let mut acc = MultiRatFun::zero(k);
    for (perm, s) in signed_perms(k) {
        acc = acc.add(&f.permute(&perm).scale(&Gq::int(s)));
    }
    acc
}

/// `w_M = Asym g_M`
pub fn w_fun(ps: &ParamSet, m_set: &Subset) -> Result<MultiRatFun, ExactError> {
    Ok(asym(&g_fun(ps, m_set)?))
}

/// `w̃_M = det[μ_M^{(m_a)}(t_b)]`
pub fn w_tilde(ps: &ParamSet, m_set: &Subset) -> Result<MultiRatFun, ExactError> {
    let k = m_set.len();
    let mut acc = MultiRatFun::zero(k);
    for (perm, s) in signed_perms(k) {
        let mut term = MultiRatFun::constant(k, Gq::int(s));
        for (a, &ma) in m_set.elems().iter().enumerate() {
            term = term.mul(&mu_var(ps, m_set, ma, k, perm[a])?);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// The point `ẑ_N = (z_{n_1}, …, z_{n_ℓ})`.
pub fn hat_z(ps: &ParamSet, n_set: &Subset) -> Vec<Gq> {
    ps.points(n_set.elems())
}

/// `Res f(ẑ_N)`
pub fn res_at(f: &MultiRatFun, ps: &ParamSet, n_set: &Subset) -> Result<Gq, ExactError> {
    f.iter_res(&hat_z(ps, n_set))
}

/// Transition data `Res w_M(ẑ_N)` for all `#M = #N = ℓ`.
#[derive(Clone, Debug)]
pub struct BasisMatrix {
    pub subsets: Vec<Subset>,
    /// `entries[i][j] = Res w_{M_i}(ẑ_{M_j})`
    pub entries: Vec<Vec<Gq>>,
}

impl BasisMatrix {
    pub fn index_of(&self, m: &Subset) -> Option<usize> {
        self.subsets.iter().position(|s| s == m)
    }

    /// Zero outside `N ⩽⩽ M` and nonzero on the diagonal.
    pub fn is_triangular_invertible(&self) -> bool {
        for (i, m) in self.subsets.iter().enumerate() {
            for (j, nn) in self.subsets.iter().enumerate() {
                let e = &self.entries[i][j];
                if i == j && e.is_zero() {
                    return false;
                }
                if !nn.precedes(m) && !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, e)| i == j || e.is_zero()))
    }
}

pub fn basis_matrix(ps: &ParamSet) -> Result<BasisMatrix, ExactError> {
    ps.check_resonance()?;
    let subs = subsets(ps.n, ps.ell);
    let mut entries = Vec::with_capacity(subs.len());
    for m in &subs {
        let w = w_fun(ps, m)?;
        let row = subs.iter().map(|nn| res_at(&w, ps, nn)).collect::<Result<Vec<_>, _>>()?;
        entries.push(row);
    }
    Ok(BasisMatrix { subsets: subs, entries })
}

/// `Df(t) = f(t) − f(t+p)·∏(t−z_j−ħ)/(t−z_j)` for univariate `f`.
pub fn d_apply(ps: &ParamSet, f: &MultiRatFun) -> Result<MultiRatFun, ExactError> {
    let h = &ps.hbar;
    let mut shifted = f.shift(0, &ps.p);
    for zj in &ps.z {
        shifted = shifted
            .mul_linear(&t_minus(1, 0, &(zj + h)))
            .div_linear(&t_minus(1, 0, zj))?;
    }
    Ok(f.sub(&shifted))
}

/// `ν_M = ∏_{k∉M}(t−z_k−2ħ)`, or `∏_{k∉M}(t−z_k)` in classical mode.
pub fn nu_fun(ps: &ParamSet, m_set: &Subset) -> MultiRatFun {
    let h2 = &ps.h() + &ps.h();
    let mut f = MultiRatFun::one(1);
    for k in m_set.complement(ps.n) {
        f = f.mul_linear(&t_minus(1, 0, &(&ps.z[k] + &h2)));
    }
    f
}

/// `ν̃_M`; in classical mode `ν^cl·(Σ_{j∈M} 1/(t−z_j) − Σ_{j∉M} 1/(t−z_j))`.
pub fn nu_tilde(ps: &ParamSet, m_set: &Subset) -> Result<MultiRatFun, ExactError> {
    let nu = nu_fun(ps, m_set);
    if ps.classical {
        let mut s = MultiRatFun::zero(1);
        for j in 0..ps.n {
            let term = MultiRatFun::inv_linear(&t_minus(1, 0, &ps.z[j]))?;
            s = if m_set.contains(j) { s.add(&term) } else { s.sub(&term) };
        }
        return Ok(nu.mul(&s));
    }
    let h = &ps.hbar;
    let mut second = MultiRatFun::one(1);
    for k in m_set.complement(ps.n) {
        second = second.mul_linear(&t_minus(1, 0, &(&ps.z[k] + h)));
    }
    for &m in m_set.elems() {
        second = second
            .mul_linear(&t_minus(1, 0, &(&ps.z[m] + h)))
            .div_linear(&t_minus(1, 0, &ps.z[m]))?;
    }
    Ok(nu.sub(&second))
}

/// Which defining conditions of the target space a function satisfies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub antisymmetric: bool,
    pub growth: bool,
    pub poles_at_points: bool,
    pub residue_conditions: bool,
}

impl Membership {
    pub fn holds(&self) -> bool {
        self.antisymmetric && self.growth && self.poles_at_points && self.residue_conditions
    }
}

fn common_membership(ps: &ParamSet, f: &MultiRatFun) -> (bool, bool, bool) {
    let k = f.arity();
    let antisymmetric = (0..k.saturating_sub(1)).all(|a| {
        let mut perm: Vec<usize> = (0..k).collect();
        perm.swap(a, a + 1);
        f.add(&f.permute(&perm)).is_zero()
    });
    let growth = (0..k).all(|a| f.degree_in(a).map_or(true, |d| d <= k as i64 - 2));
    let poles = f.denominator().all(|(l, _)| {
        let nz: Vec<usize> = (0..k).filter(|&i| !l.coeffs[i].is_zero()).collect();
        nz.len() == 1 && ps.z.contains(&-&l.constant)
    });
    (antisymmetric, growth, poles)
}

/// Membership in the space of antisymmetric functions with `res_{t=z_m} f(t, t+ħ, …) = 0`.
pub fn membership_fl(ps: &ParamSet, f: &MultiRatFun) -> Result<Membership, ExactError> {
    let (antisymmetric, growth, poles_at_points) = common_membership(ps, f);
    let k = f.arity();
    let mut residue_conditions = true;
    if k >= 2 {
        let na = k - 1;
        let mut images = vec![Linear::var(na, 0), Linear::var_shift(na, 0, ps.hbar.clone())];
        for a in 2..k {
            images.push(Linear::var(na, a - 1));
        }
        let g = f.compose(&images, na)?;
        for zm in &ps.z {
            if !g.residue(0, zm)?.is_zero() {
                residue_conditions = false;
            }
        }
    }
    Ok(Membership { antisymmetric, growth, poles_at_points, residue_conditions })
}

/// Membership in the classical space: `res_{t1=z_m} res_{t2=z_m} f·∏_{a<b}(t_a−t_b)^{-1} = 0`.
pub fn membership_fcl(ps: &ParamSet, f: &MultiRatFun) -> Result<Membership, ExactError> {
    let (antisymmetric, growth, poles_at_points) = common_membership(ps, f);
    let k = f.arity();
    let mut residue_conditions = true;
    if k >= 2 {
        let mut g = f.clone();
        for a in 0..k {
            for b in a + 1..k {
                g = g.div_linear(&Linear::diff(k, a, b, Gq::zero()))?;
            }
        }
        for zm in &ps.z {
            let inner = g.residue_any(1, zm)?;
            if !inner.residue_any(0, zm)?.is_zero() {
                residue_conditions = false;
            }
        }
    }
    Ok(Membership { antisymmetric, growth, poles_at_points, residue_conditions })
}

/// `h_𝔪` for an ordered tuple of distinct indices.
pub fn h_tuple(ps: &ParamSet, tuple: &[usize]) -> Result<MultiRatFun, ExactError> {
    let k = tuple.len();
    let h = ps.h();
    let mut f = MultiRatFun::one(k);
    for (a, &ma) in tuple.iter().enumerate() {
        f = f.div_linear(&t_minus(k, a, &ps.z[ma]))?;
        for &mb in &tuple[..a] {
            f = f
                .mul_linear(&t_minus(k, a, &(&ps.z[mb] + &h)))
                .div_linear(&t_minus(k, a, &ps.z[mb]))?;
        }
    }
    Ok(f)
}

/// A random element of the weight-function space assembled from the `h_𝔪` expansion.
///
/// Coefficients are free on increasing tuples and propagated to the other orderings by
/// the exchange factors `(z_a−z_b−ħ)/(z_a−z_b+ħ)`; the symmetric sum is then multiplied by
/// the Vandermonde product.
pub fn random_fl_element(ps: &ParamSet, seed: u64) -> Result<MultiRatFun, ExactError> {
    ps.check_resonance()?;
    let k = ps.ell;
    let h = ps.h();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = MultiRatFun::zero(k);
    for base in subsets(ps.n, k) {
        let a0 = Gq::complex_frac(rng.gen_range(-9..=9), rng.gen_range(1..=4), rng.gen_range(-9..=9), rng.gen_range(1..=4));
        let m = base.elems();
        for (sigma, _) in signed_perms(k) {
            let mut coeff = a0.clone();
            for a in 0..k {
                for b in a + 1..k {
                    if sigma[a] > sigma[b] {
                        let d = &ps.z[m[sigma[a]]] - &ps.z[m[sigma[b]]];
                        let den = (&d + &h).inv().ok_or(ExactError::ResonantPoints(m[sigma[a]] + 1, m[sigma[b]] + 1))?;
                        coeff = &coeff * &(&(&d - &h) * &den);
                    }
                }
            }
            let tuple: Vec<usize> = sigma.iter().map(|&s| m[s]).collect();
            f = f.add(&h_tuple(ps, &tuple)?.scale(&coeff));
        }
    }
    for a in 0..k {
        for b in a + 1..k {
            f = f.mul_linear(&Linear::diff(k, a, b, Gq::zero()));
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ParamSet {
        ParamSet::new(2, 1, vec![Gq::int(0), Gq::int(1)], Gq::frac(1, 2)).unwrap()
    }

    #[test]
    fn mu_examples() {
        let ps = small();
        let m1 = Subset::from_labels(&[1]);
        let f = mu(&ps, &m1, 0).unwrap();
        assert_eq!(f.eval(&[Gq::int(4)]).unwrap(), Gq::frac(1, 4));
        let m12 = Subset::from_labels(&[1, 2]);
        let g = mu(&ps, &m12, 1).unwrap();
        // (2t−1)/(t−1) at t = 3
        assert_eq!(g.eval(&[Gq::int(3)]).unwrap(), Gq::frac(5, 2));
        assert_eq!(g.residue(0, &ps.z[1]).unwrap().constant_value().unwrap(), Gq::one());
    }

    #[test]
    fn w_single_variable() {
        let ps = small();
        let w2 = w_fun(&ps, &Subset::from_labels(&[2])).unwrap();
        // (t − 1/2)/((t−1)t) at t = 2
        assert_eq!(w2.eval(&[Gq::int(2)]).unwrap(), Gq::frac(3, 4));
        assert_eq!(w2.residue(0, &ps.z[1]).unwrap().constant_value().unwrap(), Gq::frac(1, 2));
    }

    #[test]
    fn asym_examples() {
        let t1 = MultiRatFun::linear(&Linear::var(2, 0));
        let expect = MultiRatFun::linear(&Linear::diff(2, 0, 1, Gq::zero()));
        assert!(asym(&t1).sub(&expect).is_zero());
        let sym = t1.add(&MultiRatFun::linear(&Linear::var(2, 1)));
        assert!(asym(&sym).is_zero());
        assert_eq!(asym(&MultiRatFun::linear(&Linear::var(1, 0))), MultiRatFun::linear(&Linear::var(1, 0)));
    }

    #[test]
    fn perm_signs() {
        assert_eq!(signed_perms(3).iter().map(|(_, s)| s).sum::<i64>(), 0);
        assert_eq!(perm_sign(&[1, 0, 2]), -1);
    }
}
