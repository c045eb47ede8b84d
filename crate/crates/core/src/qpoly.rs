//! Univariate exact polynomials, polynomial parts, the shift-difference `T_ħ`
//! and the polynomials `Q_M^{(a)}` together with their two-variable generating function.

use std::ops::{Add, Mul, Neg, Sub};

use crate::exact::bases::{d_apply, mu, t_minus};
use crate::exact::{Combination, ExactError, GaussianRational as Gq, Linear, MultiRatFun, ParamSet, Poly, Subset};

/// Ascending coefficients with trailing zeros stripped.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExactPoly {
    c: Vec<Gq>,
}

impl ExactPoly {
    pub fn new(mut c: Vec<Gq>) -> Self {
        while c.last().is_some_and(Gq::is_zero) {
            c.pop();
        }
        Self { c }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![Gq::one()])
    }

    pub fn constant(v: Gq) -> Self {
        Self::new(vec![v])
    }

    /// `t − root`
    pub fn monic_linear(root: &Gq) -> Self {
        Self::new(vec![-root, Gq::one()])
    }

    /// `t^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Gq::zero(); k + 1];
        c[k] = Gq::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Gq] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn eval(&self, t: &Gq) -> Gq {
        self.c.iter().rev().fold(Gq::zero(), |acc, c| &(&acc * t) + c)
    }

    pub fn eval_c64(&self, t: num_complex::Complex64) -> num_complex::Complex64 {
        self.c.iter().rev().fold(num_complex::Complex64::new(0.0, 0.0), |acc, c| acc * t + c.to_c64())
    }

    pub fn scale(&self, s: &Gq) -> Self {
        Self::new(self.c.iter().map(|c| c * s).collect())
    }

    /// `f(t + s)`
    pub fn shift(&self, s: &Gq) -> Self {
        // Horner in the shifted variable
        let lin = ExactPoly::new(vec![s.clone(), Gq::one()]);
        self.c.iter().rev().fold(ExactPoly::zero(), |acc, c| &(&acc * &lin) + &ExactPoly::constant(c.clone()))
    }

    /// Quotient and remainder of Euclidean division.
    pub fn div_rem(&self, d: &ExactPoly) -> (ExactPoly, ExactPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.c[dd].inv().expect("nonzero lead");
        let mut rem = self.c.clone();
        if rem.len() <= dd {
            return (ExactPoly::zero(), self.clone());
        }
        let mut q = vec![Gq::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = &rem[k + dd] * &lead_inv;
            if !coef.is_zero() {
                for (j, dc) in d.c.iter().enumerate() {
                    rem[k + j] = &rem[k + j] - &(&coef * dc);
                }
            }
            q[k] = coef;
        }
        rem.truncate(dd);
        (ExactPoly::new(q), ExactPoly::new(rem))
    }

    pub fn to_ratfun(&self) -> MultiRatFun {
        MultiRatFun::from_poly(Poly::from_coeffs(&self.c))
    }

    pub fn from_ratfun_poly(p: &Poly) -> Self {
        Self::new(p.univariate_coeffs())
    }
}

impl Add for &ExactPoly {
    type Output = ExactPoly;
    fn add(self, o: &ExactPoly) -> ExactPoly {
        let n = self.c.len().max(o.c.len());
        ExactPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.c.get(i).cloned().unwrap_or_default();
                    match o.c.get(i) {
                        Some(b) => &a + b,
                        None => a,
                    }
                })
                .collect(),
        )
    }
}

impl Neg for &ExactPoly {
    type Output = ExactPoly;
    fn neg(self) -> ExactPoly {
        ExactPoly::new(self.c.iter().map(|c| -c).collect())
    }
}

impl Sub for &ExactPoly {
    type Output = ExactPoly;
    fn sub(self, o: &ExactPoly) -> ExactPoly {
        self + &(-o)
    }
}

impl Mul for &ExactPoly {
    type Output = ExactPoly;
    fn mul(self, o: &ExactPoly) -> ExactPoly {
        if self.is_zero() || o.is_zero() {
            return ExactPoly::zero();
        }
        let mut c = vec![Gq::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += &(a * b);
            }
        }
        ExactPoly::new(c)
    }
}

/// `P⁺_M(t) = ∏_{m∈M}(t − z_m − 2ħ)`
pub fn p_plus(ps: &ParamSet, m_set: &Subset) -> ExactPoly {
    let h2 = &ps.hbar + &ps.hbar;
    m_set
        .elems()
        .iter()
        .fold(ExactPoly::one(), |acc, &m| &acc * &ExactPoly::monic_linear(&(&ps.z[m] + &h2)))
}

/// `P⁻_M(t) = ∏_{k∉M}(t − z_k − 2ħ)`
pub fn p_minus(ps: &ParamSet, m_set: &Subset) -> ExactPoly {
    let h2 = &ps.hbar + &ps.hbar;
    m_set
        .complement(ps.n)
        .iter()
        .fold(ExactPoly::one(), |acc, &k| &acc * &ExactPoly::monic_linear(&(&ps.z[k] + &h2)))
}

/// `T_ħ f(t) = f(t) − f(t+ħ)` for a univariate rational function.
pub fn t_h(f: &MultiRatFun, h: &Gq) -> MultiRatFun {
    f.sub(&f.shift(0, h))
}

/// `[f]_+`: the polynomial with `f − [f]_+ → 0` at infinity.
pub fn poly_part(f: &MultiRatFun) -> ExactPoly {
    let num = ExactPoly::from_ratfun_poly(f.numerator());
    let den = ExactPoly::from_ratfun_poly(&f.denominator_poly());
    num.div_rem(&den).0
}

/// `P(t) / (t − root)^a` as a rational function.
fn over_power(p: &ExactPoly, root: &Gq, a: usize) -> Result<MultiRatFun, ExactError> {
    let mut f = p.to_ratfun();
    for _ in 0..a {
        f = f.div_linear(&t_minus(1, 0, root))?;
    }
    Ok(f)
}

/// `Q_M^{(a)}` for `1 ≤ a ≤ #M`.
pub fn q_poly(ps: &ParamSet, m_set: &Subset, a: usize) -> Result<ExactPoly, ExactError> {
    let h = &ps.hbar;
    let pp = p_plus(ps, m_set);
    let pm = p_minus(ps, m_set);
    let pp_shift = pp.shift(h);
    // [P⁺(t+ħ)/(t+ħ)^a]_+
    let inner = poly_part(&over_power(&pp_shift, &-h, a)?);
    // P⁻(t)/P⁺(t+ħ) · inner
    let mut ratio = (&pm * &inner).to_ratfun();
    for &m in m_set.elems() {
        ratio = ratio.div_linear(&t_minus(1, 0, &(&ps.z[m] + h)))?;
    }
    let first = &pp_shift * &poly_part(&t_h(&ratio, h));
    let second = &pm * &poly_part(&t_h(&over_power(&pp, &Gq::zero(), a)?, h));
    Ok(&first + &second)
}

/// The shorter form of `Q_M^{(a)}` valid when `2ℓ = n`.
pub fn q_poly_singlet(ps: &ParamSet, m_set: &Subset, a: usize) -> Result<ExactPoly, ExactError> {
    if 2 * m_set.len() != ps.n {
        return Err(ExactError::BadWeight { n: ps.n, ell: m_set.len() });
    }
    let h = &ps.hbar;
    let pp = p_plus(ps, m_set);
    let pm = p_minus(ps, m_set);
    let first = &pp.shift(h) * &poly_part(&t_h(&over_power(&pm, &-h, a)?, h));
    let second = &pm * &poly_part(&t_h(&over_power(&pp, &Gq::zero(), a)?, h));
    Ok(&first + &second)
}

/// `D(∏_{k≠m}(t−z_k−2ħ)) − ħ∏_{k≠m}(z_m−z_k−ħ)·μ_M^{(m)}(t)`, the left side of the
/// decomposition that the `Q` polynomials complete.
pub fn q_sum_target(ps: &ParamSet, m_set: &Subset, m: usize) -> Result<MultiRatFun, ExactError> {
    let h = &ps.hbar;
    let h2 = h + h;
    let mut prod = MultiRatFun::one(1);
    let mut coeff = h.clone();
    for k in 0..ps.n {
        if k == m {
            continue;
        }
        prod = prod.mul_linear(&t_minus(1, 0, &(&ps.z[k] + &h2)));
        coeff = &coeff * &(&(&ps.z[m] - &ps.z[k]) - h);
    }
    Ok(d_apply(ps, &prod)?.sub(&mu(ps, m_set, m)?.scale(&coeff)))
}

/// Residual of `D(∏_{k≠m}…) = ħ∏(z_m−z_k−ħ)μ_M^{(m)} + Σ_a Q_M^{(a)}(t)(z_m+2ħ)^{a−1}`.
pub fn check_q_decomposition(ps: &ParamSet, m_set: &Subset, m: usize) -> Result<Combination, ExactError> {
    ps.check_resonance()?;
    let y = &ps.z[m] + &(&ps.hbar + &ps.hbar);
    let mut c = Combination::new().plus(q_sum_target(ps, m_set, m)?);
    for a in 1..=m_set.len() {
        c.push(-y.pow(a as u32 - 1), q_poly(ps, m_set, a)?.to_ratfun());
    }
    Ok(c)
}

/// `P(t)` as a polynomial in variable `var` of a two-variable ring, argument shifted by `s`.
fn lift2(p: &ExactPoly, var: usize, s: &Gq) -> Poly {
    Poly::from_coeffs(p.coeffs()).compose(&[Linear::var_shift(2, var, s.clone())], 2)
}

/// Outcome of the two-variable construction.
#[derive(Clone, Debug)]
pub struct GeneratingReport {
    /// `f(t, y)` has no denominator left
    pub polynomial: bool,
    /// `q^{(a)} = Q_M^{(a)}` for all `a`
    pub coefficients_match: bool,
    /// `f(t, z_m+2ħ)` equals the decomposition target for all `m ∈ M`
    pub specializations_match: bool,
    pub f: Poly,
}

impl GeneratingReport {
    pub fn holds(&self) -> bool {
        self.polynomial && self.coefficients_match && self.specializations_match
    }
}

/// Builds `f(t, y)` (variables `t = t_1`, `y = t_2`), checks it is a polynomial, reduces it
/// modulo `P⁺_M(y)` and compares the coefficients of `y^{a−1}` with `Q_M^{(a)}`.
pub fn check_generating_function(ps: &ParamSet, m_set: &Subset) -> Result<GeneratingReport, ExactError> {
    let h = &ps.hbar;
    let zero = Gq::zero();
    let two_h = h + h;
    let pp = p_plus(ps, m_set);
    let pm = p_minus(ps, m_set);
    let ty = |s: Gq| Linear::diff(2, 0, 1, s);
    let pp_t = lift2(&pp, 0, &zero);
    let pm_t = lift2(&pm, 0, &zero);
    let pp_th = lift2(&pp, 0, h);
    let pm_th = lift2(&pm, 0, h);
    let pp_y = lift2(&pp, 1, &zero);
    let pm_yh = lift2(&pm, 1, &-h);

    let t1 = MultiRatFun::from_poly(pp_t.mul(&pm_t)).div_linear(&ty(zero.clone()))?;
    let t2 = MultiRatFun::from_poly(pp_th.mul(&pm_th)).div_linear(&ty(two_h.clone()))?;
    let t3 = MultiRatFun::from_poly(pp_y.mul(&pm_t).scale(h))
        .div_linear(&ty(zero.clone()))?
        .div_linear(&ty(h.clone()))?;
    let t4 = MultiRatFun::from_poly(pp_th.mul(&pm_yh).scale(h))
        .div_linear(&ty(h.clone()))?
        .div_linear(&ty(two_h.clone()))?;
    let f = t1.sub(&t2).sub(&t3).sub(&t4);

    // cancel the denominator exactly
    let mut num = f.numerator().clone();
    let mut polynomial = true;
    for (l, k) in f.denominator() {
        for _ in 0..k {
            match num.div_linear(l) {
                Some(q) => num = q,
                None => polynomial = false,
            }
        }
    }
    let f_poly = num;

    // q(t, y) = f mod P⁺(y), coefficients in y
    let mut rem = f_poly.clone();
    let l = m_set.len();
    let pp_c = pp.coeffs();
    loop {
        let d = match rem.degree_in(1) {
            Some(d) if (d as usize) >= l && l > 0 => d as usize,
            _ => break,
        };
        let top = rem.coeffs_in(1)[d].clone();
        // subtract top·y^{d−l}·P⁺(y)
        let mut sub = Poly::zero(2);
        for (j, c) in pp_c.iter().enumerate() {
            for (e, v) in top.terms() {
                let mut e2 = e.clone();
                e2[1] = (d - l + j) as u32;
                sub.add_term(e2, v * c);
            }
        }
        rem = rem.sub(&sub);
    }
    let by_y = rem.coeffs_in(1);
    let mut coefficients_match = true;
    for a in 1..=l {
        let qa = by_y.get(a - 1).cloned().unwrap_or_else(|| Poly::zero(2));
        let qa = qa.reindex(&[Some(0), None], 1);
        if ExactPoly::from_ratfun_poly(&qa) != q_poly(ps, m_set, a)? {
            coefficients_match = false;
        }
    }
    if l == 0 && !rem.is_zero() {
        coefficients_match = false;
    }

    let mut specializations_match = true;
    for &m in m_set.elems() {
        let y = &ps.z[m] + &two_h;
        let spec = MultiRatFun::from_poly(f_poly.clone()).substitute(1, &y)?;
        if !spec.sub(&q_sum_target(ps, m_set, m)?).is_zero() {
            specializations_match = false;
        }
    }
    Ok(GeneratingReport { polynomial, coefficients_match, specializations_match, f: f_poly })
}

/// Residual of `[f(u)/(u−x)]_{+,u} − [f(x)/(x−u)]_{+,x}` as a polynomial in `(u, x)`.
pub fn polynomial_part_swap(f: &MultiRatFun) -> Result<Poly, ExactError> {
    // treat u = t_1, x = t_2
    let lift = |g: &MultiRatFun, var: usize| g.compose(&[Linear::var(2, var)], 2);
    let left = lift(f, 0)?.div_linear(&Linear::diff(2, 0, 1, Gq::zero()))?;
    let right = lift(f, 1)?.div_linear(&Linear::diff(2, 1, 0, Gq::zero()))?;
    Ok(poly_part_in(&left, 0).sub(&poly_part_in(&right, 1)))
}

/// Polynomial part with respect to one variable of a two-variable function whose
/// denominator factors all involve that variable.
pub fn poly_part_in(f: &MultiRatFun, var: usize) -> Poly {
    let num = f.numerator();
    let den = f.denominator_poly();
    let dd = den.degree_in(var).unwrap_or(0) as usize;
    let den_c = den.coeffs_in(var);
    let lead = &den_c[dd];
    // the lead coefficient must be a constant for exact division
    let lead_const = lead
        .terms()
        .next()
        .map(|(_, c)| c.clone())
        .expect("nonzero denominator");
    assert_eq!(lead.num_terms(), 1, "lead coefficient must be constant in the other variable");
    let inv = lead_const.inv().expect("nonzero lead");
    let mut rem = num.clone();
    let mut quot = Poly::zero(f.arity());
    while let Some(d) = rem.degree_in(var) {
        let d = d as usize;
        if d < dd || rem.is_zero() {
            break;
        }
        let top = rem.coeffs_in(var)[d].scale(&inv);
        let mut shift_e = vec![0u32; f.arity()];
        shift_e[var] = (d - dd) as u32;
        let mut mono = Poly::zero(f.arity());
        mono.add_term(shift_e, Gq::one());
        let q_term = top.mul(&mono);
        rem = rem.sub(&q_term.mul(&den));
        quot = quot.add(&q_term);
    }
    quot
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps2() -> ParamSet {
        ParamSet::new(2, 1, vec![Gq::int(0), Gq::int(1)], Gq::frac(1, 2)).unwrap()
    }

    #[test]
    fn p_plus_minus_example() {
        let ps = ps2();
        let m = Subset::from_labels(&[1]);
        assert_eq!(p_plus(&ps, &m), ExactPoly::new(vec![Gq::int(-1), Gq::one()]));
        assert_eq!(p_minus(&ps, &m), ExactPoly::new(vec![Gq::int(-2), Gq::one()]));
        assert_eq!(p_plus(&ps, &Subset::empty()), ExactPoly::one());
    }

    #[test]
    fn t_h_examples() {
        let h = Gq::frac(1, 3);
        let t = MultiRatFun::linear(&Linear::var(1, 0));
        assert_eq!(poly_part(&t_h(&t, &h)), ExactPoly::constant(-h.clone()));
        let t2 = t.mul(&t);
        let expect = ExactPoly::new(vec![-h.pow(2), -(&h + &h)]);
        assert_eq!(poly_part(&t_h(&t2, &h)), expect);
        assert!(t_h(&MultiRatFun::constant(1, Gq::int(5)), &h).is_zero());
    }

    #[test]
    fn poly_part_examples() {
        let f = MultiRatFun::inv_linear(&Linear::var_shift(1, 0, Gq::int(-1))).unwrap();
        assert!(poly_part(&f).is_zero());
        let t = MultiRatFun::linear(&Linear::var(1, 0));
        assert_eq!(poly_part(&f.mul(&t).mul(&t)), ExactPoly::new(vec![Gq::one(), Gq::one()]));
    }

    #[test]
    fn top_q_vanishes_two_sites() {
        let ps = ps2();
        assert!(q_poly(&ps, &Subset::from_labels(&[1]), 1).unwrap().is_zero());
    }
}
