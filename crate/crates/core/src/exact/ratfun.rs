//! Multivariate rational functions whose denominators are products of affine linear forms.
//!
//! Every function built from the rational-function bases has this shape, so sums are formed
//! over the least common multiple of the factored denominators and no polynomial gcd is needed.
//! Numerator and denominator are never reduced against each other.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gq::GaussianRational as Gq;
use super::poly::{Linear, Poly};
use super::ExactError;

#[derive(Clone, Debug, PartialEq)]
pub struct MultiRatFun {
    arity: usize,
    num: Poly,
    /// monic non-constant linear forms with multiplicities
    den: BTreeMap<Linear, u32>,
}

impl MultiRatFun {
    pub fn from_poly(num: Poly) -> Self {
        Self { arity: num.arity(), num, den: BTreeMap::new() }
    }

    pub fn zero(arity: usize) -> Self {
        Self::from_poly(Poly::zero(arity))
    }

    pub fn constant(arity: usize, c: Gq) -> Self {
        Self::from_poly(Poly::constant(arity, c))
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Gq::one())
    }

    pub fn linear(l: &Linear) -> Self {
        Self::from_poly(l.to_poly())
    }

    /// `1 / l`
    pub fn inv_linear(l: &Linear) -> Result<Self, ExactError> {
        let arity = l.arity();
        if l.is_constant() {
            let c = l.constant.inv().ok_or(ExactError::DivisionByZero)?;
            return Ok(Self::constant(arity, c));
        }
        let (s, monic) = l.normalize();
        let mut den = BTreeMap::new();
        den.insert(monic, 1);
        Ok(Self { arity, num: Poly::constant(arity, s.inv().expect("nonzero lead")), den })
    }

    /// `num / l`
    pub fn ratio(num: &Linear, den: &Linear) -> Result<Self, ExactError> {
        Ok(Self::inv_linear(den)?.mul_linear(num))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> impl Iterator<Item = (&Linear, u32)> {
        self.den.iter().map(|(l, &k)| (l, k))
    }

    pub fn denominator_poly(&self) -> Poly {
        let mut p = Poly::one(self.arity);
        for (l, &k) in &self.den {
            for _ in 0..k {
                p = p.mul_linear(l);
            }
        }
        p
    }

    /// Exact zero test on the expanded numerator.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn scale(&self, c: &Gq) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        Self { arity: self.arity, num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Gq::one())
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.arity, o.arity, "arity mismatch in product");
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.arity);
        }
        let mut den = self.den.clone();
        for (l, k) in &o.den {
            *den.entry(l.clone()).or_insert(0) += k;
        }
        Self { arity: self.arity, num: self.num.mul(&o.num), den }
    }

    pub fn mul_linear(&self, l: &Linear) -> Self {
        Self { arity: self.arity, num: self.num.mul_linear(l), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        Self { arity: self.arity, num: self.num.mul(p), den: self.den.clone() }
    }

    pub fn div_linear(&self, l: &Linear) -> Result<Self, ExactError> {
        Ok(self.mul(&Self::inv_linear(l)?))
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.arity, o.arity, "arity mismatch in sum");
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let mut lcm = self.den.clone();
        for (l, &k) in &o.den {
            let e = lcm.entry(l.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        let lift = |f: &Self| {
            let mut p = f.num.clone();
            for (l, &k) in &lcm {
                let have = f.den.get(l).copied().unwrap_or(0);
                for _ in have..k {
                    p = p.mul_linear(l);
                }
            }
            p
        };
        let num = lift(self).add(&lift(o));
        if num.is_zero() {
            return Self::zero(self.arity);
        }
        Self { arity: self.arity, num, den: lcm }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn sum<'a>(arity: usize, items: impl IntoIterator<Item = &'a Self>) -> Self {
        items.into_iter().fold(Self::zero(arity), |acc, f| acc.add(f))
    }

    /// Substitute `t_i ↦ images[i]` (affine forms in `new_arity` variables).
    pub fn compose(&self, images: &[Linear], new_arity: usize) -> Result<Self, ExactError> {
        assert_eq!(images.len(), self.arity, "one image per variable");
        let mut num = self.num.compose(images, new_arity);
        let mut den = BTreeMap::new();
        for (l, &k) in &self.den {
            let l2 = l.compose(images);
            let l2 = if l2.arity() == new_arity { l2 } else { Linear::constant(new_arity, l2.constant) };
            if l2.is_constant() {
                let inv = l2.constant.inv().ok_or(ExactError::DivisionByZero)?;
                num = num.scale(&inv.pow(k));
            } else {
                let (s, monic) = l2.normalize();
                num = num.scale(&s.inv().expect("nonzero lead").pow(k));
                *den.entry(monic).or_insert(0) += k;
            }
        }
        if num.is_zero() {
            return Ok(Self::zero(new_arity));
        }
        Ok(Self { arity: new_arity, num, den })
    }

    /// Rename variables: old `t_i` becomes `t_{perm[i]}`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut num = self.num.permute(perm);
        let mut den = BTreeMap::new();
        for (l, &k) in &self.den {
            let mut coeffs = vec![Gq::zero(); self.arity];
            for (i, c) in l.coeffs.iter().enumerate() {
                coeffs[perm[i]] = c.clone();
            }
            // the lead variable may change, so renormalize
            let (s, monic) = Linear { coeffs, constant: l.constant.clone() }.normalize();
            if !s.is_one() {
                num = num.scale(&s.inv().expect("nonzero lead").pow(k));
            }
            *den.entry(monic).or_insert(0) += k;
        }
        Self { arity: self.arity, num, den }
    }

    /// Shift one variable: `t_v ↦ t_v + c`.
    pub fn shift(&self, v: usize, c: &Gq) -> Self {
        let images: Vec<Linear> = (0..self.arity)
            .map(|i| if i == v { Linear::var_shift(self.arity, i, c.clone()) } else { Linear::var(self.arity, i) })
            .collect();
        self.compose(&images, self.arity).expect("shift keeps denominators nonzero")
    }

    /// Set `t_v = value`; the result has one variable fewer.
    pub fn substitute(&self, v: usize, value: &Gq) -> Result<Self, ExactError> {
        let na = self.arity - 1;
        let images: Vec<Linear> = (0..self.arity)
            .map(|i| match i.cmp(&v) {
                std::cmp::Ordering::Less => Linear::var(na, i),
                std::cmp::Ordering::Equal => Linear::constant(na, value.clone()),
                std::cmp::Ordering::Greater => Linear::var(na, i - 1),
            })
            .collect();
        self.compose(&images, na)
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self { arity: self.arity, num: self.num.derivative(v), den: self.den.clone() };
        for (l, &k) in &self.den {
            let c = &l.coeffs[v];
            if c.is_zero() {
                continue;
            }
            let mut den = self.den.clone();
            *den.get_mut(l).unwrap() += 1;
            let term = Self {
                arity: self.arity,
                num: self.num.scale(&(c * &Gq::int(-(k as i64)))),
                den,
            };
            out = out.add(&term);
        }
        out
    }

    /// Degree in `t_v` at infinity: `deg_v num − deg_v den`; `None` for the zero function.
    pub fn degree_in(&self, v: usize) -> Option<i64> {
        let dn = self.num.degree_in(v)? as i64;
        let dd: i64 = self
            .den
            .iter()
            .filter(|(l, _)| !l.coeffs[v].is_zero())
            .map(|(_, &k)| k as i64)
            .sum();
        Some(dn - dd)
    }

    /// Pole multiplicity along `t_v = a` after cancelling common factors.
    fn pole_order(&self, v: usize, a: &Gq) -> (u32, Self) {
        let target = Linear::var_shift(self.arity, v, -a);
        let mut k = self.den.get(&target).copied().unwrap_or(0);
        let mut f = self.clone();
        while k > 0 {
            match f.num.div_linear(&target) {
                Some(q) => {
                    f.num = q;
                    k -= 1;
                    if k == 0 {
                        f.den.remove(&target);
                    } else {
                        f.den.insert(target.clone(), k);
                    }
                }
                None => break,
            }
        }
        (k, f)
    }

    /// Residue in `t_v` at `a` for a pole of order at most one.
    pub fn residue(&self, v: usize, a: &Gq) -> Result<Self, ExactError> {
        let (k, f) = self.pole_order(v, a);
        match k {
            0 => Ok(Self::zero(self.arity - 1)),
            1 => {
                let target = Linear::var_shift(self.arity, v, -a);
                let mut g = f;
                g.den.remove(&target);
                g.substitute(v, a)
            }
            k => Err(ExactError::HigherOrderPole(k)),
        }
    }

    /// Residue in `t_v` at `a` for a pole of any order.
    pub fn residue_any(&self, v: usize, a: &Gq) -> Result<Self, ExactError> {
        let (k, f) = self.pole_order(v, a);
        if k <= 1 {
            return f.residue(v, a);
        }
        let target = Linear::var_shift(self.arity, v, -a);
        let mut g = f;
        g.den.remove(&target);
        let mut fact = 1i64;
        for j in 1..k {
            g = g.derivative(v);
            fact *= j as i64;
        }
        Ok(g.substitute(v, a)?.scale(&Gq::frac(1, fact)))
    }

    /// Iterated residue, innermost in the last variable and outermost in the first.
    pub fn iter_res(&self, points: &[Gq]) -> Result<Gq, ExactError> {
        assert_eq!(points.len(), self.arity, "one point per variable");
        let mut f = self.clone();
        for a in (0..self.arity).rev() {
            f = f.residue(a, &points[a])?;
        }
        f.constant_value()
    }

    /// Value of an arity-0 function.
    pub fn constant_value(&self) -> Result<Gq, ExactError> {
        let pt: Vec<Gq> = Vec::new();
        self.eval(&pt)
    }

    pub fn eval(&self, point: &[Gq]) -> Result<Gq, ExactError> {
        let mut d = Gq::one();
        for (l, &k) in &self.den {
            d *= &l.eval(point).pow(k);
        }
        let inv = d.inv().ok_or(ExactError::PoleHit)?;
        Ok(&self.num.eval(point) * &inv)
    }

    /// Floating copy for repeated numerical evaluation.
    pub fn to_numeric(&self) -> NumericRat {
        NumericRat {
            num: self.num.terms().map(|(e, c)| (e.clone(), c.to_c64())).collect(),
            den: self
                .den
                .iter()
                .map(|(l, &k)| (l.coeffs.iter().map(Gq::to_c64).collect(), l.constant.to_c64(), k as i32))
                .collect(),
        }
    }

    /// Upper bound on the total degree of `num·(common denominator)` used for failure bounds.
    pub fn degree_bound(&self) -> u32 {
        self.num.total_degree().unwrap_or(0) + self.den.values().sum::<u32>()
    }
}

impl fmt::Display for MultiRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.num)?;
        if self.den.is_empty() {
            return Ok(());
        }
        write!(f, " / (")?;
        let mut first = true;
        for (l, k) in &self.den {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "({})", l.to_poly())?;
            if *k > 1 {
                write!(f, "^{k}")?;
            }
        }
        write!(f, ")")
    }
}

/// Double-precision image of a [`MultiRatFun`].
#[derive(Clone, Debug)]
pub struct NumericRat {
    num: Vec<(Vec<u32>, Complex64)>,
    den: Vec<(Vec<Complex64>, Complex64, i32)>,
}

impl NumericRat {
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        let mut n = Complex64::new(0.0, 0.0);
        for (e, c) in &self.num {
            let mut term = *c;
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    term *= x.powu(k);
                }
            }
            n += term;
        }
        for (coeffs, c0, k) in &self.den {
            let mut l = *c0;
            for (c, x) in coeffs.iter().zip(point) {
                l += c * x;
            }
            n /= l.powi(*k);
        }
        n
    }

    pub fn eval1(&self, t: Complex64) -> Complex64 {
        self.eval(&[t])
    }
}

/// How zero-equivalence of a combination is decided.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ZeroTest {
    /// Expand everything over a common denominator.
    Deterministic,
    /// Exact evaluation at random integer points of `[-10^6, 10^6]^arity`.
    Probabilistic { probes: usize, seed: u64 },
}

impl ZeroTest {
    pub const MIN_PROBES: usize = 20;
    pub const RANGE: i64 = 1_000_000;

    /// Full expansion for small instances, random probes beyond.
    pub fn auto(n: usize, ell: usize, seed: u64) -> Self {
        if ell <= 2 && n <= 4 {
            ZeroTest::Deterministic
        } else {
            ZeroTest::Probabilistic { probes: Self::MIN_PROBES, seed }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroVerdict {
    pub zero: bool,
    pub deterministic: bool,
    /// upper bound on the probability that a nonzero combination passed
    pub failure_bound: f64,
    /// largest nonzero evaluation encountered, as a magnitude
    pub witness: f64,
}

/// A formal sum `Σ c_i f_i` whose vanishing is to be decided.
#[derive(Clone, Debug, Default)]
pub struct Combination {
    terms: Vec<(Gq, MultiRatFun)>,
}

impl Combination {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Gq, f: MultiRatFun) -> &mut Self {
        self.terms.push((c, f));
        self
    }

    pub fn plus(mut self, f: MultiRatFun) -> Self {
        self.terms.push((Gq::one(), f));
        self
    }

    pub fn minus(mut self, f: MultiRatFun) -> Self {
        self.terms.push((-Gq::one(), f));
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn expand(&self) -> Option<MultiRatFun> {
        let arity = self.terms.first()?.1.arity();
        Some(self.terms.iter().fold(MultiRatFun::zero(arity), |acc, (c, f)| acc.add(&f.scale(c))))
    }

    pub fn check(&self, mode: ZeroTest) -> ZeroVerdict {
        match mode {
            ZeroTest::Deterministic => {
                let zero = self.expand().map(|f| f.is_zero()).unwrap_or(true);
                ZeroVerdict { zero, deterministic: true, failure_bound: 0.0, witness: if zero { 0.0 } else { f64::INFINITY } }
            }
            ZeroTest::Probabilistic { probes, seed } => self.probe(probes.max(ZeroTest::MIN_PROBES), seed),
        }
    }

    fn probe(&self, probes: usize, seed: u64) -> ZeroVerdict {
        let Some(first) = self.terms.first() else {
            return ZeroVerdict { zero: true, deterministic: true, failure_bound: 0.0, witness: 0.0 };
        };
        let arity = first.1.arity();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degree: u32 = self.terms.iter().map(|(_, f)| f.degree_bound()).sum::<u32>().max(1);
        let mut done = 0;
        let mut attempts = 0;
        let mut witness = 0.0f64;
        while done < probes && attempts < probes * 20 {
            attempts += 1;
            let pt: Vec<Gq> = (0..arity).map(|_| Gq::int(rng.gen_range(-ZeroTest::RANGE..=ZeroTest::RANGE))).collect();
            let mut acc = Gq::zero();
            let mut ok = true;
            for (c, f) in &self.terms {
                match f.eval(&pt) {
                    Ok(v) => acc += &(c * &v),
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            done += 1;
            if !acc.is_zero() {
                witness = witness.max(acc.to_c64().norm());
            }
        }
        let per = (degree as f64 / (2 * ZeroTest::RANGE + 1) as f64).min(1.0);
        ZeroVerdict {
            zero: witness == 0.0 && done >= probes,
            deterministic: false,
            failure_bound: per.powi(done as i32),
            witness,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(arity: usize, v: usize, shift: i64) -> Linear {
        Linear::var_shift(arity, v, Gq::int(shift))
    }

    #[test]
    fn partial_fractions_add_up() {
        // 1/(t-1) - 1/(t-2) = -1/((t-1)(t-2))
        let a = MultiRatFun::inv_linear(&t(1, 0, -1)).unwrap();
        let b = MultiRatFun::inv_linear(&t(1, 0, -2)).unwrap();
        let lhs = a.sub(&b);
        let rhs = a.mul(&b).neg();
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn residue_simple_and_absent() {
        let f = MultiRatFun::inv_linear(&t(1, 0, 0)).unwrap();
        assert_eq!(f.residue(0, &Gq::zero()).unwrap().constant_value().unwrap(), Gq::one());
        assert!(f.residue(0, &Gq::one()).unwrap().is_zero());
    }

    #[test]
    fn residue_rejects_double_pole() {
        let f = MultiRatFun::inv_linear(&t(1, 0, 0)).unwrap();
        let f2 = f.mul(&f);
        assert_eq!(f2.residue(0, &Gq::zero()), Err(ExactError::HigherOrderPole(2)));
        // t/t^2 has a simple pole after cancellation
        let g = f2.mul_linear(&t(1, 0, 0));
        assert_eq!(g.residue(0, &Gq::zero()).unwrap().constant_value().unwrap(), Gq::one());
    }

    #[test]
    fn residue_any_double_pole() {
        // (t+3)/t^2 has residue 1 at 0
        let f = MultiRatFun::inv_linear(&t(1, 0, 0)).unwrap();
        let g = f.mul(&f).mul_linear(&t(1, 0, 3));
        assert_eq!(g.residue_any(0, &Gq::zero()).unwrap().constant_value().unwrap(), Gq::one());
    }

    #[test]
    fn derivative_of_inverse() {
        let f = MultiRatFun::inv_linear(&t(1, 0, -1)).unwrap();
        let expect = f.mul(&f).neg();
        assert!(f.derivative(0).sub(&expect).is_zero());
    }

    #[test]
    fn probabilistic_agrees_with_expansion() {
        let a = MultiRatFun::inv_linear(&Linear::diff(2, 0, 1, Gq::int(1))).unwrap();
        let b = a.permute(&[1, 0]);
        let mut c = Combination::new();
        c.push(Gq::one(), a.clone()).push(Gq::one(), b);
        let det = c.check(ZeroTest::Deterministic);
        let pr = c.check(ZeroTest::Probabilistic { probes: 20, seed: 7 });
        assert_eq!(det.zero, pr.zero);
        assert!(!det.zero);
    }
}
