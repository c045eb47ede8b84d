//! Sparse multivariate polynomials and affine linear forms over Gaussian rationals.

use std::collections::BTreeMap;
use std::fmt;

use super::gq::GaussianRational as Gq;

/// `c + Σ coeffs[i]·t_i`
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Linear {
    pub coeffs: Vec<Gq>,
    pub constant: Gq,
}

impl Linear {
    pub fn constant(arity: usize, c: Gq) -> Self {
        Self { coeffs: vec![Gq::zero(); arity], constant: c }
    }

    /// `t_var + shift`
    pub fn var_shift(arity: usize, var: usize, shift: Gq) -> Self {
        let mut l = Self::constant(arity, shift);
        l.coeffs[var] = Gq::one();
        l
    }

    pub fn var(arity: usize, var: usize) -> Self {
        Self::var_shift(arity, var, Gq::zero())
    }

    /// `t_a − t_b + shift`
    pub fn diff(arity: usize, a: usize, b: usize, shift: Gq) -> Self {
        let mut l = Self::var_shift(arity, a, shift);
        l.coeffs[b] = -Gq::one();
        l
    }

    pub fn arity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(Gq::is_zero)
    }

    /// Index of the first variable with nonzero coefficient.
    pub fn lead_var(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Split into `(scale, monic)` with the lead coefficient of `monic` equal to one.
    pub fn normalize(&self) -> (Gq, Linear) {
        match self.lead_var() {
            None => (self.constant.clone(), Linear::constant(self.arity(), Gq::one())),
            Some(v) => {
                let s = self.coeffs[v].clone();
                let inv = s.inv().expect("nonzero lead");
                let coeffs = self.coeffs.iter().map(|c| c * &inv).collect();
                (s, Linear { coeffs, constant: &self.constant * &inv })
            }
        }
    }

    pub fn eval(&self, point: &[Gq]) -> Gq {
        let mut acc = self.constant.clone();
        for (c, x) in self.coeffs.iter().zip(point) {
            if !c.is_zero() {
                acc += &(c * x);
            }
        }
        acc
    }

    /// Substitute `t_i ↦ images[i]`, all images sharing one new arity.
    pub fn compose(&self, images: &[Linear]) -> Linear {
        let new_arity = images.first().map(|l| l.arity()).unwrap_or(0);
        let mut out = Linear::constant(new_arity, self.constant.clone());
        for (c, img) in self.coeffs.iter().zip(images) {
            if c.is_zero() {
                continue;
            }
            out.constant += &(c * &img.constant);
            for (o, ic) in out.coeffs.iter_mut().zip(&img.coeffs) {
                if !ic.is_zero() {
                    *o += &(c * ic);
                }
            }
        }
        out
    }

    pub fn to_poly(&self) -> Poly {
        let arity = self.arity();
        let mut p = Poly::constant(arity, self.constant.clone());
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u32; arity];
                e[i] = 1;
                p.add_term(e, c.clone());
            }
        }
        p
    }
}

/// Sparse polynomial: exponent vector ↦ nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    arity: usize,
    terms: BTreeMap<Vec<u32>, Gq>,
}

impl Poly {
    pub fn zero(arity: usize) -> Self {
        Self { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Gq) -> Self {
        let mut p = Self::zero(arity);
        p.add_term(vec![0; arity], c);
        p
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Gq::one())
    }

    pub fn var(arity: usize, v: usize) -> Self {
        Linear::var(arity, v).to_poly()
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn from_coeffs(coeffs: &[Gq]) -> Self {
        let mut p = Self::zero(1);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], c.clone());
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Gq)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Gq) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exps.len(), self.arity);
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[v]).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Gq) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.arity);
        }
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-Gq::one())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut out = Poly::zero(self.arity);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn mul_linear(&self, l: &Linear) -> Poly {
        let mut out = self.scale(&l.constant);
        for (v, c) in l.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (e, val) in &self.terms {
                let mut e2 = e.clone();
                e2[v] += 1;
                out.add_term(e2, val * c);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.arity);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, point: &[Gq]) -> Gq {
        let mut pows: Vec<Vec<Gq>> = vec![vec![Gq::one()]; self.arity];
        let mut acc = Gq::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while pows[v].len() <= k as usize {
                    let next = pows[v].last().unwrap() * &point[v];
                    pows[v].push(next);
                }
                term *= &pows[v][k as usize];
            }
            acc += &term;
        }
        acc
    }

    /// Substitute `t_i ↦ images[i]`; the result lives in the images' arity.
    pub fn compose(&self, images: &[Linear], new_arity: usize) -> Poly {
        let mut pow_cache: Vec<Vec<Poly>> = images
            .iter()
            .map(|_| vec![Poly::one(new_arity)])
            .collect();
        let img_polys: Vec<Poly> = images.iter().map(Linear::to_poly).collect();
        let mut out = Poly::zero(new_arity);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(new_arity, c.clone());
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while pow_cache[v].len() <= k as usize {
                    let next = pow_cache[v].last().unwrap().mul(&img_polys[v]);
                    pow_cache[v].push(next);
                }
                term = term.mul(&pow_cache[v][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Permute variables: new variable `perm[i]` takes the place of old `t_i`.
    pub fn permute(&self, perm: &[usize]) -> Poly {
        let mut out = Poly::zero(self.arity);
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; self.arity];
            for (i, &k) in e.iter().enumerate() {
                e2[perm[i]] = k;
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    pub fn derivative(&self, v: usize) -> Poly {
        let mut out = Poly::zero(self.arity);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[v] -= 1;
            out.add_term(e2, c * &Gq::int(e[v] as i64));
        }
        out
    }

    /// Coefficients of `t_v^k` as polynomials in the same arity (with `t_v` absent).
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let d = self.degree_in(v).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(self.arity); d + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    /// Exact division by a linear form; `None` when the remainder is nonzero.
    pub fn div_linear(&self, l: &Linear) -> Option<Poly> {
        let v = l.lead_var()?;
        let (s, monic) = l.normalize();
        let mut rest = monic.clone();
        rest.coeffs[v] = Gq::zero();
        let rest = rest.to_poly();
        let c = self.coeffs_in(v);
        let d = c.len() - 1;
        if d == 0 {
            return if self.is_zero() { Some(Poly::zero(self.arity)) } else { None };
        }
        // P = Σ c_k t^k, divide by (t + rest)
        let mut q = vec![Poly::zero(self.arity); d];
        q[d - 1] = c[d].clone();
        for k in (1..d).rev() {
            q[k - 1] = c[k].sub(&rest.mul(&q[k]));
        }
        let rem = c[0].sub(&rest.mul(&q[0]));
        if !rem.is_zero() {
            return None;
        }
        let mut out = Poly::zero(self.arity);
        let inv = s.inv()?;
        for (k, qk) in q.into_iter().enumerate() {
            for (e, c) in qk.terms {
                let mut e2 = e;
                e2[v] = k as u32;
                out.add_term(e2, &c * &inv);
            }
        }
        Some(out)
    }

    /// Ascending coefficient list of a univariate polynomial.
    pub fn univariate_coeffs(&self) -> Vec<Gq> {
        assert_eq!(self.arity, 1, "univariate_coeffs needs arity 1");
        let d = self.degree_in(0).map(|d| d as usize + 1).unwrap_or(0);
        let mut out = vec![Gq::zero(); d];
        for (e, c) in &self.terms {
            out[e[0] as usize] = c.clone();
        }
        out
    }

    /// Move to a different arity by an index map old → new (unmapped variables must not occur).
    pub fn reindex(&self, map: &[Option<usize>], new_arity: usize) -> Poly {
        let mut out = Poly::zero(new_arity);
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; new_arity];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    e2[map[i].expect("variable dropped while present")] += k;
                }
            }
            out.add_term(e2, c.clone());
        }
        out
    }
}

/// Sorted monomials in the form `(c)*t1^2*t2 + …`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => write!(f, "*t{}", i + 1)?,
                    _ => write!(f, "*t{}^{}", i + 1, k)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: i64) -> Gq {
        Gq::int(v)
    }

    #[test]
    fn division_by_linear_roundtrip() {
        let l = Linear::diff(2, 0, 1, Gq::frac(1, 2));
        let p = Poly::var(2, 0).mul(&Poly::var(2, 1)).add(&Poly::constant(2, g(3)));
        let prod = p.mul_linear(&l);
        assert_eq!(prod.div_linear(&l).unwrap(), p);
        assert!(p.div_linear(&l).is_none());
    }

    #[test]
    fn compose_shift() {
        // (t+1)^2 at t ↦ t−1 is t^2
        let p = Linear::var_shift(1, 0, g(1)).to_poly().pow(2);
        let q = p.compose(&[Linear::var_shift(1, 0, g(-1))], 1);
        assert_eq!(q, Poly::var(1, 0).pow(2));
    }

    #[test]
    fn eval_matches_horner() {
        let p = Poly::from_coeffs(&[g(1), g(-2), g(3)]);
        assert_eq!(p.eval(&[g(2)]), g(1 - 4 + 12));
    }
}
