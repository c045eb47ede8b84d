//! Problem instances: number of sites, weight, points and the deformation parameter.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::gq::GaussianRational as Gq;
use super::ExactError;

#[derive(Clone, Debug, PartialEq)]
pub struct ParamSet {
    pub n: usize,
    pub ell: usize,
    pub z: Vec<Gq>,
    pub hbar: Gq,
    /// step of the difference equation, always `2·hbar`
    pub p: Gq,
    /// constructors use `hbar = 0` when set
    pub classical: bool,
}

impl ParamSet {
    pub fn new(n: usize, ell: usize, z: Vec<Gq>, hbar: Gq) -> Result<Self, ExactError> {
        if z.len() != n {
            return Err(ExactError::WrongPointCount { expected: n, got: z.len() });
        }
        if 2 * ell > n {
            return Err(ExactError::BadWeight { n, ell });
        }
        for j in 0..n {
            for k in j + 1..n {
                if z[j] == z[k] {
                    return Err(ExactError::DuplicatePoints(j + 1, k + 1));
                }
            }
        }
        let p = &hbar + &hbar;
        Ok(Self { n, ell, z, hbar, p, classical: false })
    }

    /// Integer points `0, 1, …, n−1` and `hbar = −i/2`.
    pub fn numeric_default(n: usize, ell: usize) -> Result<Self, ExactError> {
        Self::new(n, ell, (0..n as i64).map(Gq::int).collect(), Gq::complex_frac(0, 1, -1, 2))
    }

    /// Integer points with the skewed deformation `hbar = 3/10 − i/2`.
    pub fn numeric_skewed(n: usize, ell: usize) -> Result<Self, ExactError> {
        Self::new(n, ell, (0..n as i64).map(Gq::int).collect(), Gq::complex_frac(3, 10, -1, 2))
    }

    /// Random Gaussian-rational points and deformation avoiding resonances.
    pub fn random(n: usize, ell: usize, seed: u64) -> Result<Self, ExactError> {
        if 2 * ell > n {
            return Err(ExactError::BadWeight { n, ell });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| {
            let d = rng.gen_range(1..=6);
            Gq::complex_frac(rng.gen_range(-30..=30), d, rng.gen_range(-30..=30), d)
        };
        for _ in 0..1000 {
            let hbar = draw(&mut rng);
            if hbar.is_zero() {
                continue;
            }
            let z: Vec<Gq> = (0..n).map(|_| draw(&mut rng)).collect();
            if let Ok(ps) = Self::new(n, ell, z, hbar) {
                if ps.check_resonance().is_ok() && ps.check_resonance_wide().is_ok() {
                    return Ok(ps);
                }
            }
        }
        Err(ExactError::ResonantPoints(1, 1))
    }

    /// Same data with a different weight.
    pub fn with_ell(&self, ell: usize) -> Result<Self, ExactError> {
        if 2 * ell > self.n {
            return Err(ExactError::BadWeight { n: self.n, ell });
        }
        let mut out = self.clone();
        out.ell = ell;
        Ok(out)
    }

    /// The `hbar = 0` view used by the differential-equation side.
    pub fn classical(&self) -> Self {
        let mut out = self.clone();
        out.classical = true;
        out
    }

    /// Effective deformation: zero in classical mode.
    pub fn h(&self) -> Gq {
        if self.classical {
            Gq::zero()
        } else {
            self.hbar.clone()
        }
    }

    /// `z_j − z_k ∉ {0, ±hbar}` for all `j < k`.
    pub fn check_resonance(&self) -> Result<(), ExactError> {
        let h = self.h();
        for j in 0..self.n {
            for k in j + 1..self.n {
                let d = &self.z[j] - &self.z[k];
                if d.is_zero() || (&d - &h).is_zero() || (&d + &h).is_zero() {
                    return Err(ExactError::ResonantPoints(j + 1, k + 1));
                }
            }
        }
        Ok(())
    }

    /// Also excludes `z_j − z_k = ±2hbar`, which makes some intermediate products vanish.
    pub fn check_resonance_wide(&self) -> Result<(), ExactError> {
        let h2 = &self.h() + &self.h();
        for j in 0..self.n {
            for k in j + 1..self.n {
                let d = &self.z[j] - &self.z[k];
                if (&d - &h2).is_zero() || (&d + &h2).is_zero() {
                    return Err(ExactError::ResonantPoints(j + 1, k + 1));
                }
            }
        }
        Ok(())
    }

    /// Points `z_j` at the indices of `idx`.
    pub fn points(&self, idx: &[usize]) -> Vec<Gq> {
        idx.iter().map(|&i| self.z[i].clone()).collect()
    }

    /// Swap `z_i` and `z_{i+1}` (0-based `i`).
    pub fn swap_points(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.z.swap(i, i + 1);
        out
    }

    /// Replace `z_j` by `z_j + delta`.
    pub fn shifted(&self, j: usize, delta: &Gq) -> Self {
        let mut out = self.clone();
        out.z[j] = &out.z[j] + delta;
        out
    }

    pub fn z_c64(&self) -> Vec<Complex64> {
        self.z.iter().map(Gq::to_c64).collect()
    }

    pub fn hbar_c64(&self) -> Complex64 {
        self.h().to_c64()
    }

    pub fn p_c64(&self) -> Complex64 {
        self.p.to_c64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_and_invalid_instances() {
        let h = Gq::frac(1, 2);
        assert!(ParamSet::new(2, 1, vec![Gq::int(0), Gq::int(1)], h.clone()).is_ok());
        assert_eq!(
            ParamSet::new(2, 1, vec![Gq::int(0), Gq::int(0)], h.clone()),
            Err(ExactError::DuplicatePoints(1, 2))
        );
        let res = ParamSet::new(2, 1, vec![Gq::int(0), Gq::frac(1, 2)], h.clone()).unwrap();
        assert_eq!(res.check_resonance(), Err(ExactError::ResonantPoints(1, 2)));
        assert_eq!(
            ParamSet::new(2, 2, vec![Gq::int(0), Gq::int(1)], h),
            Err(ExactError::BadWeight { n: 2, ell: 2 })
        );
    }

    #[test]
    fn random_is_reproducible() {
        assert_eq!(ParamSet::random(4, 2, 3).unwrap(), ParamSet::random(4, 2, 3).unwrap());
        assert_eq!(ParamSet::random(4, 2, 3).unwrap().p, Gq::int(2) * ParamSet::random(4, 2, 3).unwrap().hbar);
    }
}
