//! Vectors in `V^{⊗n}`, two-site R-matrices, the qKZ operators `K_j` and the `sl₂` action.
//!
//! A basis vector `v_M` is stored at the index whose bit `k` is set exactly when
//! site `k` carries a minus sign.

use num_complex::Complex64 as C64;

use crate::exact::Subset;

use super::QkzError;

/// Dense complex vector of dimension `2^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    data: Vec<C64>,
}

impl StateVector {
    pub fn zeros(n: usize) -> Self {
        StateVector { n, data: vec![C64::new(0.0, 0.0); 1 << n] }
    }

    /// `v_M`
    pub fn basis(n: usize, m: &Subset) -> Self {
        let mut v = Self::zeros(n);
        v.data[m.mask()] = C64::new(1.0, 0.0);
        v
    }

    pub fn sites(&self) -> usize {
        self.n
    }

    pub fn get(&self, m: &Subset) -> C64 {
        self.data[m.mask()]
    }

    pub fn add_to(&mut self, m: &Subset, c: C64) {
        self.data[m.mask()] += c;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    /// `self + c·other`
    pub fn axpy(&mut self, c: C64, other: &StateVector) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn scaled(&self, c: C64) -> StateVector {
        StateVector { n: self.n, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn sub(&self, other: &StateVector) -> StateVector {
        StateVector { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn sup_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// True when every nonzero component has exactly `ell` minus signs.
    pub fn in_weight(&self, ell: usize, tol: f64) -> bool {
        self.data.iter().enumerate().all(|(i, x)| i.count_ones() as usize == ell || x.norm() <= tol)
    }

    /// Apply `R_{ab}(x) = (x + ħP_{ab})/(x + ħ)` in place.
    pub fn apply_r(&mut self, a: usize, b: usize, x: C64, hbar: C64) -> Result<(), QkzError> {
        let den = x + hbar;
        if den.norm() < 1e-300 {
            return Err(QkzError::PoleOfR);
        }
        let (ba, bb) = (1usize << a, 1usize << b);
        for i in 0..self.data.len() {
            // visit each mixed pair once, from the member with a minus at `a`
            if i & ba != 0 && i & bb == 0 {
                let j = i ^ ba ^ bb;
                let (u, w) = (self.data[i], self.data[j]);
                self.data[i] = (x * u + hbar * w) / den;
                self.data[j] = (x * w + hbar * u) / den;
            }
        }
        Ok(())
    }

    /// `P_{ab}`
    pub fn apply_swap(&mut self, a: usize, b: usize) {
        let (ba, bb) = (1usize << a, 1usize << b);
        for i in 0..self.data.len() {
            if i & ba != 0 && i & bb == 0 {
                self.data.swap(i, i ^ ba ^ bb);
            }
        }
    }
}

/// Matrix of `R(x)` in the two-site basis `++, +−, −+, −−`.
pub fn r_matrix(x: C64, hbar: C64) -> Result<[[C64; 4]; 4], QkzError> {
    let den = x + hbar;
    if den.norm() < 1e-300 {
        return Err(QkzError::PoleOfR);
    }
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let (d, o) = (x / den, hbar / den);
    Ok([[one, zero, zero, zero], [zero, d, o, zero], [zero, o, d, zero], [zero, zero, zero, one]])
}

/// `K_j ψ` with 0-based `j`: the factors `R_{j,j+1}(z_j−z_{j+1}), …, R_{j,n}(z_j−z_n)`
/// act first, then `R_{j,1}(z_j−z_1+p), …, R_{j,j−1}(z_j−z_{j−1}+p)`.
pub fn apply_k(z: &[C64], hbar: C64, j: usize, v: &StateVector) -> Result<StateVector, QkzError> {
    let p = 2.0 * hbar;
    let mut out = v.clone();
    for k in j + 1..z.len() {
        out.apply_r(j, k, z[j] - z[k], hbar)?;
    }
    for k in 0..j {
        out.apply_r(j, k, z[j] - z[k] + p, hbar)?;
    }
    Ok(out)
}

/// `Σ⁺ = Σ_i σ⁺_i`, turning one minus into a plus.
pub fn sigma_plus(v: &StateVector) -> StateVector {
    let mut out = StateVector::zeros(v.n);
    for (i, c) in v.data.iter().enumerate() {
        for k in 0..v.n {
            if i & (1 << k) != 0 {
                out.data[i ^ (1 << k)] += c;
            }
        }
    }
    out
}

/// `Σ⁻ = Σ_i σ⁻_i`, turning one plus into a minus.
pub fn sigma_minus(v: &StateVector) -> StateVector {
    let mut out = StateVector::zeros(v.n);
    for (i, c) in v.data.iter().enumerate() {
        for k in 0..v.n {
            if i & (1 << k) == 0 {
                out.data[i | (1 << k)] += c;
            }
        }
    }
    out
}

/// `Σ³ v_M = (n − 2#M) v_M`
pub fn sigma_three(v: &StateVector) -> StateVector {
    let mut out = v.clone();
    for (i, c) in out.data.iter_mut().enumerate() {
        *c *= v.n as f64 - 2.0 * i.count_ones() as f64;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_state(n: usize, seed: u64) -> StateVector {
        let mut v = StateVector::zeros(n);
        let mut s = seed;
        for x in v.data.iter_mut() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = (s >> 33) as f64 / (1u64 << 31) as f64 - 0.5;
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = (s >> 33) as f64 / (1u64 << 31) as f64 - 0.5;
            *x = c(a, b);
        }
        v
    }

    #[test]
    fn r_at_zero_is_the_swap() {
        let h = c(0.0, -0.5);
        let v = random_state(3, 1);
        let mut a = v.clone();
        a.apply_r(0, 2, c(0.0, 0.0), h).unwrap();
        let mut b = v.clone();
        b.apply_swap(0, 2);
        assert!(a.sub(&b).sup_norm() < 1e-15);
    }

    #[test]
    fn unitarity() {
        let h = c(0.3, -0.5);
        let x = c(1.7, 0.2);
        let v = random_state(2, 2);
        let mut a = v.clone();
        a.apply_r(0, 1, x, h).unwrap();
        a.apply_r(1, 0, -x, h).unwrap();
        assert!(a.sub(&v).sup_norm() < 1e-14);
    }

    #[test]
    fn yang_baxter() {
        let h = c(0.0, -0.5);
        let z = [c(0.1, 0.0), c(1.3, 0.2), c(-0.7, 0.4)];
        let v = random_state(3, 3);
        let mut lhs = v.clone();
        // R12 R13 R23 applied right to left
        lhs.apply_r(1, 2, z[1] - z[2], h).unwrap();
        lhs.apply_r(0, 2, z[0] - z[2], h).unwrap();
        lhs.apply_r(0, 1, z[0] - z[1], h).unwrap();
        let mut rhs = v;
        rhs.apply_r(0, 1, z[0] - z[1], h).unwrap();
        rhs.apply_r(0, 2, z[0] - z[2], h).unwrap();
        rhs.apply_r(1, 2, z[1] - z[2], h).unwrap();
        assert!(lhs.sub(&rhs).sup_norm() < 1e-12);
    }

    #[test]
    fn matrix_entries() {
        let h = c(0.0, -0.5);
        let x = c(2.0, 0.0);
        let r = r_matrix(x, h).unwrap();
        assert_eq!(r[0][0], c(1.0, 0.0));
        assert!((r[1][1] - x / (x + h)).norm() < 1e-15);
        assert!((r[1][2] - h / (x + h)).norm() < 1e-15);
        assert!(matches!(r_matrix(-h, h), Err(QkzError::PoleOfR)));
    }

    #[test]
    fn two_site_operator_is_plain_r() {
        let h = c(0.0, -0.5);
        let z = [c(0.0, 0.0), c(1.0, 0.0)];
        let v = random_state(2, 4);
        let k = apply_k(&z, h, 0, &v).unwrap();
        let mut r = v;
        r.apply_r(0, 1, z[0] - z[1], h).unwrap();
        assert!(k.sub(&r).sup_norm() < 1e-15);
    }

    #[test]
    fn k_commutes_with_sl2() {
        let h = c(0.3, -0.5);
        let z = [c(0.0, 0.0), c(1.0, 0.1), c(2.5, 0.0), c(-1.2, 0.3)];
        let v = random_state(4, 5);
        for j in 0..4 {
            for op in [sigma_plus, sigma_minus, sigma_three] {
                let a = apply_k(&z, h, j, &op(&v)).unwrap();
                let b = op(&apply_k(&z, h, j, &v).unwrap());
                assert!(a.sub(&b).sup_norm() < 1e-12);
            }
        }
    }

    #[test]
    fn sl2_relations() {
        let v = random_state(3, 6);
        let lhs = sigma_plus(&sigma_minus(&v)).sub(&sigma_minus(&sigma_plus(&v)));
        assert!(lhs.sub(&sigma_three(&v)).sup_norm() < 1e-14);
        let top = StateVector::basis(3, &Subset::empty());
        assert_eq!(sigma_plus(&top).sup_norm(), 0.0);
        assert_eq!(sigma_three(&top).get(&Subset::empty()), c(3.0, 0.0));
    }
}
