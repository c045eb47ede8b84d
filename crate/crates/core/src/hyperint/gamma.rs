//! Complex log-Gamma, Gamma ratios for large arguments, and a stable `log sin`.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::HyperError;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln √(2π)`
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

fn is_nonpositive_integer(z: C64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn lanczos(z: C64) -> C64 {
    // valid for Re z ≥ 1/2
    let z = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + x.ln()
}

/// Principal branch of `ln Γ(z)` (cut along the negative real axis).
///
/// Arguments with `Re z < 1/2` are shifted up with the recurrence, which keeps
/// the principal branch; far to the left the reflection formula is used and the
/// result is only determined modulo `2πi`.
pub fn log_gamma(z: C64) -> Result<C64, HyperError> {
    if is_nonpositive_integer(z) {
        return Err(HyperError::PoleOfGamma);
    }
    if z.re >= 0.5 {
        return Ok(lanczos(z));
    }
    if z.re < -200.0 {
        // ln Γ(z) = ln π − ln sin(πz) − ln Γ(1−z)
        return Ok(C64::new(PI.ln(), 0.0) - log_sin(z * PI) - lanczos(1.0 - z));
    }
    let shift = (0.5 - z.re).ceil() as usize;
    let mut acc = lanczos(z + shift as f64);
    for k in 0..shift {
        acc -= (z + k as f64).ln();
    }
    Ok(acc)
}

/// `Γ(z)`
pub fn gamma(z: C64) -> Result<C64, HyperError> {
    Ok(log_gamma(z)?.exp())
}

const BERNOULLI: [f64; 16] = [
    1.0,
    -0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
];

fn binomial(m: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// Bernoulli polynomial `B_m(x)`.
fn bernoulli_poly(m: usize, x: C64) -> C64 {
    (0..=m).fold(C64::new(0.0, 0.0), |acc, k| acc + binomial(m, k) * BERNOULLI[k] * x.powu((m - k) as u32))
}

const ASYMPTOTIC_RADIUS: f64 = 20.0;

/// `ln Γ(x+δ) − ln Γ(x)` without cancellation for large `|x|`.
pub fn log_gamma_ratio(x: C64, delta: C64) -> Result<C64, HyperError> {
    let far = x.norm() >= ASYMPTOTIC_RADIUS && (x.re > 0.0 || x.im.abs() > 0.25 * x.norm());
    if far {
        // ln Γ(x+δ) − ln Γ(x) ~ δ ln x + Σ_k (−1)^{k+1} (B_{k+1}(δ) − B_{k+1}(0)) / (k(k+1) x^k)
        let mut acc = delta * x.ln();
        let inv = 1.0 / x;
        let mut pow = inv;
        for k in 1..14usize {
            let b = bernoulli_poly(k + 1, delta) - BERNOULLI[k + 1];
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            acc += sign * b * pow / (k * (k + 1)) as f64;
            pow *= inv;
        }
        return Ok(acc);
    }
    Ok(log_gamma(x + delta)? - log_gamma(x)?)
}

/// `ln sin z` modulo `2πi`, stable for large `|Im z|`.
pub fn log_sin(z: C64) -> C64 {
    let i = C64::new(0.0, 1.0);
    if z.im > 1.0 {
        // sin z = (i/2) e^{−iz} (1 − e^{2iz})
        -i * z + (1.0 - (2.0 * i * z).exp()).ln() + C64::new(0.5, 0.0).ln() + i * (PI / 2.0)
    } else if z.im < -1.0 {
        // sin z = −(i/2)·e^{iz}·(1 − e^{−2iz})
        i * z + (1.0 - (-2.0 * i * z).exp()).ln() + C64::new(0.5, 0.0).ln() - i * (PI / 2.0)
    } else {
        z.sin().ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn factorials() {
        assert!(close(gamma(C64::new(1.0, 0.0)).unwrap(), C64::new(1.0, 0.0), 1e-14));
        assert!(close(gamma(C64::new(5.0, 0.0)).unwrap(), C64::new(24.0, 0.0), 1e-13));
        let h = gamma(C64::new(0.5, 0.0)).unwrap();
        assert!(close(h * h, C64::new(PI, 0.0), 1e-13));
    }

    #[test]
    fn recurrence_across_the_left_half() {
        for z in [C64::new(-2.3, 0.7), C64::new(-0.4, -1.9), C64::new(-7.5, 0.01)] {
            let lhs = gamma(z + 1.0).unwrap();
            let rhs = z * gamma(z).unwrap();
            assert!(close(lhs, rhs, 1e-12), "{z}");
        }
    }

    #[test]
    fn poles_are_rejected() {
        assert_eq!(log_gamma(C64::new(-3.0, 0.0)), Err(HyperError::PoleOfGamma));
    }

    #[test]
    fn principal_branch_is_continuous_above_the_cut() {
        // ln Γ(z) for z just above the negative axis has imaginary part −kπ on (−k, −k+1)
        let v = log_gamma(C64::new(-1.5, 1e-12)).unwrap();
        assert!((v.im + 2.0 * PI).abs() < 1e-9, "{v}");
    }

    #[test]
    fn ratio_matches_direct_difference() {
        for x in [C64::new(3.0, 25.0), C64::new(-10.0, 30.0), C64::new(40.0, -2.0)] {
            let d = C64::new(-0.5, 0.0);
            let direct = log_gamma(x + d).unwrap() - log_gamma(x).unwrap();
            let asym = log_gamma_ratio(x, d).unwrap();
            let diff = (direct - asym).exp() - 1.0;
            assert!(diff.norm() < 1e-12, "{x}: {direct} vs {asym}");
        }
    }

    #[test]
    fn log_sin_matches_sin() {
        for z in [C64::new(0.3, 0.2), C64::new(1.1, 5.0), C64::new(-2.0, -7.5)] {
            let a = log_sin(z).exp();
            assert!(close(a, z.sin(), 1e-13), "{z}");
        }
    }
}
