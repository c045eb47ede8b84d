// The classical limit: open-contour calibration and the KZ differential equation.

use levelzero::exact::{subsets, GaussianRational as Gq, ParamSet};
use levelzero::kz::{basis_cycle, calibration_integral, check_kz, gamma_inf, psi_sv, KzError};
use levelzero::qkz::StateVector;

pub fn run_example() {
    let ps = ParamSet::numeric_default(2, 1).expect("valid instance");
    let g = gamma_inf(&ps, 0).expect("open contour");
    for m in subsets(2, 1) {
        let v = calibration_integral(&ps, &g, &m).expect("integral");
        println!("calibration for M = {m}: {v:.10}");
        assert!((v - 4.0).norm() < 1e-6);
    }

    let ps = ParamSet::numeric_default(4, 1).expect("valid instance");
    let build = |q: &ParamSet| -> Result<StateVector, KzError> {
        Ok(psi_sv(q, &[basis_cycle(&q.z_c64(), 0, 0.3)?])?.psi)
    };
    let step = Gq::frac(1, 10_000);
    for j in 0..4 {
        let r = check_kz(&ps, j, &step, build).expect("derivative").residual;
        println!("KZ residual in z_{}: {r:.1e}", j + 1);
        assert!(r < 1e-5);
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
