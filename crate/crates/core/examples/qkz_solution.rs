// Assemble ψ_W from hypergeometric integrals and check the qKZ equation.

use levelzero::cycles::random_periodic;
use levelzero::exact::{subsets, ParamSet};
use levelzero::hyperint::IntegralSetup;
use levelzero::qkz::{assemble_psi, check_qkz, singular_defect, Method, QkzError, StateVector};

pub fn run_example() {
    let ps = ParamSet::numeric_default(3, 1).expect("valid instance");
    let factors = vec![random_periodic(&ps, true, 11)];
    let a = assemble_psi(&ps, &factors, Method::Det, IntegralSetup::default()).expect("assembly");
    for m in subsets(3, 1) {
        println!("psi[{m}] = {:.8}", a.psi.get(&m));
    }
    let defect = singular_defect(&a.psi, a.psi.sup_norm());
    println!("singular-vector defect {defect:.1e}");
    assert!(defect < 1e-8);

    let build = move |q: &ParamSet| -> Result<StateVector, QkzError> {
        Ok(assemble_psi(q, &factors, Method::Det, IntegralSetup::default())?.psi)
    };
    for j in 0..3 {
        let r = check_qkz(&ps, j, &build).expect("shifted assembly").residual;
        println!("qKZ residual for z_{} -> z_{} + p: {r:.1e}", j + 1, j + 1);
        assert!(r < 1e-6);
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
