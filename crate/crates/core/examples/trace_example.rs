// The vertex-operator trace against the assembled solution for one extra point.

use num_complex::Complex64 as C64;

use levelzero::exact::ParamSet;
use levelzero::hyperint::IntegralSetup;
use levelzero::trace::{compare_trace_with_psi, TraceParams};

pub fn run_example() {
    let ps = ParamSet::numeric_default(3, 1).expect("valid instance");
    let tp = TraceParams::new(ps, vec![C64::new(0.5, 0.25)]).expect("trace parameters");
    let r = compare_trace_with_psi(&tp, IntegralSetup::default()).expect("trace");
    for (m, omega, psi) in &r.components {
        println!("M = {m}: trace {omega:.8}, psi {psi:.8}");
    }
    println!("deviation with the printed constant: {:.3}", r.max_rel_deviation);
    println!("fitted ratio trace/psi: {:.12}", r.ratio);
    let with_half = r.deviation_with(C64::new(-0.5, 0.0));
    println!("deviation once the factor -1/2 is included: {with_half:.1e}");
    assert!(with_half < 1e-10);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
