// Periodic functions playing the role of deformed cycles.

use num_complex::Complex64 as C64;

use levelzero::cycles::{constant_one, random_periodic, theta};
use levelzero::exact::ParamSet;

pub fn run_example() {
    let ps = ParamSet::numeric_default(4, 2).expect("valid instance");
    let p = ps.p_c64();
    for (name, w) in [("decaying", random_periodic(&ps, true, 7)), ("general", random_periodic(&ps, false, 7)), ("one", constant_one(&ps)), ("theta", theta(&ps))] {
        let (minus, plus) = w.limits();
        let t = C64::new(0.37, 0.21);
        let gap = (w.eval(t + p).expect("eval") - w.eval(t).expect("eval")).norm();
        println!("{name:>8}: W(-inf) = {minus:.3}, W(+inf) = {plus:.3}, |W(t+p) - W(t)| = {gap:.1e}, hat = {}", w.in_hat_space());
        assert!(gap < 1e-10 * (1.0 + w.eval(t).expect("eval").norm()));
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
