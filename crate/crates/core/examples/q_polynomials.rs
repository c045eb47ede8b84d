// The Q-polynomials, including the vanishing of the top one at n = 2ℓ.

use levelzero::exact::{subsets, ParamSet};
use levelzero::qpoly::{check_q_decomposition, q_poly};
use levelzero::exact::ZeroTest;

pub fn run_example() {
    let ps = ParamSet::numeric_default(3, 1).expect("valid instance");
    for m in subsets(3, 1) {
        let degrees: Vec<String> = (0..=2)
            .map(|a| q_poly(&ps, &m, a).expect("q").degree().map_or("zero".into(), |d| d.to_string()))
            .collect();
        println!("M = {m}: degrees of Q^(0..2) = {}", degrees.join(", "));
        for &k in m.elems() {
            assert!(check_q_decomposition(&ps, &m, k).expect("decomposition").check(ZeroTest::Deterministic).zero);
        }
    }

    let singlet = ParamSet::numeric_default(4, 2).expect("valid instance");
    for m in subsets(4, 2) {
        assert!(q_poly(&singlet, &m, 2).expect("q").is_zero());
    }
    println!("n = 4, l = 2: Q^(2) vanishes for every M");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
