// Exact identities between the weight functions in Gaussian-rational arithmetic.

use levelzero::exact::identities::{exchange_relation, residue_table, sum_rule};
use levelzero::exact::{subsets, ParamSet, ZeroTest};

pub fn run_example() {
    let ps = ParamSet::numeric_default(4, 2).expect("valid instance");
    let bad = residue_table(&ps).expect("residues");
    println!("residue table at n=4, l=2: {} mismatches", bad.len());
    assert!(bad.is_empty());

    for m in subsets(4, 1) {
        for classical in [false, true] {
            let v = sum_rule(&ps, &m, classical).expect("sum rule").check(ZeroTest::Deterministic);
            assert!(v.zero, "sum rule fails for {m}");
        }
    }
    for m in subsets(4, 2) {
        let v = exchange_relation(&ps, 1, &m).expect("exchange").check(ZeroTest::Deterministic);
        assert!(v.zero, "exchange relation fails for {m}");
    }
    println!("sum rules and exchange relation hold exactly");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
