// Run one suite programmatically and render the report tables.

use levelzero::config::{RunConfig, Suite};
use levelzero::suite::run_suite;

pub fn run_example() {
    let cfg = RunConfig { suites: vec![Suite::Kz], ..Default::default() };
    let report = run_suite(&cfg).expect("suite runs");
    for c in &report.checks {
        println!("{:<28} {:?} residual {:?}", c.id, c.status, c.residual);
    }
    print!("{}", report.to_csv());
    assert!(report.all_passed());
    assert!(report.to_json().contains("\"schema\": 1"));
}

#[allow(dead_code)]
fn main() {
    run_example();
}
